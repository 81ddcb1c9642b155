"""Exact linear algebra over Z and Z/p.

Matrices are lists of rows of Python ints.  Because an empty list of rows
carries no column count, functions that need it take the shape explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import CompositionNonzero, NoSolution
from .rings import ZZ, Ring

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], inner: int | None = None) -> Matrix:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    bt = list(zip(*b)) if b else [() for _ in range(cols)]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass
class SNF:
    """Result of a Smith normal form: U * M * V = D (entries reduced mod p if given)."""

    U: Matrix
    D: Matrix
    V: Matrix
    Uinv: Matrix
    Vinv: Matrix
    diagonal: list[int]
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _snf(m: Sequence[Sequence[int]], rows: int, cols: int, p: int | None) -> SNF:
    red = (lambda x: x) if p is None else (lambda x: x % p)
    A = [[red(x) for x in r] for r in m]
    U, Uinv, V, Vinv = identity(rows), identity(rows), identity(cols), identity(cols)

    def row_add(i, t, q):  # row_i += q * row_t
        A[i] = [red(x + q * y) for x, y in zip(A[i], A[t])]
        U[i] = [red(x + q * y) for x, y in zip(U[i], U[t])]
        for r in Uinv:
            r[t] = red(r[t] - q * r[i])

    def col_add(j, t, q):  # col_j += q * col_t
        for r in A:
            r[j] = red(r[j] + q * r[t])
        for r in V:
            r[j] = red(r[j] + q * r[t])
        Vinv[t] = [red(x - q * y) for x, y in zip(Vinv[t], Vinv[j])]

    def row_swap(i, t):
        A[i], A[t] = A[t], A[i]
        U[i], U[t] = U[t], U[i]
        for r in Uinv:
            r[i], r[t] = r[t], r[i]

    def col_swap(j, t):
        for r in A:
            r[j], r[t] = r[t], r[j]
        for r in V:
            r[j], r[t] = r[t], r[j]
        Vinv[j], Vinv[t] = Vinv[t], Vinv[j]

    def row_scale(t, c):  # c a unit
        cinv = 1 if p is None and c == 1 else (-1 if p is None else pow(c, -1, p))
        A[t] = [red(c * x) for x in A[t]]
        U[t] = [red(c * x) for x in U[t]]
        for r in Uinv:
            r[t] = red(r[t] * cinv)

    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    v = A[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                row_swap(i, t)
            if j != t:
                col_swap(j, t)
            piv = A[t][t]
            if p is not None and piv != 1:
                row_scale(t, pow(piv, -1, p))
                piv = 1
            clean = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // piv if p is None else A[i][t]
                    row_add(i, t, -q)
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // piv if p is None else A[t][j]
                    col_add(j, t, -q)
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            if p is None:
                bad = next(
                    (i for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % piv),
                    None,
                )
                if bad is not None:
                    row_add(t, bad, 1)
                    continue
                if piv < 0:
                    row_scale(t, -1)
            break
        if best is None:
            break
        diag.append(A[t][t])
        t += 1
    return SNF(U, A, V, Uinv, Vinv, diag, rows, cols)


def smith_normal_form(m: Sequence[Sequence[int]], cols: int | None = None, ring: Ring = ZZ):
    """Return (U, D, V) with U unimodular, V unimodular and U*M*V = D diagonal, d1 | d2 | ...

    Pivoting uses the smallest nonzero absolute value, ties broken in
    row-major order.  Over Z/p the same routine runs with arithmetic mod p
    and every pivot normalized to 1.
    """
    r = snf(m, cols, ring)
    return r.U, r.D, r.V


def snf(m: Sequence[Sequence[int]], cols: int | None = None, ring: Ring = ZZ) -> SNF:
    rows = len(m)
    if cols is None:
        cols = len(m[0]) if m else 0
    return _snf(m, rows, cols, ring.p)


def solve(m: Sequence[Sequence[int]], b: Sequence[int], ring: Ring = ZZ, cols: int | None = None) -> list[int]:
    """Some x with M x = b over the ring, or raise NoSolution."""
    red = ring.reduce
    rows = len(m)
    if cols is None:
        cols = len(m[0]) if m else 0
    if len(b) != rows:
        raise ValueError("right-hand side has wrong length")
    r = _snf(m, rows, cols, ring.p)
    c = [red(x) for x in matvec(r.U, b)]
    y = [0] * cols
    for i, d in enumerate(r.diagonal):
        if ring.p is None:
            q, rem = divmod(c[i], d)
            if rem:
                raise NoSolution(f"row {i} of the diagonal system is not divisible")
            y[i] = q
        else:
            y[i] = c[i]
    if any(c[i] for i in range(r.rank, rows)):
        raise NoSolution("right-hand side leaves the column space")
    return [red(x) for x in matvec(r.V, y)]


def nullspace(m: Sequence[Sequence[int]], cols: int, ring: Ring = ZZ) -> list[list[int]]:
    """Basis of {x : M x = 0}; over Z a basis of the (saturated) kernel lattice."""
    r = _snf(m, len(m), cols, ring.p)
    return [[row[j] for row in r.V] for j in range(r.rank, cols)]


def hermite_rows(vectors: Sequence[Sequence[int]], width: int, moduli: Sequence[int] = (), ring: Ring = ZZ):
    """Canonical echelon basis of the subgroup generated by ``vectors``.

    ``moduli[i] > 0`` makes coordinate i cyclic of that order.  Over Z the
    result is the Hermite normal form (positive pivots, entries above a
    pivot reduced into [0, pivot)); over Z/p it is the reduced row echelon
    form.
    """
    red = ring.reduce
    rows = [[red(x) for x in v] for v in vectors]
    for i, mod in enumerate(moduli):
        if mod:
            rows.append([mod if j == i else 0 for j in range(width)])
    out: list[list[int]] = []
    col = 0
    while rows and col < width:
        rows = [r for r in rows if any(r)]
        live = [r for r in rows if r[col]]
        if not live:
            col += 1
            continue
        if ring.p is not None:
            piv = live[0]
            inv = pow(piv[col], -1, ring.p)
            piv = [red(x * inv) for x in piv]
            rows = [red_row(r, piv, r[col], ring) if r is not live[0] else None for r in rows]
            rows = [r for r in rows if r is not None]
        else:
            while len([r for r in rows if r[col]]) > 1:
                live = sorted((r for r in rows if r[col]), key=lambda r: abs(r[col]))
                piv = live[0]
                rows = [r if (r is piv or not r[col]) else [x - (r[col] // piv[col]) * y for x, y in zip(r, piv)] for r in rows]
            piv = next(r for r in rows if r[col])
            rows = [r for r in rows if r is not piv]
            if piv[col] < 0:
                piv = [-x for x in piv]
        out.append(piv)
        col += 1
    # reduce entries above pivots
    for k, row in enumerate(out):
        c = next(j for j, x in enumerate(row) if x)
        for prev in range(k):
            q = out[prev][c] // row[c] if ring.p is None else out[prev][c]
            if q:
                out[prev] = [red(x - q * y) for x, y in zip(out[prev], row)]
    return out


def red_row(r, piv, q, ring):
    return [ring.reduce(x - q * y) for x, y in zip(r, piv)]


def in_subgroup(target: Sequence[int], generators: Sequence[Sequence[int]], moduli: Sequence[int], ring: Ring = ZZ) -> bool:
    """Is ``target`` in the subgroup generated by ``generators`` of Z^f + sum Z/moduli?"""
    width = len(target)
    gens = [list(g) for g in generators]
    for i, mod in enumerate(moduli):
        if mod:
            gens.append([mod if j == i else 0 for j in range(width)])
    if not gens:
        return not any(ring.reduce(x) for x in target)
    m = [[g[i] for g in gens] for i in range(width)]
    try:
        solve(m, list(target), ring, cols=len(gens))
        return True
    except NoSolution:
        return False


def hom_kernel(images: Sequence[Sequence[int]], moduli: Sequence[int], ring: Ring = ZZ) -> list[list[int]]:
    """Generators of the kernel of Z^r -> (group with the given moduli), x -> sum x_i images[i]."""
    r = len(images)
    width = len(moduli)
    cols = [list(v) for v in images]
    extra = [i for i, mod in enumerate(moduli) if mod]
    for i in extra:
        cols.append([moduli[i] if j == i else 0 for j in range(width)])
    m = [[c[i] for c in cols] for i in range(width)]
    ker = nullspace(m, len(cols), ring)
    gens = [v[:r] for v in ker]
    return hermite_rows(gens, r, (), ring) if gens else []


@dataclass
class CohomologyPresentation:
    """Presentation of ker(d_out)/im(d_in).

    Coordinates of a class list the free part first, then one residue per
    torsion invariant factor.  Over Z/p the whole group is free of rank
    ``free_rank`` and ``torsion`` is empty.
    """

    degree: int
    ring: Ring
    free_rank: int
    torsion: list[int]
    cocycle_basis: list[list[int]]
    _transform: list[list[int]] = field(repr=False)
    _d_out: list[list[int]] = field(repr=False)

    @property
    def rank(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def moduli(self) -> list[int]:
        """Per-coordinate orders: 0 for free coordinates, the factor for torsion."""
        return [0] * self.free_rank + list(self.torsion)

    def is_cocycle(self, z: Sequence[int]) -> bool:
        return not any(self.ring.reduce(x) for x in matvec(self._d_out, z))

    def project(self, z: Sequence[int]) -> list[int]:
        if not self.is_cocycle(z):
            raise ValueError("project expects a cocycle")
        y = matvec(self._transform, z)
        out = []
        for x, mod in zip(y, self.moduli):
            out.append(self.ring.reduce(x) if not mod else x % mod)
        return out

    def reduce_coords(self, coords: Sequence[int]) -> list[int]:
        return [self.ring.reduce(x) if not mod else x % mod for x, mod in zip(coords, self.moduli)]

    def representative(self, coords: Sequence[int]) -> list[int]:
        dim = len(self._transform[0]) if self._transform else len(self.cocycle_basis[0]) if self.cocycle_basis else 0
        out = [0] * dim
        for c, b in zip(coords, self.cocycle_basis):
            out = [x + c * y for x, y in zip(out, b)]
        return [self.ring.reduce(x) for x in out]

    def __str__(self):
        if self.ring.p is not None:
            return f"(Z/{self.ring.p})^{self.free_rank}"
        parts = ([f"Z^{self.free_rank}"] if self.free_rank else []) + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


def cohomology(d_out: Sequence[Sequence[int]], d_in: Sequence[Sequence[int]], ring: Ring = ZZ, dim: int | None = None, degree: int = 0) -> CohomologyPresentation:
    """Presentation of ker(d_out)/im(d_in) where d_in: C^{k-1} -> C^k, d_out: C^k -> C^{k+1}.

    ``dim`` is the rank of C^k; it is needed when both matrices are empty.
    """
    red = ring.reduce
    if dim is None:
        dim = len(d_out[0]) if d_out else len(d_in)
    d_out = [list(r) for r in d_out]
    d_in = [list(r) for r in d_in] if d_in else [[] for _ in range(dim)]
    m_in = len(d_in[0]) if d_in else 0
    comp = matmul(d_out, d_in) if d_out and m_in else []
    if any(red(x) for row in comp for x in row):
        raise CompositionNonzero("d_out * d_in is not zero")
    s_out = _snf(d_out, len(d_out), dim, ring.p)
    r = s_out.rank
    kernel = [[row[j] for row in s_out.V] for j in range(r, dim)]  # k vectors of length dim
    k = len(kernel)
    coords_map = [list(row) for row in s_out.Vinv[r:]]  # k x dim
    image = [[red(x) for x in row] for row in matmul(coords_map, d_in)] if k and m_in else [[0] * m_in for _ in range(k)]
    s_img = _snf(image, k, m_in, ring.p)
    invariants = [abs(d) for d in s_img.diagonal]
    free_idx = list(range(len(invariants), k))
    tors_idx = [i for i, d in enumerate(invariants) if d != 1] if ring.p is None else []
    order = free_idx + tors_idx
    proj_full = matmul(s_img.U, coords_map) if k else []
    transform = [[red(x) for x in proj_full[i]] for i in order]
    basis = []
    for i in order:
        col_k = [row[i] for row in s_img.Uinv]
        vec = [red(sum(c * kernel[j][t] for j, c in enumerate(col_k))) for t in range(dim)]
        basis.append(vec)
    return CohomologyPresentation(
        degree=degree,
        ring=ring,
        free_rank=len(free_idx),
        torsion=[invariants[i] for i in tors_idx],
        cocycle_basis=basis,
        _transform=transform,
        _d_out=d_out if d_out else [],
    )
