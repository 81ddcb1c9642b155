"""Cochains on a Delta-set with coboundary, cup, cup-one, circ and binomial operations.

Values live in numpy object arrays so arithmetic stays exact (Python ints).
Every product is implemented as a kernel acting on arrays whose last axis
indexes simplices; leading axes are batch axes, which lets the identity
checker evaluate many random trials at once through the same code path.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from math import factorial
from typing import Mapping, Sequence

import numpy as np

from .delta import MAX_DIM, DeltaMap, DeltaSet
from .errors import CuponeError, DomainError, NotACocycle, RingMismatch
from .exactla import nullspace
from .rings import ZZ, Ring

# ------------------------------------------------------------------ tables


class _Tables:
    """Face-index tables of one complex, computed on first use."""

    def __init__(self, ds: DeltaSet):
        self.ds = ds
        self._cache: dict = {}

    def cob(self, n: int):
        key = ("cob", n)
        if key not in self._cache:
            fs = self.ds.faces[n + 1]
            self._cache[key] = [np.array([f[i] for f in fs], dtype=np.intp) for i in range(n + 2)]
        return self._cache[key]

    def cup(self, p: int, q: int):
        key = ("cup", p, q)
        if key not in self._cache:
            n = p + q
            cnt = self.ds.count(n)
            front = np.array([self.ds.subface(n, s, tuple(range(p + 1))) for s in range(cnt)], dtype=np.intp)
            back = np.array([self.ds.subface(n, s, tuple(range(p, n + 1))) for s in range(cnt)], dtype=np.intp)
            self._cache[key] = (front, back)
        return self._cache[key]

    def cup_one(self, p: int, q: int):
        key = ("cup1", p, q)
        if key not in self._cache:
            n = p + q - 1
            cnt = self.ds.count(n)
            terms = []
            for j in range(p):
                sign = -1 if ((p - j) * (q + 1)) % 2 else 1
                ukept = tuple(range(j + 1)) + tuple(range(j + q, n + 1))
                vkept = tuple(range(j, j + q + 1))
                uidx = np.array([self.ds.subface(n, s, ukept) for s in range(cnt)], dtype=np.intp)
                vidx = np.array([self.ds.subface(n, s, vkept) for s in range(cnt)], dtype=np.intp)
                terms.append((sign, uidx, vidx))
            self._cache[key] = terms
        return self._cache[key]


def _tables(ds: DeltaSet) -> _Tables:
    t = ds.__dict__.get("_cochain_tables")
    if t is None:
        t = ds.__dict__["_cochain_tables"] = _Tables(ds)
    return t


def _red(arr, ring: Ring):
    return arr if ring.p is None else arr % ring.p


def _zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


# ----------------------------------------------------------------- kernels
# Each kernel takes arrays with shape (..., count(degree)).


def k_coboundary(ds: DeltaSet, n: int, u, ring: Ring):
    if n + 1 > MAX_DIM:
        raise CuponeError("coboundary would leave the supported dimensions")
    idx = _tables(ds).cob(n)
    out = _zeros(u.shape[:-1] + (ds.count(n + 1),))
    for i, f in enumerate(idx):
        out = out - u[..., f] if i % 2 else out + u[..., f]
    return _red(out, ring)


def k_cup(ds: DeltaSet, p: int, q: int, u, v, ring: Ring):
    if p + q > MAX_DIM:
        raise CuponeError("cup product degree exceeds the supported dimension")
    front, back = _tables(ds).cup(p, q)
    return _red(u[..., front] * v[..., back], ring)


def k_cup_one(ds: DeltaSet, p: int, q: int, u, v, ring: Ring):
    n = p + q - 1
    if n > MAX_DIM:
        raise CuponeError("cup-one degree exceeds the supported dimension")
    shape = np.broadcast_shapes(u.shape[:-1], v.shape[:-1]) + (ds.count(max(n, 0)),)
    if p == 0 or q == 0:
        return _zeros(shape)
    out = _zeros(shape)
    for sign, ui, vi in _tables(ds).cup_one(p, q):
        term = u[..., ui] * v[..., vi]
        out = out + term if sign > 0 else out - term
    return _red(out, ring)


def k_zeta(u, n: int, ring: Ring):
    if ring.p is not None and n >= ring.p:
        raise DomainError(f"binomial operation of order {n} is undefined mod {ring.p}")
    num = np.ones_like(u)
    for j in range(n):
        num = num * (u - j)
        if ring.p is not None:
            num = num % ring.p
    if ring.p is None:
        return num // factorial(n)
    return num * pow(factorial(n), -1, ring.p) % ring.p


# ----------------------------------------------------------------- Cochain


class Cochain:
    """A ring-valued function on the n-simplices of a Delta-set."""

    __slots__ = ("complex", "degree", "ring", "values")

    def __init__(self, complex: DeltaSet, degree: int, values, ring: Ring = ZZ):
        if not 0 <= degree <= MAX_DIM:
            raise CuponeError("degree out of range")
        arr = np.empty(complex.count(degree), dtype=object)
        vals = list(values)
        if len(vals) != complex.count(degree):
            raise CuponeError(f"expected {complex.count(degree)} values, got {len(vals)}")
        for i, v in enumerate(vals):
            arr[i] = ring.reduce(int(v))
        arr.flags.writeable = False
        self.complex, self.degree, self.ring, self.values = complex, degree, ring, arr

    @classmethod
    def _wrap(cls, complex, degree, arr, ring) -> "Cochain":
        obj = cls.__new__(cls)
        arr = np.asarray(arr, dtype=object)
        arr.flags.writeable = False
        obj.complex, obj.degree, obj.ring, obj.values = complex, degree, ring, arr
        return obj

    @classmethod
    def zero(cls, ds: DeltaSet, degree: int, ring: Ring = ZZ) -> "Cochain":
        return cls(ds, degree, [0] * ds.count(degree), ring)

    @classmethod
    def unit(cls, ds: DeltaSet, ring: Ring = ZZ) -> "Cochain":
        return cls(ds, 0, [1] * ds.count(0), ring)

    @classmethod
    def from_dict(cls, ds: DeltaSet, degree: int, values: Mapping[str, int], ring: Ring = ZZ) -> "Cochain":
        vals = [0] * ds.count(degree)
        for lab, v in values.items():
            vals[ds.index(degree, lab)] = v
        return cls(ds, degree, vals, ring)

    def as_list(self) -> list[int]:
        return [int(x) for x in self.values]

    def __getitem__(self, key) -> int:
        if isinstance(key, str):
            key = self.complex.index(self.degree, key)
        return int(self.values[key])

    def _same(self, other: "Cochain"):
        if not isinstance(other, Cochain):
            raise TypeError("expected a Cochain")
        if other.complex is not self.complex:
            raise CuponeError("cochains live on different complexes")
        if other.ring != self.ring:
            raise RingMismatch("cochains have different coefficient rings")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        if other.degree != self.degree:
            raise CuponeError("cannot add cochains of different degrees")
        return Cochain._wrap(self.complex, self.degree, _red(self.values + other.values, self.ring), self.ring)

    def __neg__(self) -> "Cochain":
        return Cochain._wrap(self.complex, self.degree, _red(-self.values, self.ring), self.ring)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def __mul__(self, k: int) -> "Cochain":
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        return Cochain._wrap(self.complex, self.degree, _red(self.values * int(k), self.ring), self.ring)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            other.complex is self.complex
            and other.degree == self.degree
            and other.ring == self.ring
            and self.as_list() == other.as_list()
        )

    def __hash__(self):
        return hash((id(self.complex), self.degree, self.ring, tuple(self.as_list())))

    def is_zero(self) -> bool:
        return not any(self.values)

    def __repr__(self):
        nz = {self.complex.labels[self.degree][i]: int(v) for i, v in enumerate(self.values) if v}
        return f"Cochain(deg={self.degree}, {self.ring}, {nz})"

    def to_json(self) -> dict:
        labs = self.complex.labels[self.degree]
        return {
            "complex": self.complex.name,
            "degree": self.degree,
            "ring": self.ring.to_json(),
            "values": {labs[i]: str(int(v)) for i, v in enumerate(self.values) if v},
        }

    @classmethod
    def from_json(cls, obj: Mapping, ds: DeltaSet) -> "Cochain":
        ring = Ring.from_json(obj.get("ring", "Z"))
        return cls.from_dict(ds, int(obj["degree"]), {k: int(v) for k, v in obj.get("values", {}).items()}, ring)


def coboundary(u: Cochain) -> Cochain:
    return Cochain._wrap(u.complex, u.degree + 1, k_coboundary(u.complex, u.degree, u.values, u.ring), u.ring)


def cup(u: Cochain, v: Cochain) -> Cochain:
    u._same(v)
    out = k_cup(u.complex, u.degree, v.degree, u.values, v.values, u.ring)
    return Cochain._wrap(u.complex, u.degree + v.degree, out, u.ring)


def cup_one(u: Cochain, v: Cochain) -> Cochain:
    u._same(v)
    p, q = u.degree, v.degree
    if p == 0 or q == 0:
        return Cochain.zero(u.complex, max(p + q - 1, 0), u.ring)
    out = k_cup_one(u.complex, p, q, u.values, v.values, u.ring)
    return Cochain._wrap(u.complex, p + q - 1, out, u.ring)


def circ(v: Cochain, w: Cochain) -> Cochain:
    v._same(w)
    if v.degree != 2 or w.degree != 2:
        raise CuponeError("circ is defined on 2-cochains")
    return Cochain._wrap(v.complex, 2, _red(v.values * w.values, v.ring), v.ring)


def zeta_cochain(f: Cochain, n: int) -> Cochain:
    """Apply binom(-, n) to the value on every edge."""
    if f.degree != 1:
        raise CuponeError("binomial operations act on 1-cochains")
    return Cochain._wrap(f.complex, 1, k_zeta(f.values, n, f.ring), f.ring)


def zeta_multi(cochains: Sequence[Cochain], orders: Sequence[int]) -> Cochain:
    """The cup-one product of binom(a_k, i_k), i.e. the pointwise product."""
    ds, ring = cochains[0].complex, cochains[0].ring
    vals = np.ones(ds.count(1), dtype=object)
    for a, i in zip(cochains, orders):
        vals = _red(vals * k_zeta(a.values, i, ring), ring)
    return Cochain._wrap(ds, 1, vals, ring)


def bockstein(a: Cochain) -> Cochain:
    """Mod-p Bockstein of a mod-p 1-cocycle via the lift with values in {0..p-1}."""
    p = a.ring.p
    if p is None:
        raise CuponeError("the Bockstein needs a mod-p cochain")
    if not coboundary(a).is_zero():
        raise NotACocycle("bockstein expects a cocycle")
    lift = Cochain(a.complex, a.degree, a.as_list(), ZZ)
    d = coboundary(lift).as_list()
    if any(x % p for x in d):
        raise ArithmeticError("integral coboundary of a mod-p cocycle lift is not divisible by p")
    return Cochain(a.complex, a.degree + 1, [x // p for x in d], a.ring)


def pullback(h: DeltaMap, u: Cochain) -> Cochain:
    if u.complex is not h.target:
        raise CuponeError("cochain does not live on the target of the map")
    idx = np.array(h.maps[u.degree], dtype=np.intp)
    return Cochain._wrap(h.source, u.degree, u.values[idx], u.ring)


def change_ring(u: Cochain, ring: Ring) -> Cochain:
    return Cochain(u.complex, u.degree, u.as_list(), ring)


def cocycle_module_basis(ds: DeltaSet, degree: int, ring: Ring = ZZ) -> list[Cochain]:
    """Basis of Z^degree (over Z a basis of the cocycle lattice)."""
    mat = ds.coboundary_matrix(degree)
    vecs = nullspace(mat, ds.count(degree), ring) if mat else [
        [int(i == j) for j in range(ds.count(degree))] for i in range(ds.count(degree))
    ]
    return [Cochain(ds, degree, v, ring) for v in vecs]


def no_right_hirsch_witness(n: int) -> int:
    """Value of u3 cup1 (u1 cup u2) on the standard 2-simplex where u3 = n on [0,2].

    u1 and u2 are the indicator cochains of [0,1] and [1,2].
    """
    from .delta import build_standard_simplex

    ds = build_standard_simplex(2)
    u1 = Cochain.from_dict(ds, 1, {"[0,1]": 1})
    u2 = Cochain.from_dict(ds, 1, {"[1,2]": 1})
    u3 = Cochain.from_dict(ds, 1, {"[0,2]": n})
    return cup_one(u3, cup(u1, u2))["[0,1,2]"]


# -------------------------------------------------------- identity checks

IDENTITIES = (
    "steenrod",
    "left-hirsch",
    "universal-12",
    "right-hirsch",
    "cup1-d",
    "dd-zero",
    "cup1-assoc-comm",
    "circ-cup",
)


@dataclass
class IdentityReport:
    identity: str
    complex: str
    ring: str
    trials: int
    seed: int
    passed: bool
    counterexample: dict | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "identity": self.identity,
            "complex": self.complex,
            "ring": self.ring,
            "trials": self.trials,
            "seed": self.seed,
            "status": "pass" if self.passed else "fail",
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def trial_rng(seed: int, *labels: str) -> np.random.Generator:
    """Deterministic generator derived from a 64-bit seed and string labels."""
    words = [seed & 0xFFFFFFFFFFFFFFFF] + [zlib.crc32(lab.encode()) for lab in labels]
    return np.random.default_rng(np.random.SeedSequence(words))


def _random_batch(rng, shape, ring: Ring):
    if ring.p is None:
        raw = rng.integers(-5, 6, size=shape)
    else:
        raw = rng.integers(0, ring.p, size=shape)
    return raw.astype(object)


def _random_cocycles(rng, basis: np.ndarray, trials: int, ring: Ring, ncols: int):
    """Random combinations of the rows of ``basis`` (a cocycle basis)."""
    if basis.shape[0] == 0:
        return _zeros((trials, ncols))
    coeffs = _random_batch(rng, (trials, basis.shape[0]), ring)
    out = _zeros((trials, ncols))
    for k in range(basis.shape[0]):
        out = out + coeffs[:, k:k + 1] * basis[k][None, :]
    return _red(out, ring)


def decomposable_batch(ds: DeltaSet, ring: Ring, rng, trials: int):
    """Random 1-cochains u with their coboundary written as a sum of cups.

    u = c1 a + c2 binom(a,2) + c3 binom(a,1)binom(b,1) + c4 binom(a,3) for
    random cocycles a, b; the coboundary of each binomial term is minus the
    sum of cups over the splits of its multi-index.  Terms whose order is not
    available mod p are left out.
    """
    n1 = ds.count(1)
    basis = np.array([c.as_list() for c in cocycle_module_basis(ds, 1, ring)], dtype=object).reshape(-1, n1)
    a = _random_cocycles(rng, basis, trials, ring, n1)
    b = _random_cocycles(rng, basis, trials, ring, n1)
    c = _random_batch(rng, (trials, 4), ring)
    col = lambda k: c[:, k:k + 1]  # noqa: E731
    u = col(0) * a
    pairs = []
    za = {i: k_zeta(a, i, ring) for i in range(4) if ring.p is None or i < ring.p}
    zb = {i: k_zeta(b, i, ring) for i in range(2)}
    if 2 in za:
        u = u + col(1) * za[2]
        pairs.append((-col(1) * za[1], za[1]))
    u = u + col(2) * _red(za[1] * zb[1], ring)
    pairs += [(-col(2) * za[1], zb[1]), (-col(2) * zb[1], za[1])]
    if 3 in za:
        u = u + col(3) * za[3]
        pairs += [(-col(3) * za[1], za[2]), (-col(3) * za[2], za[1])]
    pairs = [(_red(x, ring), _red(y, ring)) for x, y in pairs]
    return _red(u, ring), pairs


def _check(ds: DeltaSet, tag: str, ring: Ring, rng, trials: int):
    """Return (lhs, rhs, inputs) batches for the identity ``tag``."""
    n1, n2 = ds.count(1), ds.count(2)
    R = ring

    def C(a, b):
        return k_cup(ds, 1, 1, a, b, R)

    def C1(p, q, a, b):
        return k_cup_one(ds, p, q, a, b, R)

    def d(n, a):
        return k_coboundary(ds, n, a, R)

    if tag == "steenrod":
        a, b = _random_batch(rng, (trials, n1), R), _random_batch(rng, (trials, n1), R)
        lhs = d(1, C1(1, 1, a, b))
        rhs = -C(a, b) - C(b, a) + C1(2, 1, d(1, a), b) - C1(1, 2, a, d(1, b))
        return lhs, _red(rhs, R), {"a": (1, a), "b": (1, b)}
    if tag == "left-hirsch":
        a, b, c = (_random_batch(rng, (trials, n1), R) for _ in range(3))
        lhs = C1(2, 1, C(a, b), c)
        rhs = k_cup(ds, 1, 1, a, C1(1, 1, b, c), R) + k_cup(ds, 1, 1, C1(1, 1, a, c), b, R)
        return lhs, _red(rhs, R), {"a": (1, a), "b": (1, b), "c": (1, c)}
    if tag == "universal-12":
        u, z = _random_batch(rng, (trials, n1), R), _random_batch(rng, (trials, n2), R)
        lhs = C1(1, 2, u, z)
        if n2:
            front, back = _tables(ds).cup(1, 1)
            rhs = (-u[..., front] - u[..., back] + d(1, u)) * z
        else:
            rhs = _zeros((trials, 0))
        return lhs, _red(rhs, R), {"u": (1, u), "z": (2, z)}
    if tag in ("right-hirsch", "cup1-d"):
        u, pairs = decomposable_batch(ds, R, rng, trials)
        if tag == "right-hirsch":
            v, w = _random_batch(rng, (trials, n1), R), _random_batch(rng, (trials, n1), R)
            lhs = C1(1, 2, u, C(v, w))
            rhs = -C(C1(1, 1, u, v), w) - C(v, C1(1, 1, u, w))
            for x, y in pairs:
                rhs = rhs + C(C1(1, 1, x, v), C1(1, 1, y, w))
            return lhs, _red(rhs, R), {"u": (1, u), "v": (1, v), "w": (1, w)}
        b, bpairs = decomposable_batch(ds, R, rng, trials)
        da = sum((C(x, y) for x, y in pairs), _zeros((trials, n2)))
        db = sum((C(x, y) for x, y in bpairs), _zeros((trials, n2)))
        lhs = d(1, C1(1, 1, u, b))
        rhs = -C(u, b) - C(b, u) + C1(2, 1, da, b) + C1(2, 1, db, u) - _red(da * db, R)
        return lhs, _red(rhs, R), {"a": (1, u), "b": (1, b)}
    if tag == "dd-zero":
        outs = []
        ins = {}
        for n in range(0, MAX_DIM - 1):
            x = _random_batch(rng, (trials, ds.count(n)), R)
            ins[f"x{n}"] = (n, x)
            outs.append(d(n + 1, d(n, x)))
        lhs = np.concatenate(outs, axis=-1)
        return lhs, _zeros(lhs.shape), ins
    if tag == "cup1-assoc-comm":
        a, b, c = (_random_batch(rng, (trials, n1), R) for _ in range(3))
        lhs = np.concatenate([C1(1, 1, a, C1(1, 1, b, c)), C1(1, 1, a, b)], axis=-1)
        rhs = np.concatenate([C1(1, 1, C1(1, 1, a, b), c), C1(1, 1, b, a)], axis=-1)
        return lhs, rhs, {"a": (1, a), "b": (1, b), "c": (1, c)}
    if tag == "circ-cup":
        u1, u2, v1, v2 = (_random_batch(rng, (trials, n1), R) for _ in range(4))
        lhs = _red(C(u1, u2) * C(v1, v2), R)
        rhs = C(C1(1, 1, u1, v1), C1(1, 1, u2, v2))
        return lhs, rhs, {"u1": (1, u1), "u2": (1, u2), "v1": (1, v1), "v2": (1, v2)}
    raise CuponeError(f"unknown identity {tag!r}; known: {', '.join(IDENTITIES)}")


def verify_identity(ds: DeltaSet, tag: str, trials: int = 500, seed: int = 0, ring: Ring = ZZ) -> IdentityReport:
    """Evaluate an identity on ``trials`` seeded random inputs; exact equality."""
    if trials < 1:
        raise CuponeError("trials must be positive")
    rng = trial_rng(seed, "verify", tag, ds.name, str(ring))
    lhs, rhs, inputs = _check(ds, tag, ring, rng, trials)
    diff = _red(lhs - rhs, ring)
    bad = [t for t in range(trials) if any(diff[t])] if diff.size else []
    report = IdentityReport(tag, ds.name, str(ring), trials, seed, not bad)
    if bad:
        t = bad[0]
        ce = {"trial": t}
        for name, (deg, arr) in inputs.items():
            ce[name] = Cochain(ds, deg, [int(x) for x in arr[t]], ring).to_json()
        report.counterexample = ce
    return report
