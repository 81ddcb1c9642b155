"""Massey products of degree-one classes in cochain algebras.

Results are cosets in H^2: a representative in the coordinates of the
degree-2 cohomology presentation plus generators of the indeterminacy
subgroup.  Membership questions are settled by exact linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .cochain import Cochain, coboundary, cup, pullback, zeta_cochain
from .delta import DeltaMap, DeltaSet, build_presentation_xk
from .errors import CuponeError, DomainError, NoSolution, Undefined
from .exactla import CohomologyPresentation, cohomology, hermite_rows, hom_kernel, in_subgroup, solve
from .rings import ZZ, Ring


class CohomologyContext:
    """Degree 1 and 2 cohomology of a complex, with helpers for classes."""

    def __init__(self, ds: DeltaSet, ring: Ring = ZZ):
        self.ds, self.ring = ds, ring
        self.d0 = ds.coboundary_matrix(0)
        self.d1 = ds.coboundary_matrix(1)
        self.d2 = ds.coboundary_matrix(2)
        self.h1: CohomologyPresentation = cohomology(self.d1, self.d0, ring, dim=ds.count(1), degree=1)
        self.h2: CohomologyPresentation = cohomology(self.d2, self.d1, ring, dim=ds.count(2), degree=2)

    def h1_basis(self) -> list[Cochain]:
        return [Cochain(self.ds, 1, v, self.ring) for v in self.h1.cocycle_basis]

    def h2_class(self, z: Cochain) -> list[int]:
        return self.h2.project(z.as_list())

    def h1_class(self, a: Cochain) -> list[int]:
        return self.h1.project(a.as_list())

    def cocycle(self, u) -> Cochain:
        """Accept a cocycle or H^1 coordinates and return a cocycle."""
        if isinstance(u, Cochain):
            if u.degree != 1 or not coboundary(u).is_zero():
                raise CuponeError("expected a 1-cocycle")
            return u
        return Cochain(self.ds, 1, self.h1.representative(list(u)), self.ring)

    def solve_coboundary(self, target: Cochain) -> Cochain:
        """A 1-cochain b with db = target (raises NoSolution)."""
        x = solve(self.d1, target.as_list(), self.ring, cols=self.ds.count(1))
        return Cochain(self.ds, 1, x, self.ring)

    def dual_cocycles(self) -> dict[str, Cochain]:
        """For each generator loop: a cocycle equal to 1 on its first edge and 0 on other loop edges."""
        gens = self.ds.generators
        fixed_edges = sorted({e for chain in gens.values() for e, _ in chain})
        free = [e for e in range(self.ds.count(1)) if e not in fixed_edges]
        out = {}
        for g, chain in sorted(gens.items()):
            fixed = {e: 0 for e in fixed_edges}
            fixed[chain[0][0]] = 1
            rhs = [-sum(row[e] * v for e, v in fixed.items()) for row in self.d1]
            m = [[row[e] for e in free] for row in self.d1]
            try:
                xs = solve(m, rhs, self.ring, cols=len(free)) if free else None
            except NoSolution:
                continue
            if xs is None and any(self.ring.reduce(r) for r in rhs):
                continue
            vals = [0] * self.ds.count(1)
            for e, v in fixed.items():
                vals[e] = v
            for e, v in zip(free, xs or []):
                vals[e] = v
            out[g] = Cochain(self.ds, 1, vals, self.ring)
        return out

    def cup_table(self, classes: Sequence[Cochain]) -> list[list[list[int]]]:
        return [[self.h2_class(cup(a, b)) for b in classes] for a in classes]


@dataclass
class MasseyResult:
    product: str
    inputs: list
    representative: list[int]
    indeterminacy: list[list[int]] | None
    contains_zero: bool | None
    defined: bool = True
    cocycle: Cochain | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "product": self.product,
            "defined": self.defined,
            "inputs": self.inputs,
            "representative": self.representative,
            "indeterminacy": self.indeterminacy if self.indeterminacy is not None else "not computed",
            "contains_zero": self.contains_zero,
        }


def _indeterminacy(ctx: CohomologyContext, left: Cochain | None, right: Cochain | None) -> list[list[int]]:
    gens = []
    for h in ctx.h1_basis():
        if left is not None:
            gens.append(ctx.h2_class(cup(left, h)))
        if right is not None:
            gens.append(ctx.h2_class(cup(h, right)))
    return hermite_rows(gens, ctx.h2.rank, ctx.h2.moduli, ctx.ring)


def _contains_zero(ctx, rep, indet) -> bool:
    return in_subgroup(rep, indet, ctx.h2.moduli, ctx.ring)


def _inputs(ctx, *cocycles):
    return [ctx.h1_class(a) for a in cocycles]


def triple_massey(ctx: CohomologyContext, u1, u2, u3) -> MasseyResult:
    a1, a2, a3 = (ctx.cocycle(u) for u in (u1, u2, u3))
    for name, (x, y) in (("u1*u2", (a1, a2)), ("u2*u3", (a2, a3))):
        if any(ctx.h2_class(cup(x, y))):
            raise Undefined(name)
    a12 = ctx.solve_coboundary(cup(a1, a2))
    a23 = ctx.solve_coboundary(cup(a2, a3))
    z = cup(a1, a23) + cup(a12, a3)
    if not coboundary(z).is_zero():
        raise CuponeError("internal error: Massey representative is not a cocycle")
    rep = ctx.h2_class(z)
    indet = _indeterminacy(ctx, a1, a3)
    return MasseyResult("triple", _inputs(ctx, a1, a2, a3), rep, indet, _contains_zero(ctx, rep, indet), cocycle=z)


def zeta_representative(a: Cochain, n: int) -> Cochain:
    """Minus the sum over k of binom(a,k) cup binom(a,n-k)."""
    total = Cochain.zero(a.complex, 2, a.ring)
    for k in range(1, n):
        total = total - cup(zeta_cochain(a, k), zeta_cochain(a, n - k))
    return total


def nfold_repeated_zeta(ctx: CohomologyContext, u, n: int) -> MasseyResult:
    if n < 3:
        raise CuponeError("n-fold products need n >= 3")
    if ctx.ring.p is not None and n > ctx.ring.p:
        raise DomainError(f"the repeated product needs n <= p = {ctx.ring.p}")
    a = ctx.cocycle(u)
    z = zeta_representative(a, n)
    if not coboundary(z).is_zero():
        raise CuponeError("internal error: repeated product representative is not a cocycle")
    rep = ctx.h2_class(z)
    indet = _indeterminacy(ctx, a, a) if n == 3 else None
    if not any(rep):
        contains = True
    else:
        contains = _contains_zero(ctx, rep, indet) if indet is not None else None
    return MasseyResult(f"nfold-zeta:{n}", _inputs(ctx, a), rep, indet, contains, cocycle=z)


def restricted_gamma(a1: Cochain, a2: Cochain, a12: Cochain) -> Cochain:
    """The cocycle a1 cup a12 - binom(a1, 2) cup a2."""
    return cup(a1, a12) - cup(zeta_cochain(a1, 2), a2)


def restricted_triple(ctx: CohomologyContext, u1, u2) -> MasseyResult:
    if ctx.ring.p == 2:
        raise DomainError("the restricted product uses binom(-, 2), undefined mod 2")
    a1, a2 = ctx.cocycle(u1), ctx.cocycle(u2)
    if any(ctx.h2_class(cup(a1, a2))):
        raise Undefined("u1*u2")
    try:
        a12 = ctx.solve_coboundary(cup(a1, a2))
    except NoSolution:  # pragma: no cover - ruled out by the class check
        raise CuponeError("internal error: cup product has zero class but no primitive") from None
    g = restricted_gamma(a1, a2, a12)
    if not coboundary(g).is_zero():
        raise CuponeError("internal error: restricted product representative is not a cocycle")
    rep = ctx.h2_class(g)
    indet = _indeterminacy(ctx, a1, None)
    return MasseyResult("restricted_triple", _inputs(ctx, a1, a2), rep, indet, _contains_zero(ctx, rep, indet), cocycle=g)


@dataclass
class RestrictedInvariant:
    """The subgroup of H^2 swept out by restricted products with one fixed class."""

    input: list[int]
    annihilator: list[list[int]]
    values: list[list[int]]
    indeterminacy: list[list[int]]
    subgroup: list[list[int]]

    def cyclic_generator(self) -> int | None:
        """For a subgroup of H^2 = Z: its nonnegative generator; otherwise None."""
        if len(self.subgroup) > 1 or (self.subgroup and len(self.subgroup[0]) != 1):
            return None
        return self.subgroup[0][0] if self.subgroup else 0

    def to_json(self) -> dict:
        out = {
            "product": "restricted_invariant",
            "input": self.input,
            "annihilator": self.annihilator,
            "values": self.values,
            "indeterminacy": self.indeterminacy,
            "subgroup": self.subgroup,
        }
        gen = None if len(self.subgroup[0] if self.subgroup else [0]) != 1 else self.cyclic_generator()
        if gen is not None:
            out["multiples_of"] = gen
        return out


def u_restricted_invariant(ctx: CohomologyContext, u) -> RestrictedInvariant:
    a = ctx.cocycle(u)
    basis = ctx.h1_basis()
    images = [ctx.h2_class(cup(a, h)) for h in basis]
    ann = hom_kernel(images, ctx.h2.moduli, ctx.ring)
    values = []
    for w in ann:
        values.append(restricted_triple(ctx, a, list(w)).representative)
    indet = _indeterminacy(ctx, a, None)
    subgroup = hermite_rows(values + indet, ctx.h2.rank, ctx.h2.moduli, ctx.ring)
    return RestrictedInvariant(ctx.h1_class(a), ann, values, indet, subgroup)


def total_annihilator(ctx: CohomologyContext) -> list[list[int]]:
    """Classes u with u cup w = 0 for every w, as H^1 coordinate vectors."""
    basis = ctx.h1_basis()
    images = []
    for h in basis:
        row = []
        for w in basis:
            row += ctx.h2_class(cup(h, w))
        images.append(row)
    moduli = ctx.h2.moduli * len(basis)
    return hom_kernel(images, moduli, ctx.ring)


def _normalize_sign(table):
    flat = [x for row in table for cell in row for x in cell]
    first = next((x for x in flat if x), 0)
    s = -1 if first < 0 else 1
    return [[[s * x for x in cell] for cell in row] for row in table]


def xk_summary(k: int) -> dict:
    """Cohomology, cup table, Massey data and the restricted invariant for X_k."""
    ds = build_presentation_xk(k)
    ctx = CohomologyContext(ds)
    duals = ctx.dual_cocycles()
    u1, u2, u3 = duals["x1"], duals["x2"], duals["x3"]
    change = [ctx.h1_class(u) for u in (u1, u2, u3)]
    from .exactla import det

    table = _normalize_sign(ctx.cup_table([u1, u2, u3]))
    classical = triple_massey(ctx, u1, u1, u2)
    full = hermite_rows([[1] + [0] * (ctx.h2.rank - 1)], ctx.h2.rank, ctx.h2.moduli) if ctx.h2.rank else []
    restricted = restricted_triple(ctx, u1, u2)
    restricted13 = restricted_triple(ctx, u1, u3)
    inv_named = u_restricted_invariant(ctx, u1)
    tot = total_annihilator(ctx)
    inv_canonical = u_restricted_invariant(ctx, tot[0]) if len(tot) == 1 else None
    return {
        "k": k,
        "h1": {"free_rank": ctx.h1.free_rank, "torsion": ctx.h1.torsion},
        "h2": {"free_rank": ctx.h2.free_rank, "torsion": ctx.h2.torsion},
        "dual_basis_unimodular": abs(det(change)) == 1,
        "cup_table": table,
        "classical_u1_u1_u2": classical.to_json(),
        "classical_indeterminacy_is_everything": classical.indeterminacy == full,
        "restricted_u1_u1_u2": restricted.to_json(),
        "restricted_u1_u1_u3": restricted13.to_json(),
        "u1_invariant_multiples_of": inv_named.cyclic_generator(),
        "total_annihilator": tot,
        "invariant_multiples_of": inv_canonical.cyclic_generator() if inv_canonical else None,
    }


def distinguish_xk(k: int, l: int) -> dict:
    """Decide whether the restricted invariant separates X_k from X_l."""
    a, b = xk_summary(k), xk_summary(l)
    same_ring = (
        a["h1"] == b["h1"]
        and a["h2"] == b["h2"]
        and a["cup_table"] == b["cup_table"]
        and a["dual_basis_unimodular"]
        and b["dual_basis_unimodular"]
    )
    ia, ib = a["invariant_multiples_of"], b["invariant_multiples_of"]
    if ia is None or ib is None:
        verdict = "inconclusive"
    else:
        verdict = "distinguished" if ia != ib else "not distinguished"
    return {
        "k": k,
        "l": l,
        "cohomology_rings_isomorphic": same_ring,
        "classical_uninformative": a["classical_indeterminacy_is_everything"] and b["classical_indeterminacy_is_everything"],
        "invariants": [ia, ib],
        "verdict": verdict,
    }


def check_restricted_naturality(h: DeltaMap, ctx_target: CohomologyContext, ctx_source: CohomologyContext, u1, u2) -> bool:
    """Pull back the restricted product along h and compare with the product of the pullbacks."""
    tgt = restricted_triple(ctx_target, u1, u2)
    a1, a2 = ctx_target.cocycle(u1), ctx_target.cocycle(u2)
    pulled = ctx_source.h2_class(pullback(h, tgt.cocycle))
    src = restricted_triple(ctx_source, pullback(h, a1), pullback(h, a2))
    diff = [x - y for x, y in zip(pulled, src.representative)]
    return in_subgroup(diff, src.indeterminacy, ctx_source.h2.moduli, ctx_source.ring)


def undefined_cup1_example(max_power: int = 4) -> dict:
    """In the span of powers of x inside the free algebra on {x}, [x][x] is not exact.

    The differential of x^n is minus the sum of binom(n,k) x^k (x) x^(n-k);
    only x^2 contributes to x (x) x, with coefficient -2, so x (x) x is not a
    boundary there, and the triple product of [x] is undefined.
    """
    from .freedga import TensorElement, cup as t_cup, d_T
    from .intpoly import ZetaPoly

    x = ZetaPoly.zeta("x")
    powers = {1: x}
    for n in range(2, max_power + 1):
        powers[n] = powers[n - 1] * x
    elem = {n: TensorElement.from_poly(f) for n, f in powers.items()}
    formula_ok = True
    for n in range(2, max_power + 1):
        expected = TensorElement.zero(2)
        for k in range(1, n):
            expected = expected - t_cup(elem[k], elem[n - k]) * comb(n, k)
        formula_ok = formula_ok and d_T(elem[n]) == expected
    xx = t_cup(elem[1], elem[1])
    cols = [d_T(elem[n]) for n in range(1, max_power + 1)]
    words = sorted({w for c in cols + [xx] for w in c.terms})
    m = [[c.terms.get(w, 0) for c in cols] for w in words]
    target = [xx.terms.get(w, 0) for w in words]
    try:
        solve(m, target, ZZ, cols=len(cols))
        exact_in_subalgebra = True
    except NoSolution:
        exact_in_subalgebra = False
    exact_in_free = d_T(-TensorElement.generator("x", 2)) == xx
    return {
        "max_power": max_power,
        "differential_formula_holds": formula_ok,
        "x_cup_x_is_cocycle": d_T(xx).is_zero(),
        "x_cup_x_exact_in_power_subalgebra": exact_in_subalgebra,
        "x_cup_x_exact_in_free_algebra": exact_in_free,
        "triple_product_defined": exact_in_subalgebra,
    }
