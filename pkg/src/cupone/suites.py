"""Named test complexes and the packaged verification and reproduction suites."""

from __future__ import annotations

import random
from typing import Iterator

from . import ncforms as nc
from .cochain import (
    Cochain,
    bockstein,
    circ,
    coboundary,
    cup,
    cup_one,
    no_right_hirsch_witness,
    zeta_cochain,
)
from .delta import (
    DeltaSet,
    build_binomial_test_complex,
    build_interval,
    build_presentation_xk,
    build_sphere_attach,
    build_standard_simplex,
    build_torus,
    random_delta,
)
from .errors import CuponeError, DivisibilityFailure
from .freedga import TensorElement, circ as t_circ, cup as t_cup, cup_one as t_cup_one, d_T, evaluate_on_test_complex, mod_p
from .intpoly import make_index
from .massey import CohomologyContext, distinguish_xk, nfold_repeated_zeta, triple_massey, undefined_cup1_example, xk_summary
from .rings import ZZ, Ring

BINTEST_VARS = ("x", "y")
BINTEST_FUNCTIONS = ((1, 0), (0, 1), (1, 1), (-1, 2), (2, -1))


def bintest(depth: int = 2) -> DeltaSet:
    return build_binomial_test_complex(BINTEST_VARS, BINTEST_FUNCTIONS, depth)


def build_named(spec: str) -> DeltaSet:
    """Build a complex from ``NAME[:params]``."""
    name, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    try:
        if name == "interval":
            return build_interval()
        if name == "torus":
            return build_torus()
        if name.startswith("simplex") and name[7:].isdigit():
            return build_standard_simplex(int(name[7:]))
        if name == "simplex":
            return build_standard_simplex(int(args[0]))
        if name == "attach":
            return build_sphere_attach(int(args[0]))
        if name == "xk":
            return build_presentation_xk(int(args[0]))
        if name == "bintest":
            return bintest(int(args[0]) if args else 2)
        if name == "random":
            size = int(args[0])
            seed = int(args[1]) if len(args) > 1 else 0
            return random_delta(seed, size)
    except (IndexError, ValueError) as exc:
        raise CuponeError(f"bad builder parameters in {spec!r}: {exc}") from None
    raise CuponeError(f"unknown builder {name!r}")


def standard_complexes(n_random: int = 50, random_size: int = 30) -> Iterator[tuple[str, DeltaSet]]:
    yield "interval", build_interval()
    yield "torus", build_torus()
    yield "attach3", build_sphere_attach(3)
    for k in range(3):
        yield f"X{k}", build_presentation_xk(k)
    yield "bintest", bintest()
    for s in range(n_random):
        yield f"random{s}", random_delta(s, random_size)


# ------------------------------------------------------------------ free DGA


def all_indices(vars, max_total: int):
    """Nonzero multi-indices in ``vars`` with total order at most ``max_total``."""
    out = []

    def rec(k, left, acc):
        if k == len(vars):
            if acc:
                out.append(make_index(acc))
            return
        for e in range(left + 1):
            rec(k + 1, left - e, acc + ([(vars[k], e)] if e else []))

    rec(0, max_total, [])
    return sorted(out, key=lambda i: (sum(e for _, e in i), i))


def free_dga_suite(ring: Ring = ZZ, seed: int = 0, max_total: int = 5, samples: int = 200) -> dict:
    """d_T d_T = 0 on all small basis elements, and the evaluation map commutes with the structure."""
    vars3 = ("x", "y", "z")
    idx = all_indices(vars3, max_total)
    if ring.p is not None:
        idx = [i for i in idx if max(e for _, e in i) < ring.p]
    dd_fail = 0
    for i in idx:
        if not d_T(d_T(TensorElement.basis(i, ring))).is_zero():
            dd_fail += 1
    # evaluation on a depth-3 test complex in two variables
    ds = bintest(3)
    idx2 = all_indices(BINTEST_VARS, max_total)
    if ring.p is not None:
        idx2 = [i for i in idx2 if max(e for _, e in i) < ring.p]

    def ev(a):
        return evaluate_on_test_complex(a, ds)

    rng = random.Random(f"free_dga_suite:{seed}:{ring}")
    gens1 = [TensorElement.basis(i, ring) for i in idx2]

    def rand(deg):
        total = TensorElement.zero(deg, ring)
        for _ in range(rng.randint(1, 2)):
            term = TensorElement.scalar(rng.randint(-3, 3), ring)
            for _ in range(deg):
                term = t_cup(term, rng.choice(gens1))
            total = total + term
        return total

    fails = {"d": 0, "cup": 0, "cup_one": 0, "circ": 0}
    for _ in range(samples):
        a1, b1, a2, b2 = rand(1), rand(1), rand(2), rand(2)
        for a in (a1, a2):
            if ev(d_T(a)) != coboundary(ev(a)):
                fails["d"] += 1
        if ev(t_cup(a1, b1)) != cup(ev(a1), ev(b1)) or ev(t_cup(a1, a2)) != cup(ev(a1), ev(a2)):
            fails["cup"] += 1
        for x, y in ((a1, b1), (a2, b1), (a1, b2)):
            if ev(t_cup_one(x, y)) != cup_one(ev(x), ev(y)):
                fails["cup_one"] += 1
        if ev(t_circ(a2, b2)) != circ(ev(a2), ev(b2)):
            fails["circ"] += 1
    return {
        "ring": ring.to_json(),
        "indices_checked": len(idx),
        "dd_failures": dd_fail,
        "evaluation_samples": samples,
        "evaluation_failures": fails,
        "passed": dd_fail == 0 and not any(fails.values()),
    }


def free_mod_p_compatibility(p: int, max_total: int = 5) -> dict:
    """mod_p commutes with d_T on basis elements all of whose orders are below p."""
    checked = fails = 0
    for i in all_indices(("x", "y", "z"), max_total):
        if max(e for _, e in i) >= p:
            continue
        a = TensorElement.basis(i)
        checked += 1
        if mod_p(d_T(a), p) != d_T(mod_p(a, p)):
            fails += 1
    return {"p": p, "checked": checked, "failures": fails}


# --------------------------------------------------------------- forms suite


def omega_suite(seed: int = 0, trials: int = 200) -> dict:
    rng = random.Random(f"omega_suite:{seed}")
    v2 = ["x", "y"]
    out: dict = {}

    def tally(name, sides):
        bad = out.setdefault(name, {"trials": 0, "failures": 0})
        lhs, rhs = sides
        bad["trials"] += 1
        if lhs != rhs:
            bad["failures"] += 1
            bad.setdefault("first_counterexample", {"lhs": str(lhs), "rhs": str(rhs)})

    for _ in range(trials):
        r = lambda d: nc.random_tensor(rng, d, v2)  # noqa: E731
        tally("steenrod(1,1)", nc.steenrod_sides(r(1), r(1)))
        tally("steenrod(1,2)", nc.steenrod_sides(r(1), r(2)))
        tally("steenrod(2,1)", nc.steenrod_sides(r(2), r(1)))
        tally("left-hirsch", nc.left_hirsch_sides(r(1), r(1), r(1)))
        degs = [rng.randrange(3) for _ in range(3)]
        xs = [r(d) for d in degs]
        tally("left-hirsch-mixed-degrees", nc.left_hirsch_sides(*xs))
        tally("left-hirsch-n1-sign-mixed-degrees", nc.left_hirsch_sides(*xs, sign="n1"))
        ps = [nc.random_poly(rng, v2) for _ in range(4)]
        tally("cup1-omega1-six-term", nc.cup1_omega1_sides(*ps))
        tally("cup1-omega1-product", nc.cup1_omega1_product_sides(*ps))
        one = nc.CommPoly.const(1)
        tally("cup1-omega1-da-db", nc.cup1_omega1_sides(one, ps[1], one, ps[3]))
        a = nc.embed(nc.random_omega1(rng, v2, nc.POLY))
        b = nc.embed(nc.random_omega1(rng, v2, nc.POLY))
        tally("dc1", nc.dc1_sides(a, b))
        tally("right-hirsch", nc.right_hirsch_sides(ps[0], ps[1], r(1), r(1)))
    closure = {"elements": 0, "failures": 0}
    for _ in range(50):
        w = nc.random_omega1(rng, v2, nc.BINOMIAL)
        closure["elements"] += 1
        try:
            for n in range(1, 5):
                nc.binomial_closure_check(w, n)
        except DivisibilityFailure:
            closure["failures"] += 1
    out["binomial-closure"] = closure
    ab = nc.abbassi_counterexample()
    out["abbassi"] = {
        "difference_nonzero": not ab["difference"].is_zero(),
        "difference": str(ab["difference"]),
        "right_hirsch_balance_zero": ab["right_hirsch_balance"].is_zero(),
        "du_decomposition_holds": ab["du_decomposition_holds"],
    }
    return out


# ------------------------------------------------------------ worked examples


def torus_report() -> dict:
    ds = build_torus()
    ctx = CohomologyContext(ds)
    duals = ctx.dual_cocycles()
    a1, a2 = duals["x1"], duals["x2"]
    b = cup_one(a1, a2)
    steenrod_ok = coboundary(b) == -cup(a1, a2) - cup(a2, a1)
    c12, c21 = ctx.h2_class(cup(a1, a2)), ctx.h2_class(cup(a2, a1))
    return {
        "a1": {lab: v for lab, v in zip(ds.labels[1], a1.as_list())},
        "a2": {lab: v for lab, v in zip(ds.labels[1], a2.as_list())},
        "a1_cup1_a2": {lab: v for lab, v in zip(ds.labels[1], b.as_list())},
        "a1_cup_a2": {lab: v for lab, v in zip(ds.labels[2], cup(a1, a2).as_list())},
        "a2_cup_a1": {lab: v for lab, v in zip(ds.labels[2], cup(a2, a1).as_list())},
        "coboundary_identity_holds": steenrod_ok,
        "ranks": [ctx.h1.free_rank, ctx.h2.free_rank],
        "torsion": [ctx.h1.torsion, ctx.h2.torsion],
        "class_a1a2": c12,
        "class_a2a1": c21,
        "anticommute": [x + y for x, y in zip(c12, c21)] == [0] * len(c12) and any(c12),
    }


def mod3_triple_report() -> dict:
    ds = build_sphere_attach(3)
    ctx = CohomologyContext(ds, Ring(3))
    u = ctx.dual_cocycles()["x"]
    t = triple_massey(ctx, u, u, u)
    zrep = -cup(u, zeta_cochain(u, 2)) - cup(zeta_cochain(u, 2), u)
    beta = ctx.h2_class(bockstein(u))
    minus_beta = ctx.h2.reduce_coords([-x for x in beta])
    return {
        "triple": t.to_json(),
        "indeterminacy_zero": t.indeterminacy == [],
        "bockstein": beta,
        "bockstein_nonzero": any(beta),
        "equals_minus_bockstein": t.representative == minus_beta,
        "zeta_representative": ctx.h2_class(zrep),
        "zeta_representative_matches": ctx.h2_class(zrep) == minus_beta,
    }


def bockstein_report(p: int) -> dict:
    ds = build_sphere_attach(p)
    ctx = CohomologyContext(ds, Ring(p))
    u = ctx.dual_cocycles()["x"]
    r = nfold_repeated_zeta(ctx, u, p)
    beta = ctx.h2_class(bockstein(u))
    minus_beta = ctx.h2.reduce_coords([-x for x in beta])
    return {
        "p": p,
        "zeta_representative": r.representative,
        "bockstein": beta,
        "equals_minus_bockstein": r.representative == minus_beta,
    }


def paper_suite(seed: int = 0) -> dict:
    ab = nc.abbassi_counterexample()
    return {
        "seed": seed,
        "torus": torus_report(),
        "no_right_hirsch": {str(n): no_right_hirsch_witness(n) for n in range(-3, 8)},
        "mod3_triple": mod3_triple_report(),
        "mod_p_bockstein": [bockstein_report(p) for p in (3, 5)],
        "abbassi": {k: (str(v) if not isinstance(v, bool) else v) for k, v in ab.items()},
        "undefined_triple_in_power_subalgebra": undefined_cup1_example(),
        "xk": [_xk_row(k) for k in range(5)],
        "xk_distinguish": [distinguish_xk(k, l) for k in range(5) for l in range(k + 1, 5)],
    }


def _xk_row(k: int) -> dict:
    s = xk_summary(k)
    return {
        "k": k,
        "h1": s["h1"],
        "h2": s["h2"],
        "cup_table": s["cup_table"],
        "classical_indeterminacy_is_everything": s["classical_indeterminacy_is_everything"],
        "restricted_u1_u1_u2": s["restricted_u1_u1_u2"]["representative"],
        "restricted_indeterminacy": s["restricted_u1_u1_u2"]["indeterminacy"],
        "invariant_multiples_of": s["invariant_multiples_of"],
    }


__all__ = [
    "BINTEST_FUNCTIONS",
    "BINTEST_VARS",
    "bintest",
    "build_named",
    "standard_complexes",
    "free_dga_suite",
    "free_mod_p_compatibility",
    "omega_suite",
    "torus_report",
    "mod3_triple_report",
    "bockstein_report",
    "paper_suite",
]
