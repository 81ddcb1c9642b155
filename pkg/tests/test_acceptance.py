"""Acceptance criteria, one test per criterion (criterion 9 is split by identity).

Each test prints a single ``PASS``/``FAIL`` line with its measured runtime and
the time budget it is checked against.  Two sub-checks of criterion 9 are
known to be false as literally stated; they are strict xfails (see the
decisions ledger), so they fail on every run.
"""

import itertools
import random
import time
from fractions import Fraction
from math import factorial

import pytest

from cupone import ncforms as nc
from cupone import suites
from cupone.cochain import (
    Cochain,
    coboundary,
    cocycle_module_basis,
    cup,
    no_right_hirsch_witness,
    verify_identity,
    IDENTITIES,
    zeta_cochain,
    zeta_multi,
    cup_one as c_cup_one,
)
from cupone.delta import random_delta
from cupone.errors import DivisibilityFailure
from cupone.freedga import CochainTarget, TensorElement, d_T, extend_map
from cupone.intpoly import (
    ZetaPoly,
    evaluate,
    make_index,
    poly_mul,
    polya_to_zeta,
    reduce_mod_p,
    zeta_apply,
    zeta_to_rational,
)
from cupone.massey import distinguish_xk, xk_summary
from cupone.rings import ZZ, Ring


@pytest.fixture
def report(capsys):
    def emit(label, ok, elapsed, limit, detail=""):
        in_time = elapsed < limit
        status = "PASS" if ok and in_time else "FAIL"
        line = f"{status} criterion {label}: {detail} [{elapsed:.2f}s, limit {limit}s]"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
        assert in_time, line

    return emit


def _oracle_binom(x, n):
    # falling factorial over n!, exact in Fractions
    num = Fraction(1)
    for i in range(n):
        num *= x - i
    return num / factorial(n)


def _random_zeta(rng, ring=ZZ, vars=("x", "y", "z"), max_index=3, terms=3):
    out = {}
    for _ in range(rng.randint(1, terms)):
        chosen = rng.sample(vars, rng.randint(0, len(vars)))
        idx = make_index({v: rng.randint(1, max_index) for v in chosen})
        out[idx] = out.get(idx, 0) + rng.randint(-5, 5)
    return ZetaPoly(out, ring)


# ----------------------------------------------------------------------- 1


def test_criterion_1_identity_suite(report):
    t0 = time.perf_counter()
    failures, runs = [], 0
    for name, ds in suites.standard_complexes():
        for ring in (ZZ, Ring(3), Ring(5)):
            for tag in IDENTITIES:
                r = verify_identity(ds, tag, 500, seed=1, ring=ring)
                runs += 1
                if not r.passed:
                    failures.append((name, str(ring), tag))
    elapsed = time.perf_counter() - t0
    report(1, not failures, elapsed, 60, f"{runs} suites x 500 trials, failures {failures[:3]}")


# ----------------------------------------------------------------------- 2


def test_criterion_2_torus(report):
    t0 = time.perf_counter()
    r = suites.torus_report()
    ok = r["coboundary_identity_holds"] and r["ranks"] == [2, 1] and r["anticommute"]
    report(2, ok, time.perf_counter() - t0, 1, f"ranks {r['ranks']}, [a1][a2] = {r['class_a1a2']}, [a2][a1] = {r['class_a2a1']}")


# ----------------------------------------------------------------------- 3


def _dzeta_holds(a, n):
    rhs = Cochain.zero(a.complex, 2, a.ring)
    for k in range(1, n):
        rhs = rhs - cup(zeta_cochain(a, k), zeta_cochain(a, n - k))
    return coboundary(zeta_cochain(a, n)) == rhs


def _multi_holds(cocycles, orders):
    ds, ring = cocycles[0].complex, cocycles[0].ring
    rhs = Cochain.zero(ds, 2, ring)
    for ls in itertools.product(*(range(k + 1) for k in orders)):
        if all(x == 0 for x in ls) or list(ls) == list(orders):
            continue
        rest = [k - x for k, x in zip(orders, ls)]
        rhs = rhs - cup(zeta_multi(cocycles, ls), zeta_multi(cocycles, rest))
    return coboundary(zeta_multi(cocycles, orders)) == rhs


def test_criterion_3_dzeta(report):
    t0 = time.perf_counter()
    rng = random.Random("criterion3")
    checked, bad = 0, []
    rings = [(ZZ, 6), (Ring(3), 2), (Ring(5), 4), (Ring(7), 6)]
    multi = 0
    for name, ds in suites.standard_complexes():
        for ring, nmax in rings:
            basis = cocycle_module_basis(ds, 1, ring)
            for a in basis:
                for n in range(1, nmax + 1):
                    checked += 1
                    if not _dzeta_holds(a, n):
                        bad.append((name, str(ring), n))
            if not basis:
                continue
            top = min(3, nmax)
            for _ in range(6):
                m = rng.randint(1, 3)
                picks = [rng.choice(basis) for _ in range(m)]
                orders = [rng.randint(0, top) for _ in range(m)]
                if not any(orders):
                    orders[0] = 1
                multi += 1
                if not _multi_holds(picks, orders):
                    bad.append((name, str(ring), "multi", orders))
    report(3, not bad, time.perf_counter() - t0, 30, f"{checked} single and {multi} multi-index checks, failures {bad[:3]}")


# ----------------------------------------------------------------------- 4


def test_criterion_4_free_dga(report):
    t0 = time.perf_counter()
    rz, r5 = suites.free_dga_suite(ZZ, 0), suites.free_dga_suite(Ring(5), 0)
    rng = random.Random("criterion4")
    round_trip_bad = 0
    for _ in range(20):
        ds = random_delta(rng.randint(0, 10**6), rng.randint(8, 25))
        basis = cocycle_module_basis(ds, 1)
        target = CochainTarget(ds)
        images = {}
        for v in ("x", "y"):
            c = Cochain.zero(ds, 1)
            for b in basis:
                c = c + b * rng.randint(-3, 3)
            images[v] = c
        phi = extend_map(images, target)
        ok = phi.restrict() == images
        a = TensorElement.basis({"x": 2, "y": 1})
        ok = ok and phi(a) == c_cup_one(target.zeta(images["x"], 2), images["y"])
        ok = ok and all(phi(d_T(TensorElement.generator("x", n))) == coboundary(phi(TensorElement.generator("x", n))) for n in (1, 2, 3))
        round_trip_bad += not ok
    ok = rz["passed"] and r5["passed"] and round_trip_bad == 0
    detail = f"dd/evaluation Z {rz['passed']}, Z5 {r5['passed']}, extend_map round-trip failures {round_trip_bad}/20"
    report(4, ok, time.perf_counter() - t0, 30, detail)


# ----------------------------------------------------------------------- 5


def test_criterion_5_no_right_hirsch(report):
    t0 = time.perf_counter()
    got = {n: no_right_hirsch_witness(n) for n in range(-3, 8)}
    report(5, all(v == -n for n, v in got.items()), time.perf_counter() - t0, 1, f"witness values {list(got.values())}")


# ----------------------------------------------------------------------- 6


def test_criterion_6_mod3_triple(report):
    t0 = time.perf_counter()
    r = suites.mod3_triple_report()
    ok = r["indeterminacy_zero"] and r["bockstein_nonzero"] and r["equals_minus_bockstein"] and r["zeta_representative_matches"]
    report(6, ok, time.perf_counter() - t0, 5, f"<u,u,u> = {r['triple']['representative']}, Bockstein {r['bockstein']}")


# ----------------------------------------------------------------------- 7


def test_criterion_7_mod_p_bockstein(report):
    t0 = time.perf_counter()
    rs = [suites.bockstein_report(p) for p in (3, 5)]
    ok = all(r["equals_minus_bockstein"] and any(r["bockstein"]) for r in rs)
    report(7, ok, time.perf_counter() - t0, 10, ", ".join(f"p={r['p']}: {r['zeta_representative']} vs beta {r['bockstein']}" for r in rs))


# ----------------------------------------------------------------------- 8


def test_criterion_8_xk(report):
    t0 = time.perf_counter()
    ok, notes = True, []
    summaries = [xk_summary(k) for k in range(5)]
    for k, s in enumerate(summaries):
        r = s["restricted_u1_u1_u2"]
        row_ok = (
            s["h1"] == {"free_rank": 3, "torsion": []}
            and s["h2"] == {"free_rank": 1, "torsion": []}
            and s["dual_basis_unimodular"]
            and s["cup_table"] == summaries[0]["cup_table"]
            and s["classical_indeterminacy_is_everything"]
            and r["indeterminacy"] == []
            and r["representative"] in ([k], [-k])
            and s["invariant_multiples_of"] == k
        )
        ok = ok and row_ok
        notes.append(f"k={k}: {r['representative'][0]}")
    verdicts = [distinguish_xk(k, l)["verdict"] for k, l in itertools.combinations(range(5), 2)]
    ok = ok and verdicts == ["distinguished"] * 10 and distinguish_xk(2, 2)["verdict"] == "not distinguished"
    report(8, ok, time.perf_counter() - t0, 120, f"restricted values {', '.join(notes)}; {verdicts.count('distinguished')}/10 pairs distinguished")


# ----------------------------------------------------------------------- 9

V2 = ["x", "y"]


def _tally(pairs):
    return sum(lhs != rhs for lhs, rhs in pairs)


def test_criterion_9a_steenrod(report):
    t0 = time.perf_counter()
    rng = random.Random("9a")
    r = lambda d: nc.random_tensor(rng, d, V2)  # noqa: E731
    bad = _tally(nc.steenrod_sides(r(1), r(1)) for _ in range(200)) + _tally(nc.steenrod_sides(r(1), r(2)) for _ in range(200))
    report("9a (Steenrod on forms)", bad == 0, time.perf_counter() - t0, 60, f"{bad} failures in 400 trials")


def test_criterion_9b_left_hirsch_degree_one(report):
    t0 = time.perf_counter()
    rng = random.Random("9b")
    r = lambda d: nc.random_tensor(rng, d, V2)  # noqa: E731
    bad = 0
    for _ in range(200):
        xs = (r(1), r(1), r(1))
        bad += _tally([nc.left_hirsch_sides(*xs, sign="n1"), nc.left_hirsch_sides(*xs)])
    report("9b (left Hirsch, degree one)", bad == 0, time.perf_counter() - t0, 60, f"{bad} failures in 200 trials, both sign forms")


def test_criterion_9b_left_hirsch_corrected_sign(report):
    t0 = time.perf_counter()
    rng = random.Random("9b-std")
    bad = trials = 0
    for degs in itertools.product(range(3), repeat=3):
        for _ in range(10):
            trials += 1
            bad += _tally([nc.left_hirsch_sides(*(nc.random_tensor(rng, d, V2) for d in degs))])
    report("9b (left Hirsch, all degrees, sign n2(n3+1))", bad == 0, time.perf_counter() - t0, 60, f"{bad} failures in {trials} trials")


@pytest.mark.xfail(strict=True, reason="sign exponent n1(n2+1) fails in mixed degrees; ledgered")
def test_criterion_9b_left_hirsch_literal_sign(report):
    t0 = time.perf_counter()
    rng = random.Random("9b-lit")
    bad = trials = 0
    for degs in itertools.product(range(3), repeat=3):
        for _ in range(10):
            trials += 1
            bad += _tally([nc.left_hirsch_sides(*(nc.random_tensor(rng, d, V2) for d in degs), sign="n1")])
    report("9b (left Hirsch, all degrees, sign n1(n2+1) as written)", bad == 0, time.perf_counter() - t0, 60, f"{bad} failures in {trials} trials")


@pytest.mark.xfail(strict=True, reason="six-term expansion mixes left and right module actions; ledgered")
def test_criterion_9c_six_term_literal(report):
    t0 = time.perf_counter()
    rng = random.Random("9c")
    bad = _tally(nc.cup1_omega1_sides(*(nc.random_poly(rng, V2) for _ in range(4))) for _ in range(200))
    report("9c (six-term expansion as written)", bad == 0, time.perf_counter() - t0, 60, f"{bad} failures in 200 trials")


def test_criterion_9c_product_expansion(report):
    t0 = time.perf_counter()
    rng = random.Random("9c-fix")
    one = nc.CommPoly.const(1)
    bad = 0
    for _ in range(200):
        ps = [nc.random_poly(rng, V2) for _ in range(4)]
        bad += _tally([nc.cup1_omega1_product_sides(*ps), nc.cup1_omega1_sides(one, ps[1], one, ps[3]), nc.cup1_omega1_sides(ps[0], ps[1], one, ps[3])])
    report("9c (corrected expansion and constant-b0 cases)", bad == 0, time.perf_counter() - t0, 60, f"{bad} failures in 600 checks")


def test_criterion_9d_dc1(report):
    t0 = time.perf_counter()
    rng = random.Random("9d")
    bad = 0
    for _ in range(200):
        a = nc.embed(nc.random_omega1(rng, V2, nc.POLY))
        b = nc.embed(nc.random_omega1(rng, V2, nc.POLY))
        bad += _tally([nc.dc1_sides(a, b)])
    report("9d (d of cup-one balance on forms)", bad == 0, time.perf_counter() - t0, 60, f"{bad} failures in 200 trials")


def test_criterion_9e_abbassi(report):
    t0 = time.perf_counter()
    a0, a1, b0, b1, c0, c1 = (nc.CommPoly.var(n) for n in ("a0", "a1", "b0", "b1", "c0", "c1"))
    r = nc.abbassi_counterexample()
    ok = (
        r["lhs"] == nc.tensor(a0 * a1 * b0, b1 * c0, c1) - nc.tensor(a0 * b0, b1 * c0, c1 * a1)
        and r["u_cup1_v_cup_w"] == nc.tensor(a0 * b0, a1 * b1 * c0, c1) - nc.tensor(a0 * a1 * b0, b1 * c0, c1)
        and r["v_cup_u_cup1_w"] == nc.tensor(b0, b1 * a0 * c0, a1 * c1) - nc.tensor(b0, b1 * a0 * a1 * c0, c1)
        and not r["difference"].is_zero()
    )
    report("9e (Abbassi difference)", ok, time.perf_counter() - t0, 60, "difference nonzero, displayed tensors match")


def test_criterion_9f_binomial_closure(report):
    t0 = time.perf_counter()
    rng = random.Random("9f")
    bad = 0
    for _ in range(50):
        w = nc.random_omega1(rng, V2, nc.BINOMIAL)
        try:
            for n in range(1, 5):
                nc.binomial_closure_check(w, n)
        except DivisibilityFailure:
            bad += 1
    report("9f (binomial closure, n <= 4)", bad == 0, time.perf_counter() - t0, 60, f"{bad} failures on 50 elements")


# ---------------------------------------------------------------------- 10


def test_criterion_10_intpoly(report):
    t0 = time.perf_counter()
    rng = random.Random("criterion10")
    bad = {"bin1": 0, "bin3": 0, "bin4": 0, "polya": 0, "mod_p": 0}
    for _ in range(1000):
        f, g = _random_zeta(rng), _random_zeta(rng)
        pt = {v: rng.randint(-6, 8) for v in ("x", "y", "z")}
        n = rng.randint(0, 4)
        fv, gv = evaluate(f, pt), evaluate(g, pt)
        lhs = evaluate(zeta_apply(f + g, n), pt)
        split = sum(evaluate(poly_mul(zeta_apply(f, i), zeta_apply(g, n - i)), pt) for i in range(n + 1))
        if not (lhs == split == _oracle_binom(fv + gv, n)):
            bad["bin1"] += 1
        if evaluate(poly_mul(f, g), pt) != fv * gv:
            bad["bin3"] += 1
        m = rng.randint(2, 5)
        if not zeta_apply(ZetaPoly.const(1), m).is_zero() or _oracle_binom(1, m) != 0:
            bad["bin4"] += 1
    for _ in range(200):
        f = _random_zeta(rng)
        if polya_to_zeta(zeta_to_rational(f)) != f:
            bad["polya"] += 1
    for _ in range(200):
        p = rng.choice((3, 5, 7))
        f, g = _random_zeta(rng, max_index=p - 1), _random_zeta(rng, max_index=p - 1)
        if reduce_mod_p(poly_mul(f, g), p) != poly_mul(reduce_mod_p(f, p), reduce_mod_p(g, p)):
            bad["mod_p"] += 1
    report(10, not any(bad.values()), time.perf_counter() - t0, 10, f"failures {bad}")
