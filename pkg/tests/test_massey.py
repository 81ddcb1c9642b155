import itertools
import random

import pytest

from cupone.cochain import Cochain, bockstein, coboundary, cup, cup_one, zeta_cochain
from cupone.delta import build_presentation_xk, build_sphere_attach, build_torus, polygon_rotation
from cupone.errors import CuponeError, DomainError, Undefined
from cupone.exactla import in_subgroup
from cupone.intpoly import zeta_binomial
from cupone.massey import (
    CohomologyContext,
    check_restricted_naturality,
    distinguish_xk,
    nfold_repeated_zeta,
    restricted_gamma,
    restricted_triple,
    total_annihilator,
    triple_massey,
    u_restricted_invariant,
    undefined_cup1_example,
    xk_summary,
    zeta_representative,
)
from cupone.rings import ZZ, Ring


@pytest.fixture(scope="module")
def xk_summaries():
    return {k: xk_summary(k) for k in range(5)}


def test_torus_cohomology():
    ctx = CohomologyContext(build_torus())
    assert (ctx.h1.free_rank, ctx.h2.free_rank) == (2, 1)
    d = ctx.dual_cocycles()
    assert ctx.h1_class(d["x1"]) != ctx.h1_class(d["x2"])
    c12 = ctx.h2_class(cup(d["x1"], d["x2"]))
    assert c12 in ([1], [-1])
    assert ctx.h2_class(cup(d["x2"], d["x1"])) == [-c12[0]]


def test_torus_triple_undefined():
    ctx = CohomologyContext(build_torus())
    d = ctx.dual_cocycles()
    with pytest.raises(Undefined) as info:
        triple_massey(ctx, d["x1"], d["x2"], d["x1"])
    assert info.value.obstruction == "u1*u2"


def test_cocycle_rejects_non_cocycle():
    ds = build_presentation_xk(1)
    ctx = CohomologyContext(ds)
    bad = Cochain(ds, 1, [1] + [0] * (ds.count(1) - 1))
    if coboundary(bad).is_zero():  # pragma: no cover
        pytest.skip("first edge indicator happens to be a cocycle")
    with pytest.raises(CuponeError):
        ctx.cocycle(bad)


@pytest.mark.parametrize("k", range(5))
def test_xk_ranks_and_tables(xk_summaries, k):
    s = xk_summaries[k]
    assert s["h1"] == {"free_rank": 3, "torsion": []}
    assert s["h2"] == {"free_rank": 1, "torsion": []}
    assert s["dual_basis_unimodular"]
    assert s["cup_table"] == xk_summaries[0]["cup_table"]


@pytest.mark.parametrize("k", range(5))
def test_xk_classical_uninformative(xk_summaries, k):
    s = xk_summaries[k]
    assert s["classical_indeterminacy_is_everything"]
    assert s["classical_u1_u1_u2"]["contains_zero"] is True


@pytest.mark.parametrize("k", range(5))
def test_xk_restricted_value(xk_summaries, k):
    r = xk_summaries[k]["restricted_u1_u1_u2"]
    assert r["indeterminacy"] == []
    assert r["representative"] in ([k], [-k])
    assert xk_summaries[k]["u1_invariant_multiples_of"] == k
    assert xk_summaries[k]["invariant_multiples_of"] == k


@pytest.mark.parametrize("k,l", list(itertools.combinations(range(5), 2)))
def test_distinguish_pairs(k, l):
    r = distinguish_xk(k, l)
    assert r["cohomology_rings_isomorphic"]
    assert r["classical_uninformative"]
    assert r["verdict"] == "distinguished"


def test_distinguish_same():
    assert distinguish_xk(3, 3)["verdict"] == "not distinguished"


def test_total_annihilator_of_xk():
    ctx = CohomologyContext(build_presentation_xk(2))
    ann = total_annihilator(ctx)
    assert len(ann) == 1
    u1 = ctx.h1_class(ctx.dual_cocycles()["x1"])
    assert ann[0] in (u1, [-x for x in u1])


def test_mod3_triple_product():
    ctx = CohomologyContext(build_sphere_attach(3), Ring(3))
    u = ctx.dual_cocycles()["x"]
    t = triple_massey(ctx, u, u, u)
    assert t.indeterminacy == []
    beta = ctx.h2_class(bockstein(u))
    assert any(beta)
    assert t.representative == ctx.h2.reduce_coords([-x for x in beta])
    assert t.contains_zero is False
    zrep = -cup(u, zeta_cochain(u, 2)) - cup(zeta_cochain(u, 2), u)
    assert ctx.h2_class(zrep) == t.representative


@pytest.mark.parametrize("p", [3, 5, 7])
def test_bockstein_equals_minus_zeta_representative(p):
    ctx = CohomologyContext(build_sphere_attach(p), Ring(p))
    u = ctx.dual_cocycles()["x"]
    r = nfold_repeated_zeta(ctx, u, p)
    beta = ctx.h2_class(bockstein(u))
    assert any(beta)
    assert r.representative == ctx.h2.reduce_coords([-x for x in beta])


def test_nfold_domain():
    ctx = CohomologyContext(build_sphere_attach(3), Ring(3))
    u = ctx.dual_cocycles()["x"]
    with pytest.raises(DomainError):
        nfold_repeated_zeta(ctx, u, 4)
    with pytest.raises(CuponeError):
        nfold_repeated_zeta(ctx, u, 2)


def test_nfold_higher_n_over_z_is_cocycle():
    ctx = CohomologyContext(build_presentation_xk(1))
    u = ctx.dual_cocycles()["x1"]
    for n in range(3, 7):
        z = zeta_representative(u, n)
        assert coboundary(z).is_zero()
    r = nfold_repeated_zeta(ctx, u, 5)
    assert r.indeterminacy is None
    assert r.to_json()["indeterminacy"] == "not computed"


def test_restricted_mod2_domain():
    ctx = CohomologyContext(build_presentation_xk(1), Ring(2))
    d = ctx.dual_cocycles()
    with pytest.raises(DomainError):
        restricted_triple(ctx, d["x1"], d["x2"])


def test_restricted_undefined():
    ctx = CohomologyContext(build_torus())
    d = ctx.dual_cocycles()
    with pytest.raises(Undefined):
        restricted_triple(ctx, d["x1"], d["x2"])


@pytest.mark.parametrize("ring", [ZZ, Ring(3), Ring(5)], ids=str)
def test_rechoice_formulas(ring):
    """Changing a2 or a1 by a coboundary moves the restricted cocycle by a coboundary."""
    ds = build_presentation_xk(2)
    rng = random.Random(f"rechoice:{ring}")
    ctx = CohomologyContext(ds, ring)
    d = ctx.dual_cocycles()
    a1, a2 = d["x1"], d["x2"]
    a12 = ctx.solve_coboundary(cup(a1, a2))
    g = restricted_gamma(a1, a2, a12)
    for _ in range(20):
        b = Cochain(ds, 0, [rng.randint(-4, 4) for _ in range(ds.count(0))], ring)
        db = coboundary(b)
        cb = Cochain(ds, 0, [zeta_binomial(-int(v), 2) for v in b.as_list()], ring)
        assert coboundary(cb) == cup(db, b) - zeta_cochain(db, 2)
        assert zeta_cochain(a1 + db, 2) == zeta_cochain(a1, 2) + cup_one(a1, db) + zeta_cochain(db, 2)
        assert cup_one(a1, db) == cup(a1, b) - cup(b, a1)
        moved2 = restricted_gamma(a1, a2 + db, a12 - cup(a1, b))
        assert moved2 - g == coboundary(cup(zeta_cochain(a1, 2), b))
        moved1 = restricted_gamma(a1 + db, a2, a12 + cup(b, a2))
        assert moved1 - g == coboundary(cup(b, a12) + cup(cb, a2))


def test_restricted_additive_in_second_slot():
    ds = build_presentation_xk(3)
    ctx = CohomologyContext(ds)
    d = ctx.dual_cocycles()
    u = d["x1"]
    ann = u_restricted_invariant(ctx, u).annihilator
    rng = random.Random(5)
    for _ in range(10):
        w1 = [sum(rng.randint(-3, 3) * v[i] for v in ann) for i in range(ctx.h1.rank)]
        w2 = [sum(rng.randint(-3, 3) * v[i] for v in ann) for i in range(ctx.h1.rank)]
        r1, r2 = restricted_triple(ctx, u, w1), restricted_triple(ctx, u, w2)
        r12 = restricted_triple(ctx, u, [x + y for x, y in zip(w1, w2)])
        diff = [x + y - z for x, y, z in zip(r1.representative, r2.representative, r12.representative)]
        assert in_subgroup(diff, r12.indeterminacy, ctx.h2.moduli, ctx.ring)


@pytest.mark.parametrize("shift", [2, 4])
def test_restricted_naturality_under_rotation(shift):
    ds = build_sphere_attach(3)
    h = polygon_rotation(ds, shift)
    ctx = CohomologyContext(ds, Ring(3))
    u = ctx.dual_cocycles()["x"]
    if any(ctx.h2_class(cup(u, u))):  # pragma: no cover
        pytest.skip("u cup u is not exact")
    assert check_restricted_naturality(h, ctx, ctx, u, u)


def test_u_invariant_json():
    ctx = CohomologyContext(build_presentation_xk(4))
    inv = u_restricted_invariant(ctx, ctx.dual_cocycles()["x1"])
    js = inv.to_json()
    assert js["multiples_of"] == 4
    assert js["indeterminacy"] == []


def test_undefined_power_subalgebra_example():
    r = undefined_cup1_example()
    assert r["differential_formula_holds"]
    assert r["x_cup_x_is_cocycle"]
    assert r["x_cup_x_exact_in_power_subalgebra"] is False
    assert r["x_cup_x_exact_in_free_algebra"] is True
    assert r["triple_product_defined"] is False
