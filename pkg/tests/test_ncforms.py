import itertools
import random

import pytest

from cupone import ncforms as nc
from cupone.errors import CuponeError, DivisibilityFailure, RingMismatch
from cupone.ncforms import (
    BINOMIAL,
    POLY,
    CommPoly,
    big_d,
    binomial_closure_check,
    d_of,
    embed,
    omega,
    omega_cup_one,
    project_J,
    t_cup,
    t_cup_one,
    t_ring_mul,
    tensor,
)

V = CommPoly.var
one = CommPoly.const(1)
VARS = ["x", "y"]


def test_cup_one_on_t1_is_swap_product():
    a0, a1, b0, b1 = (V(n) for n in ("a0", "a1", "b0", "b1"))
    assert t_cup_one(tensor(a0, a1), tensor(b0, b1)) == tensor(a0 * b0, b1 * a1)


def test_abbassi_displayed_tensors():
    a0, a1, b0, b1, c0, c1 = (V(n) for n in ("a0", "a1", "b0", "b1", "c0", "c1"))
    r = nc.abbassi_counterexample()
    assert r["lhs"] == tensor(a0 * a1 * b0, b1 * c0, c1) - tensor(a0 * b0, b1 * c0, c1 * a1)
    assert r["u_cup1_v_cup_w"] == tensor(a0 * b0, a1 * b1 * c0, c1) - tensor(a0 * a1 * b0, b1 * c0, c1)
    assert r["v_cup_u_cup1_w"] == tensor(b0, b1 * a0 * c0, a1 * c1) - tensor(b0, b1 * a0 * a1 * c0, c1)
    assert not r["difference"].is_zero()
    assert r["du_decomposition_holds"]
    assert r["right_hirsch_balance"].is_zero()


def test_da_cup1_db_special_case():
    a, b = V("x") * 2 + V("y"), V("x") * V("y")
    lhs = omega_cup_one(d_of(a), d_of(b))
    assert lhs == d_of(a * b) - omega(b, a) - omega(a, b)
    assert omega_cup_one(d_of(a), d_of(a)) == d_of(a * a) - omega(a, a) * 2


def test_six_term_expansion_counterexample():
    # a0 = 1, a1 = x, b0 = y, b1 = x: the two module actions on b0 differ
    a0, a1, b0, b1 = one, V("x"), V("y"), V("x")
    lhs, rhs = nc.cup1_omega1_sides(a0, a1, b0, b1)
    assert lhs != rhs
    da1, db0, db1 = (big_d(tensor(f)) for f in (a1, b0, b1))
    correction = t_ring_mul(tensor(a0, one), t_ring_mul(db0, t_ring_mul(da1, db1)))
    assert embed(lhs) - embed(rhs) == -correction


def test_six_term_expansion_holds_for_constant_b0():
    rng = random.Random(2)
    for _ in range(30):
        a0, a1, b1 = (nc.random_poly(rng, VARS) for _ in range(3))
        b0 = CommPoly.const(rng.randint(-3, 3))
        lhs, rhs = nc.cup1_omega1_sides(a0, a1, b0, b1)
        assert lhs == rhs


def test_product_expansion_random():
    rng = random.Random(7)
    for _ in range(60):
        ps = [nc.random_poly(rng, VARS) for _ in range(4)]
        lhs, rhs = nc.cup1_omega1_product_sides(*ps)
        assert lhs == rhs


@pytest.mark.parametrize("degrees", [(1, 1), (1, 2), (2, 1), (2, 2), (0, 1), (1, 0)])
def test_steenrod_identity_battikh_signs(degrees):
    rng = random.Random(hash(degrees) & 0xFFFF)
    for _ in range(25):
        a = nc.random_tensor(rng, degrees[0], VARS)
        b = nc.random_tensor(rng, degrees[1], VARS)
        lhs, rhs = nc.steenrod_sides(a, b)
        assert lhs == rhs


def test_left_hirsch_all_degrees():
    rng = random.Random(11)
    for degs in itertools.product((0, 1, 2), repeat=3):
        for _ in range(4):
            lhs, rhs = nc.left_hirsch_sides(*(nc.random_tensor(rng, d, VARS) for d in degs))
            assert lhs == rhs


def test_left_hirsch_sign_variants():
    rng = random.Random(12)
    x = [nc.random_tensor(rng, 1, VARS) for _ in range(3)]
    assert nc.left_hirsch_sides(*x, sign="n1") == nc.left_hirsch_sides(*x)
    # in degrees (1, 2, 1) the exponent n1 (n2 + 1) is odd while n2 (n3 + 1) is even
    a1, a2, a3 = tensor(one, V("x")), tensor(one, V("y"), V("x")), tensor(V("y"), V("x"))
    lhs, rhs = nc.left_hirsch_sides(a1, a2, a3, sign="n1")
    assert lhs != rhs
    lhs, rhs = nc.left_hirsch_sides(a1, a2, a3)
    assert lhs == rhs
    with pytest.raises(CuponeError):
        nc.left_hirsch_sides(*x, sign="other")


def test_dc1_and_right_hirsch_balance():
    rng = random.Random(13)
    for _ in range(40):
        a = embed(nc.random_omega1(rng, VARS, POLY))
        b = embed(nc.random_omega1(rng, VARS, POLY))
        lhs, rhs = nc.dc1_sides(a, b)
        assert lhs == rhs
        ps = [nc.random_poly(rng, VARS) for _ in range(2)]
        lhs, rhs = nc.right_hirsch_sides(*ps, nc.random_tensor(rng, 1, VARS), nc.random_tensor(rng, 1, VARS))
        assert lhs == rhs


def test_d_squared_zero_on_forms():
    rng = random.Random(17)
    for _ in range(20):
        t = nc.random_tensor(rng, 1, VARS)
        assert big_d(big_d(t)).is_zero()
        w = nc.random_omega1(rng, VARS, POLY)
        assert nc.omega_d(nc.omega_d(w)).is_zero()
        assert project_J(big_d(embed(w))) == nc.omega_d(w)


def test_binomial_closure_over_integer_valued_polynomials():
    rng = random.Random(19)
    for _ in range(20):
        w = nc.random_omega1(rng, VARS, BINOMIAL)
        for n in range(1, 5):
            binomial_closure_check(w, n)
    x = CommPoly.var("x", BINOMIAL)
    assert binomial_closure_check(d_of(x), 1) == d_of(x)


def test_binomial_closure_fails_over_polynomial_ring():
    with pytest.raises(DivisibilityFailure) as info:
        binomial_closure_check(d_of(V("x")), 2)
    assert info.value.n == 2


def test_errors():
    with pytest.raises(RingMismatch):
        tensor(V("x"), CommPoly.var("x", BINOMIAL))
    with pytest.raises(CuponeError):
        nc.OmegaForm({(V("x").terms and next(iter(V("x").terms)), ()): 1}, 1)
    with pytest.raises(CuponeError):
        binomial_closure_check(d_of(CommPoly.var("x", BINOMIAL)), 5)
    with pytest.raises(CuponeError):
        t_ring_mul(tensor(V("x")), tensor(V("x"), V("x")))
    assert t_cup(tensor(V("x")), tensor(V("y"))) == tensor(V("x") * V("y"))
