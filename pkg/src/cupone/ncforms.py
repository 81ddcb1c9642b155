"""Tensor forms T(A) and non-commutative differential forms over a commutative algebra.

The algebra A is either a polynomial ring (monomial basis) or the ring of
integer-valued polynomials (binomial basis).  A tensor form of degree n is a
combination of (n+1)-tuples of basis elements.  The unit of A is the empty
tuple in both bases.
"""

from __future__ import annotations

import random
from math import factorial
from typing import Iterable, Mapping, Sequence

from .errors import CuponeError, DivisibilityFailure, RingMismatch
from .intpoly import ONE_INDEX, basis_product, index_add, index_max, make_index
from .rings import ZZ, Ring

ONE = ONE_INDEX


class BasisAlgebra:
    """A commutative algebra with a distinguished basis containing 1."""

    name = "abstract"

    def __init__(self, ring: Ring = ZZ):
        self.ring = ring

    def mul(self, m1, m2) -> Iterable[tuple[tuple, int]]:
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.ring == other.ring

    def __hash__(self):
        return hash((type(self), self.ring))


class MonomialAlgebra(BasisAlgebra):
    """Polynomial ring over Z or Z/p; basis = monomials."""

    name = "poly"

    def mul(self, m1, m2):
        yield index_add(m1, m2), 1


class BinomialAlgebra(BasisAlgebra):
    """Integer-valued polynomials; basis = products of binomial coefficients."""

    name = "binomial"

    def mul(self, m1, m2):
        p = self.ring.p
        for idx, c in basis_product(m1, m2):
            if p is None or index_max(idx) < p:
                yield idx, c


POLY = MonomialAlgebra()
BINOMIAL = BinomialAlgebra()


class CommPoly:
    """Element of the coefficient algebra: sparse map basis element -> coefficient."""

    __slots__ = ("alg", "_terms")

    def __init__(self, terms: Mapping | None = None, alg: BasisAlgebra = POLY):
        red = alg.ring.reduce
        out: dict = {}
        for m, c in (terms or {}).items():
            m = m if isinstance(m, tuple) else make_index(m)
            out[m] = out.get(m, 0) + c
        self.alg = alg
        self._terms = {m: red(c) for m, c in out.items() if red(c)}

    @classmethod
    def var(cls, name: str, alg: BasisAlgebra = POLY) -> "CommPoly":
        return cls({make_index({name: 1}): 1}, alg)

    @classmethod
    def const(cls, c: int, alg: BasisAlgebra = POLY) -> "CommPoly":
        return cls({ONE: c}, alg)

    @property
    def terms(self):
        return dict(self._terms)

    def _coerce(self, other):
        if isinstance(other, int):
            return CommPoly.const(other, self.alg)
        if isinstance(other, CommPoly):
            if other.alg != self.alg:
                raise RingMismatch("different coefficient algebras")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return CommPoly(out, self.alg)

    __radd__ = __add__

    def __neg__(self):
        return CommPoly({m: -c for m, c in self._terms.items()}, self.alg)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                for m, k in self.alg.mul(m1, m2):
                    out[m] = out.get(m, 0) + c1 * c2 * k
        return CommPoly(out, self.alg)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = CommPoly.const(other, self.alg)
        return isinstance(other, CommPoly) and self.alg == other.alg and self._terms == other._terms

    def __hash__(self):
        return hash((self.alg, frozenset(self._terms.items())))

    def __repr__(self):
        return f"CommPoly({dict(sorted(self._terms.items()))})"


class TensorForm:
    """Element of T^n(A): a combination of (n+1)-tuples of basis elements."""

    __slots__ = ("alg", "degree", "_terms")

    def __init__(self, terms: Mapping | None, degree: int, alg: BasisAlgebra = POLY):
        red = alg.ring.reduce
        out: dict = {}
        for w, c in (terms or {}).items():
            if len(w) != degree + 1:
                raise CuponeError("tensor word has the wrong length")
            out[w] = out.get(w, 0) + c
        self.alg, self.degree = alg, degree
        self._terms = {w: red(c) for w, c in out.items() if red(c)}

    @classmethod
    def zero(cls, degree: int, alg: BasisAlgebra = POLY) -> "TensorForm":
        return cls({}, degree, alg)

    @property
    def terms(self):
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _same(self, other):
        if not isinstance(other, TensorForm):
            raise TypeError("expected a TensorForm")
        if self.alg != other.alg:
            raise RingMismatch("different coefficient algebras")

    def __add__(self, other):
        self._same(other)
        if other.degree != self.degree:
            if other.is_zero():
                return self
            if self.is_zero():
                return other
            raise CuponeError("cannot add forms of different degrees")
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + c
        return type(self)(out, self.degree, self.alg) if type(self) is type(other) else TensorForm(out, self.degree, self.alg)

    def __neg__(self):
        return type(self)({w: -c for w, c in self._terms.items()}, self.degree, self.alg)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        if isinstance(k, int):
            return type(self)({w: c * k for w, c in self._terms.items()}, self.degree, self.alg)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TensorForm):
            return NotImplemented
        if self.alg != other.alg:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self._terms == other._terms

    def __hash__(self):
        return hash((self.alg, self.degree, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return f"{type(self).__name__}(0, deg={self.degree})"
        parts = []
        for w, c in sorted(self._terms.items()):
            parts.append(f"{c}*" + "(x)".join(_mono_str(m) for m in w))
        return f"{type(self).__name__}({' + '.join(parts)})"

    def to_json(self) -> dict:
        return {
            "algebra": self.alg.name,
            "ring": self.alg.ring.to_json(),
            "degree": self.degree,
            "terms": [{"word": [dict(m) for m in w], "coeff": str(c)} for w, c in sorted(self._terms.items())],
        }


class OmegaForm(TensorForm):
    """A form a0 da1 ... dan stored as a0 (x) a1 (x) ... (x) an with a1..an nonconstant."""

    __slots__ = ()

    def __init__(self, terms: Mapping | None, degree: int, alg: BasisAlgebra = POLY):
        super().__init__(terms, degree, alg)
        if any(ONE in w[1:] for w in self._terms):
            raise CuponeError("Omega normal form forbids constant factors after the first")


def _mono_str(m) -> str:
    return "*".join(f"{v}^{e}" if e > 1 else v for v, e in m) or "1"


def tensor(*factors: CommPoly) -> TensorForm:
    """The form factors[0] (x) ... (x) factors[-1], expanded over the basis."""
    alg = factors[0].alg
    acc = {(): 1}
    for f in factors:
        if f.alg != alg:
            raise RingMismatch("different coefficient algebras")
        acc = {w + (m,): c * k for w, c in acc.items() for m, k in f._terms.items()}
    return TensorForm(acc, len(factors) - 1, alg)


def _prod_words(left: Sequence, right: Sequence, alg: BasisAlgebra):
    """Slot-wise expansion helper: product of two basis elements."""
    return alg.mul(left, right)


def big_d(a: TensorForm) -> TensorForm:
    out: dict = {}
    for w, c in a._terms.items():
        for i in range(len(w) + 1):
            nw = w[:i] + (ONE,) + w[i:]
            out[nw] = out.get(nw, 0) + (-c if i % 2 else c)
    return TensorForm(out, a.degree + 1, a.alg)


def t_cup(a: TensorForm, b: TensorForm) -> TensorForm:
    """Junction product: the last factor of a multiplies the first factor of b."""
    a._same(b)
    out: dict = {}
    for w1, c1 in a._terms.items():
        for w2, c2 in b._terms.items():
            for m, k in a.alg.mul(w1[-1], w2[0]):
                nw = w1[:-1] + (m,) + w2[1:]
                out[nw] = out.get(nw, 0) + c1 * c2 * k
    return TensorForm(out, a.degree + b.degree, a.alg)


def t_cup_one(a: TensorForm, b: TensorForm) -> TensorForm:
    """Battikh's cup-one product.

    For a = a_0..a_p and b = b_0..b_q the term for i in 0..p-1 has sign
    (-1)^((p-i)(q+1)) and word
    a_0..a_{i-1}, a_i b_0, b_1..b_{q-1}, b_q a_{i+1}, a_{i+2}..a_p.
    """
    a._same(b)
    p, q = a.degree, b.degree
    if p == 0 or q == 0:
        return TensorForm.zero(max(p + q - 1, 0), a.alg)
    alg = a.alg
    out: dict = {}
    for w1, c1 in a._terms.items():
        for w2, c2 in b._terms.items():
            for i in range(p):
                sign = -1 if ((p - i) * (q + 1)) % 2 else 1
                for m_left, k1 in alg.mul(w1[i], w2[0]):
                    for m_right, k2 in alg.mul(w2[q], w1[i + 1]):
                        nw = w1[:i] + (m_left,) + w2[1:q] + (m_right,) + w1[i + 2:]
                        out[nw] = out.get(nw, 0) + sign * c1 * c2 * k1 * k2
    return TensorForm(out, p + q - 1, alg)


def t_circ(a: TensorForm, b: TensorForm) -> TensorForm:
    """Slot-wise product of two degree-2 forms."""
    a._same(b)
    if a.degree != 2 or b.degree != 2:
        raise CuponeError("circ pairs two degree-2 forms")
    alg = a.alg
    out: dict = {}
    for w1, c1 in a._terms.items():
        for w2, c2 in b._terms.items():
            partial = [((), c1 * c2)]
            for s in range(3):
                partial = [(w + (m,), c * k) for w, c in partial for m, k in alg.mul(w1[s], w2[s])]
            for w, c in partial:
                out[w] = out.get(w, 0) + c
    return TensorForm(out, 2, alg)


def t_ring_mul(a: TensorForm, b: TensorForm) -> TensorForm:
    """Product of A (x) A as a commutative ring; equals cup-one on degree-1 forms."""
    if a.degree != 1 or b.degree != 1:
        raise CuponeError("the ring structure lives on degree-1 forms")
    return t_cup_one(a, b)


def project_J(a: TensorForm) -> OmegaForm:
    out = {w: c for w, c in a._terms.items() if ONE not in w[1:]}
    return OmegaForm(out, a.degree, a.alg)


def embed(w: OmegaForm) -> TensorForm:
    """Write a0 da1 ... dan inside T(A) as a0 D(a1) ... D(an)."""
    alg = w.alg
    total = TensorForm.zero(w.degree, alg)
    for word, c in w._terms.items():
        term = TensorForm({(word[0],): c}, 0, alg)
        for m in word[1:]:
            term = t_cup(term, TensorForm({(ONE, m): 1, (m, ONE): -1}, 1, alg))
        total = total + term
    return total


def omega_d(w: OmegaForm) -> OmegaForm:
    out = {(ONE,) + word: c for word, c in w._terms.items() if word[0] != ONE}
    return OmegaForm(out, w.degree + 1, w.alg)


def omega(x: CommPoly, *ys: CommPoly) -> OmegaForm:
    """The form x dy_1 ... dy_n in normal form."""
    return project_J(tensor(x, *ys))


def d_of(y: CommPoly) -> OmegaForm:
    return omega(CommPoly.const(1, y.alg), y)


def omega_cup(a: OmegaForm, b: OmegaForm) -> OmegaForm:
    return project_J(t_cup(embed(a), embed(b)))


def omega_cup_one(a: OmegaForm, b: OmegaForm) -> OmegaForm:
    return project_J(t_cup_one(embed(a), embed(b)))


def omega_scale(x: CommPoly, w: OmegaForm) -> OmegaForm:
    """Left multiplication by an element of A."""
    return project_J(t_cup(tensor(x), embed(w)))


def omega_rmul(w: OmegaForm, x: CommPoly) -> OmegaForm:
    """Right multiplication by an element of A."""
    return project_J(t_cup(embed(w), tensor(x)))


# ----------------------------------------------------------- named checks


def abbassi_counterexample() -> dict:
    """Compare u cup1 (v cup w) with the naive right Hirsch expansion in Z[a0..c1].

    u = a0 (x) a1 - a0a1 (x) 1 (that is a0 da1), v = b0 (x) b1, w = c0 (x) c1.
    """
    a0, a1, b0, b1, c0, c1 = (CommPoly.var(n) for n in ("a0", "a1", "b0", "b1", "c0", "c1"))
    one = CommPoly.const(1)
    u = tensor(a0, a1) - tensor(a0 * a1, one)
    v, w = tensor(b0, b1), tensor(c0, c1)
    lhs = t_cup_one(u, t_cup(v, w))
    first = t_cup(t_cup_one(u, v), w)
    second = t_cup(v, t_cup_one(u, w))
    difference = lhs - (first + second)
    da0, da1 = big_d(tensor(a0)), big_d(tensor(a1))
    hirsch_rhs = -first + t_cup(t_cup_one(da0, v), t_cup_one(da1, w)) - second
    du = big_d(u)
    return {
        "lhs": lhs,
        "u_cup1_v_cup_w": first,
        "v_cup_u_cup1_w": second,
        "difference": difference,
        "du_decomposition_holds": du == t_cup(da0, da1),
        "right_hirsch_balance": lhs - hirsch_rhs,
    }


def binomial_closure_check(w: OmegaForm, n: int) -> OmegaForm:
    """binom(w, n) for w in Omega^1, computed in Z + Omega^1 with the cup-one product.

    Raises DivisibilityFailure when some coefficient of w(w-1)...(w-n+1) is not
    divisible by n!, which happens when the coefficient algebra is not binomial.
    """
    if w.degree != 1:
        raise CuponeError("binomial closure applies to degree-one forms")
    if w.alg.ring.p is not None:
        raise CuponeError("binomial closure is an integral statement")
    if n < 1 or n > 4:
        raise CuponeError("implemented for 1 <= n <= 4")
    tw = embed(w)
    # elements of Z + T^1 as (scalar, form)
    acc = (0, tw)
    for j in range(1, n):
        s, f = acc
        # (s + f)(-j + tw) = -j s + (s tw - j f + f cup1 tw)
        acc = (-j * s, tw * s + f * (-j) + t_ring_mul(f, tw))
    prod = project_J(acc[1])
    nf = factorial(n)
    for word, c in sorted(prod._terms.items()):
        if c % nf:
            raise DivisibilityFailure(n, word, c)
    return OmegaForm({word: c // nf for word, c in prod._terms.items()}, 1, w.alg)


def random_poly(rng: random.Random, vars: Sequence[str], alg: BasisAlgebra = POLY, terms: int = 3, max_exp: int = 2, coeff: int = 3) -> CommPoly:
    out = {}
    for _ in range(rng.randint(1, terms)):
        mono = make_index({v: rng.randint(0, max_exp) for v in vars})
        out[mono] = out.get(mono, 0) + rng.randint(-coeff, coeff)
    return CommPoly(out, alg)


def random_tensor(rng: random.Random, degree: int, vars: Sequence[str], alg: BasisAlgebra = POLY, terms: int = 2) -> TensorForm:
    total = TensorForm.zero(degree, alg)
    for _ in range(rng.randint(1, terms)):
        factors = [random_poly(rng, vars, alg, terms=2, max_exp=1 if alg is BINOMIAL else 2) for _ in range(degree + 1)]
        total = total + tensor(*factors)
    return total


def random_omega1(rng: random.Random, vars: Sequence[str], alg: BasisAlgebra = BINOMIAL) -> OmegaForm:
    total = OmegaForm({}, 1, alg)
    for _ in range(rng.randint(1, 3)):
        total = total + omega(random_poly(rng, vars, alg, terms=2, max_exp=2), random_poly(rng, vars, alg, terms=2, max_exp=2))
    return total


def steenrod_sides(a: TensorForm, b: TensorForm) -> tuple[TensorForm, TensorForm]:
    """Both sides of D(a cup1 b) = sum of the four Steenrod terms (i = 1)."""
    n, m = a.degree, b.degree
    lhs = big_d(t_cup_one(a, b))
    rhs = (
        t_cup(a, b) * ((-1) ** (n + m - 1))
        + t_cup(b, a) * ((-1) ** (n * m + n + m))
        + t_cup_one(big_d(a), b)
        + t_cup_one(a, big_d(b)) * ((-1) ** n)
    )
    return lhs, rhs


def left_hirsch_sides(a1: TensorForm, a2: TensorForm, a3: TensorForm, sign: str = "standard") -> tuple[TensorForm, TensorForm]:
    """(a1 a2) cup1 a3 against a1 (a2 cup1 a3) + s (a1 cup1 a3) a2.

    ``sign="standard"`` uses s = (-1)^(n2 (n3 + 1)), which holds in all
    degrees; ``sign="n1"`` uses s = (-1)^(n1 (n2 + 1)), which agrees with it
    only when the two exponents have the same parity.
    """
    n1, n2, n3 = a1.degree, a2.degree, a3.degree
    if sign == "standard":
        e = n2 * (n3 + 1)
    elif sign == "n1":
        e = n1 * (n2 + 1)
    else:
        raise CuponeError(f"unknown sign convention {sign!r}")
    lhs = t_cup_one(t_cup(a1, a2), a3)
    rhs = t_cup(a1, t_cup_one(a2, a3)) + t_cup(t_cup_one(a1, a3), a2) * ((-1) ** e)
    return lhs, rhs


def cup1_omega1_sides(a0: CommPoly, a1: CommPoly, b0: CommPoly, b1: CommPoly) -> tuple[OmegaForm, OmegaForm]:
    """a0 da1 cup1 b0 db1 against its six-term expansion."""
    lhs = omega_cup_one(omega(a0, a1), omega(b0, b1))
    rhs = (
        omega(a0, a1 * b0 * b1)
        - omega(a0 * b1, a1 * b0)
        - omega(a0 * a1 * b0, b1)
        - omega(a0 * a1, b0 * b1)
        + omega(a0 * a1 * b1, b0)
        + omega(a0 * a1 * b0, b1)
    )
    return lhs, rhs


def right_hirsch_sides(a0: CommPoly, a1: CommPoly, v: TensorForm, w: TensorForm) -> tuple[TensorForm, TensorForm]:
    """u cup1 (v cup w) against -(u cup1 v) cup w + (da0 cup1 v)(da1 cup1 w) - v cup (u cup1 w), u = a0 da1."""
    one = CommPoly.const(1, a0.alg)
    u = tensor(a0, a1) - tensor(a0 * a1, one)
    da0, da1 = big_d(tensor(a0)), big_d(tensor(a1))
    lhs = t_cup_one(u, t_cup(v, w))
    rhs = -t_cup(t_cup_one(u, v), w) + t_cup(t_cup_one(da0, v), t_cup_one(da1, w)) - t_cup(v, t_cup_one(u, w))
    return lhs, rhs


def cup1_omega1_product_sides(a0: CommPoly, a1: CommPoly, b0: CommPoly, b1: CommPoly) -> tuple[OmegaForm, OmegaForm]:
    """a0 da1 cup1 b0 db1 against a0 b0 (d(a1 b1) - b1 da1 - a1 db1), the ring-product expansion."""
    lhs = omega_cup_one(omega(a0, a1), omega(b0, b1))
    rhs = omega(a0 * b0, a1 * b1) - omega(a0 * b0 * b1, a1) - omega(a0 * a1 * b0, b1)
    return lhs, rhs


def dc1_sides(a: TensorForm, b: TensorForm) -> tuple[TensorForm, TensorForm]:
    """Both sides of d(a cup1 b) = -ab - ba + da cup1 b + db cup1 a - da o db for degree-one a, b."""
    da, db = big_d(a), big_d(b)
    lhs = big_d(t_cup_one(a, b))
    rhs = -t_cup(a, b) - t_cup(b, a) + t_cup_one(da, b) + t_cup_one(db, a) - t_circ(da, db)
    return lhs, rhs
