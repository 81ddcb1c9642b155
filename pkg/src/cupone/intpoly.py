"""Integer-valued polynomials in the binomial basis.

An element of Int(Z^X) is stored as a sparse map from multi-indices to
coefficients.  A multi-index is a sorted tuple of ``(variable, exponent)``
pairs with positive exponents; the empty tuple indexes the constant 1.
The basis element for index I is the product over variables x of
binom(x, I[x]).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import DomainError, MissingVariable, NotIntegerValued, RingMismatch
from .rings import ZZ, Ring

MultiIndex = tuple  # tuple[tuple[str, int], ...]
ONE_INDEX: MultiIndex = ()


def make_index(entries: Mapping[str, int] | Iterable[tuple[str, int]] = ()) -> MultiIndex:
    """Normalize exponents into a canonical multi-index (zeros dropped)."""
    items = entries.items() if isinstance(entries, Mapping) else entries
    out = {}
    for var, e in items:
        if e < 0:
            raise ValueError(f"negative exponent for {var}")
        if e:
            out[var] = out.get(var, 0) + e
    return tuple(sorted(out.items()))


def index_total(index: MultiIndex) -> int:
    return sum(e for _, e in index)


def index_max(index: MultiIndex) -> int:
    return max((e for _, e in index), default=0)


def index_add(i: MultiIndex, j: MultiIndex) -> MultiIndex:
    return make_index(itertools.chain(i, j))


def index_splits(index: MultiIndex):
    """All ordered pairs (I1, I2) with I1 + I2 = index, both nonzero."""
    vars_ = [v for v, _ in index]
    ranges = [range(e + 1) for _, e in index]
    for parts in itertools.product(*ranges):
        left = make_index(zip(vars_, parts))
        right = make_index((v, e - k) for (v, e), k in zip(index, parts))
        if left and right:
            yield left, right


def zeta_binomial(a: int, n: int) -> int:
    """binom(a, n) for any integer a, including negative a."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    num = 1
    for j in range(n):
        num *= a - j
    return num // factorial(n)


def zeta_binomial_modp(a: int, n: int, p: int) -> int:
    if n >= p:
        raise DomainError(f"binomial operation of order {n} is undefined mod {p}")
    if n < 0:
        raise DomainError("n must be nonnegative")
    num = 1
    for j in range(n):
        num = num * (a - j) % p
    return num * pow(factorial(n), -1, p) % p


@lru_cache(maxsize=None)
def _single_var_product(m: int, n: int) -> tuple[tuple[int, int], ...]:
    """Expansion of binom(x,m)*binom(x,n) as pairs (order, coefficient)."""
    if m < n:
        m, n = n, m
    return tuple((m + k, comb(m + k, n) * comb(n, k)) for k in range(n + 1))


@lru_cache(maxsize=65536)
def basis_product(i: MultiIndex, j: MultiIndex) -> tuple[tuple[MultiIndex, int], ...]:
    """Product of two basis elements over Z as (index, coefficient) pairs."""
    di, dj = dict(i), dict(j)
    factors = []
    for var in sorted(set(di) | set(dj)):
        a, b = di.get(var, 0), dj.get(var, 0)
        if a and b:
            factors.append([((var, k), c) for k, c in _single_var_product(a, b)])
        else:
            factors.append([((var, a + b), 1)])
    out = []
    for combo in itertools.product(*factors):
        coeff = 1
        for _, c in combo:
            coeff *= c
        out.append((tuple(entry for entry, _ in combo), coeff))
    return tuple(out)


class ZetaPoly:
    """Immutable element of Int(Z^X) or of its mod-p quotient."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, terms: Mapping[MultiIndex, int] | None = None, ring: Ring = ZZ):
        self.ring = ring
        clean = {}
        for idx, c in (terms or {}).items():
            c = ring.reduce(c)
            if ring.p is not None and index_max(idx) >= ring.p:
                if c:
                    raise DomainError(f"index {idx} not allowed mod {ring.p}")
                continue
            if c:
                clean[idx] = c
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def _raw(cls, terms: dict, ring: Ring) -> "ZetaPoly":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def basis(cls, index: MultiIndex | Mapping[str, int], coeff: int = 1, ring: Ring = ZZ) -> "ZetaPoly":
        idx = index if isinstance(index, tuple) else make_index(index)
        return cls({idx: coeff}, ring)

    @classmethod
    def zeta(cls, var: str, n: int = 1, ring: Ring = ZZ) -> "ZetaPoly":
        return cls.basis(make_index({var: n}), 1, ring)

    @classmethod
    def const(cls, c: int, ring: Ring = ZZ) -> "ZetaPoly":
        return cls({ONE_INDEX: c}, ring)

    @property
    def terms(self) -> Mapping[MultiIndex, int]:
        return MappingProxyType(self._terms)

    def variables(self) -> set[str]:
        return {v for idx in self._terms for v, _ in idx}

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> int:
        return self._terms.get(ONE_INDEX, 0)

    def _check(self, other: "ZetaPoly"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _coerce(self, other):
        if isinstance(other, int):
            return ZetaPoly.const(other, self.ring)
        if isinstance(other, ZetaPoly):
            self._check(other)
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        red = self.ring.reduce
        for idx, c in other._terms.items():
            v = red(out.get(idx, 0) + c)
            if v:
                out[idx] = v
            else:
                out.pop(idx, None)
        return ZetaPoly._raw(out, self.ring)

    __radd__ = __add__

    def __neg__(self):
        red = self.ring.reduce
        return ZetaPoly._raw({i: red(-c) for i, c in self._terms.items()}, self.ring)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k: int) -> "ZetaPoly":
        return ZetaPoly({i: c * k for i, c in self._terms.items()}, self.ring)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, ZetaPoly):
            return poly_mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int):
            other = ZetaPoly.const(other, self.ring)
        if not isinstance(other, ZetaPoly):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def sorted_terms(self):
        return sorted(self._terms.items())

    def __repr__(self):
        if not self._terms:
            return f"ZetaPoly(0, {self.ring})"
        parts = []
        for idx, c in self.sorted_terms():
            name = "*".join(f"z{e}({v})" for v, e in idx) or "1"
            parts.append(f"{c}*{name}")
        return f"ZetaPoly({' + '.join(parts)}, {self.ring})"

    # serialization
    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "terms": [{"index": dict(idx), "coeff": str(c)} for idx, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "ZetaPoly":
        ring = Ring.from_json(obj["ring"])
        terms: dict = {}
        for t in obj["terms"]:
            idx = make_index({k: int(v) for k, v in t["index"].items()})
            terms[idx] = terms.get(idx, 0) + int(t["coeff"])
        return cls(terms, ring)


def poly_mul(f: ZetaPoly, g: ZetaPoly) -> ZetaPoly:
    """Product in the binomial basis, via the single-variable rewrite rule."""
    f._check(g)
    ring = f.ring
    p = ring.p
    out: dict = {}
    for i, a in f._terms.items():
        for j, b in g._terms.items():
            ab = a * b
            for idx, c in basis_product(i, j):
                if p is not None and index_max(idx) >= p:
                    continue
                out[idx] = out.get(idx, 0) + ab * c
    return ZetaPoly(out, ring)


def zeta_apply(f: ZetaPoly, n: int) -> ZetaPoly:
    """binom(f, n) in the binomial basis.

    Computed as the falling-factorial product f(f-1)...(f-n+1) followed by an
    exact division by n!; over Z_p the division is multiplication by the
    inverse of n!, which is only available for n <= p-1.
    """
    ring = f.ring
    if n < 0:
        raise DomainError("n must be nonnegative")
    if ring.p is not None and n >= ring.p:
        raise DomainError(f"binomial operation of order {n} is undefined mod {ring.p}")
    if n == 0:
        return ZetaPoly.const(1, ring)
    prod = f
    for j in range(1, n):
        prod = poly_mul(prod, f - j)
    nf = factorial(n)
    if ring.p is not None:
        return prod.scale(pow(nf, -1, ring.p))
    terms = {}
    for idx, c in prod._terms.items():
        q, r = divmod(c, nf)
        if r:
            raise ArithmeticError("falling factorial not divisible by n!; basis arithmetic is broken")
        terms[idx] = q
    return ZetaPoly(terms, ring)


def evaluate(f: ZetaPoly, assignment: Mapping[str, int]) -> int:
    p = f.ring.p
    total = 0
    for idx, c in f._terms.items():
        term = c
        for var, e in idx:
            if var not in assignment:
                raise MissingVariable(var)
            a = assignment[var]
            term *= zeta_binomial(a, e) if p is None else zeta_binomial_modp(a, e, p)
        total += term
    return f.ring.reduce(total)


def reduce_mod_p(f: ZetaPoly, p: int) -> ZetaPoly:
    if f.ring.p is not None:
        raise RingMismatch("reduce_mod_p expects an integral polynomial")
    ring = Ring(p)
    return ZetaPoly({i: c for i, c in f._terms.items() if index_max(i) < p}, ring)


class RationalPoly:
    """Polynomial with rational coefficients in ordinary monomials.

    Terms map a monomial (sorted ``(variable, exponent)`` tuple, same shape as a
    multi-index) to a ``Fraction``.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[MultiIndex, Fraction | int] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            mono = mono if isinstance(mono, tuple) else make_index(mono)
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
        self._terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def var(cls, name: str) -> "RationalPoly":
        return cls({make_index({name: 1}): 1})

    @classmethod
    def const(cls, c) -> "RationalPoly":
        return cls({ONE_INDEX: c})

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def variables(self) -> list[str]:
        return sorted({v for m in self._terms for v, _ in m})

    def degree_in(self, var: str) -> int:
        return max((dict(m).get(var, 0) for m in self._terms), default=0)

    def __add__(self, other):
        if not isinstance(other, RationalPoly):
            other = RationalPoly.const(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return RationalPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, RationalPoly):
            other = RationalPoly.const(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, RationalPoly):
            return RationalPoly({m: c * Fraction(other) for m, c in self._terms.items()})
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = index_add(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return RationalPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, RationalPoly) and self._terms == other._terms

    def __repr__(self):
        return f"RationalPoly({dict(sorted(self._terms.items()))})"

    def evaluate(self, assignment: Mapping[str, int]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            term = c
            for var, e in m:
                term *= assignment[var] ** e
            total += term
        return total


@lru_cache(maxsize=None)
def _falling_factorial_poly(var: str, n: int) -> RationalPoly:
    out = RationalPoly.const(Fraction(1, factorial(n)))
    x = RationalPoly.var(var)
    for j in range(n):
        out = out * (x - j)
    return out


def zeta_to_rational(f: ZetaPoly) -> RationalPoly:
    """Expand an integral binomial-basis element into ordinary monomials."""
    if f.ring.p is not None:
        raise RingMismatch("rational expansion needs an integral polynomial")
    total = RationalPoly()
    for idx, c in f._terms.items():
        term = RationalPoly.const(c)
        for var, e in idx:
            term = term * _falling_factorial_poly(var, e)
        total = total + term
    return total


def polya_to_zeta(q: RationalPoly) -> ZetaPoly:
    """Binomial-basis expansion of an integer-valued rational polynomial.

    Values on the grid prod_x {0..deg_x q} determine q; forward differences of
    those values give the coefficients, one variable at a time.  The grid
    values are all integers iff q is integer valued, so the first non-integral
    grid value is returned as the witness.
    """
    vars_ = q.variables()
    degs = [q.degree_in(v) for v in vars_]
    grid = {}
    for point in itertools.product(*(range(d + 1) for d in degs)):
        val = q.evaluate(dict(zip(vars_, point)))
        if val.denominator != 1:
            raise NotIntegerValued(dict(zip(vars_, point)))
        grid[point] = int(val)
    for axis, d in enumerate(degs):
        new = {}
        for point in grid:
            if point[axis] != 0:
                continue
            column = [grid[point[:axis] + (k,) + point[axis + 1:]] for k in range(d + 1)]
            coeffs: list[int] = []
            for k in range(d + 1):
                coeffs.append(column[k] - sum(coeffs[i] * comb(k, i) for i in range(k)))
            for k, c in enumerate(coeffs):
                new[point[:axis] + (k,) + point[axis + 1:]] = c
        grid = new
    return ZetaPoly({make_index(zip(vars_, point)): c for point, c in grid.items()}, ZZ)
