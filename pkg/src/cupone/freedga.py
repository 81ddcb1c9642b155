"""The free binomial cup-one algebra on a set of variables.

Degree n elements are combinations of words (I_1, ..., I_n) of nonzero
multi-indices, standing for the tensor of binomial basis elements.  Degree 0
is the coefficient ring, stored as the empty word.
"""

from __future__ import annotations

from typing import Callable, Mapping, Sequence

from .cochain import Cochain, coboundary, cup as c_cup, cup_one as c_cup_one, circ as c_circ, zeta_multi
from .delta import DeltaSet
from .errors import CuponeError, DomainError, RingMismatch, UnsupportedBidegree
from .intpoly import (
    ONE_INDEX,
    ZetaPoly,
    basis_product,
    index_max,
    index_splits,
    make_index,
    zeta_apply,
    zeta_binomial,
    zeta_binomial_modp,
)
from .rings import ZZ, Ring

Word = tuple  # tuple of multi-indices


class TensorElement:
    """Homogeneous element of the free binomial algebra."""

    __slots__ = ("ring", "degree", "_terms")

    def __init__(self, terms: Mapping[Word, int] | None = None, degree: int | None = None, ring: Ring = ZZ):
        clean: dict = {}
        for word, c in (terms or {}).items():
            word = tuple(w if isinstance(w, tuple) else make_index(w) for w in word)
            if any(not w for w in word):
                raise CuponeError("tensor slots must be nonconstant basis elements")
            if ring.p is not None and any(index_max(w) >= ring.p for w in word):
                raise DomainError(f"slot index not allowed mod {ring.p}")
            if degree is None:
                degree = len(word)
            elif len(word) != degree:
                raise CuponeError("tensor element must be homogeneous")
            c = ring.reduce(c)
            if c:
                clean[word] = ring.reduce(clean.get(word, 0) + c)
        self.ring = ring
        self.degree = 0 if degree is None else degree
        self._terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def _raw(cls, terms: dict, degree: int, ring: Ring) -> "TensorElement":
        obj = cls.__new__(cls)
        obj.ring, obj.degree = ring, degree
        red = ring.reduce
        obj._terms = {w: red(c) for w, c in terms.items() if red(c)}
        return obj

    @classmethod
    def zero(cls, degree: int, ring: Ring = ZZ) -> "TensorElement":
        return cls._raw({}, degree, ring)

    @classmethod
    def scalar(cls, c: int, ring: Ring = ZZ) -> "TensorElement":
        return cls._raw({(): c}, 0, ring)

    @classmethod
    def generator(cls, var: str, n: int = 1, ring: Ring = ZZ) -> "TensorElement":
        """The degree-1 basis element binom(var, n)."""
        return cls({(make_index({var: n}),): 1}, 1, ring)

    @classmethod
    def basis(cls, index, ring: Ring = ZZ) -> "TensorElement":
        idx = index if isinstance(index, tuple) else make_index(index)
        return cls({(idx,): 1}, 1, ring)

    @classmethod
    def from_poly(cls, f: ZetaPoly) -> "TensorElement":
        if f.constant_term():
            raise CuponeError("degree-one elements have no constant term")
        return cls._raw({(idx,): c for idx, c in f.terms.items()}, 1, f.ring)

    def to_poly(self) -> ZetaPoly:
        if self.degree != 1:
            raise CuponeError("only degree-one elements are polynomials")
        return ZetaPoly({w[0]: c for w, c in self._terms.items()}, self.ring)

    @property
    def terms(self):
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _same(self, other):
        if not isinstance(other, TensorElement):
            raise TypeError("expected a TensorElement")
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._same(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.degree != self.degree:
            raise CuponeError("cannot add elements of different degrees")
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + c
        return TensorElement._raw(out, self.degree, self.ring)

    def __neg__(self):
        return TensorElement._raw({w: -c for w, c in self._terms.items()}, self.degree, self.ring)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int) -> "TensorElement":
        return TensorElement._raw({w: c * k for w, c in self._terms.items()}, self.degree, self.ring)

    def __mul__(self, k):
        if isinstance(k, int):
            return self.scale(k)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        if self.ring != other.ring:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self._terms == other._terms

    def __hash__(self):
        return hash((self.ring, self.degree, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return f"TensorElement(0, deg={self.degree}, {self.ring})"
        parts = []
        for w, c in sorted(self._terms.items()):
            slots = "(x)".join("*".join(f"z{e}({v})" for v, e in idx) for idx in w) or "1"
            parts.append(f"{c}*{slots}")
        return f"TensorElement({' + '.join(parts)}, {self.ring})"

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "degree": self.degree,
            "terms": [{"word": [dict(i) for i in w], "coeff": str(c)} for w, c in sorted(self._terms.items())],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "TensorElement":
        ring = Ring.from_json(obj["ring"])
        terms: dict = {}
        for t in obj["terms"]:
            w = tuple(make_index({k: int(v) for k, v in slot.items()}) for slot in t["word"])
            terms[w] = terms.get(w, 0) + int(t["coeff"])
        return cls(terms, int(obj["degree"]), ring)


# ------------------------------------------------------------ slot algebra


def _slot_product(i, j, ring: Ring):
    p = ring.p
    for idx, c in basis_product(i, j):
        if p is None or index_max(idx) < p:
            yield idx, c


def cup(a: TensorElement, b: TensorElement) -> TensorElement:
    a._same(b)
    out: dict = {}
    for w1, c1 in a._terms.items():
        for w2, c2 in b._terms.items():
            w = w1 + w2
            out[w] = out.get(w, 0) + c1 * c2
    return TensorElement._raw(out, a.degree + b.degree, a.ring)


def _slotwise(a: TensorElement, b: TensorElement, positions: Sequence[tuple[int, int]], degree: int) -> TensorElement:
    """Multiply slot ``i`` of a word of ``a`` into slot ``j`` of a word of ``b``.

    ``positions`` lists pairs (i, j): the result word is ``a``'s word with
    each listed slot i replaced by slot_i(a) * slot_j(b).
    """
    out: dict = {}
    ring = a.ring
    for w1, c1 in a._terms.items():
        for w2, c2 in b._terms.items():
            partial = [(list(w1), c1 * c2)]
            for i, j in positions:
                new = []
                for word, c in partial:
                    for idx, k in _slot_product(word[i], w2[j], ring):
                        nw = list(word)
                        nw[i] = idx
                        new.append((nw, c * k))
                partial = new
            for word, c in partial:
                t = tuple(word)
                out[t] = out.get(t, 0) + c
    return TensorElement._raw(out, degree, ring)


def cup_one(a: TensorElement, b: TensorElement) -> TensorElement:
    """Cup-one in bidegrees (1,1), (2,1) and (1,2); zero when either degree is 0."""
    a._same(b)
    p, q = a.degree, b.degree
    if p == 0 or q == 0:
        return TensorElement.zero(max(p + q - 1, 0), a.ring)
    if (p, q) == (1, 1):
        return _slotwise(a, b, [(0, 0)], 1)
    if (p, q) == (2, 1):
        return _slotwise(a, b, [(0, 0)], 2) + _slotwise(a, b, [(1, 0)], 2)
    if (p, q) == (1, 2):
        # right Hirsch formula: a cup1 beta = d(a) o beta - beta cup1 a
        return circ(d_T(a), b) - cup_one(b, a)
    raise UnsupportedBidegree(f"cup-one in bidegree ({p},{q}) is not defined here")


def circ(a: TensorElement, b: TensorElement) -> TensorElement:
    a._same(b)
    if a.degree != 2 or b.degree != 2:
        raise UnsupportedBidegree("circ pairs two degree-2 elements")
    return _slotwise(a, b, [(0, 0), (1, 1)], 2)


def d_basis(index, ring: Ring = ZZ) -> TensorElement:
    """Differential of a basis element: minus the sum over splits I = I1 + I2."""
    return TensorElement._raw({(i1, i2): -1 for i1, i2 in index_splits(index)}, 2, ring)


def d_T(a: TensorElement) -> TensorElement:
    if a.degree > 2:
        raise UnsupportedBidegree("the differential is implemented up to degree 2")
    out: dict = {}
    for w, c in a._terms.items():
        for pos, idx in enumerate(w):
            sign = -c if pos % 2 else c
            for i1, i2 in index_splits(idx):
                nw = w[:pos] + (i1, i2) + w[pos + 1:]
                out[nw] = out.get(nw, 0) - sign
    return TensorElement._raw(out, a.degree + 1, a.ring)


def mod_p(a: TensorElement, p: int) -> TensorElement:
    if a.ring.p is not None:
        raise RingMismatch("mod_p expects an integral element")
    out = {w: c for w, c in a._terms.items() if all(index_max(i) < p for i in w)}
    return TensorElement._raw(out, a.degree, Ring(p))


def zeta_T(a: TensorElement, n: int) -> TensorElement:
    """binom(a, n) for a degree-one element (constant term stays zero for n >= 1)."""
    if n == 0:
        raise CuponeError("binom(a, 0) = 1 lives in degree 0")
    return TensorElement.from_poly(zeta_apply(a.to_poly(), n))


# ---------------------------------------------------------------- targets


class DgaTarget:
    """Operations a binomial cup-one algebra must supply to receive maps."""

    identities: tuple[str, ...] = ()
    ring: Ring = ZZ

    def scalar(self, c: int):
        raise NotImplementedError

    def cup(self, x, y):
        raise NotImplementedError

    def cup_one(self, x, y):
        raise NotImplementedError

    def circ(self, x, y):
        raise NotImplementedError

    def d(self, x):
        raise NotImplementedError

    def zeta(self, x, n: int):
        raise NotImplementedError

    def zero(self, degree: int):
        raise NotImplementedError


class CochainTarget(DgaTarget):
    identities = ("steenrod", "left-hirsch", "right-hirsch", "cup1-d", "binomial")

    def __init__(self, ds: DeltaSet, ring: Ring = ZZ):
        self.ds, self.ring = ds, ring

    def scalar(self, c):
        return Cochain.unit(self.ds, self.ring) * c

    def zero(self, degree):
        return Cochain.zero(self.ds, degree, self.ring)

    def cup(self, x, y):
        return c_cup(x, y)

    def cup_one(self, x, y):
        return c_cup_one(x, y)

    def circ(self, x, y):
        return c_circ(x, y)

    def d(self, x):
        return coboundary(x)

    def zeta(self, x, n):
        return zeta_multi([x], [n])


class FreeTarget(DgaTarget):
    identities = ("steenrod", "left-hirsch", "right-hirsch", "cup1-d", "binomial")

    def __init__(self, ring: Ring = ZZ):
        self.ring = ring

    def scalar(self, c):
        return TensorElement.scalar(c, self.ring)

    def zero(self, degree):
        return TensorElement.zero(degree, self.ring)

    def cup(self, x, y):
        return cup(x, y)

    def cup_one(self, x, y):
        return cup_one(x, y)

    def circ(self, x, y):
        return circ(x, y)

    def d(self, x):
        return d_T(x)

    def zeta(self, x, n):
        return zeta_T(x, n)


class Morphism:
    """Lazy extension of a set map on variables to the whole free algebra."""

    def __init__(self, images: Mapping[str, object], target: DgaTarget):
        self.images = dict(images)
        self.target = target
        self._basis_cache: dict = {}

    def basis_image(self, index):
        hit = self._basis_cache.get(index)
        if hit is None:
            factors = []
            for var, e in index:
                if var not in self.images:
                    raise CuponeError(f"no image for variable {var}")
                factors.append(self.target.zeta(self.images[var], e))
            hit = factors[0]
            for f in factors[1:]:
                hit = self.target.cup_one(hit, f)
            self._basis_cache[index] = hit
        return hit

    def __call__(self, a: TensorElement):
        total = self.target.zero(a.degree) if a.degree else self.target.scalar(0)
        for w, c in a._terms.items():
            if not w:
                img = self.target.scalar(c)
            else:
                img = self.basis_image(w[0])
                for idx in w[1:]:
                    img = self.target.cup(img, self.basis_image(idx))
                img = img * c
            total = total + img
        return total

    def restrict(self) -> dict:
        return {v: self(TensorElement.generator(v, 1, _source_ring(self.target))) for v in self.images}


def _source_ring(target: DgaTarget) -> Ring:
    return ZZ if target.ring.p is None else target.ring


def extend_map(images: Mapping[str, object], target: DgaTarget) -> Morphism:
    return Morphism(images, target)


# ---------------------------------------------------- evaluation into cochains


def evaluate_on_test_complex(a: TensorElement, ds: DeltaSet) -> Cochain:
    """Push an element of degree <= 3 to the cochains of a binomial test complex.

    A word (I_1, ..., I_n) goes to the cochain whose value on the simplex
    (f_1, ..., f_n) is the product of binom-evaluations of I_k at f_k.
    """
    vars_ = ds.meta.get("vars")
    if vars_ is None:
        raise CuponeError("complex carries no function data; build it with build_binomial_test_complex")
    ring = a.ring
    p = ring.p

    def ev(index, f):
        val = 1
        for var, e in index:
            x = f[vars_.index(var)]
            val *= zeta_binomial(x, e) if p is None else zeta_binomial_modp(x, e, p)
        return val

    n = a.degree
    if n == 0:
        return Cochain.unit(ds, ring) * a._terms.get((), 0)
    edges = ds.meta["edge_functions"]
    simplices: list
    if n == 1:
        simplices = [(f,) for f in edges]
    elif n == 2:
        simplices = list(ds.meta["triangle_pairs"])
    elif n == 3:
        # tetrahedron (f, g, h): front edge f, middle g, back h
        simplices = []
        for s in range(ds.count(3)):
            simplices.append(tuple(edges[ds.subface(3, s, (k, k + 1))] for k in range(3)))
    else:
        raise UnsupportedBidegree("degree above 3")
    vals = []
    for fs in simplices:
        total = 0
        for w, c in a._terms.items():
            term = c
            for idx, f in zip(w, fs):
                term *= ev(idx, f)
            total += term
        vals.append(total)
    return Cochain(ds, n, vals, ring)
