"""Delta-sets (semi-simplicial sets) of dimension at most 3, with builders."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Mapping, Sequence

from .errors import ValidationError

MAX_DIM = 3


@dataclass(frozen=True)
class ChainMatrix:
    """Integer matrix with rows and columns labelled by simplices."""

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def transpose(self) -> "ChainMatrix":
        ent = tuple(zip(*self.entries)) if self.entries else tuple(() for _ in self.cols)
        return ChainMatrix(self.cols, self.rows, tuple(tuple(r) for r in ent))

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)


class DeltaSet:
    """A validated Delta-set.

    ``labels[n]`` names the n-simplices; ``faces[n][s]`` is the tuple
    ``(d_0 s, ..., d_n s)`` of indices into dimension n-1.  Optional
    ``generators`` metadata maps a loop name to a signed edge chain, and
    ``meta`` carries builder-specific data (e.g. the function attached to
    each edge of a binomial test complex).
    """

    def __init__(
        self,
        labels: Sequence[Sequence[str]],
        faces: Sequence[Sequence[Sequence[int]]],
        name: str = "delta",
        generators: Mapping[str, Sequence[tuple[int, int]]] | None = None,
        meta: Mapping | None = None,
    ):
        labels = [tuple(map(str, ls)) for ls in labels]
        faces = [tuple(tuple(f) for f in fs) for fs in faces]
        while len(labels) < MAX_DIM + 1:
            labels.append(())
        while len(faces) < MAX_DIM + 1:
            faces.append(())
        if len(labels) > MAX_DIM + 1:
            raise ValidationError(f"dimension above {MAX_DIM} is not supported")
        if not faces[0]:
            faces[0] = tuple(() for _ in labels[0])
        self.labels = tuple(labels)
        self.faces = tuple(faces)
        self.name = name
        self.generators = MappingProxyType({k: tuple(map(tuple, v)) for k, v in (generators or {}).items()})
        self.meta = MappingProxyType(dict(meta or {}))
        self._subface_cache: dict = {}
        validate(self)

    @property
    def dim(self) -> int:
        return max((n for n in range(MAX_DIM + 1) if self.labels[n]), default=0)

    def count(self, n: int) -> int:
        return len(self.labels[n]) if 0 <= n <= MAX_DIM else 0

    def counts(self) -> tuple[int, ...]:
        return tuple(len(ls) for ls in self.labels)

    def total(self) -> int:
        return sum(self.counts())

    def face(self, n: int, s: int, i: int) -> int:
        return self.faces[n][s][i]

    def index(self, n: int, label: str) -> int:
        return self._label_index[n][label]

    @cached_property
    def _label_index(self):
        return tuple({lab: i for i, lab in enumerate(ls)} for ls in self.labels)

    def subface(self, n: int, s: int, kept: tuple[int, ...]) -> int:
        """Index of the face of n-simplex s spanned by the sorted vertex positions ``kept``."""
        key = (n, s, kept)
        hit = self._subface_cache.get(key)
        if hit is not None:
            return hit
        cur, dim = s, n
        for t in reversed(range(n + 1)):
            if t not in kept:
                cur = self.faces[dim][cur][t]
                dim -= 1
        self._subface_cache[key] = cur
        return cur

    def vertex(self, n: int, s: int, k: int) -> int:
        return self.subface(n, s, (k,))

    def boundary_matrix(self, n: int) -> ChainMatrix:
        rows, cols = self.labels[n - 1], self.labels[n]
        ent = [[0] * len(cols) for _ in rows]
        for j, fs in enumerate(self.faces[n]):
            for i, f in enumerate(fs):
                ent[f][j] += -1 if i % 2 else 1
        return ChainMatrix(rows, cols, tuple(tuple(r) for r in ent))

    def coboundary_matrix(self, n: int) -> list[list[int]]:
        """Matrix of delta: C^n -> C^{n+1} (rows (n+1)-simplices); empty rows above dim 3."""
        if n + 1 > MAX_DIM:
            return []
        return self.boundary_matrix(n + 1).transpose().as_lists()

    # serialization
    def to_json_obj(self) -> dict:
        obj: dict = {"dim": self.dim, "simplices": {"0": list(self.labels[0])}}
        for n in range(1, self.dim + 1):
            obj["simplices"][str(n)] = [
                {"id": lab, "faces": [self.labels[n - 1][f] for f in fs]}
                for lab, fs in zip(self.labels[n], self.faces[n])
            ]
        if self.generators:
            obj["generators"] = {
                g: [[self.labels[1][e], c] for e, c in chain] for g, chain in sorted(self.generators.items())
            }
        if self.name != "delta":
            obj["name"] = self.name
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "DeltaSet":
        try:
            simp = obj["simplices"]
            labels = [list(map(str, simp.get("0", [])))]
            faces: list = [[]]
            top = int(obj.get("dim", max(int(k) for k in simp)))
            if top > MAX_DIM:
                raise ValidationError(f"dimension above {MAX_DIM} is not supported")
            for n in range(1, top + 1):
                idx = {lab: i for i, lab in enumerate(labels[n - 1])}
                labs, fcs = [], []
                for item in simp.get(str(n), []):
                    labs.append(str(item["id"]))
                    if len(item["faces"]) != n + 1:
                        raise ValidationError(f"simplex {item['id']} needs {n + 1} faces")
                    try:
                        fcs.append([idx[str(f)] for f in item["faces"]])
                    except KeyError as exc:
                        raise ValidationError(f"simplex {item['id']} references unknown face {exc}") from None
                labels.append(labs)
                faces.append(fcs)
            gens = {}
            for g, chain in obj.get("generators", {}).items():
                eidx = {lab: i for i, lab in enumerate(labels[1])}
                gens[g] = [(eidx[str(e)], int(c)) for e, c in chain]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed Delta-set JSON: {exc}") from None
        return cls(labels, faces, name=str(obj.get("name", "delta")), generators=gens)

    @classmethod
    def from_json(cls, text: str) -> "DeltaSet":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from None
        return cls.from_json_obj(obj)

    def __repr__(self):
        return f"DeltaSet({self.name!r}, counts={self.counts()})"


def validate(ds: DeltaSet) -> None:
    """Raise ValidationError unless every face exists and d_i d_j = d_{j-1} d_i for i < j."""
    for n in range(1, MAX_DIM + 1):
        if len(ds.faces[n]) != len(ds.labels[n]):
            raise ValidationError(f"dimension {n}: {len(ds.labels[n])} labels but {len(ds.faces[n])} face lists")
        if ds.labels[n] and not ds.labels[n - 1]:
            raise ValidationError(f"dimension {n} is nonempty but dimension {n - 1} is empty")
        for s, fs in enumerate(ds.faces[n]):
            lab = ds.labels[n][s]
            if len(fs) != n + 1:
                raise ValidationError(f"simplex {lab} has {len(fs)} faces, expected {n + 1}")
            for f in fs:
                if not 0 <= f < len(ds.labels[n - 1]):
                    raise ValidationError(f"simplex {lab} references missing {n - 1}-simplex {f}")
    for labs in ds.labels:
        if len(set(labs)) != len(labs):
            raise ValidationError("duplicate simplex labels")
    for n in range(2, MAX_DIM + 1):
        for s, fs in enumerate(ds.faces[n]):
            for i in range(n + 1):
                for j in range(i + 1, n + 1):
                    if ds.faces[n - 1][fs[j]][i] != ds.faces[n - 1][fs[i]][j - 1]:
                        raise ValidationError(
                            f"simplex {ds.labels[n][s]} violates d_{i} d_{j} = d_{j - 1} d_{i} (pair ({i},{j}))"
                        )
    for g, chain in ds.generators.items():
        for e, _ in chain:
            if not 0 <= e < ds.count(1):
                raise ValidationError(f"generator {g} references missing edge {e}")


# ---------------------------------------------------------------- builders


def build_standard_simplex(n: int) -> DeltaSet:
    if not 0 <= n <= MAX_DIM:
        raise ValueError("dimension out of range")
    labels, faces = [], []
    subsets = []
    for k in range(n + 1):
        subs = list(itertools.combinations(range(n + 1), k + 1))
        subsets.append({s: i for i, s in enumerate(subs)})
        labels.append(["[" + ",".join(map(str, s)) + "]" for s in subs])
        if k == 0:
            faces.append([])
        else:
            faces.append([[subsets[k - 1][s[:i] + s[i + 1:]] for i in range(k + 1)] for s in subs])
    return DeltaSet(labels, faces, name=f"simplex{n}")


def build_interval() -> DeltaSet:
    return DeltaSet([["t0", "t1"], ["u"]], [[], [[1, 0]]], name="interval")


def build_circle() -> DeltaSet:
    return DeltaSet([["v"], ["x"]], [[], [[0, 0]]], name="circle", generators={"x": [(0, 1)]})


def build_torus() -> DeltaSet:
    """Square with corners identified: edges x1 (vertical), x2 (horizontal), diag.

    Corner ordering as in the usual picture: top-left 1, bottom-left 2,
    top-right 3, bottom-right 4, with the diagonal running from 2 to 3.  The
    triangles are [1,2,3] and [2,3,4].
    """
    edges = ["x1", "x2", "diag"]
    x1, x2, dg = 0, 1, 2
    return DeltaSet(
        [["v"], edges, ["T1", "T2"]],
        [[], [[0, 0]] * 3, [[dg, x2, x1], [x1, x2, dg]]],
        name="torus",
        generators={"x1": [(x1, 1)], "x2": [(x2, 1)]},
    )


def cone_polygon(word: Sequence[tuple[str, int]], name: str) -> DeltaSet:
    """Presentation 2-complex for a one-relator word, triangulated as a cone.

    Each generator loop is split at a midpoint into two edges; the polygon
    whose boundary reads ``word`` is coned off from a centre vertex, with one
    radial edge per boundary point (corners and side midpoints).
    """
    gens = sorted({g for g, _ in word})
    vlabels = ["v"] + [f"m_{g}" for g in gens] + ["c"]
    vid = {lab: i for i, lab in enumerate(vlabels)}
    centre = vid["c"]
    elabels, efaces = [], []
    half = {}
    for g in gens:
        half[g] = (len(elabels), len(elabels) + 1)
        elabels += [f"{g}_a", f"{g}_b"]
        efaces += [[vid[f"m_{g}"], vid["v"]], [vid["v"], vid[f"m_{g}"]]]
    # boundary points and segments in traversal order
    points, segments = [], []
    for g, sgn in word:
        a, b = half[g]
        points += [vid["v"], vid[f"m_{g}"]]
        segments += [(a, True), (b, True)] if sgn > 0 else [(b, False), (a, False)]
    radial = []
    for j, pt in enumerate(points):
        radial.append(len(elabels))
        elabels.append(f"r{j}")
        efaces.append([pt, centre])
    tlabels, tfaces = [], []
    npts = len(points)
    for j, (e, forward) in enumerate(segments):
        p_from, p_to = j, (j + 1) % npts
        src, tgt = (p_from, p_to) if forward else (p_to, p_from)
        tlabels.append(f"t{j}")
        tfaces.append([e, radial[tgt], radial[src]])
    generators = {g: [(half[g][0], 1), (half[g][1], 1)] for g in gens}
    return DeltaSet([vlabels, elabels, tlabels], [[], efaces, tfaces], name=name, generators=generators)


def build_sphere_attach(p: int) -> DeltaSet:
    """A 2-cell attached to a circle by a map of degree p."""
    if p < 1:
        raise ValueError("p must be positive")
    return cone_polygon([("x", 1)] * p, name=f"attach{p}")


def xk_relator(k: int) -> list[tuple[str, int]]:
    """The word [x2,x3][x1, x2 x1^k x2^-1] with [a,b] = a b a^-1 b^-1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    conj = [("x2", 1)] + [("x1", 1)] * k + [("x2", -1)]
    conj_inv = [("x2", 1)] + [("x1", -1)] * k + [("x2", -1)]
    return [("x2", 1), ("x3", 1), ("x2", -1), ("x3", -1), ("x1", 1)] + conj + [("x1", -1)] + conj_inv


def build_presentation_xk(k: int) -> DeltaSet:
    return cone_polygon(xk_relator(k), name=f"X{k}")


def _fmt_vec(a: tuple[int, ...]) -> str:
    return "(" + ",".join(map(str, a)) + ")"


def build_binomial_test_complex(
    vars: Sequence[str], functions: Sequence[Sequence[int]], depth: int = 2
) -> DeltaSet:
    """Finite piece of the nerve of the group Z^vars.

    One vertex; an edge per function a (a vector indexed by ``vars``); a
    triangle (a, a') with faces (a', a + a', a) per ordered pair of listed
    functions.  With ``depth=3`` the triangles needed by the tetrahedra
    (a, a', a'') of listed functions are added too.
    """
    if depth not in (1, 2, 3):
        raise ValueError("depth must be 1, 2 or 3")
    nv = len(vars)
    funcs = []
    for f in functions:
        f = tuple(int(c) for c in f)
        if len(f) != nv:
            raise ValueError("function length does not match variables")
        if f not in funcs:
            funcs.append(f)

    def add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    tets = list(itertools.product(funcs, repeat=3)) if depth >= 3 else []
    tris: list = []
    if depth >= 2:
        tris = list(itertools.product(funcs, repeat=2))
        for a, b, c in tets:
            tris += [(add(a, b), c), (a, add(b, c))]
    tris = list(dict.fromkeys(tris))
    edges = list(funcs)
    for a, b in tris:
        edges += [a, b, add(a, b)]
    edges = list(dict.fromkeys(edges))
    eid = {e: i for i, e in enumerate(edges)}
    tid = {t: i for i, t in enumerate(tris)}
    faces = [[], [[0, 0] for _ in edges], [[eid[b], eid[add(a, b)], eid[a]] for a, b in tris]]
    labels = [["*"], [_fmt_vec(e) for e in edges], [_fmt_vec(a) + _fmt_vec(b) for a, b in tris]]
    if tets:
        faces.append([[tid[(b, c)], tid[(add(a, b), c)], tid[(a, add(b, c))], tid[(a, b)]] for a, b, c in tets])
        labels.append([_fmt_vec(a) + _fmt_vec(b) + _fmt_vec(c) for a, b, c in tets])
    return DeltaSet(
        labels, faces, name="bintest",
        meta={"vars": tuple(vars), "edge_functions": tuple(edges), "triangle_pairs": tuple(tris)},
    )


def random_delta(seed: int, size: int) -> DeltaSet:
    """Pseudo-random Delta-set with at most ``size`` simplices in total.

    Built by gluing standard simplices: each new simplex picks vertices with
    repetition and either reuses an existing face with the right boundary or
    creates it.
    """
    rng = random.Random(f"random_delta:{seed}:{size}")
    verts = rng.randint(1, max(1, min(5, size // 3)))
    state = {"e": [], "t": [], "T": []}

    def total(st):
        return verts + len(st["e"]) + len(st["t"]) + len(st["T"])

    def edge(st, u, v):
        options = [i for i, f in enumerate(st["e"]) if f == (v, u)]
        if options and rng.random() < 0.6:
            return rng.choice(options)
        st["e"].append((v, u))
        return len(st["e"]) - 1

    def triangle(st, e12, e02, e01):
        options = [i for i, f in enumerate(st["t"]) if f == (e12, e02, e01)]
        if options and rng.random() < 0.6:
            return rng.choice(options)
        st["t"].append((e12, e02, e01))
        return len(st["t"]) - 1

    def add_simplex(st, n):
        vs = [rng.randrange(verts) for _ in range(n + 1)]
        e = {(i, j): edge(st, vs[i], vs[j]) for i in range(n + 1) for j in range(i + 1, n + 1)}
        if n == 1:
            return
        if n == 2:
            triangle(st, e[1, 2], e[0, 2], e[0, 1])
            return
        t = [
            triangle(st, e[b, c], e[a, c], e[a, b])
            for a, b, c in ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))
        ]
        st["T"].append(tuple(t))

    stalls = 0
    while stalls < 8:
        n = rng.choice((1, 1, 2, 2, 2, 3))
        trial = {k: list(v) for k, v in state.items()}
        add_simplex(trial, n)
        if total(trial) <= size:
            state = trial
            stalls = 0
        else:
            stalls += 1
    labels = [
        [f"v{i}" for i in range(verts)],
        [f"e{i}" for i in range(len(state["e"]))],
        [f"s{i}" for i in range(len(state["t"]))],
        [f"T{i}" for i in range(len(state["T"]))],
    ]
    faces = [[], [list(f) for f in state["e"]], [list(f) for f in state["t"]], [list(f) for f in state["T"]]]
    return DeltaSet(labels, faces, name=f"random:{size}:{seed}")


# -------------------------------------------------------------- Delta-maps


class DeltaMap:
    """A map of Delta-sets: per-dimension index maps commuting with every d_i."""

    def __init__(self, source: DeltaSet, target: DeltaSet, maps: Sequence[Sequence[int]]):
        maps = [tuple(m) for m in maps]
        while len(maps) < MAX_DIM + 1:
            maps.append(())
        self.source, self.target, self.maps = source, target, tuple(maps)
        for n in range(MAX_DIM + 1):
            if len(self.maps[n]) != source.count(n):
                raise ValidationError(f"map in dimension {n} has wrong length")
            for s, t in enumerate(self.maps[n]):
                if not 0 <= t < target.count(n):
                    raise ValidationError(f"image of {n}-simplex {s} is missing")
                for i in range(n + 1) if n else ():
                    if self.maps[n - 1][source.faces[n][s][i]] != target.faces[n][t][i]:
                        raise ValidationError(f"map does not commute with d_{i} on {source.labels[n][s]}")

    def __call__(self, n: int, s: int) -> int:
        return self.maps[n][s]


def polygon_rotation(ds: DeltaSet, shift: int) -> DeltaMap:
    """Rotate a coned polygon by ``shift`` boundary points (labels r*, t*).

    Valid only when the boundary word is periodic under the shift, e.g. the
    rotation by one letter (shift 2) of the degree-p attaching complex.
    """
    npts = sum(1 for lab in ds.labels[1] if lab.startswith("r"))

    def rot(label):
        return f"{label[0]}{(int(label[1:]) + shift) % npts}"

    maps = [list(range(ds.count(0))), [], []]
    for lab in ds.labels[1]:
        maps[1].append(ds.index(1, rot(lab)) if lab.startswith("r") else ds.index(1, lab))
    for lab in ds.labels[2]:
        maps[2].append(ds.index(2, rot(lab)))
    return DeltaMap(ds, ds, maps)


def classifying_map(ds: DeltaSet, values: Sequence[Sequence[int]], vars: Sequence[str] = ("x",)) -> DeltaMap:
    """The map into a binomial test complex determined by an integral 1-cocycle.

    ``values[e]`` is the vector attached to edge e; the cocycle condition
    makes the assignment (edge -> value, triangle -> (front, back)) a
    Delta-map.  Pulling back the coordinate cochains recovers the cocycle.
    """
    vals = [tuple(int(c) for c in v) for v in values]
    target = build_binomial_test_complex(vars, vals, depth=3 if ds.count(3) else 2)
    funcs, tris = target.meta["edge_functions"], target.meta["triangle_pairs"]
    eid = {e: i for i, e in enumerate(funcs)}
    tid = {t: i for i, t in enumerate(tris)}
    maps: list = [[0] * ds.count(0), [eid[v] for v in vals]]
    maps.append([tid[(vals[f[2]], vals[f[0]])] for f in ds.faces[2]])
    if ds.count(3):
        t3 = {}
        for i, lab in enumerate(target.labels[3]):
            t3[lab] = i
        img3 = []
        for s in range(ds.count(3)):
            a = vals[ds.subface(3, s, (0, 1))]
            b = vals[ds.subface(3, s, (1, 2))]
            c = vals[ds.subface(3, s, (2, 3))]
            img3.append(t3[_fmt_vec(a) + _fmt_vec(b) + _fmt_vec(c)])
        maps.append(img3)
    return DeltaMap(ds, target, maps)
