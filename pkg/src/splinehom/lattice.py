"""Wall hyperplanes, their intersection lattice, lattice fans and the G_W graph."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from . import linalg
from .complex import Fan, GeometryError, SmoothnessMap, SubfanMask

__all__ = [
    "DegenerateWall",
    "FlatNotInLattice",
    "PreconditionFlatNotCommon",
    "Flat",
    "IntersectionLattice",
    "LatticeClass",
    "LatticeFanDecomposition",
    "GWGraph",
    "Verdict",
    "FlatVerdict",
    "wall_form",
    "flat_from_forms",
    "flat_from_vectors",
    "intersection_lattice",
    "lattice_fan_decomposition",
    "is_star",
    "build_gw_graph",
    "gw_classification",
    "relative_borel_moore_ranks",
    "certify_associated_flats",
]

VB = "v_b"


class DegenerateWall(GeometryError):
    pass


class FlatNotInLattice(GeometryError):
    pass


class PreconditionFlatNotCommon(GeometryError):
    pass


def _canonical_rows(rows: Sequence[Sequence], ncols: int) -> tuple[tuple[int, ...], ...]:
    red, _, _ = linalg.rref_integer(rows, ncols) if rows else ([], 1, [])
    return tuple(linalg.primitive_vector(r) for r in red)


def _kernel_rows(rows: Sequence[Sequence], ncols: int) -> tuple[tuple[int, ...], ...]:
    if not rows:
        return tuple(tuple(int(i == j) for j in range(ncols)) for i in range(ncols))
    red, den, piv = linalg.rref_integer(rows, ncols)
    ker = []
    for free in sorted(set(range(ncols)) - set(piv)):
        v = [0] * ncols
        v[free] = den
        for row, p in zip(red, piv):
            v[p] = -row[free]
        ker.append(v)
    return _canonical_rows(ker, ncols) if ker else ()


@dataclass(frozen=True)
class Flat:
    """A linear subspace W, stored by canonical bases of W and of its annihilator."""

    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]
    forms: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def key(self) -> tuple:
        return self.forms

    def contained_in_form(self, form: Sequence[int]) -> bool:
        return all(sum(a * b for a, b in zip(form, v)) == 0 for v in self.basis)

    def contained_in_span(self, ann: Sequence[Sequence[int]]) -> bool:
        """W is inside the subspace whose annihilator is spanned by ``ann``."""
        return all(self.contained_in_form(f) for f in ann)

    def contains(self, other: "Flat") -> bool:
        return all(other.contained_in_form(f) for f in self.forms) if other.dim <= self.dim else False

    def describe(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i}" for i in range(self.ambient_dim)]
        parts = []
        for f in self.forms:
            terms = []
            for c, nm in zip(f, names):
                if c == 0:
                    continue
                sgn = "-" if c < 0 else "+"
                mag = "" if abs(c) == 1 else str(abs(c))
                terms.append(f"{sgn} {mag}{nm}")
            s = " ".join(terms)
            parts.append(s[2:] if s.startswith("+ ") else "-" + s[2:])
        return "(" + ", ".join(parts) + ")" if parts else "(0)"


def flat_from_forms(forms: Sequence[Sequence], ambient_dim: int) -> Flat:
    forms_c = _canonical_rows(forms, ambient_dim)
    basis = _kernel_rows(forms_c, ambient_dim)
    return Flat(ambient_dim, basis, forms_c)


def flat_from_vectors(vectors: Sequence[Sequence], ambient_dim: int) -> Flat:
    basis = _canonical_rows(vectors, ambient_dim)
    forms = _kernel_rows(basis, ambient_dim)
    return Flat(ambient_dim, basis, forms)


def wall_form(fan: Fan, tau) -> tuple[int, ...]:
    """Primitive integer form vanishing exactly on the span of a codimension-one face."""
    fid = fan.face_id(tau)
    vecs = fan.span_vectors(fid)
    ker = linalg.nullspace([list(v) for v in vecs], fan.ambient_dim)
    if len(ker) != 1:
        raise DegenerateWall(f"face {fan.faces[fid].rays} does not span a hyperplane")
    return linalg.primitive_vector(ker[0])


class _FanGeometry:
    """Per-fan cache of wall forms and span annihilators."""

    def __init__(self, fan: Fan):
        self.fan = fan
        self._ann: dict[int, tuple] = {}
        self._forms: dict[int, tuple] = {}
        self._contain_cache: dict = {}

    def form(self, w: int) -> tuple[int, ...]:
        if w not in self._forms:
            self._forms[w] = wall_form(self.fan, w)
        return self._forms[w]

    @cached_property
    def _stacked(self):
        rows, owner = [], []
        for f in self.fan.faces:
            for r in self.ann(f.id):
                rows.append(r)
                owner.append(f.id)
        A = np.array(rows, dtype=object) if rows else np.zeros((0, self.fan.ambient_dim), dtype=object)
        big = max((abs(x) for r in rows for x in r), default=0)
        return A, np.array(owner, dtype=np.int64), big

    def containing_faces(self, W: "Flat") -> frozenset:
        """Ids of faces whose span contains W."""
        hit = self._contain_cache.get(W.key)
        if hit is not None:
            return hit
        A, owner, big = self._stacked
        nfaces = len(self.fan.faces)
        if not W.basis:
            out = frozenset(range(nfaces))
        else:
            bigw = max(abs(x) for v in W.basis for x in v)
            B = np.array(W.basis, dtype=object).T
            if big * bigw * self.fan.ambient_dim < 2 ** 62:
                Z = (A.astype(np.int64) @ B.astype(np.int64)) != 0
            else:
                Z = (A @ B) != 0
            bad = np.zeros(nfaces, dtype=bool)
            if len(owner):
                np.logical_or.at(bad, owner, Z.any(axis=1))
            out = frozenset(int(i) for i in np.flatnonzero(~bad))
        if len(self._contain_cache) > 4096:
            self._contain_cache.clear()
        self._contain_cache[W.key] = out
        return out

    def ann(self, fid: int) -> tuple:
        if fid not in self._ann:
            vecs = self.fan.span_vectors(fid)
            self._ann[fid] = _kernel_rows([list(v) for v in vecs], self.fan.ambient_dim) if vecs else \
                _kernel_rows([], self.fan.ambient_dim)
        return self._ann[fid]


_GEOM: dict[int, _FanGeometry] = {}


def geometry(fan: Fan) -> _FanGeometry:
    g = getattr(fan, "_geometry_cache", None)
    if g is None:
        g = _FanGeometry(fan)
        fan._geometry_cache = g
    return g


def span_contains(fan: Fan, fid: int, W: Flat) -> bool:
    return fid in geometry(fan).containing_faces(W)


def _idot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def _zero_set(Hm, hbig, G) -> frozenset:
    """Indices of rows of Hm vanishing on every vector of G."""
    gbig = max(abs(x) for v in G for x in v)
    B = np.array(G, dtype=object).T
    if hbig * gbig * Hm.shape[1] < 2 ** 62:
        Z = Hm.astype(np.int64) @ B.astype(np.int64)
    else:
        Z = Hm @ B
    return frozenset(int(i) for i in np.flatnonzero(~(Z != 0).any(axis=1)))


def _cut(basis, h):
    """Integer basis of span(basis) intersected with the hyperplane h."""
    vals = [_idot(h, b) for b in basis]
    j = next(i for i, x in enumerate(vals) if x)
    out = []
    for i, b in enumerate(basis):
        if i == j:
            continue
        v = [vals[j] * x - vals[i] * y for x, y in zip(b, basis[j])]
        g = 0
        for x in v:
            g = gcd(g, x)
        out.append(tuple(x // g for x in v) if g > 1 else tuple(v))
    return tuple(out)


class IntersectionLattice:
    """Intersection lattice of the wall hyperplanes of walls outside a subfan.

    Flats are indexed; flat 0 is the whole space.  The order is reverse
    inclusion.  ``support(face)`` lists flats contained in the face's span.
    """

    def __init__(self, fan: Fan, relative: SubfanMask):
        self.fan = fan
        self.relative = relative
        N = fan.ambient_dim
        geo = geometry(fan)
        forms = []
        for w in fan.walls:
            if w in relative:
                continue
            f = geo.form(w)
            if f not in forms:
                forms.append(f)
        self.hyperplanes: tuple[tuple[int, ...], ...] = tuple(sorted(forms))
        H = self.hyperplanes
        Hm = np.array(H, dtype=object).reshape(len(H), N)
        hbig = max((abs(x) for f in H for x in f), default=0)
        # Flats are generated with integer bases and identified by the set of
        # hyperplanes containing them, which determines a flat of the lattice.
        start = tuple(tuple(int(i == j) for j in range(N)) for i in range(N))
        seen = {frozenset(): start}
        frontier = [(frozenset(), start)]
        while frontier:
            nxt = []
            for hs, basis in frontier:
                if not basis:
                    continue
                for k, h in enumerate(H):
                    if k in hs:
                        continue
                    G = _cut(basis, h)
                    ghs = _zero_set(Hm, hbig, G) if G else frozenset(range(len(H)))
                    if ghs not in seen:
                        seen[ghs] = G
                        nxt.append((ghs, G))
            frontier = nxt
        order = sorted(seen.items(), key=lambda kv: (-len(kv[1]), sorted(kv[0])))
        flats = [flat_from_vectors(basis, N) if basis else flat_from_forms(
            [tuple(int(i == j) for j in range(N)) for i in range(N)], N) for _, basis in order]
        index = {F.key: i for i, F in enumerate(flats)}
        self.flats: tuple[Flat, ...] = tuple(flats)
        self.index = index
        self._support: dict[int, frozenset] = {}

    def __len__(self) -> int:
        return len(self.flats)

    def __contains__(self, W: Flat) -> bool:
        return W.key in self.index

    def flat_id(self, W: Flat) -> int:
        if W.key not in self.index:
            raise FlatNotInLattice(f"flat {W.describe()} is not in the lattice")
        return self.index[W.key]

    def of_dim(self, d: int) -> list[int]:
        return [i for i, F in enumerate(self.flats) if F.dim == d]

    def leq(self, i: int, j: int) -> bool:
        """Reverse-inclusion order: flats[i] <= flats[j] iff flats[j] is inside flats[i]."""
        return self.flats[i].contains(self.flats[j])

    def support(self, face) -> frozenset:
        fid = self.fan.face_id(face)
        if fid not in self._support:
            ann = geometry(self.fan).ann(fid)
            self._support[fid] = frozenset(i for i, F in enumerate(self.flats) if F.contained_in_span(ann))
        return self._support[fid]

    def hyperplanes_containing(self, i: int) -> list[tuple[int, ...]]:
        F = self.flats[i]
        return [h for h in self.hyperplanes if F.contained_in_form(h)]


def intersection_lattice(fan: Fan, relative: SubfanMask | SmoothnessMap | None = None) -> IntersectionLattice:
    if relative is None:
        relative = SubfanMask.empty()
    elif isinstance(relative, SmoothnessMap):
        relative = relative.minus_one
    return IntersectionLattice(fan, relative)


# ------------------------------------------------------------ lattice fans


@dataclass(frozen=True)
class LatticeClass:
    representative: int
    facets: tuple[int, ...]
    mask: SubfanMask
    relative: SubfanMask
    minus_one: SubfanMask

    @property
    def trivial(self) -> bool:
        return len(self.facets) == 1


@dataclass(frozen=True)
class LatticeFanDecomposition:
    flat: Flat
    classes: tuple[LatticeClass, ...]
    walls: tuple[int, ...]  # interior walls whose span contains the flat

    def class_of(self, facet: int) -> LatticeClass:
        for c in self.classes:
            if facet in c.facets:
                return c
        raise KeyError(facet)


def complement_mask(fan: Fan, W: Flat, within: SubfanMask | None = None) -> SubfanMask:
    """Sigma^c_W: faces whose span does not contain W (optionally inside a mask)."""
    ids = within.members if within is not None else frozenset(range(len(fan.faces)))
    return SubfanMask(frozenset(ids - geometry(fan).containing_faces(W)))


def lattice_fan_decomposition(
    fan: Fan,
    relative: SubfanMask,
    W: Flat,
    alpha: SmoothnessMap | None = None,
    lattice: IntersectionLattice | None = None,
) -> LatticeFanDecomposition:
    if lattice is not None and W not in lattice:
        raise FlatNotInLattice(f"flat {W.describe()} is not in the lattice")
    inside = geometry(fan).containing_faces(W)
    walls = [w for w in fan.walls if len(fan.parents[w]) == 2 and w in inside]
    g = nx.Graph()
    g.add_nodes_from(fan.facets)
    for w in walls:
        a, b = fan.parents[w]
        g.add_edge(a, b)
    comps = sorted((tuple(sorted(c)) for c in nx.connected_components(g)), key=lambda c: c[0])
    minus = alpha.minus_one if alpha is not None else relative
    classes = []
    for comp in comps:
        mask = fan.closure(comp)
        comp_c = complement_mask(fan, W, mask)
        rel = SubfanMask(comp_c.members | (relative.members & mask.members))
        m1 = SubfanMask(comp_c.members | (minus.members & mask.members))
        classes.append(LatticeClass(comp[0], comp, mask, rel, m1))
    return LatticeFanDecomposition(W, tuple(classes), tuple(walls))


def is_star(fan: Fan, mask: SubfanMask):
    """Face whose star equals the subfan, or None."""
    facets = [f for f in mask.members if fan.faces[f].dim == fan.dim]
    if not facets:
        return None
    common = frozenset.intersection(*(fan.rayset(f) for f in facets))
    key = tuple(sorted(common))
    if key not in fan.key_to_id:
        return None
    gid = fan.key_to_id[key]
    star_facets = set(fan.facets_containing(gid))
    if star_facets == set(facets) and fan.closure(star_facets).members == mask.members:
        return gid
    return None


# ---------------------------------------------------------------- G_W graph


@dataclass
class GWGraph:
    flat_dim: int
    vertices: tuple[int, ...]
    has_vb: bool
    graph: nx.Graph = field(repr=False)

    @property
    def edges(self) -> list[tuple]:
        return list(self.graph.edges())

    def free_rank(self) -> int:
        """Rank of H_0 of the graph relative to v_b: components not touching v_b."""
        comps = list(nx.connected_components(self.graph))
        return sum(1 for c in comps if VB not in c)


def _check_common(fan: Fan, mask: SubfanMask, relative: SubfanMask, W: Flat) -> None:
    geo = geometry(fan)
    for w in fan.walls:
        if w in mask and w not in relative and not W.contained_in_form(geo.form(w)):
            raise PreconditionFlatNotCommon(
                f"wall {fan.faces[w].rays} lies outside the relative part but its span misses W"
            )


def build_gw_graph(fan: Fan, mask: SubfanMask, relative: SubfanMask, W: Flat) -> GWGraph:
    _check_common(fan, mask, relative, W)
    d = W.dim
    live = mask.members - relative.members
    verts = tuple(sorted(f for f in live if fan.faces[f].dim == d + 1))
    vset = set(verts)
    g = nx.Graph()
    g.add_nodes_from(verts)
    has_vb = False
    for psi in sorted(live):
        if fan.faces[psi].dim != d + 2:
            continue
        elig = [c for c in fan.children[psi] if c in vset]
        if len(elig) > 2:
            raise GeometryError(
                f"face {fan.faces[psi].rays} has {len(elig)} eligible faces; at most 2 are possible"
            )
        if len(elig) == 2:
            g.add_edge(*elig)
        elif len(elig) == 1:
            has_vb = True
            g.add_edge(elig[0], VB)
    return GWGraph(d, verts, has_vb, g)


def gw_classification(fan: Fan, mask: SubfanMask, relative: SubfanMask, W: Flat) -> dict:
    """Ranks of H_{d+1} and H_d of R[mask, relative] decided from G_W (d = dim W)."""
    d = W.dim
    graph = build_gw_graph(fan, mask, relative, W)
    live = mask.members - relative.members
    low = [f for f in live if fan.faces[f].dim == d]
    if not low:
        return {"case": 1, "H_top": graph.free_rank(), "H_low": 0, "has_vb": graph.has_vb,
                "star": is_star(fan, mask), "graph": graph}
    return {"case": 2, "H_top": 0, "H_low": 0, "has_vb": graph.has_vb,
            "star": is_star(fan, mask), "graph": graph}


# ------------------------------------------------------ Borel-Moore ranks


def boundary_matrix(fan: Fan, live: Iterable[int], i: int) -> tuple[list[list[int]], list[int], list[int]]:
    """Signed incidence matrix C_i -> C_{i-1} restricted to ``live`` faces."""
    live = set(live)
    src = sorted(f for f in live if fan.faces[f].dim == i)
    dst = sorted(f for f in live if fan.faces[f].dim == i - 1)
    pos = {f: k for k, f in enumerate(dst)}
    rows = [[0] * len(src) for _ in dst]
    for j, p in enumerate(src):
        for c in fan.children[p]:
            if c in pos:
                rows[pos[c]][j] = fan.incidence_sign(p, c)
    return rows, src, dst


def relative_borel_moore_ranks(fan: Fan, relative: SubfanMask, mask: SubfanMask | None = None) -> list[int]:
    """Ranks of H_i(R[mask, relative]) for i = 0..dim, from exact incidence ranks."""
    if mask is None:
        mask = fan.whole()
    live = mask.members - relative.members
    top = fan.dim
    dims = [sum(1 for f in live if fan.faces[f].dim == i) for i in range(top + 1)]
    ranks = [0] * (top + 2)
    for i in range(1, top + 1):
        rows, src, dst = boundary_matrix(fan, live, i)
        ranks[i] = linalg.rank(rows) if src and dst else 0
    return [dims[i] - ranks[i] - ranks[i + 1] for i in range(top + 1)]


def relative_is_zero_cone(fan: Fan, relative: SubfanMask) -> bool:
    """The corner case Sigma' = {0} excluded by the low-degree vanishing statement."""
    return relative.members == frozenset({0})


# ------------------------------------------------------------ certification


class Verdict(str, enum.Enum):
    CERTIFIED_ASSOCIATED = "CERTIFIED_ASSOCIATED"
    EXCLUDED = "EXCLUDED"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class FlatVerdict:
    flat: Flat
    flat_id: int
    representative: int
    facets: tuple[int, ...]
    homology_index: int
    verdict: Verdict
    method: str
    bm_ranks: tuple[int, ...] = ()


def certify_associated_flats(
    fan: Fan,
    alpha: SmoothnessMap,
    lattice: IntersectionLattice | None = None,
    include_unknown: bool = False,
) -> list[FlatVerdict]:
    """Three-valued verdicts on I(W) being associated to H_i(R/J[Sigma, Sigma^{-1}]).

    Degree i = dim W + 1 is decided exactly per lattice-fan class by the
    relative homology of the class (graph criterion).

    For i > dim W + 1 a class with H_i(R[class]) != 0 puts I(W) in the support
    of H_i(R/J): every live face of the class lies in walls through W, so the
    image of H_i(J) sits inside I(W) * H_i(R) and Nakayama leaves a nonzero
    quotient at I(W).  Associated primes below I(W) are I(V) for flats V
    strictly containing W with dim V <= i - 1; when each of those is already
    known not to be associated, I(W) is (method ``relative-homology``).
    Otherwise the degree is UNKNOWN, or EXCLUDED in simplicial fans where W is
    not the span of a face.
    """
    if lattice is None:
        lattice = intersection_lattice(fan, alpha.minus_one)
    n = fan.dim - 1
    simplicial = all(len(f.rays) == f.dim for f in fan.faces)
    face_spans = set()
    if simplicial:
        face_spans = {flat_from_vectors(fan.span_vectors(f.id), fan.ambient_dim).key
                      for f in fan.faces if f.dim > 0}
    flats = [(fid, W) for fid, W in enumerate(lattice.flats) if 1 <= W.dim <= n - 1]
    classes: dict[int, list[tuple[LatticeClass, tuple[int, ...]]]] = {}
    for fid, W in flats:
        dec = lattice_fan_decomposition(fan, alpha.minus_one, W, alpha)
        classes[fid] = [(c, tuple(relative_borel_moore_ranks(fan, c.minus_one, c.mask)))
                        for c in dec.classes]
    # ass[fid][i]: True / False / None (undecided) for I(W) in Ass H_i
    ass: dict[int, dict[int, bool | None]] = {fid: {} for fid, _ in flats}
    out: list[FlatVerdict] = []

    def emit(fid, W, c, i, verdict, method, bm):
        if verdict is Verdict.UNKNOWN and not include_unknown:
            return
        out.append(FlatVerdict(W, fid, c.representative, c.facets, i, verdict, method, bm))

    for i in range(2, n + 1):
        for fid, W in sorted(flats, key=lambda t: -t[1].dim):
            if W.dim > i - 1:
                continue
            cls = classes[fid]
            if simplicial and W.key not in face_spans:
                ass[fid][i] = False
                for c, bm in cls:
                    if not c.trivial:
                        emit(fid, W, c, i, Verdict.EXCLUDED, "simplicial-face-span", bm)
                continue
            if W.dim == i - 1:
                ass[fid][i] = any(bm[i] for _, bm in cls)
                for c, bm in cls:
                    if not c.trivial or bm[i]:
                        v = Verdict.CERTIFIED_ASSOCIATED if bm[i] else Verdict.EXCLUDED
                        emit(fid, W, c, i, v, "gw-graph", bm)
                continue
            support = [(c, bm) for c, bm in cls if bm[i]]
            if support and all(ass[j].get(i) is False for j, V in flats
                               if i - 1 >= V.dim > W.dim and V.contains(W)):
                ass[fid][i] = True
                for c, bm in support:
                    emit(fid, W, c, i, Verdict.CERTIFIED_ASSOCIATED, "relative-homology", bm)
            else:
                ass[fid][i] = None
                for c, bm in (support or [(c, bm) for c, bm in cls if not c.trivial]):
                    emit(fid, W, c, i, Verdict.UNKNOWN,
                         "embedded-candidate" if support else "needs-module-computation", bm)
    return out
