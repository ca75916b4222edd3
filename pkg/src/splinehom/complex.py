"""Polytopal complexes, rational fans, and their cellular incidence data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import networkx as nx

from . import linalg

__all__ = [
    "GeometryError",
    "NonConvexCell",
    "IntersectionNotFace",
    "DimensionMismatch",
    "NotPure",
    "Branching",
    "UnknownFace",
    "UnknownVertex",
    "NotCovering",
    "InvalidSmoothness",
    "RationalPoint",
    "PolytopalComplex",
    "Face",
    "Fan",
    "SubfanMask",
    "SmoothnessMap",
    "build_complex",
    "homogenize",
    "boundary_subfan",
    "validate",
    "star",
    "dual_graph",
    "vertex_star_fan",
    "incidence_sign",
    "cone_faces",
]


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class NonConvexCell(GeometryError):
    pass


class IntersectionNotFace(GeometryError):
    pass


class DimensionMismatch(GeometryError):
    pass


class NotPure(GeometryError):
    pass


class Branching(GeometryError):
    pass


class UnknownFace(GeometryError):
    pass


class UnknownVertex(GeometryError):
    pass


class NotCovering(GeometryError):
    pass


class InvalidSmoothness(GeometryError):
    pass


@dataclass(frozen=True)
class RationalPoint:
    coords: tuple[Fraction, ...]

    @staticmethod
    def of(values: Iterable) -> "RationalPoint":
        return RationalPoint(tuple(Fraction(v) for v in values))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __sub__(self, other: "RationalPoint") -> tuple[Fraction, ...]:
        return tuple(a - b for a, b in zip(self.coords, other.coords))


# ---------------------------------------------------------------- cone faces


def _span_rank(vecs: Sequence[Sequence[int]]) -> int:
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return 0
    return linalg.bareiss_rank(vecs)


def _span_coordinates(vecs: Mapping[int, Sequence[int]]):
    """Coordinates of each vector in a fixed basis of their common span."""
    keys = sorted(vecs)
    red, _ = linalg.rref([vecs[k] for k in keys])
    k = len(red)
    coords = {}
    for key in keys:
        coords[key] = linalg.integer_row(linalg.solve_coordinates(red, vecs[key])) if k else []
    # integer_row rescales each vector independently: harmless, only signs and
    # incidences with hyperplanes through the origin are used.
    return k, coords


def _hyperplane_normal(rows: Sequence[Sequence[int]], k: int):
    """Normal of the hyperplane (in a k-dim space) spanned by ``k - 1`` vectors, or None."""
    if k == 1:
        return [1]
    ker = linalg.nullspace(rows, k)
    if len(ker) != 1:
        return None
    return linalg.integer_row(ker[0])


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def cone_faces(vectors: Mapping[int, Sequence[int]]) -> set[frozenset]:
    """All faces of the pointed cone generated by ``vectors`` (keyed by id).

    Faces are returned as frozensets of ids; the zero cone is the empty set.
    Raises ``NonConvexCell`` if some generator is not an extreme ray or the
    cone is not pointed.
    """
    memo: dict[frozenset, set[frozenset]] = {}

    def rec(ids: frozenset) -> set[frozenset]:
        if ids in memo:
            return memo[ids]
        if not ids:
            memo[ids] = {ids}
            return memo[ids]
        k, coords = _span_coordinates({i: vectors[i] for i in ids})
        facets = set()
        order = sorted(ids)
        for combo in combinations(order, k - 1):
            normal = _hyperplane_normal([coords[i] for i in combo], k)
            if normal is None:
                continue
            vals = {i: _dot(normal, coords[i]) for i in order}
            if all(v >= 0 for v in vals.values()) or all(v <= 0 for v in vals.values()):
                face = frozenset(i for i in order if vals[i] == 0)
                if face in facets:
                    continue
                if _span_rank([vectors[i] for i in face]) == k - 1:
                    facets.add(face)
        out = {ids}
        for f in facets:
            out |= rec(f)
        memo[ids] = out
        return out

    all_ids = frozenset(vectors)
    faces = rec(all_ids)
    if frozenset() not in faces:
        raise NonConvexCell("cone is not pointed (origin is not a face)")
    singles = {next(iter(f)) for f in faces if len(f) == 1}
    rank1 = {f for f in faces if f and _span_rank([vectors[i] for i in f]) == 1}
    if singles != set(all_ids) or any(len(f) != 1 for f in rank1):
        raise NonConvexCell("generators are not in convex position")
    return faces


def _intersection(a: frozenset, b: frozenset, vectors, lattice_a, lattice_b) -> frozenset:
    """Rays of the intersection of two cones, checked to be a common face."""
    if a <= b:
        if a in lattice_b:
            return a
        raise IntersectionNotFace(f"cell {sorted(a)} meets {sorted(b)} improperly")
    if b <= a:
        if b in lattice_a:
            return b
        raise IntersectionNotFace(f"cell {sorted(b)} meets {sorted(a)} improperly")
    union = a | b
    common = a & b
    k, coords = _span_coordinates({i: vectors[i] for i in union})
    cbasis: list[int] = []
    for i in sorted(common):
        if _span_rank([coords[j] for j in cbasis + [i]]) > len(cbasis):
            cbasis.append(i)
    others = sorted(union - set(cbasis))
    need = k - 1 - len(cbasis)
    for extra in combinations(others, need):
        combo = cbasis + list(extra)
        normal = _hyperplane_normal([coords[i] for i in combo], k)
        if normal is None:
            continue
        va = {i: _dot(normal, coords[i]) for i in a}
        vb = {i: _dot(normal, coords[i]) for i in b}
        sep = (all(v >= 0 for v in va.values()) and all(v <= 0 for v in vb.values())) or (
            all(v <= 0 for v in va.values()) and all(v >= 0 for v in vb.values())
        )
        if not sep:
            continue
        fa = frozenset(i for i, v in va.items() if v == 0)
        fb = frozenset(i for i, v in vb.items() if v == 0)
        if not fa or not fb:
            return frozenset()
        return _intersection(fa, fb, vectors, lattice_a, lattice_b)
    raise IntersectionNotFace(f"cells {sorted(a)} and {sorted(b)} overlap")


def _check_intersections(maximal: Sequence[frozenset], vectors, lattices, boxes=None) -> None:
    for i, j in combinations(range(len(maximal)), 2):
        a, b = maximal[i], maximal[j]
        if boxes is not None and not (a & b):
            lo1, hi1 = boxes[i]
            lo2, hi2 = boxes[j]
            if any(h1 < l2 or h2 < l1 for l1, h1, l2, h2 in zip(lo1, hi1, lo2, hi2)):
                continue
        got = _intersection(a, b, vectors, lattices[i], lattices[j])
        if got != a & b:
            raise IntersectionNotFace(
                f"cells {sorted(a)} and {sorted(b)} meet in {sorted(got)}, not their common face"
            )


# ---------------------------------------------------------- polytopal complex


@dataclass(frozen=True)
class PolytopalComplex:
    """A polytopal complex in Q^n; cells are frozensets of vertex indices."""

    ambient_dim: int
    vertices: tuple[RationalPoint, ...]
    cells: tuple[tuple[frozenset, ...], ...]  # indexed by cell dimension
    facets: tuple[frozenset, ...]

    @cached_property
    def cell_dim(self) -> dict[frozenset, int]:
        return {c: k for k, cs in enumerate(self.cells) for c in cs}

    def f_vector(self) -> list[int]:
        return [len(c) for c in self.cells]

    def faces_of(self, cell: frozenset) -> list[frozenset]:
        return [c for c in self.cell_dim if c <= cell]

    def containment(self) -> dict[frozenset, list[frozenset]]:
        """Cell -> the cells of one dimension lower that it contains."""
        out = {}
        for c, k in self.cell_dim.items():
            out[c] = [g for g in self.cells[k - 1] if g <= c] if k > 0 else []
        return out

    @cached_property
    def homogeneous_rays(self) -> tuple[tuple[int, ...], ...]:
        return tuple(linalg.positive_primitive((1,) + tuple(v.coords)) for v in self.vertices)

    @property
    def dim(self) -> int:
        return max(self.cell_dim.values())


def build_complex(
    ambient_dim: int,
    vertices: Sequence,
    facets: Sequence[Iterable[int]],
    explicit_faces: Sequence[Sequence[Iterable[int]]] | None = None,
    check_intersections: bool = True,
) -> PolytopalComplex:
    """Build and validate a polytopal complex.

    The face lattice of each facet is discovered by supporting-hyperplane
    enumeration unless ``explicit_faces`` (cells per dimension) is given.
    """
    pts = tuple(v if isinstance(v, RationalPoint) else RationalPoint.of(v) for v in vertices)
    for p in pts:
        if len(p) != ambient_dim:
            raise DimensionMismatch(f"vertex {p.coords} has length {len(p)}, expected {ambient_dim}")
    nv = len(pts)
    fac = []
    for f in facets:
        f = frozenset(int(i) for i in f)
        if not f:
            raise DimensionMismatch("empty facet")
        for i in f:
            if not 0 <= i < nv:
                raise UnknownVertex(f"vertex index {i} out of range")
        fac.append(f)
    if len(set(fac)) != len(fac):
        raise GeometryError("repeated facet")
    rays = {i: linalg.positive_primitive((1,) + tuple(p.coords)) for i, p in enumerate(pts)}

    lattices = []
    if explicit_faces is not None:
        given = {frozenset(int(i) for i in c) for cs in explicit_faces for c in cs} | set(fac)
        for f in fac:
            lat = {c for c in given if c <= f} | {frozenset()}
            for c in lat:
                if c and _span_rank([rays[i] for i in c]) > ambient_dim + 1:
                    raise DimensionMismatch("explicit cell exceeds the ambient dimension")
            lattices.append(lat)
    else:
        for f in fac:
            lattices.append(cone_faces({i: rays[i] for i in f}))

    dims: dict[frozenset, int] = {}
    for lat in lattices:
        for c in lat:
            if c and c not in dims:
                dims[c] = _span_rank([rays[i] for i in c]) - 1
    for f in fac:
        if dims[f] > ambient_dim:
            raise DimensionMismatch(f"facet {sorted(f)} has dimension {dims[f]} > {ambient_dim}")
    maximal = [f for f in fac if not any(f < g for g in fac)]
    if len(maximal) != len(fac):
        raise GeometryError("a listed facet is contained in another facet")

    if check_intersections:
        boxes = []
        for f in fac:
            cols = list(zip(*[pts[i].coords for i in f]))
            boxes.append((tuple(min(c) for c in cols), tuple(max(c) for c in cols)))
        _check_intersections(fac, rays, lattices, boxes)

    top = max(dims.values())
    cells = tuple(tuple(sorted((c for c, k in dims.items() if k == d), key=sorted)) for d in range(top + 1))
    return PolytopalComplex(ambient_dim, pts, cells, tuple(fac))


# ----------------------------------------------------------------------- fans


@dataclass(frozen=True)
class Face:
    id: int
    rays: tuple[int, ...]
    dim: int
    basis: tuple[int, ...]  # ordered span basis: lexicographically first independent rays


@dataclass(frozen=True)
class SubfanMask:
    """A set of face ids of a fan, closed under taking faces."""

    members: frozenset

    def __contains__(self, fid: int) -> bool:
        return fid in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __or__(self, other: "SubfanMask") -> "SubfanMask":
        return SubfanMask(self.members | other.members)

    def __and__(self, other: "SubfanMask") -> "SubfanMask":
        return SubfanMask(self.members & other.members)

    @staticmethod
    def empty() -> "SubfanMask":
        return SubfanMask(frozenset())


class Fan:
    """A rational polyhedral fan in Q^N given by its face lattice.

    Faces are numbered; face 0 is always the zero cone.  Every face stores an
    ordered basis of its span, which fixes an orientation, and incidence
    signs between consecutive dimensions are derived from it.
    """

    def __init__(self, ambient_dim: int, rays: Sequence[Sequence[int]], faces: Iterable[Iterable[int]]):
        self.ambient_dim = ambient_dim
        self.rays = tuple(linalg.positive_primitive(r) for r in rays)
        for r in self.rays:
            if len(r) != ambient_dim:
                raise DimensionMismatch(f"ray {r} has length {len(r)}, expected {ambient_dim}")
        keys = {tuple(sorted(int(i) for i in f)) for f in faces}
        keys.add(())
        for k in keys:
            for i in k:
                if not 0 <= i < len(self.rays):
                    raise UnknownFace(f"ray index {i} out of range")
        info = []
        for k in keys:
            basis = self._greedy_basis(k)
            info.append((len(basis), k, tuple(basis)))
        info.sort()
        self.faces: tuple[Face, ...] = tuple(Face(i, k, d, b) for i, (d, k, b) in enumerate(info))
        self.key_to_id = {f.rays: f.id for f in self.faces}
        self.dim = max(f.dim for f in self.faces)
        self.by_dim: tuple[tuple[int, ...], ...] = tuple(
            tuple(f.id for f in self.faces if f.dim == d) for d in range(self.dim + 1)
        )
        raysets = [frozenset(f.rays) for f in self.faces]
        self._raysets = raysets
        children: list[list[int]] = [[] for _ in self.faces]
        parents: list[list[int]] = [[] for _ in self.faces]
        for d in range(1, self.dim + 1):
            for p in self.by_dim[d]:
                rp = raysets[p]
                for c in self.by_dim[d - 1]:
                    if raysets[c] < rp:
                        children[p].append(c)
                        parents[c].append(p)
        self.children = tuple(tuple(c) for c in children)
        self.parents = tuple(tuple(p) for p in parents)
        for f in self.faces:
            if f.dim > 0 and not self.children[f.id]:
                raise GeometryError(f"face {f.rays} has no faces of dimension {f.dim - 1}")
        self.maximal = tuple(f.id for f in self.faces if not self.parents[f.id] and f.dim > 0) or (0,)
        self._signs: dict[tuple[int, int], int] = {}
        self._down: dict[int, list[int]] = {}

    def _greedy_basis(self, ray_ids: Sequence[int]) -> list[int]:
        basis: list[int] = []
        for i in sorted(ray_ids):
            if _span_rank([self.rays[j] for j in basis + [i]]) > len(basis):
                basis.append(i)
        return basis

    # -- construction helpers
    @staticmethod
    def from_cones(ambient_dim: int, rays: Sequence[Sequence[int]], cones: Iterable[Iterable[int]],
                   check_intersections: bool = True) -> "Fan":
        rays = [linalg.positive_primitive(r) for r in rays]
        vecs = dict(enumerate(rays))
        maximal = [frozenset(int(i) for i in c) for c in cones]
        lattices = [cone_faces({i: vecs[i] for i in c}) for c in maximal]
        if check_intersections:
            _check_intersections(maximal, vecs, lattices)
        faces = set()
        for lat in lattices:
            faces |= lat
        return Fan(ambient_dim, rays, faces)

    # -- basic queries
    def face(self, ref) -> Face:
        if isinstance(ref, Face):
            return ref
        if isinstance(ref, int):
            if 0 <= ref < len(self.faces):
                return self.faces[ref]
            raise UnknownFace(f"no face with id {ref}")
        key = tuple(sorted(int(i) for i in ref))
        if key not in self.key_to_id:
            raise UnknownFace(f"no face with rays {key}")
        return self.faces[self.key_to_id[key]]

    def face_id(self, ref) -> int:
        return self.face(ref).id

    def rayset(self, fid: int) -> frozenset:
        return self._raysets[fid]

    def f_vector(self) -> list[int]:
        return [len(ids) for ids in self.by_dim]

    @property
    def facets(self) -> tuple[int, ...]:
        return self.by_dim[self.dim]

    @property
    def walls(self) -> tuple[int, ...]:
        return self.by_dim[self.dim - 1] if self.dim >= 1 else ()

    def is_pure(self) -> bool:
        return all(self.faces[m].dim == self.dim for m in self.maximal)

    def facets_containing(self, fid: int) -> list[int]:
        rs = self._raysets[fid]
        return [s for s in self.facets if rs <= self._raysets[s]]

    def faces_of(self, fid: int) -> list[int]:
        hit = self._down.get(fid)
        if hit is None:
            rs = self._raysets[fid]
            hit = self._down[fid] = [g.id for g in self.faces if self._raysets[g.id] <= rs]
        return list(hit)

    def closure(self, fids: Iterable[int]) -> SubfanMask:
        out: set[int] = set()
        for f in fids:
            if f not in out:
                out.update(self.faces_of(f))
        return SubfanMask(frozenset(out))

    def whole(self) -> SubfanMask:
        return SubfanMask(frozenset(range(len(self.faces))))

    def span_vectors(self, fid: int) -> list[tuple[int, ...]]:
        return [self.rays[i] for i in self.faces[fid].basis]

    # -- orientation
    def incidence_sign(self, psi: int, gamma: int) -> int:
        key = (psi, gamma)
        if key in self._signs:
            return self._signs[key]
        fp, fg = self.faces[psi], self.faces[gamma]
        if fg.dim != fp.dim - 1 or not self._raysets[gamma] < self._raysets[psi]:
            raise NotCovering(f"face {fg.rays} is not a codimension-one face of {fp.rays}")
        bp = [self.rays[i] for i in fp.basis]
        bg = [self.rays[i] for i in fg.basis]
        u = None
        for i in fp.rays:
            if i not in self._raysets[gamma]:
                u = self.rays[i]
                break
        cols = [linalg.solve_coordinates(bp, v) for v in bg + [u]]
        det = linalg.det([list(r) for r in zip(*cols)])
        if det == 0:
            raise NotCovering("degenerate orientation data")
        s = 1 if det > 0 else -1
        self._signs[key] = s
        return s

    def check_boundary_squared(self) -> bool:
        """Verify delta o delta = 0 on every (i, i-2) pair."""
        for d in range(2, self.dim + 1):
            for p in self.by_dim[d]:
                acc: dict[int, int] = {}
                for g in self.children[p]:
                    s1 = self.incidence_sign(p, g)
                    for h in self.children[g]:
                        acc[h] = acc.get(h, 0) + s1 * self.incidence_sign(g, h)
                if any(acc.values()):
                    return False
        return True


def homogenize(complex_: PolytopalComplex) -> Fan:
    """Cone over a polytopal complex: faces cone(i(gamma)) plus the zero cone."""
    rays = complex_.homogeneous_rays
    faces = [c for cs in complex_.cells for c in cs]
    return Fan(complex_.ambient_dim + 1, rays, faces)


def incidence_sign(fan: Fan, psi, gamma) -> int:
    return fan.incidence_sign(fan.face_id(psi), fan.face_id(gamma))


# ---------------------------------------------------------- structural checks


def _mask_facets(fan: Fan, mask: SubfanMask) -> list[int]:
    return [f for f in mask.members if not any(p in mask.members for p in fan.parents[f]) and f != 0] or (
        [0] if 0 in mask.members else []
    )


def _mask_dim(fan: Fan, mask: SubfanMask) -> int:
    return max((fan.faces[f].dim for f in mask.members), default=-1)


def star(fan: Fan, face) -> SubfanMask:
    fid = fan.face_id(face)
    return fan.closure(fan.facets_containing(fid) if fan.faces[fid].dim <= fan.dim else [])


def _star_of(fan: Fan, fid: int) -> SubfanMask:
    rs = fan.rayset(fid)
    tops = [m for m in fan.maximal if rs <= fan.rayset(m)]
    return fan.closure(tops)


def dual_graph(fan: Fan, mask: SubfanMask | None = None) -> nx.Graph:
    """Graph on the facets of ``mask`` (default: the whole fan); edges join facets sharing a wall."""
    if mask is None:
        mask = fan.whole()
    tops = sorted(_mask_facets(fan, mask))
    dims = {fan.faces[t].dim for t in tops}
    if len(dims) > 1:
        raise NotPure("dual graph requires a pure (sub)fan")
    g = nx.Graph()
    g.add_nodes_from(tops)
    if not tops:
        return g
    d = dims.pop()
    if d == 0:
        return g
    tset = set(tops)
    for w in fan.by_dim[d - 1]:
        if w not in mask.members:
            continue
        ps = [p for p in fan.parents[w] if p in tset]
        for a, b in combinations(ps, 2):
            g.add_edge(a, b)
    return g


def boundary_subfan(fan: Fan) -> SubfanMask:
    if not fan.is_pure():
        raise NotPure("boundary requires a pure fan")
    bd = []
    for w in fan.walls:
        k = len(fan.parents[w])
        if k >= 3:
            raise Branching(f"wall {fan.faces[w].rays} lies in {k} facets")
        if k == 1:
            bd.append(w)
    return fan.closure(bd)


def interior_walls(fan: Fan) -> list[int]:
    return [w for w in fan.walls if len(fan.parents[w]) == 2]


def validate(fan: Fan) -> dict[str, bool]:
    pure = fan.is_pure()
    non_branching = all(len(fan.parents[w]) <= 2 for w in fan.walls) if pure else False
    hereditary = False
    if pure:
        hereditary = True
        for f in fan.faces:
            st = _star_of(fan, f.id)
            g = dual_graph(fan, st)
            if g.number_of_nodes() and not nx.is_connected(g):
                hereditary = False
                break
    return {"pure": pure, "non_branching": non_branching, "hereditary": hereditary}


# ------------------------------------------------------------- smoothness


class SmoothnessMap:
    """Smoothness parameters alpha(tau) >= -1 on the walls of a fan."""

    def __init__(self, fan: Fan, alpha: Mapping[int, int]):
        walls = set(fan.walls)
        if set(alpha) != walls:
            raise InvalidSmoothness("smoothness must be given on exactly the walls of the fan")
        for w, a in alpha.items():
            if int(a) < -1:
                raise InvalidSmoothness(f"alpha {a} < -1 on wall {fan.faces[w].rays}")
            if int(a) == -1 and len(fan.parents[w]) == 2:
                raise InvalidSmoothness(f"interior wall {fan.faces[w].rays} has alpha = -1")
        self.fan = fan
        self.alpha = {int(w): int(a) for w, a in alpha.items()}

    @staticmethod
    def uniform(fan: Fan, r: int, s: int = -1) -> "SmoothnessMap":
        """Interior walls get ``r``, boundary walls get ``s``."""
        return SmoothnessMap(fan, {w: (r if len(fan.parents[w]) == 2 else s) for w in fan.walls})

    def __getitem__(self, wall: int) -> int:
        return self.alpha[wall]

    def items(self):
        return self.alpha.items()

    def max_alpha(self) -> int:
        return max(self.alpha.values(), default=0)

    @cached_property
    def minus_one(self) -> SubfanMask:
        """The subfan Sigma^{-1}: faces contained in some wall with alpha = -1."""
        return self.fan.closure(w for w, a in self.alpha.items() if a == -1)

    def constrained_walls(self) -> list[int]:
        return sorted(w for w, a in self.alpha.items() if a >= 0)

    def key(self) -> tuple:
        return tuple(sorted(self.alpha.items()))


# -------------------------------------------------------------- vertex stars


def vertex_star_fan(complex_: PolytopalComplex, v: int, alpha: Mapping[frozenset, int] | None = None):
    """Fan of cones cone(gamma - v) over the cells gamma containing vertex ``v``.

    ``alpha`` maps walls of the complex (vertex sets) to smoothness values and
    is transported to the corresponding walls of the star fan.  Returns
    ``(fan, smoothness, ray_vertices)`` where ``ray_vertices[i]`` is the
    complex vertex at the far end of ray ``i``.
    """
    if not 0 <= v < len(complex_.vertices):
        raise UnknownVertex(f"no vertex {v}")
    cells = [c for c in complex_.cell_dim if v in c]
    edges = sorted(c for c in cells if len(c) == 2 and complex_.cell_dim[c] == 1)
    others = [next(iter(e - {v})) for e in edges]
    pos = {u: i for i, u in enumerate(others)}
    base = complex_.vertices[v]
    rays = [linalg.positive_primitive(complex_.vertices[u] - base) for u in others]
    faces = []
    cellmap = {}
    for c in cells:
        key = tuple(sorted(pos[u] for u in others if frozenset((v, u)) <= c))
        faces.append(key)
        cellmap[c] = key
    fan = Fan(complex_.ambient_dim, rays, faces)
    smooth = None
    if alpha is not None:
        top = fan.dim
        vals = {}
        for c, key in cellmap.items():
            fid = fan.face_id(key)
            if fan.faces[fid].dim == top - 1:
                vals[fid] = alpha[c]
        smooth = SmoothnessMap(fan, vals)
    return fan, smooth, tuple(others)
