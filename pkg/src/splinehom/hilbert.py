"""Closed-form Hilbert polynomials of spline modules.

Everything here produces :class:`HilbertPoly` objects (exact rational
polynomials in ``d``).  The closed forms are assembled from fat-point
resolution data of the ideals attached to faces and lattice-fan classes;
:func:`hp_fit` interpolates computed dimensions and is the ground truth the
closed forms are compared against.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterable, Mapping, Sequence

from . import linalg
from .algebra import (
    PowerIdeal,
    TooFewGenerators,
    _reduced_generators,
    _reduced_hf_table,
    fat_point_resolution,
    minimal_generators,
)
from .chain import euler_characteristic, face_ideals, spline_dim
from .complex import (
    Fan,
    GeometryError,
    PolytopalComplex,
    SmoothnessMap,
    boundary_subfan,
    homogenize,
    vertex_star_fan,
)
from .lattice import (
    _kernel_rows,
    geometry,
    intersection_lattice,
    lattice_fan_decomposition,
    relative_borel_moore_ranks,
)

__all__ = [
    "HilbertPoly",
    "HPTerm",
    "HPReport",
    "NotDim3",
    "NotSimplicial",
    "NotStabilized",
    "GenericityWarning",
    "quotient_hilbert_poly",
    "chi_H",
    "hp_3d_fan",
    "third_coeff_table",
    "VertexObstruction",
    "vertex_obstruction",
    "hp_simplicial_3complex",
    "generic_c1_formula",
    "generic_c1_dim",
    "RigidityMatrix",
    "c1_rigidity_matrix",
    "hp_fit",
    "default_cap",
]


class NotDim3(GeometryError):
    """The operation needs a fan in R^3."""


class NotSimplicial(GeometryError):
    """The operation needs a simplicial complex."""


class NotStabilized(RuntimeError):
    """Computed values did not settle inside the allowed degree range."""


class GenericityWarning(UserWarning):
    """Hypotheses of the generic C^1 formula could not be confirmed."""


# ------------------------------------------------------------- polynomials


class HilbertPoly:
    """Polynomial in ``d`` with rational coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @staticmethod
    def constant(c) -> "HilbertPoly":
        return HilbertPoly([c])

    @staticmethod
    def binomial(shift: int, k: int) -> "HilbertPoly":
        """``C(d + shift, k)`` extended to a polynomial in ``d``."""
        p = HilbertPoly([1])
        for j in range(k):
            p = p * HilbertPoly([shift - j, 1])
        return p * Fraction(1, factorial(k))

    @staticmethod
    def interpolate(points: Sequence[tuple[int, int]]) -> "HilbertPoly":
        """Lagrange interpolation through ``(d, value)`` pairs."""
        total = HilbertPoly()
        for i, (xi, yi) in enumerate(points):
            term = HilbertPoly([yi])
            for j, (xj, _) in enumerate(points):
                if j != i:
                    term = term * HilbertPoly([Fraction(-xj, xi - xj), Fraction(1, xi - xj)])
            total = total + term
        return total

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, d) -> Fraction:
        v = Fraction(0)
        for c in reversed(self.coeffs):
            v = v * d + c
        return v

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return HilbertPoly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return HilbertPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return HilbertPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return HilbertPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            return self.coeffs == _as_poly(other).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"HilbertPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            num = str(a) if (a != 1 or k == 0) else ""
            var = "" if k == 0 else ("d" if k == 1 else f"d^{k}")
            body = f"{num}*{var}" if num and var else (num or var)
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @staticmethod
    def from_json(data: Sequence) -> "HilbertPoly":
        return HilbertPoly(Fraction(x) for x in data)


def _as_poly(x) -> HilbertPoly:
    if isinstance(x, HilbertPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return HilbertPoly([x])
    raise TypeError(f"cannot treat {type(x).__name__} as a polynomial")


@dataclass
class HPTerm:
    source: str
    contribution: HilbertPoly
    meta: dict = field(default_factory=dict)


@dataclass
class HPReport:
    total: HilbertPoly
    terms: list[HPTerm]
    method: str = ""
    flags: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        s = HilbertPoly()
        for t in self.terms:
            s = s + t.contribution
        if s != self.total:
            raise ValueError("report terms do not sum to the total")


# ----------------------------------------------------------- ideal pieces


def quotient_hilbert_poly(J: PowerIdeal) -> HilbertPoly:
    """Exact ``HP(S/J, d)``.

    ``S/J`` is a finite-length algebra on the span of the forms tensored
    with a polynomial ring in the remaining ``k`` variables, so its Hilbert
    polynomial is a sum of shifted binomials ``C(d - j + k - 1, k - 1)``.
    """
    n = J.nvars
    if J.is_zero():
        return HilbertPoly.binomial(n - 1, n - 1)
    c = _reduced_generators(J)[0]
    k = n - c
    if k == 0:
        return HilbertPoly()
    out = HilbertPoly()
    for j, h in enumerate(_reduced_hf_table(J)):
        out = out + h * HilbertPoly.binomial(k - 1 - j, k - 1)
    return out


def _fat_point_constant(beta: Sequence[int]) -> tuple[int, dict]:
    """Constant HP of a codimension-2 power ideal in three variables."""
    fp = fat_point_resolution(beta)
    c = 1 - sum(comb(e - 1, 2) for e in fp.beta) + fp.a * comb(fp.Omega, 2) + fp.b * comb(fp.Omega - 1, 2)
    return c, {"mu": fp.mu, "beta": list(fp.beta), "Omega": fp.Omega, "a": fp.a, "b": fp.b}


def _fat_point_poly(beta: Sequence[int], nvars: int) -> HilbertPoly:
    fp = fat_point_resolution(beta)
    n = nvars - 1
    p = HilbertPoly.binomial(n, n)
    for e in fp.beta:
        p = p - HilbertPoly.binomial(n - e, n)
    p = p + fp.a * HilbertPoly.binomial(n - fp.Omega - 1, n)
    p = p + fp.b * HilbertPoly.binomial(n - fp.Omega, n)
    return p


def _naive_beta(J: PowerIdeal) -> tuple[int, ...]:
    """One exponent per distinct hyperplane, with no ideal-membership drop."""
    best: dict = {}
    for form, e in J.generators:
        best[form] = min(e, best.get(form, e))
    return tuple(sorted(best.values()))


def _class_ideal(fan: Fan, alpha: SmoothnessMap, cls) -> PowerIdeal:
    geo = geometry(fan)
    top = fan.dim
    gens = [(geo.form(w), alpha[w] + 1) for w in sorted(cls.mask.members)
            if fan.faces[w].dim == top - 1 and w not in cls.minus_one.members]
    return PowerIdeal.make(fan.ambient_dim, gens)


def _codim2_poly(J: PowerIdeal) -> tuple[HilbertPoly, dict]:
    """Fat-point HP of a codimension-2 face ideal, exact fallback below 2 generators."""
    mu, beta, _ = minimal_generators(J)
    if mu >= 2:
        fp = fat_point_resolution(beta)
        meta = {"mu": fp.mu, "beta": list(fp.beta), "Omega": fp.Omega, "a": fp.a, "b": fp.b}
        return _fat_point_poly(beta, J.nvars), meta
    return quotient_hilbert_poly(J), {"mu": mu, "beta": list(beta), "fallback": "exact"}


def _binomial_validity(alpha: SmoothnessMap, n: int) -> int:
    """Smallest d from which every binomial C(d+n-e, n) used is combinatorially exact."""
    return max((a + 1 - n for _, a in alpha.items() if a >= 0), default=0)


# ------------------------------------------------------------------- chi_H


def chi_H(fan: Fan, alpha: SmoothnessMap) -> HilbertPoly:
    """Alternating sum of ``HP(S/J(face))`` over faces outside Sigma^{-1}."""
    ideals = face_ideals(fan, alpha)
    rel = alpha.minus_one.members
    top = fan.dim
    total = HilbertPoly()
    for f in fan.faces:
        if f.id in rel:
            continue
        total = total + (-1) ** (top - f.dim) * quotient_hilbert_poly(ideals[f.id])
    return total


# ----------------------------------------------------------------- 3D fans


def _facet_wall_terms(fan: Fan, alpha: SmoothnessMap) -> list[HPTerm]:
    n = fan.dim - 1
    facets = HPTerm("facets", len(fan.facets) * HilbertPoly.binomial(n, n), {"f_top": len(fan.facets)})
    walls = HilbertPoly()
    count = 0
    for w, a in alpha.items():
        if a < 0:
            continue
        count += 1
        walls = walls + (HilbertPoly.binomial(n, n) - HilbertPoly.binomial(n - a - 1, n))
    return [facets, HPTerm("walls", -walls, {"constrained_walls": count})]


def _star_ray(fan: Fan, mask, W) -> int | None:
    """A ray spanning the line W whose star is exactly the subfan ``mask``."""
    for f in mask.members:
        face = fan.faces[f]
        if face.dim != 1:
            continue
        ray = fan.rays[face.rays[0]]
        if any(sum(a * b for a, b in zip(f, ray)) for f in W.forms):
            continue
        if fan.closure(fan.facets_containing(f)).members == mask.members:
            return f
    return None


def hp_3d_fan(fan: Fan, alpha: SmoothnessMap, lattice=None) -> HPReport:
    """Hilbert polynomial of the spline algebra of a pure hereditary fan in R^3.

    Facet and wall terms plus one constant per lattice-fan class of each
    line in the lattice.  A class that is the star of an unconstrained-free
    ray, or whose relative homology in degree 2 is nonzero, contributes the
    constant Hilbert polynomial of its power ideal, read from the fat-point
    data of the minimal generators.  The same constant with all distinct
    hyperplane powers kept is reported as the naive value.
    """
    if fan.ambient_dim != 3 or fan.dim != 3:
        raise NotDim3(f"fan lives in R^{fan.ambient_dim} with dimension {fan.dim}")
    if lattice is None:
        lattice = intersection_lattice(fan, alpha.minus_one)
    terms = _facet_wall_terms(fan, alpha)
    naive_total = terms[0].contribution + terms[1].contribution
    flags: list[str] = []
    minus = alpha.minus_one.members
    for fid, W in enumerate(lattice.flats):
        if W.dim != 1:
            continue
        dec = lattice_fan_decomposition(fan, alpha.minus_one, W, alpha)
        for cls in dec.classes:
            g = _star_ray(fan, cls.mask, W)
            if g is not None and g not in minus:
                case = "star"
            else:
                bm = relative_borel_moore_ranks(fan, cls.minus_one, cls.mask)
                if not bm[2]:
                    continue
                case = "homology"
            J = _class_ideal(fan, alpha, cls)
            exact = quotient_hilbert_poly(J)
            mu, beta, _ = minimal_generators(J)
            meta = {"flat": W.describe(), "facets": list(cls.facets), "case": case}
            try:
                c, data = _fat_point_constant(beta)
                meta.update(data)
                meta["c"] = c
                if HilbertPoly.constant(c) != exact:
                    raise AssertionError(f"fat-point constant {c} disagrees with exact {exact}")
            except TooFewGenerators:
                meta.update({"mu": mu, "beta": list(beta), "fallback": "exact"})
                flags.append(f"too-few-generators at {W.describe()}")
            nb = _naive_beta(J)
            if len(nb) >= 2:
                cn, _ = _fat_point_constant(nb)
                meta["naive_beta"] = list(nb)
                meta["naive_c"] = cn
                naive_total = naive_total + cn
            else:
                naive_total = naive_total + exact
            if tuple(nb) != tuple(beta):
                meta["generator_drop"] = True
                flags.append(f"generator-drop at {W.describe()} class {cls.representative}")
            terms.append(HPTerm(f"class {W.describe()} / facet {cls.representative}", exact, meta))
    total = HilbertPoly()
    for t in terms:
        total = total + t.contribution
    extra = {"naive_total": naive_total, "binomials_exact_from": _binomial_validity(alpha, 2)}
    return HPReport(total, terms, "closed-form-3d", flags, extra)


def third_coeff_table(fan: Fan, alpha: SmoothnessMap, lattice=None) -> HPReport:
    """Four rows whose signed sum gives HP(C^alpha) up to O(d^(n-3)).

    Rows: facets, constrained walls (subtracted), codimension-2 faces outside
    Sigma^{-1}, and the lattice-fan classes of (n-1)-dimensional flats with
    nonzero relative homology in degree n.  The last row is truncated.
    """
    n = fan.dim - 1
    N = fan.ambient_dim
    rows = _facet_wall_terms(fan, alpha)
    ideals = face_ideals(fan, alpha)
    minus = alpha.minus_one.members
    codim2 = HilbertPoly()
    metas = []
    for f in fan.faces:
        if f.dim != n - 1 or f.id in minus:
            continue
        p, meta = _codim2_poly(ideals[f.id])
        codim2 = codim2 + p
        metas.append({"face": list(f.rays), **meta})
    rows.append(HPTerm("codim-2 faces", codim2, {"faces": metas}))
    if lattice is None:
        lattice = intersection_lattice(fan, alpha.minus_one)
    hn = HilbertPoly()
    classes = []
    for W in lattice.flats:
        if W.dim != n - 1 or n - 1 < 1:
            continue
        dec = lattice_fan_decomposition(fan, alpha.minus_one, W, alpha)
        if not dec.walls:
            continue
        for cls in dec.classes:
            if cls.trivial:
                continue
            bm = relative_borel_moore_ranks(fan, cls.minus_one, cls.mask)
            if not bm[n]:
                continue
            p, meta = _codim2_poly(_class_ideal(fan, alpha, cls))
            hn = hn + bm[n] * p
            classes.append({"flat": W.describe(), "facets": list(cls.facets), "rank": bm[n], **meta})
    rows.append(HPTerm("top-homology classes", hn, {"classes": classes, "truncated": n > 2}))
    total = HilbertPoly()
    for t in rows:
        total = total + t.contribution
    flags = ["truncated: exact modulo O(d^%d)" % (n - 3)] if n > 2 else []
    return HPReport(total, rows, "third-coefficient", flags, {"nvars": N})


# ------------------------------------------------------------ HF fitting


def default_cap(alpha: SmoothnessMap) -> int:
    return 3 * (alpha.max_alpha() + 1) + 4


def hp_fit(fan: Fan, alpha: SmoothnessMap, window: tuple[int, int],
           hf: Callable[[int], int] | None = None) -> HilbertPoly:
    """Polynomial of degree <= n through computed values on ``window``.

    The window must hold at least n + 3 degrees; the fit is also checked at
    the two degrees just past the window.
    """
    n = fan.dim - 1
    lo, hi = window
    if hi - lo + 1 < n + 3:
        raise ValueError(f"window [{lo},{hi}] too short: need at least {n + 3} degrees")
    if hf is None:
        def hf(d):
            return spline_dim(fan, alpha, d)
    pts = [(d, hf(d)) for d in range(lo, lo + n + 1)]
    poly = HilbertPoly.interpolate(pts)
    for d in list(range(lo + n + 1, hi + 1)) + [hi + 1, hi + 2]:
        v = hf(d)
        if poly(d) != v:
            raise NotStabilized(f"values on [{lo},{hi + 2}] are not polynomial of degree <= {n} (d={d})")
    return poly


# --------------------------------------------------- simplicial 3-complexes


def _require_simplicial(cx: PolytopalComplex):
    for c, k in cx.cell_dim.items():
        if len(c) != k + 1:
            raise NotSimplicial(f"cell {sorted(c)} of dimension {k} has {len(c)} vertices")


def _alpha_on_cells(cx: PolytopalComplex, fan: Fan, alpha: SmoothnessMap) -> dict[frozenset, int]:
    return {frozenset(fan.faces[w].rays): a for w, a in alpha.items()}


@dataclass
class VertexObstruction:
    vertex: int
    values: list[tuple[int, int]]
    stabilized: bool
    cap: int

    @property
    def total(self) -> int:
        return sum(v for _, v in self.values)

    @property
    def nonzero(self) -> list[tuple[int, int]]:
        return [(i, v) for i, v in self.values if v]


def vertex_obstruction(cx: PolytopalComplex, alpha: SmoothnessMap, v: int,
                       degree_cap: int | None = None, trailing: int = 3) -> VertexObstruction:
    """Per-degree dims of the finite-length homology of the vertex-star fan.

    ``alpha`` lives on the homogenized fan of ``cx``.  Each value is
    ``dim C(Delta_v)_i - chi(R/J[Delta_v, Delta_v^{-1}], i)``.  Stabilized
    means the last ``trailing`` values below the cap are zero.
    """
    _require_simplicial(cx)
    star, sa, _ = vertex_star_fan(cx, v, _alpha_on_cells(cx, alpha.fan, alpha))
    if degree_cap is None:
        degree_cap = default_cap(alpha)
    vals = []
    for i in range(degree_cap + 1):
        vals.append((i, spline_dim(star, sa, i) - euler_characteristic(star, sa, i)))
    stable = len(vals) >= trailing and all(x == 0 for _, x in vals[-trailing:])
    return VertexObstruction(v, vals, stable, degree_cap)


def _ray_is_flat(fan: Fan, alpha: SmoothnessMap, ray: Sequence[int]) -> bool:
    geo = geometry(fan)
    forms = [geo.form(w) for w, a in alpha.items() if a >= 0
             and sum(x * y for x, y in zip(geo.form(w), ray)) == 0]
    return linalg.rank(forms) == fan.ambient_dim - 1 if forms else fan.ambient_dim == 1


def hp_simplicial_3complex(cx: PolytopalComplex, alpha: SmoothnessMap,
                           degree_cap: int | None = None) -> HPReport:
    """``chi_H`` plus the vertex correction constant C for a simplicial 3-complex."""
    _require_simplicial(cx)
    fan = alpha.fan
    if cx.ambient_dim != 3:
        raise NotDim3("expected a complex in R^3")
    chi = chi_H(fan, alpha)
    terms = [HPTerm("chi_H", chi, {})]
    flags: list[str] = []
    C = 0
    minus = alpha.minus_one.members
    walls_at: dict[int, set] = {}
    for w, a in alpha.items():
        for r in fan.faces[w].rays:
            walls_at.setdefault(r, set()).add(a)
    for v in range(len(cx.vertices)):
        ray = fan.rays[v]
        if not _ray_is_flat(fan, alpha, ray):
            flags.append(f"vertex {v} skipped: its ray is not a flat of the lattice")
            continue
        ob = vertex_obstruction(cx, alpha, v, degree_cap)
        if not ob.stabilized:
            raise NotStabilized(f"vertex {v}: obstruction not zero for the last degrees up to {ob.cap}")
        seen = walls_at.get(v, set())
        if -1 in seen and any(a >= 0 for a in seen) and fan.face_id((v,)) not in minus:
            flags.append(f"vertex {v} has mixed boundary conditions")
        C += ob.total
        if ob.total:
            terms.append(HPTerm(f"vertex {v}", HilbertPoly.constant(ob.total), {"values": ob.nonzero}))
    total = chi + C
    return HPReport(total, terms, "chi_H + C", flags, {"C": C})


# --------------------------------------------------------- generic C^1


def _interior_counts(fan: Fan, alpha: SmoothnessMap) -> list[int]:
    minus = alpha.minus_one.members
    counts = [0] * (fan.dim + 1)
    for f in fan.faces:
        if f.id not in minus:
            counts[f.dim] += 1
    return counts


def generic_c1_formula(f3: int, f2: int, f1: int, f0: int, d: int) -> int:
    return f3 * comb(d + 3, 3) - f2 * (d + 1) ** 2 + f1 * (3 * d + 1) - 4 * f0


def generic_c1_dim(cx: PolytopalComplex, d: int, check: bool = True) -> int:
    """Generic C^1 dimension from interior face counts.

    With ``check`` the hypotheses are tested: every interior edge ideal is
    ``<x,y>^2``-like, every interior vertex ideal ``<x,y,z>^2``-like, and
    every vertex-star rigidity matrix has full rank.  Failures emit a
    :class:`GenericityWarning`; the formula value is returned regardless.
    """
    _require_simplicial(cx)
    fan = homogenize(cx)
    alpha = SmoothnessMap.uniform(fan, 1, -1)
    counts = _interior_counts(fan, alpha)
    value = generic_c1_formula(len(fan.facets), counts[3], counts[2], counts[1], d)
    if check:
        problems = _genericity_problems(cx, fan, alpha)
        if problems:
            warnings.warn(GenericityWarning("; ".join(problems[:5])), stacklevel=2)
    return value


def _genericity_problems(cx: PolytopalComplex, fan: Fan, alpha: SmoothnessMap) -> list[str]:
    ideals = face_ideals(fan, alpha)
    minus = alpha.minus_one.members
    out = []
    for f in fan.faces:
        if f.id in minus or f.dim not in (1, 2):
            continue
        want = (1, 2) if f.dim == 2 else (1, 3)
        got = _reduced_hf_table(ideals[f.id])
        if got != want:
            kind = "edge" if f.dim == 2 else "vertex"
            out.append(f"interior {kind} {list(f.rays)} has local Hilbert function {list(got)}")
    for v in range(len(cx.vertices)):
        star, _, _ = vertex_star_fan(cx, v)
        rig = c1_rigidity_matrix(star)
        if not rig.full_rank:
            out.append(f"vertex {v}: rigidity matrix rank {rig.rank} < {min(rig.shape)}")
    return out


@dataclass
class RigidityMatrix:
    matrix: list[list[Fraction]]
    rank: int
    full_rank: bool
    rows: list[tuple[int, str]]
    cols: list[int]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)


def c1_rigidity_matrix(fan: Fan) -> RigidityMatrix:
    """Degree-2 matrix of the boundary map from interior walls to interior rays.

    For each interior ray the squares of the interior wall forms through it
    are written in the basis ``f1^2, f1*f2, f2^2`` where ``f1, f2`` are the
    canonical forms vanishing on the ray.
    """
    if fan.ambient_dim != 3:
        raise NotDim3("rigidity matrix is defined for fans in R^3")
    bd = boundary_subfan(fan).members
    geo = geometry(fan)
    rays = [f.id for f in fan.faces if f.dim == 1 and f.id not in bd]
    walls = [w for w in fan.walls if len(fan.parents[w]) == 2]
    col = {w: j for j, w in enumerate(walls)}
    labels = []
    matrix: list[list[Fraction]] = []
    for r in rays:
        f1, f2 = _kernel_rows([list(fan.rays[fan.faces[r].rays[0]])], 3)
        block = [[Fraction(0)] * len(walls) for _ in range(3)]
        for w in walls:
            if r not in fan.children[w]:
                continue
            a, b = linalg.solve_coordinates([f1, f2], geo.form(w))
            s = fan.incidence_sign(w, r)
            for k, val in enumerate((a * a, 2 * a * b, b * b)):
                block[k][col[w]] = s * val
        for k, name in enumerate(("A", "B", "C")):
            labels.append((r, name))
        matrix.extend(block)
    rk = linalg.rank(matrix) if matrix and walls else 0
    full = rk == min(len(matrix), len(walls))
    return RigidityMatrix(matrix, rk, full, labels, walls)
