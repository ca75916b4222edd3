"""Graded chain complexes R[Sigma, Sigma'], J[Sigma, Sigma'] and R/J[Sigma, Sigma'].

Every complex is handled one polynomial degree at a time.  The summand of a
face in degree ``d`` is ``S_d`` (kind R), ``J(face)_d`` (kind J) or
``(S/J(face))_d`` (kind R/J), with coordinates from :mod:`algebra`.

Ranks are computed modulo a large prime first.  A modular rank is a lower
bound for the rational rank, so wherever the modular homology vanishes the
two adjacent ranks are exact.  The top differential is handled by a reduced
spline system (see :func:`top_kernel_dim`), and any rank still open is
certified directly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

import networkx as nx

from . import linalg
from .algebra import PowerIdeal, linear_power, monomial_index, monomials, quotient_basis, quotient_hilbert_function
from .complex import Fan, InvalidSmoothness, SmoothnessMap, SubfanMask
from .lattice import geometry

try:  # pragma: no cover
    import flint
except ImportError:  # pragma: no cover
    flint = None

__all__ = [
    "Kind",
    "GradedChainComplex",
    "face_ideals",
    "build_complex_family",
    "homology_dim",
    "spline_dim",
    "top_kernel_dim",
    "euler_characteristic",
]


class Kind(str, enum.Enum):
    R = "R"
    J = "J"
    QUOTIENT = "R/J"


def face_ideals(fan: Fan, alpha: SmoothnessMap) -> tuple[PowerIdeal, ...]:
    """J(face) for every face: the sum of l_tau^(alpha+1) over constrained walls tau above it."""
    cached = getattr(alpha, "_face_ideals", None)
    if cached is not None:
        return cached
    if alpha.fan is not fan:
        raise InvalidSmoothness("smoothness map belongs to a different fan")
    geo = geometry(fan)
    gens: list[list] = [[] for _ in fan.faces]
    for w in alpha.constrained_walls():
        g = (geo.form(w), alpha[w] + 1)
        for f in fan.faces_of(w):
            gens[f].append(g)
    N = fan.ambient_dim
    out = tuple(PowerIdeal.make(N, gs) for gs in gens)
    alpha._face_ideals = out
    return out


@lru_cache(maxsize=None)
def _dim_s(nvars: int, d: int) -> int:
    return comb(d + nvars - 1, nvars - 1) if d >= 0 else 0


@dataclass
class DegreeSlice:
    degree: int
    dims: list[int]
    ranks: list[int]

    def homology(self, i: int) -> int:
        return self.dims[i] - self.ranks[i] - self.ranks[i + 1]


class GradedChainComplex:
    """One of R, J, R/J relative to a subfan, optionally restricted to a mask."""

    def __init__(self, fan: Fan, alpha: SmoothnessMap, relative: SubfanMask, kind: Kind,
                 mask: SubfanMask | None = None, modular: bool = False):
        self.fan = fan
        self.alpha = alpha
        self.relative = relative
        self.kind = Kind(kind)
        self.mask = mask if mask is not None else fan.whole()
        self.modular = modular
        self.ideals = face_ideals(fan, alpha)
        live = self.mask.members - relative.members
        self.live = frozenset(live)
        self.summands: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(f for f in live if fan.faces[f].dim == i)) for i in range(fan.dim + 1)
        )
        self._slices: dict[int, DegreeSlice] = {}

    @property
    def top(self) -> int:
        return self.fan.dim

    # -- per-summand coordinates
    def summand_dim(self, fid: int, d: int) -> int:
        N = self.fan.ambient_dim
        J = self.ideals[fid]
        if self.kind is Kind.R:
            return _dim_s(N, d)
        if J.is_zero():
            return 0 if self.kind is Kind.J else _dim_s(N, d)
        q = quotient_basis(J, d).dim if d >= 0 else 0
        return q if self.kind is Kind.QUOTIENT else _dim_s(N, d) - q

    def chain_dim(self, i: int, d: int) -> int:
        if not 0 <= i <= self.top:
            return 0
        return sum(self.summand_dim(f, d) for f in self.summands[i])

    def differential(self, i: int, d: int) -> list[list]:
        """Matrix of delta_i in degree d, rows indexed by target coordinates.

        For kind J the rows are ambient ``S_d`` coordinates of the targets,
        which has the same rank as the map into the target ideals.
        """
        fan = self.fan
        N = fan.ambient_dim
        src = self.summands[i]
        dst = self.summands[i - 1]
        size = _dim_s(N, d)
        if self.kind is Kind.J:
            offs, total = {}, 0
            for g in dst:
                offs[g] = total
                total += size if not self.ideals[g].is_zero() else 0
        else:
            offs, total = {}, 0
            for g in dst:
                offs[g] = total
                total += self.summand_dim(g, d)
        dset = set(dst)
        cols: list[dict[int, Fraction]] = []
        for p in src:
            targets = [(g, fan.incidence_sign(p, g)) for g in fan.children[p] if g in dset]
            if self.kind is Kind.R:
                for m in range(size):
                    cols.append({offs[g] + m: s for g, s in targets})
            elif self.kind is Kind.QUOTIENT:
                Jp = self.ideals[p]
                src_basis = quotient_basis(Jp, d).basis if not Jp.is_zero() else range(size)
                tq = {g: (quotient_basis(self.ideals[g], d) if not self.ideals[g].is_zero() else None)
                      for g, _ in targets}
                for m in src_basis:
                    col: dict[int, Fraction] = {}
                    for g, s in targets:
                        q = tq[g]
                        if q is None:
                            col[offs[g] + m] = Fraction(s)
                        else:
                            for k, v in q.reduce_monomial(m).items():
                                col[offs[g] + k] = s * v
                    cols.append(col)
            else:
                Jp = self.ideals[p]
                if Jp.is_zero():
                    continue
                for vec in _ideal_basis(Jp, d):
                    col = {}
                    for g, s in targets:
                        if self.ideals[g].is_zero():
                            continue
                        for m, v in vec.items():
                            col[offs[g] + m] = s * v
                    cols.append(col)
        rows = [[0] * len(cols) for _ in range(total)]
        for j, col in enumerate(cols):
            for r, v in col.items():
                rows[r][j] = v
        return rows

    # -- ranks and homology
    def slice(self, d: int) -> DegreeSlice:
        if d in self._slices:
            return self._slices[d]
        top = self.top
        dims = [self.chain_dim(i, d) for i in range(top + 1)]
        ranks = [0] * (top + 2)
        exact = [True] * (top + 2)
        mats = {}
        for i in range(1, top + 1):
            if dims[i] == 0 or dims[i - 1] == 0:
                continue
            rows = linalg.integer_matrix(self.differential(i, d))
            mats[i] = rows
            r, ex = _lower_rank(rows, self.modular)
            ranks[i], exact[i] = r, ex
        if self.kind is not Kind.J and dims[top] and not exact[top]:
            ker = top_kernel_dim(self, d)
            ranks[top] = dims[top] - ker
            exact[top] = True
        if not self.modular:
            changed = True
            while changed:
                changed = False
                for j in range(top + 1):
                    h = dims[j] - ranks[j] - ranks[j + 1]
                    if h == 0:
                        for k in (j, j + 1):
                            if not exact[k]:
                                exact[k] = True
                                changed = True
            for i in range(1, top + 1):
                if not exact[i]:
                    ranks[i] = linalg.certified_rank(mats[i])
                    exact[i] = True
        sl = DegreeSlice(d, dims, ranks)
        self._slices[d] = sl
        return sl

    def homology_dim(self, i: int, d: int) -> int:
        if d < 0 or not 0 <= i <= self.top:
            return 0
        return self.slice(d).homology(i)

    def euler_from_homology(self, d: int) -> int:
        top = self.top
        return sum((-1) ** k * self.homology_dim(top - k, d) for k in range(top + 1))


def _lower_rank(rows: list[list[int]], modular: bool) -> tuple[int, bool]:
    """Rank lower bound and whether it is known to be exact."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0, True
    m, n = len(rows), len(rows[0])
    if flint is None or m * n < linalg._FLINT_THRESHOLD:
        return linalg.rank(rows), True
    p = linalg.MODULAR_PRIME if modular else linalg._PRIMES[0]
    r = flint.nmod_mat(rows, p).rank()
    return r, (r == min(m, n)) or modular


def _ideal_basis(J: PowerIdeal, d: int) -> list[dict[int, Fraction]]:
    """Reduced row echelon basis of J_d as sparse vectors over the monomials."""
    q = quotient_basis(J, d)
    return [{p: Fraction(1), **q.tail[p]} for p in sorted(q.tail)]


def build_complex_family(fan: Fan, alpha: SmoothnessMap, relative: SubfanMask | None = None,
                         kind: Kind | str = Kind.QUOTIENT, mask: SubfanMask | None = None,
                         modular: bool = False) -> GradedChainComplex:
    if alpha.fan is not fan:
        raise InvalidSmoothness("smoothness map belongs to a different fan")
    if relative is None:
        relative = alpha.minus_one
    return GradedChainComplex(fan, alpha, relative, Kind(kind), mask, modular)


def homology_dim(complex_: GradedChainComplex, i: int, d: int) -> int:
    return complex_.homology_dim(i, d)


# ------------------------------------------------------- reduced spline system


@lru_cache(maxsize=None)
def _taylor_matrix(form: tuple[int, ...], e: int | None, d: int):
    """Integer coordinates on (S / l^e)_d for l = form (identity when ``e`` is None).

    With y = l and x_j eliminated (form[j] != 0), l_j^d * F is a polynomial
    in y and the remaining variables; its coefficients of y^k, k < e, form
    the coordinates.  Returns a list of rows over the degree-d monomials.
    """
    N = len(form)
    mons = monomials(N, d)
    if e is None:
        return [[int(i == j) for j in range(len(mons))] for i in range(len(mons))]
    j = next(i for i, c in enumerate(form) if c)
    lj = form[j]
    rest = [i for i in range(N) if i != j]
    lprime = tuple(-form[i] for i in rest)
    kmax = min(e, d + 1)
    offs = []
    total = 0
    for k in range(kmax):
        offs.append(total)
        total += _dim_s(N - 1, d - k)
    idx = [monomial_index(N - 1, d - k) for k in range(kmax)]
    rows = [[0] * len(mons) for _ in range(total)]
    for col, a in enumerate(mons):
        aj = a[j]
        ar = tuple(a[i] for i in rest)
        scale = lj ** (d - aj)
        for k in range(min(aj, kmax - 1) + 1):
            bc = comb(aj, k) * scale
            for expo, c in (linear_power(lprime, aj - k) if aj - k > 0 else (((0,) * (N - 1), 1),)):
                m = tuple(x + y for x, y in zip(ar, expo))
                rows[offs[k] + idx[k][m]][col] += bc * c
    return rows


@lru_cache(maxsize=None)
def _mult_matrix(form: tuple[int, ...], e: int, d: int):
    """Multiplication by l^e as a map S_{d-e} -> S_d (rows over degree-d monomials)."""
    N = len(form)
    src = monomials(N, d - e)
    idx = monomial_index(N, d)
    terms = linear_power(form, e)
    rows = [[0] * len(src) for _ in range(_dim_s(N, d))]
    for col, m in enumerate(src):
        for expo, c in terms:
            rows[idx[tuple(x + y for x, y in zip(m, expo))]][col] += c
    return rows


def _fm(rows):
    return flint.fmpz_mat(rows) if rows and rows[0] else None


def top_kernel_dim(cx: GradedChainComplex, d: int, bound: bool = False) -> int:
    """dim ker delta_top in degree d by a spanning-forest reduction.

    Across every forest wall the difference of the two facet polynomials is
    written as l^e * g.  This leaves one free polynomial per component plus
    one multiplier per forest wall; the remaining walls contribute
    congruences modulo l^e, read off in integer Taylor coordinates.

    With ``bound`` the rank is taken modulo a prime, which can only
    overestimate the kernel.
    """
    fan = cx.fan
    N = fan.ambient_dim
    top = cx.top
    if d < 0:
        return 0
    facets = cx.summands[top]
    if not facets:
        return 0
    fset = set(facets)
    geo = geometry(fan)
    size = _dim_s(N, d)

    def exponent(w):
        if cx.kind is Kind.R:
            return None
        J = cx.ideals[w]
        return None if J.is_zero() else J.generators[0][1]

    g = nx.Graph()
    g.add_nodes_from(facets)
    single = []
    for w in cx.summands[top - 1]:
        ps = [p for p in fan.parents[w] if p in fset]
        if len(ps) == 2:
            g.add_edge(ps[0], ps[1], wall=w)
        elif len(ps) == 1:
            single.append((w, ps[0]))
    # variables: a root block per component, a multiplier block per forest edge
    col = 0
    path: dict[int, list[tuple[int, int]]] = {}  # facet -> list of (wall, sign)
    var_off: dict = {}
    tree_walls = set()
    for comp in sorted(nx.connected_components(g), key=min):
        root = min(comp)
        var_off[("root", root)] = col
        col += size
        path[root] = [("root", root)]
        for u, v in nx.bfs_edges(g, root):
            w = g.edges[u, v]["wall"]
            tree_walls.add(w)
            e = exponent(w)
            if e is not None and d - e >= 0:
                var_off[("edge", w)] = col
                col += _dim_s(N, d - e)
            path[v] = path[u] + [("edge", w)]
    ncols = col
    blocks: list[tuple[int, list]] = []  # (row count, list of (col offset, fmpz block))

    def contribution(w_target, terms):
        e_t = exponent(w_target)
        T = _taylor_matrix(geo.form(w_target), e_t, d)
        if not T:
            return None
        Tm = flint.fmpz_mat(T)
        parts = []
        for item, sgn in terms:
            if item[0] == "root":
                parts.append((var_off[item], Tm * sgn))
            else:
                if item not in var_off:
                    continue
                w = item[1]
                e = exponent(w)
                M = flint.fmpz_mat(_mult_matrix(geo.form(w), e, d))
                parts.append((var_off[item], (Tm * M) * sgn))
        return len(T), parts

    def facet_terms(f, sgn):
        return [(item, sgn) for item in path[f]]

    for u, v, data in g.edges(data=True):
        w = data["wall"]
        if w in tree_walls:
            continue
        terms = facet_terms(u, 1) + facet_terms(v, -1)
        merged: dict = {}
        for item, s in terms:
            merged[item] = merged.get(item, 0) + s
        terms = [(k, s) for k, s in merged.items() if s]
        blk = contribution(w, terms)
        if blk:
            blocks.append(blk)
    for w, f in single:
        blk = contribution(w, facet_terms(f, 1))
        if blk:
            blocks.append(blk)
    nrows = sum(b[0] for b in blocks)
    if nrows == 0 or ncols == 0:
        return ncols
    rows = []
    for h, parts in blocks:
        local = [[0] * ncols for _ in range(h)]
        for off, mat in parts:
            data = mat.tolist()
            for r in range(h):
                lr = local[r]
                dr = data[r]
                for c, x in enumerate(dr):
                    if x:
                        lr[off + c] += int(x)
        rows.extend(local)
    if bound and not cx.modular:
        rk, _ = _lower_rank(rows, False)
    else:
        rk = linalg.rank(rows, modular=cx.modular)
    return ncols - rk


def spline_dim(fan: Fan, alpha: SmoothnessMap, d: int, modular: bool = False) -> int:
    """dim C^alpha(Sigma)_d.

    The kernel is first bounded modulo a prime.  If the next differential
    down then leaves no room for homology just below the top, the bound is
    exact; otherwise the rank is certified over Q.
    """
    cx = build_complex_family(fan, alpha, alpha.minus_one, Kind.QUOTIENT, modular=modular)
    if modular or d < 0:
        return top_kernel_dim(cx, d)
    k = top_kernel_dim(cx, d, bound=True)
    top = cx.top
    below = cx.chain_dim(top - 1, d)
    r_top = cx.chain_dim(top, d) - k
    if below and cx.chain_dim(top - 2, d):
        r_next, _ = _lower_rank(linalg.integer_matrix(cx.differential(top - 1, d)), False)
    else:
        r_next = 0
    if below - r_top - r_next == 0:
        return k
    return top_kernel_dim(cx, d)


def euler_characteristic(fan: Fan, alpha: SmoothnessMap, d: int, relative: SubfanMask | None = None) -> int:
    """Alternating sum of HF(S/J(face), d) over faces outside the relative subfan."""
    if relative is None:
        relative = alpha.minus_one
    ideals = face_ideals(fan, alpha)
    top = fan.dim
    total = 0
    for f in fan.faces:
        if f.id in relative.members:
            continue
        total += (-1) ** (top - f.dim) * quotient_hilbert_function(ideals[f.id], d)
    return total
