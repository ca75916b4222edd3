"""Acceptance checks.  One PASS/FAIL line per criterion is printed in the
terminal summary (see conftest); an xfail counts as FAIL there."""

import random
from fractions import Fraction
from functools import lru_cache

import pytest

import oracles
from conftest import model, random_model
from splinehom import (
    HilbertPoly,
    PowerIdeal,
    c1_rigidity_matrix,
    corpus_names,
    euler_characteristic,
    fat_point_resolution,
    flat_from_forms,
    gw_classification,
    hp_3d_fan,
    hp_fit,
    hp_simplicial_3complex,
    intersection_lattice,
    lattice_fan_decomposition,
    minimal_generators,
    quotient_dim,
    relative_borel_moore_ranks,
    spline_dim,
    vertex_obstruction,
    vertex_star_fan,
)
from splinehom.chain import Kind, build_complex_family
from splinehom.hilbert import default_cap

crit = pytest.mark.criterion


@lru_cache(maxsize=None)
def ms_dim(d):
    m = model("morgan_scott_3d", 1)
    return spline_dim(m.fan, m.alpha, d)


# ---------------------------------------------------------------- 1

PUBLISHED = {1: 4, 2: 11, 3: 25, 4: 54, 5: 113, 6: 222, 7: 396}
DISAGREE = pytest.mark.xfail(strict=True, reason="exact rank gives 52/112 here; see decisions ledger")


@crit(1)
@pytest.mark.slow
@pytest.mark.parametrize("d", [pytest.param(d, marks=DISAGREE) if d in (4, 5) else d for d in PUBLISHED])
def test_c1_morgan_scott_dims(d):
    assert ms_dim(d) == PUBLISHED[d]


@pytest.mark.slow
def test_morgan_scott_dims_regression():
    # independent check of the two disputed values against the unreduced system
    m = model("morgan_scott_3d", 1)
    assert [ms_dim(d) for d in (4, 5)] == [52, 112]
    assert oracles.billera_rose_dim(m.fan, m.alpha, 4) == 52


# ---------------------------------------------------------------- 2

@crit(2)
def test_c2_morgan_scott_hilbert_polynomial():
    m = model("morgan_scott_3d", 1)
    rep = hp_simplicial_3complex(m.complex, m.alpha)
    assert rep.total == HilbertPoly([-3, Fraction(51, 2), -13, Fraction(5, 2)])
    assert rep.extra["C"] == 8
    for v in range(8):
        assert vertex_obstruction(m.complex, m.alpha, v).nonzero == [(2, 1)]


# ---------------------------------------------------------------- 3

def interior_counts(cx):
    """Interior face counts of a 3-dim simplicial complex, read off the cells."""
    cells = {k: [c for c, j in cx.cell_dim.items() if j == k] for k in range(4)}
    boundary = [t for t in cells[2] if sum(1 for T in cells[3] if t <= T) == 1]
    on_bd = lambda c: any(c <= t for t in boundary)  # noqa: E731
    return (len(cells[3]), len(cells[2]) - len(boundary),
            sum(1 for e in cells[1] if not on_bd(e)), sum(1 for v in cells[0] if not on_bd(v)))


@crit(3)
@pytest.mark.slow
@pytest.mark.parametrize("seed,ntets", [(1, 10), (2, 13), (3, 16)])
@pytest.mark.parametrize("d", [8, 9, 10])
def test_c3_generic_c1_formula(seed, ntets, d):
    m = random_model(seed, ntets)
    f3, f2, f1, f0 = interior_counts(m.complex)
    assert f3 == ntets
    assert spline_dim(m.fan, m.alpha, d) == oracles.generic_c1(f3, f2, f1, f0, d)


# ---------------------------------------------------------------- 4

@crit(4)
def test_c4_schlegel_r1_free_boundary():
    m = model("schlegel_cube", 1, -1)
    want = HilbertPoly([13, Fraction(-17, 2), Fraction(5, 2)])
    assert hp_3d_fan(m.fan, m.alpha).total == want
    assert hp_fit(m.fan, m.alpha, (5, 12)) == want


@crit(4)
def test_c4_schlegel_r3_vanishing_boundary():
    m = model("schlegel_cube", 3, 0)
    lo = default_cap(m.alpha)
    fit = hp_fit(m.fan, m.alpha, (lo, lo + 6))
    assert fit.coeff(0) == 87
    rep = hp_3d_fan(m.fan, m.alpha)
    assert rep.extra["naive_total"].coeff(0) == 81
    assert rep.total == fit
    assert any(f.startswith("generator-drop") for f in rep.flags)


# ---------------------------------------------------------------- 5

def random_codim2_ideal(rng):
    nvars = rng.choice((3, 4))
    while True:
        l1 = [rng.randint(-3, 3) for _ in range(nvars)]
        l2 = [rng.randint(-3, 3) for _ in range(nvars)]
        if oracles.exact_rank([l1, l2]) == 2:
            break
    mu = rng.randint(2, 6)
    pairs = set()
    while len(pairs) < mu:
        a, b = rng.randint(-4, 4), rng.randint(-4, 4)
        if (a, b) != (0, 0) and not any(a * q - b * p == 0 for p, q in pairs):
            pairs.add((a, b))
    gens = [((a, b), rng.randint(1, 6)) for a, b in sorted(pairs)]
    full = PowerIdeal.make(nvars, [([a * x + b * y for x, y in zip(l1, l2)], e) for (a, b), e in gens])
    return full, PowerIdeal.make(2, gens)


@crit(5)
@pytest.mark.slow
def test_c5_fat_points_property_suite():
    rng = random.Random(20240611)
    done = 0
    while done < 200:
        J, J2 = random_codim2_ideal(rng)
        count, beta, _ = minimal_generators(J)
        if count < 2:
            continue  # one power divides the rest: not a codim-2 ideal
        assert minimal_generators(J2)[1] == beta
        res = fat_point_resolution(beta)
        for d in range(res.Omega + 4):
            assert res.hilbert_function(d, J.nvars) == quotient_dim(J, d), (J, d)
        assert quotient_dim(J2, res.Omega - 1) > 0
        assert quotient_dim(J2, res.Omega) == 0
        done += 1


# ---------------------------------------------------------------- 6

def gw_agreement(name, s):
    m = model(name, None, s)
    checked = 0
    for W in intersection_lattice(m.fan, m.alpha).flats:
        if not 0 <= W.dim < m.fan.dim:
            continue
        for c in lattice_fan_decomposition(m.fan, m.alpha.minus_one, W, m.alpha).classes:
            g = gw_classification(m.fan, c.mask, c.minus_one, W)
            if g["case"] != 1:
                continue
            bm = relative_borel_moore_ranks(m.fan, c.minus_one, c.mask)
            assert g["H_top"] == bm[W.dim + 1], (W.describe(), c.facets)
            checked += 1
    return checked


@crit(6)
@pytest.mark.slow
@pytest.mark.parametrize("s", [-1, 0])
@pytest.mark.parametrize("name", corpus_names())
def test_c6_gw_matches_borel_moore(name, s):
    gw_agreement(name, s)


@crit(6)
def test_c6_cube_octahedron_torus_class():
    m = model("cube_octahedron")
    W = flat_from_forms([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)], 4)
    big = [c for c in lattice_fan_decomposition(m.fan, m.alpha.minus_one, W, m.alpha).classes
           if len(c.facets) == 8]
    assert len(big) == 1
    c = big[0]
    bm = relative_borel_moore_ranks(m.fan, c.minus_one, c.mask)
    g = gw_classification(m.fan, c.mask, c.minus_one, W)
    assert g["case"] == 1 and g["H_top"] == bm[2] == 0
    # the rank-one homology of the torus class sits one degree higher
    assert bm == [0, 0, 0, 1, 1]


@crit(6)
@pytest.mark.parametrize("s,vb,rank", [(-1, True, 0), (0, False, 1)])
def test_c6_schlegel_x_axis_class(s, vb, rank):
    m = model("schlegel_cube", 1, s)
    W = flat_from_forms([(1, 0, 0), (0, 0, 1)], 3)
    classes = [c for c in lattice_fan_decomposition(m.fan, m.alpha.minus_one, W, m.alpha).classes
               if len(c.facets) == 3]
    assert len(classes) == 1
    c = classes[0]
    g = gw_classification(m.fan, c.mask, c.minus_one, W)
    bm = relative_borel_moore_ranks(m.fan, c.minus_one, c.mask)
    assert g["has_vb"] is vb
    assert g["H_top"] == bm[2] == rank


# ---------------------------------------------------------------- 7

@crit(7)
@pytest.mark.slow
@pytest.mark.parametrize("name", corpus_names())
def test_c7_euler_identity(name):
    m = model(name)
    cx = build_complex_family(m.fan, m.alpha, kind=Kind.QUOTIENT)
    for d in range(11):
        assert euler_characteristic(m.fan, m.alpha, d) == cx.euler_from_homology(d), d


# ---------------------------------------------------------------- 8

def simplicial_3d(name):
    cx = model(name).complex
    return cx is not None and cx.ambient_dim == 3 and all(len(c) == k + 1 for c, k in cx.cell_dim.items())


STAR_CASES = [(n, v) for n in corpus_names() if simplicial_3d(n)
              for v in range(len(model(n).complex.vertices))]


@crit(8)
@pytest.mark.parametrize("name,v", STAR_CASES)
def test_c8_rigidity_iff_no_obstruction(name, v):
    m = model(name, 1)
    star, _, _ = vertex_star_fan(m.complex, v)
    R = c1_rigidity_matrix(star)
    ob = vertex_obstruction(m.complex, m.alpha, v)
    assert ob.stabilized
    assert R.full_rank == (ob.total == 0)


@crit(8)
def test_c8_morgan_scott_star_deficient():
    m = model("morgan_scott_star_w", 1)
    R = c1_rigidity_matrix(m.fan)
    assert not R.full_rank and R.rank == R.shape[1] - 1
    ms = model("morgan_scott_3d", 1)
    assert vertex_obstruction(ms.complex, ms.alpha, 0).nonzero == [(2, 1)]
