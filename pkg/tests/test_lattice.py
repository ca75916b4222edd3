import pytest

import oracles
from conftest import model
from splinehom import (
    PreconditionFlatNotCommon,
    Verdict,
    build_gw_graph,
    certify_associated_flats,
    flat_from_forms,
    flat_from_vectors,
    gw_classification,
    intersection_lattice,
    is_star,
    lattice_fan_decomposition,
    relative_borel_moore_ranks,
)
from splinehom.lattice import relative_is_zero_cone

SMALL = [("schlegel_cube", 1, -1), ("schlegel_cube", 1, 0), ("morgan_scott_star_w", 1, -1),
         ("hyper_tetrahedron", 1, -1), ("hyper_cube", 1, -1), ("hyper_cube", 1, 0),
         ("two_simplices", 1, -1)]


def _decompose(m, W):
    return lattice_fan_decomposition(m.fan, m.alpha.minus_one, W, m.alpha)


@pytest.mark.parametrize("name,r,s", SMALL)
def test_lattice_closed_under_intersection(name, r, s):
    m = model(name, r, s)
    L = intersection_lattice(m.fan, m.alpha)
    N = m.fan.ambient_dim
    for i, A in enumerate(L.flats):
        for B in L.flats[i + 1:]:
            meet = flat_from_forms(list(A.forms) + list(B.forms), N)
            assert meet in L


@pytest.mark.parametrize("name,r,s", SMALL)
def test_support_is_monotone(name, r, s):
    m = model(name, r, s)
    L = intersection_lattice(m.fan, m.alpha)
    for f in m.fan.faces:
        for p in m.fan.parents[f.id]:
            # a flat inside the span of a face is inside the span of any face containing it
            assert L.support(f.id) <= L.support(p)


@pytest.mark.parametrize("name,r,s", SMALL)
def test_borel_moore_matches_sympy(name, r, s):
    m = model(name, r, s)
    L = intersection_lattice(m.fan, m.alpha)
    for W in L.flats:
        if not 1 <= W.dim < m.fan.dim:
            continue
        for c in _decompose(m, W).classes:
            live = c.mask.members - c.minus_one.members
            assert relative_borel_moore_ranks(m.fan, c.minus_one, c.mask) == \
                oracles.incidence_homology_ranks(m.fan, live)


def test_schlegel_whole_cone_topology():
    m = model("schlegel_cube", 1, -1)
    from splinehom import SubfanMask, boundary_subfan
    assert relative_borel_moore_ranks(m.fan, boundary_subfan(m.fan)) == [0, 0, 0, 1]
    assert relative_borel_moore_ranks(m.fan, SubfanMask.empty()) == [0, 0, 0, 0]
    assert relative_is_zero_cone(m.fan, SubfanMask(frozenset({0})))


def test_schlegel_central_axis_class():
    m = model("schlegel_cube", 1, -1)
    W = flat_from_forms([(0, 1, 0), (0, 0, 1)], 3)
    classes = [c for c in _decompose(m, W).classes if not c.trivial]
    assert len(classes) == 1 and len(classes[0].facets) == 4
    c = classes[0]
    g = gw_classification(m.fan, c.mask, c.minus_one, W)
    assert g["H_top"] == 1 and not g["has_vb"]
    assert len(g["graph"].vertices) == 4 and g["graph"].graph.number_of_edges() == 4
    assert is_star(m.fan, c.mask) is None


def test_schlegel_interior_ray_two_components():
    m = model("schlegel_cube", 1, -1)
    W = flat_from_vectors([m.fan.rays[0]], 3)
    sizes = sorted(len(c.facets) for c in _decompose(m, W).classes if not c.trivial)
    assert sizes == [2, 3]


@pytest.mark.parametrize("s,vb,rank", [(-1, True, 0), (0, False, 1)])
def test_schlegel_x_axis_class(s, vb, rank):
    m = model("schlegel_cube", 1, s)
    W = flat_from_forms([(1, 0, 0), (0, 0, 1)], 3)
    (c,) = [c for c in _decompose(m, W).classes if not c.trivial]
    assert len(c.facets) == 3
    assert is_star(m.fan, c.mask) is None
    g = gw_classification(m.fan, c.mask, c.minus_one, W)
    assert g["has_vb"] is vb and g["H_top"] == rank
    assert relative_borel_moore_ranks(m.fan, c.minus_one, c.mask)[2] == rank


def test_origin_flat_single_class():
    # the zero flat lies in every wall, so every facet is in one class
    m = model("hyper_cube")
    W = flat_from_forms([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)], 4)
    dec = _decompose(m, W)
    assert len(dec.classes) == 1 and len(dec.classes[0].facets) == 7
    assert dec.classes[0].mask.members == m.fan.whole().members


def test_whole_space_singletons():
    # no wall contains the whole space, so no chain of facets exists
    m = model("hyper_cube")
    dec = _decompose(m, flat_from_forms([], 4))
    assert len(dec.classes) == 7 and all(c.trivial for c in dec.classes)


def test_gw_precondition():
    m = model("schlegel_cube", 1, -1)
    W = flat_from_forms([(0, 1, 0), (0, 0, 1)], 3)
    with pytest.raises(PreconditionFlatNotCommon):
        build_gw_graph(m.fan, m.fan.whole(), m.alpha.minus_one, W)


def test_simplicial_classes_are_stars():
    m = model("morgan_scott_star_w")
    L = intersection_lattice(m.fan, m.alpha)
    for W in L.flats:
        if W.dim == 0 or W.dim == 3:
            continue
        for c in _decompose(m, W).classes:
            assert is_star(m.fan, c.mask) is not None


def _certified(m):
    names = ["w", "x", "y", "z"][:m.fan.ambient_dim] if m.fan.ambient_dim == 4 else ["w", "x", "y"]
    return sorted({(v.flat.describe(names), v.homology_index) for v in certify_associated_flats(m.fan, m.alpha)
                   if v.verdict is Verdict.CERTIFIED_ASSOCIATED})


def test_certify_hyper_cube_free_boundary():
    assert _certified(model("hyper_cube", 1, -1)) == [
        ("(x, y)", 3), ("(x, y, z)", 2), ("(x, z)", 3), ("(y, z)", 3)]


def test_certify_hyper_cube_vanishing_boundary_adds_three():
    got = dict.fromkeys(f for f, i in _certified(model("hyper_cube", 1, 0)) if i == 3)
    assert {"(w, x)", "(w, y)", "(w, z)", "(x, y)", "(x, z)", "(y, z)"} <= set(got)


def test_certify_hyper_tetrahedron():
    assert _certified(model("hyper_tetrahedron", 1, -1)) == [("(x, y, z)", 2)]


def test_certify_simplicial_none():
    assert _certified(model("morgan_scott_3d")) == []
    for v in certify_associated_flats(model("morgan_scott_3d").fan, model("morgan_scott_3d").alpha):
        if v.homology_index == v.flat.dim + 1:
            assert v.verdict is Verdict.EXCLUDED


def test_higher_degree_candidates_stay_unknown():
    m = model("hyper_cube", 1, -1)
    res = certify_associated_flats(m.fan, m.alpha, include_unknown=True)
    emb = [v for v in res if v.method == "embedded-candidate"]
    assert emb and all(v.verdict is Verdict.UNKNOWN for v in emb)
