import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splinehom import (
    Fan,
    IntersectionNotFace,
    InvalidSmoothness,
    NonConvexCell,
    SmoothnessMap,
    UnknownFace,
    UnknownVertex,
    boundary_subfan,
    build_complex,
    dual_graph,
    homogenize,
    star,
    validate,
    vertex_star_fan,
)
from conftest import model

SQUARE = [(0, 0), (2, 0), (0, 2), (2, 2)]


def test_simplex_fan_counts():
    cx = build_complex(3, [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], [[0, 1, 2, 3]])
    fan = homogenize(cx)
    assert cx.f_vector() == [4, 6, 4, 1]
    assert fan.f_vector() == [1, 4, 6, 4, 1]
    assert fan.check_boundary_squared()


def test_corpus_f_vectors():
    want = {
        "schlegel_cube": [1, 8, 12, 5],
        "morgan_scott_3d": [1, 8, 24, 32, 15],
        "morgan_scott_star_w": [1, 6, 12, 8],
        "cube_octahedron": [1, 14, 48, 62, 27],
        "hyper_tetrahedron": [1, 8, 16, 14, 5],
        "hyper_cube": [1, 16, 32, 24, 7],
        "single_simplex": [1, 4, 6, 4, 1],
        "two_simplices": [1, 5, 9, 7, 2],
    }
    for name, fv in want.items():
        m = model(name)
        assert m.fan.f_vector() == fv, name
        assert m.fan.check_boundary_squared()
        assert validate(m.fan) == {"pure": True, "non_branching": True, "hereditary": True}


def test_non_convex_cell():
    with pytest.raises(NonConvexCell):
        build_complex(2, [(0, 0), (4, 0), (0, 4), (1, 1)], [[0, 1, 2, 3]])


def test_overlap_detected():
    with pytest.raises(IntersectionNotFace):
        build_complex(2, [(0, 0), (2, 0), (0, 2), (1, 0), (3, 3)], [[0, 1, 2], [3, 1, 4]])


def test_unknown_vertex():
    with pytest.raises(UnknownVertex):
        build_complex(2, SQUARE, [[0, 1, 7]])


def test_branching_and_hereditary_flags():
    pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, -1, 0)]
    fan = homogenize(build_complex(3, pts, [[0, 1, 2], [0, 1, 3], [0, 1, 4]]))
    assert validate(fan)["non_branching"] is False
    bow = homogenize(build_complex(2, [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)], [[0, 1, 2], [0, 3, 4]]))
    assert validate(bow)["hereditary"] is False


def test_incidence_signs_square_to_zero_after_build():
    m = model("cube_octahedron")
    assert m.fan.check_boundary_squared()


def test_boundary_and_star():
    m = model("two_simplices")
    fan = m.fan
    bd = boundary_subfan(fan)
    inner = [w for w in fan.walls if len(fan.parents[w]) == 2]
    assert len(inner) == 1
    assert inner[0] not in bd
    shared = fan.faces[inner[0]]
    st_ = star(fan, shared.id)
    assert len([f for f in st_ if fan.faces[f].dim == fan.dim]) == 2


def test_dual_graph_connected():
    for name in ("schlegel_cube", "morgan_scott_3d", "hyper_cube"):
        g = dual_graph(model(name).fan)
        assert g.number_of_nodes() == len(model(name).fan.facets)
        import networkx as nx
        assert nx.is_connected(g)


def test_smoothness_validation():
    fan = model("schlegel_cube").fan
    inner = next(w for w in fan.walls if len(fan.parents[w]) == 2)
    vals = {w: 1 for w in fan.walls}
    vals[inner] = -1
    with pytest.raises(InvalidSmoothness):
        SmoothnessMap(fan, vals)
    with pytest.raises(InvalidSmoothness):
        SmoothnessMap(fan, {w: 1 for w in fan.walls[1:]})
    al = SmoothnessMap.uniform(fan, 2, -1)
    assert al.max_alpha() == 2
    assert all(fan.faces[w].dim <= fan.dim - 1 for w in al.minus_one)


def test_unknown_face():
    fan = model("single_simplex").fan
    with pytest.raises(UnknownFace):
        fan.face((0, 9))


def test_vertex_star_fan_morgan_scott():
    m = model("morgan_scott_3d")
    star_fan, sa, far = vertex_star_fan(m.complex, 0, {frozenset(m.fan.faces[w].rays): a
                                                       for w, a in m.alpha.items()})
    assert star_fan.ambient_dim == 3
    assert len(far) == star_fan.f_vector()[1]
    assert sa is not None


@given(st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9)),
                min_size=1, max_size=1),
       st.integers(1, 6))
@settings(max_examples=40, deadline=None)
def test_translated_simplex_is_valid(shift, scale):
    (dx, dy, dz), = shift
    pts = [(dx, dy, dz), (dx + scale, dy, dz), (dx, dy + scale, dz), (dx, dy, dz + scale)]
    fan = homogenize(build_complex(3, pts, [[0, 1, 2, 3]]))
    assert fan.f_vector() == [1, 4, 6, 4, 1]
    assert fan.check_boundary_squared()


def test_fan_from_cones_quadrants():
    fan = Fan.from_cones(2, [(1, 0), (0, 1), (-1, 0), (0, -1)], [[0, 1], [1, 2], [2, 3], [3, 0]])
    assert fan.f_vector() == [1, 4, 4]
    assert all(len(fan.parents[w]) == 2 for w in fan.walls)
