import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splinehom import (
    ComplexSpec,
    ParseError,
    ValidationError,
    corpus_names,
    load_corpus,
    parse_input,
    parse_spec,
    random_triangulation,
)

TRI = {"ambient_dim": 2, "vertices": [[0, 0], [1, 0], [0, 1]], "facets": [[0, 1, 2]]}


def spec(**kw):
    d = json.loads(json.dumps(TRI))
    d.update(kw)
    return d


def test_rationals_accepted():
    s = parse_spec(spec(vertices=[[0, "1/3"], [" 2/4 ", 0], [0, 1]]))
    assert s.vertices[0][1] == Fraction(1, 3)
    assert s.vertices[1][0] == Fraction(1, 2)


@pytest.mark.parametrize("bad", ["1/0", "x", 1.5, True, None])
def test_bad_coordinate_is_parse_error(bad):
    with pytest.raises(ParseError, match=r"vertices\[0\]\[0\]"):
        parse_spec(spec(vertices=[[bad, 0], [1, 0], [0, 1]]))


def test_json_syntax_error_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"ambient_dim": 2,\n  "vertices": [[0,0],]\n}')
    with pytest.raises(ParseError, match="line 2 column"):
        parse_input(p)
    with pytest.raises(ParseError):
        parse_input(tmp_path / "missing.json")


@pytest.mark.parametrize("patch,exc", [
    ({"mode": "mesh"}, ParseError),
    ({"ambient_dim": "2"}, ParseError),
    ({"ambient_dim": 0}, ValidationError),
    ({"vertices": []}, ParseError),
    ({"vertices": [[0, 0, 0], [1, 0], [0, 1]]}, ValidationError),
    ({"facets": [[0, 1, 5]]}, ValidationError),
    ({"facets": [[0, 1, 1]]}, ValidationError),
    ({"facets": "012"}, ParseError),
    ({"smoothness": {"uniform_r": -1}}, ValidationError),
    ({"smoothness": {"boundary_s": -2}}, ValidationError),
    ({"smoothness": {"walls": [{"vertices": [0, 1]}]}}, ParseError),
    ({"smoothness": {"walls": [{"vertices": [0, 1], "alpha": 1},
                               {"vertices": [1, 0], "alpha": 2}]}}, ValidationError),
    ({"smoothness": {"walls": [{"vertices": [0, 1], "alpha": -3}]}}, ValidationError),
    ({"mode": "fan", "vertices": [[0, 0], [1, 0], [0, 1]]}, ValidationError),
])
def test_rejections(patch, exc):
    with pytest.raises(exc):
        parse_spec(spec(**patch))


def test_geometry_errors_become_validation_errors():
    flat = spec(vertices=[[0, 0], [1, 0], [2, 0]])
    with pytest.raises(ValidationError):
        parse_spec(flat).build()
    with pytest.raises(ValidationError, match="codimension-one"):
        parse_spec(spec(smoothness={"walls": [{"vertices": [0], "alpha": 1}]})).build()


def test_wall_override_applies():
    m = parse_spec(spec(smoothness={"uniform_r": 1, "boundary_s": -1,
                                    "walls": [{"vertices": [1, 0], "alpha": 2}]})).build()
    vals = sorted(a for _, a in m.alpha.items())
    assert vals == [-1, -1, 2]


coord = st.fractions(min_value=-9, max_value=9, max_denominator=5)


@given(st.lists(st.tuples(coord, coord, coord), min_size=4, max_size=7),
       st.integers(0, 3), st.integers(-1, 3), st.text(max_size=8))
@settings(max_examples=100)
def test_dumps_round_trip(verts, r, s, name):
    facets = ((0, 1, 2, 3), tuple(range(1, len(verts))))
    cs = ComplexSpec(3, tuple(verts), facets, "complex", None, r, s, (((0, 1, 2), 2),), name)
    assert parse_spec(json.loads(cs.dumps())) == cs


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_loads_and_builds(name):
    cs = load_corpus(name)
    assert cs.name == name
    m = cs.build()
    assert m.fan.dim == cs.ambient_dim + (1 if cs.mode == "complex" else 0)
    assert parse_spec(json.loads(cs.dumps())) == cs


def test_corpus_names_and_unknown():
    assert {"morgan_scott_3d", "schlegel_cube", "cube_octahedron"} <= set(corpus_names())
    with pytest.raises(ParseError):
        load_corpus("nope")


@pytest.mark.parametrize("seed,n", [(1, 10), (2, 13), (3, 16)])
def test_random_triangulation(seed, n):
    a, b = random_triangulation(seed, n), random_triangulation(seed, n)
    assert a == b and len(a.facets) == n and len(a.vertices) == 4 + (n - 1) // 3
    m = a.build()
    assert m.complex.f_vector()[-1] == n


def test_random_triangulation_seeds_differ_and_count_rule():
    assert random_triangulation(1).vertices != random_triangulation(2).vertices
    with pytest.raises(ValidationError):
        random_triangulation(0, 12)
