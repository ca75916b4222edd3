import json
import subprocess
import sys

import pytest

from splinehom import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def both(capsys, *argv):
    c1, md, _ = run(capsys, *argv)
    c2, js, _ = run(capsys, *argv, "--json")
    assert c1 == c2
    return c1, md, json.loads(js)


def md_rows(md, title):
    """Parse the markdown table under ``## title`` back into string cells."""
    lines = md.splitlines()
    i = lines.index(f"## {title}") + 4
    rows = []
    while i < len(lines) and lines[i].startswith("|"):
        rows.append([c.strip() for c in lines[i].strip("|").split("|")])
        i += 1
    return rows


@pytest.mark.parametrize("argv,title", [
    (("dim", "two_simplices", "--degrees", "0..4"), "spline dimensions"),
    (("euler", "schlegel_cube", "--degrees", "2..4"), "Euler characteristic of R/J"),
    (("homology", "single_simplex", "--degrees", "0..2"), "homology of R/J"),
    (("rigidity", "morgan_scott_3d"), "C^1 rigidity matrices"),
    (("certify-primes", "schlegel_cube"), "flat verdicts"),
])
def test_markdown_and_json_agree(capsys, argv, title):
    code, md, js = both(capsys, *argv)
    assert code == 0
    table = next(t for t in js["tables"] if t["title"] == title)
    assert md_rows(md, title) == [[cli._cell(c) for c in row] for row in table["rows"]]
    for k, v in js["values"].items():
        assert f"- {k}: {cli._cell(v)}" in md


def test_dim_values(capsys):
    _, _, js = both(capsys, "dim", "two_simplices", "--degrees", "0..3")
    assert js["tables"][0]["rows"][0] == [0, 1]
    assert js["params"] == {"r": 1, "s": -1, "degrees": "0..3"}


def test_hilbert_poly_schlegel(capsys):
    code, md, js = both(capsys, "hilbert-poly", "schlegel_cube", "--r", "1", "--s", "-1")
    assert code == 0
    assert js["values"]["hilbert_polynomial"] == "5/2*d^2 - 17/2*d + 13"
    assert "- hilbert_polynomial: 5/2*d^2 - 17/2*d + 13" in md


def test_certify_cube_octahedron(capsys):
    code, out, _ = run(capsys, "certify-primes", "cube_octahedron", "--json")
    js = json.loads(out)
    assert code == 0 and len(js["values"]["certified"]) == 3
    verdicts = {row[0]: row[4] for row in js["tables"][0]["rows"]}
    assert all(verdicts[f] == "CERTIFIED_ASSOCIATED" for f in js["values"]["certified"])


def test_exit_usage(capsys):
    assert run(capsys, "frobnicate", "schlegel_cube")[0] == 1
    assert run(capsys, "dim", "schlegel_cube", "--degrees", "5..2")[0] == 1
    assert run(capsys, "dim")[0] == 1
    assert run(capsys, "hilbert-poly", "hyper_cube", "--degrees", "3..5")[0] == 1


def test_exit_validation(capsys, tmp_path):
    assert run(capsys, "dim", "no_such_example")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"ambient_dim": 2, "vertices": [["1/0", 0]], "facets": [[0]]}')
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "vertices[0][0]" in err
    flat = tmp_path / "flat.json"
    flat.write_text(json.dumps({"ambient_dim": 2, "vertices": [[0, 0], [1, 0], [2, 0]],
                                "facets": [[0, 1, 2]]}))
    assert run(capsys, "validate", str(flat))[0] == 2
    assert run(capsys, "vertex-obstructions", "morgan_scott_star_w")[0] == 2


def test_exit_not_stabilized_prints_partial_report(capsys):
    code, out, err = run(capsys, "vertex-obstructions", "morgan_scott_3d", "--cap", "2", "--json")
    assert code == 3 and "not stabilized" in err
    js = json.loads(out)
    assert any(not row[3] for row in js["tables"][0]["rows"])


def test_random_input_uses_seed(capsys):
    _, _, a = both(capsys, "validate", "random", "--seed", "4")
    _, _, b = both(capsys, "validate", "random", "--seed", "4")
    assert a == b and a["input"] == "random_seed4_13"
    assert a["values"]["complex_f_vector"][-1] == 13


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("SPLINEHOM_THREADS", "2")
    assert run(capsys, "validate", "single_simplex")[0] == 0
    monkeypatch.setenv("SPLINEHOM_THREADS", "lots")
    assert run(capsys, "validate", "single_simplex")[0] == 1


def test_console_script_entry_point():
    p = subprocess.run([sys.executable, "-m", "splinehom.cli", "validate", "single_simplex", "--json"],
                       capture_output=True, text=True)
    assert p.returncode == 0
    assert json.loads(p.stdout)["values"]["f_vector"]
