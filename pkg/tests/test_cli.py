import json
import re
import shutil
import subprocess

import numpy as np
import pytest

from maniplex import (NotInvolution, SchemaError, catalog, mix, pip_check,
                      rooted_isomorphic, variance_group_lower)
from maniplex.cli import export_dot, main, parse, parse_document, serialize

CATALOG = ["polygon(2)", "polygon(3)", "polygon(7)", "point(4)", "two_orbit_stg(3)",
           "two_orbit_stg(4,1,2)", "cube(3)", "cube(4)", "simplex(4)", "torus_44(1,0)",
           "torus_44(1,2)", "torus_44(3,1)", "st3_12", "st3_2"]


def write(tmp_path, name, rp):
    path = tmp_path / name
    path.write_text(serialize(rp, name))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------- documents

def test_serialize_polygon():
    doc = json.loads(serialize(catalog.polygon(3)))
    assert doc["rank"] == 2 and doc["flag_count"] == 6
    assert len(doc["connections"]) == 2
    for row in doc["connections"]:
        assert [row[x] for x in row] == list(range(6))


@pytest.mark.parametrize("spec", CATALOG)
def test_round_trip_bit_exact(spec):
    rp = catalog.build(spec).result
    text = serialize(rp, spec)
    back, name = parse_document(text)
    assert name == spec
    assert np.array_equal(back.connections, rp.connections)
    assert back.base_flag == rp.base_flag
    assert serialize(back, name) == text


def test_base_flag_defaults_to_zero():
    rp = parse('{"rank": 1, "flag_count": 2, "connections": [[1, 0]]}')
    assert rp.base_flag == 0


def test_non_involution_has_path():
    doc = {"rank": 2, "flag_count": 3, "connections": [[1, 0, 2], [1, 2, 0]]}
    with pytest.raises(NotInvolution) as exc:
        parse(json.dumps(doc))
    assert exc.value.path == "connections[1]"
    assert "connections[1]" in str(exc.value)


@pytest.mark.parametrize("doc,path", [
    ([1, 2], ""),
    ({"flag_count": 2, "connections": [[1, 0]]}, "rank"),
    ({"rank": 1, "flag_count": 2, "connections": [[1, 0]], "extra": 1}, "extra"),
    ({"rank": 2, "flag_count": 2, "connections": [[1, 0]]}, "connections"),
    ({"rank": 2, "flag_count": 2, "connections": [[1, 0], [1]]}, "connections[1]"),
    ({"rank": 2, "flag_count": 2, "connections": [[1, 0], [0, 7]]}, "connections[1][1]"),
    ({"rank": 1, "flag_count": 2, "connections": [[1, 0]], "base_flag": 2}, "base_flag"),
    ({"rank": 1, "flag_count": 2, "connections": [[1.0, 0]]}, "connections[0][0]"),
])
def test_schema_errors(doc, path):
    with pytest.raises(SchemaError) as exc:
        parse(json.dumps(doc))
    assert exc.value.path == path


def test_bad_json():
    with pytest.raises(SchemaError):
        parse("{rank: 2")


# ---------------------------------------------------------------- DOT

def dot_edges(text):
    return re.findall(r"^\s*(\d+) -- (\d+) \[color=(\d+)", text, re.M)


def test_dot_polygon2():
    text = export_dot(catalog.polygon(2))
    assert len(re.findall(r"^\s*\d+ \[label", text, re.M)) == 4
    assert len(dot_edges(text)) == 4


@pytest.mark.parametrize("n,I", [(3, ()), (4, (0, 3)), (4, (1,)), (5, (0, 1, 2))])
def test_dot_two_orbit(n, I):
    text = export_dot(catalog.two_orbit_stg(n, I))
    edges = dot_edges(text)
    loops = [e for e in edges if e[0] == e[1]]
    parallel = [e for e in edges if e[0] != e[1]]
    assert len(parallel) == n - len(I)
    assert len(loops) == 2 * len(I)
    assert {int(e[2]) for e in loops} == set(I)


def test_dot_three_orbit_mix(tmp_path):
    a, b = catalog.three_orbit_pair()
    path = tmp_path / "three_orbit.dot"
    text = export_dot(mix(a, b).mix, str(path))
    assert path.read_text() == text
    assert len(re.findall(r"^\s*\d+ \[label", text, re.M)) == 9
    assert "doublecircle" in text
    assert export_dot(mix(a, b).mix) == text  # deterministic


# ---------------------------------------------------------------- commands

def test_mix_command(tmp_path, capsys):
    a = write(tmp_path, "a.json", catalog.polygon(2))
    b = write(tmp_path, "b.json", catalog.polygon(3))
    out = tmp_path / "out.json"
    code, _, _ = run(["mix", a, b, "-o", str(out)], capsys)
    assert code == 0
    assert rooted_isomorphic(parse(out.read_text()), catalog.polygon(6))


def test_pip_command(tmp_path, capsys):
    cube = write(tmp_path, "cube.json", catalog.cube(3))
    code, out, _ = run(["pip", cube], capsys)
    assert code == 0 and "polytope: true" in out
    code, out, _ = run(["pip", "torus_44(1,0)"], capsys)
    assert code == 1 and "polytope: false" in out and "witness" in out
    code, out, _ = run(["pip", "--catalog", "torus_44(1,1)", "--mode", "facet"], capsys)
    assert code == 1


def test_info_command(tmp_path, capsys):
    t = write(tmp_path, "torus_1_2.json", catalog.torus_44(1, 2))
    code, out, _ = run(["info", t], capsys)
    assert code == 0
    assert out.splitlines()[0] == "40 flags, 2 orbits, class 2_{}"
    code, out, _ = run(["info", "cube(3)"], capsys)
    assert out.splitlines()[0] == "48 flags, 1 orbit, regular"


def test_variance_command(capsys):
    code, out, _ = run(["variance", "polygon(6)", "polygon(4)"], capsys)
    assert code == 0
    vg = variance_group_lower(catalog.polygon(6), catalog.polygon(4))
    assert f"order: {vg.order}" in out and "well-defined: true" in out


def test_src_command(tmp_path, capsys):
    out = tmp_path / "src.json"
    code, text, _ = run(["src", "torus_44(1,2)", "-o", str(out)], capsys)
    assert code == 0
    assert parse(out.read_text()).flag_count == 200
    assert "report: polytope true" in text


def test_admissible_command(capsys):
    assert run(["admissible", "torus_44(1,2)", "two_orbit_stg(3)"], capsys)[0] == 0
    assert run(["admissible", "torus_44(1,2)", "point(3)"], capsys)[0] == 1


def test_double_dual_validate(tmp_path, capsys):
    out = tmp_path / "d.json"
    assert run(["double", "torus_44(1,0)", "-I", "0", "-o", str(out)], capsys)[0] == 0
    assert parse(out.read_text()).flag_count in (8, 16)
    code, text, _ = run(["dual", "cube(3)"], capsys)
    assert code == 0 and parse(text).flag_count == 48
    code, text, _ = run(["validate", str(out)], capsys)
    assert code == 0 and text.startswith("valid")


def test_base_and_rank_flags(capsys):
    code, out, _ = run(["admissible", "torus_44(1,2)", "torus_44(1,2)", "--base2", "1"], capsys)
    assert code == 1
    code, _, err = run(["info", "cube(3)", "--rank", "4"], capsys)
    assert code == 2 and "error" in err


def test_export_dot_command(tmp_path, capsys):
    path = tmp_path / "p.dot"
    assert run(["export-dot", "polygon(2)", "-o", str(path)], capsys)[0] == 0
    assert path.read_text() == export_dot(catalog.polygon(2), name="polygon(2)")


def test_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rank": 2, "flag_count": 3, "connections": [[1, 0, 2], [1, 2, 0]]}')
    code, _, err = run(["validate", str(bad)], capsys)
    assert code == 2 and "connections[1]" in err
    assert run(["info", "nonsense(3)"], capsys)[0] == 2
    assert run(["mix", "cube(3)"], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2
    assert run(["pip", "point(3)"], capsys)[0] == 2


def test_cli_verdicts_match_library(capsys):
    for spec in ["cube(3)", "torus_44(1,1)", "torus_44(2,1)", "simplex(4)"]:
        code, _, _ = run(["pip", spec], capsys)
        assert (code == 0) == pip_check(catalog.build(spec).result).verdict


@pytest.mark.skipif(shutil.which("maniplex") is None, reason="console script not installed")
def test_console_script():
    out = subprocess.run(["maniplex", "info", "polygon(5)"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("10 flags")


def test_options_before_command(capsys):
    code, out, _ = run(["pip", "--mode", "medial-transitive", "cube(4)"], capsys)
    assert code == 0 and "polytope: true" in out
    code, out, _ = run(["--rank", "3", "info", "cube(3)"], capsys)
    assert code == 0
