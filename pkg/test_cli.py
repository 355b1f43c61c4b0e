import json
import logging
import math
from fractions import Fraction

import pytest

from bounds import subsystem_bounds
from cli import contour_exponents, emit_contours, main
from constructions import bacon_shor


@pytest.fixture(autouse=True)
def restore_root_handlers():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def bs3_file(tmp_path):
    path = tmp_path / "bs3.json"
    path.write_text(json.dumps(bacon_shor(3).to_dict()))
    return str(path)


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_bounds_command(capsys):
    assert main(["bounds", "-n", "1e6", "-k", "1e4", "-d", "1e3", "-D", "2"]) == 0
    report = _json(capsys)
    assert report["ell_star"] == pytest.approx(math.sqrt(10), rel=1e-4)
    assert report["regime"] == "dimension-branch"


def test_params_command(capsys, bs3_file):
    assert main(["params", bs3_file]) == 0
    params = _json(capsys)
    assert (params["n"], params["k"], params["g"]) == (9, 1, 4)


def test_contour_exponents_are_exact():
    assert contour_exponents(1, 1, 2) == (Fraction(1, 2), Fraction(1))
    assert contour_exponents(Fraction(0), Fraction(4, 5), 2) == (Fraction(3, 10), Fraction(4, 5))
    assert contour_exponents(Fraction(3, 10), Fraction(1, 5), 2)[0] == 0
    assert contour_exponents(1, 1, 3, "projector")[0] == Fraction(1, 3)
    with pytest.raises(ValueError):
        contour_exponents(0, 0, 2, "other")


def test_contours_agree_with_bounds():
    n = 1e6
    table = emit_contours(2, grid_step=0.1)
    assert len(table.grid) == 121
    for row in table.grid:
        report = subsystem_bounds(n, n ** row["kappa"], n ** row["delta"], 2)
        expected = max(math.log(report.ell_star) / math.log(n), 0.0)
        assert row["log_ell_star"] == pytest.approx(expected, abs=1e-6)


def test_contours_csv(capsys):
    assert main(["contours", "-D", "2", "--grid-step", "0.5", "--csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "kappa,delta,log_ell_star,log_M_star"
    assert len(lines) == 10


def test_contours_reject_coarse_grid():
    assert main(["contours", "--grid-step", "0.7"]) == 2


def test_input_errors(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["frobnicate"]) == 2
    assert main(["params", str(broken)]) == 2
    assert main(["params", str(tmp_path / "missing.json")]) == 2
    assert main(["bounds", "-n", "10", "-k", "0", "-d", "3", "-D", "2"]) == 2


def test_malformed_documents_are_input_errors(tmp_path):
    box = tmp_path / "box.json"
    box.write_text(json.dumps({"lo": [0, 0]}))
    masses = tmp_path / "masses.json"
    masses.write_text(json.dumps({"points": [[1, 0.5]]}))
    assert main(["subdivide", "--box", str(box), "--masses", str(masses), "--ell", "1", "--d1", "1"]) == 2

    code = tmp_path / "code.json"
    code.write_text(json.dumps({"n": 2, "gauge_generators": [5]}))
    assert main(["params", str(code)]) == 2
    code.write_text(json.dumps([1, 2]))
    assert main(["params", str(code)]) == 2


def test_randomized_commands_need_a_seed(tmp_path, bs3_file):
    points = tmp_path / "points.json"
    points.write_text(json.dumps({"points": [[0.3, 0.7]]}))
    assert main(["tile", "--y", str(points), "--width", "8", "--ell", "1", "-D", "2"]) == 2
    assert main(["partition", bs3_file, "--ell", "1.5"]) == 2


def test_stuck_sweep_exits_with_failure(capsys, bs3_file):
    assert main(["sweep", bs3_file, "--ell", "2", "--tau", "6", "-d", "3"]) == 1
    lines = capsys.readouterr().out.splitlines()
    header = json.loads(lines[0])
    assert header["outcome"] == "stuck-at"
    assert header["stuck_step"] == 2


def test_sweep_trace(capsys, bs3_file):
    assert main(["sweep", bs3_file, "--ell", "2", "--tau", "6", "-d", "3", "--trace"]) == 1
    assert capsys.readouterr().out.startswith("sweep certificate (strict): stuck-at")


def test_construct_writes_artifacts(capsys, tmp_path):
    out = tmp_path / "store"
    assert main(["construct", "--family", "surface", "--size", "3", "--out", str(out)]) == 0
    assert _json(capsys)["family"] == "surface"
    index = json.loads((out / "_index.json").read_text())
    assert index["kinds"] == {"code": ["surface"], "embedding": ["surface"]}


def test_tile_is_deterministic(capsys, tmp_path):
    points = tmp_path / "points.json"
    points.write_text(json.dumps({"points": [[0.3, 0.7], [4.1, 2.2], [9.5, 9.9]]}))
    args = ["tile", "--y", str(points), "--width", "8", "--ell", "1", "-D", "2", "--seed", "5"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first


def test_documents_saved_with_out(tmp_path, bs3_file):
    out = tmp_path / "store"
    assert main(["sweep", bs3_file, "--ell", "2", "--tau", "6", "-d", "3", "--out", str(out)]) == 1
    assert main(["partition", bs3_file, "--ell", "1.5", "--seed", "0", "--out", str(out), "--name", "bs3"]) == 0
    assert main(["contours", "--grid-step", "0.5", "--out", str(out)]) == 0
    index = json.loads((out / "_index.json").read_text())
    assert index["kinds"] == {"certificate": ["sweep"], "contours": ["subsystem-D2"], "partition": ["bs3"]}
    saved = json.loads((out / "certificate.sweep.json").read_text())
    assert saved["outcome"] == "stuck-at"
