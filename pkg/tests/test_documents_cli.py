import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from helly_lattice import documents
from helly_lattice.bounds import bound_report, rect_bounds
from helly_lattice.cli import main
from helly_lattice.constructions import fibonacci_polygon, five_point, seven_point
from helly_lattice.lattice import LatticeSpec, Window
from helly_lattice.render import render_svg
from helly_lattice.scalar import surd
from helly_lattice.search import SearchConfig, max_empty_polygon

PHI = surd(F(1, 2), F(1, 2), 5)


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- documents


@pytest.mark.parametrize("report", [five_point(2), seven_point(PHI), fibonacci_polygon(4)],
                         ids=["five", "seven", "fib"])
def test_polygon_document_round_trip(report):
    doc = documents.construction_document(report)
    back = documents.loads(documents.dumps(doc))
    assert back["format"] == documents.POLYGON_FORMAT
    poly = documents.load_polygon(back)
    assert poly.spec == report.polygon.spec and poly.vertices == report.polygon.vertices


def test_documents_are_deterministic_apart_from_metadata():
    a = documents.construction_document(seven_point(F(17, 10)))
    b = documents.construction_document(seven_point(F(17, 10)))
    assert documents.dumps(documents.strip_metadata(a)) == documents.dumps(documents.strip_metadata(b))
    spec = LatticeSpec.diagonal(F(3, 2))
    s1 = documents.search_document(max_empty_polygon(spec, SearchConfig(Window(4, 4))))
    s2 = documents.search_document(max_empty_polygon(spec, SearchConfig(Window(4, 4))))
    assert documents.strip_metadata(s1) == documents.strip_metadata(s2)
    assert "elapsed_seconds" in s1["metadata"]


def test_search_document_embeds_polygon():
    res = max_empty_polygon(LatticeSpec.diagonal(2), SearchConfig(Window(3, 3)))
    doc = documents.loads(documents.dumps(documents.search_document(res)))
    assert doc["cardinality"] == 5
    assert documents.load_polygon(doc).vertices == res.best.vertices


def test_bounds_document_infinite():
    doc = documents.bounds_document(rect_bounds(2, 3), "2", "3")
    assert doc["upper"] == "infinite" and doc["lower"] == "infinite"
    doc = documents.bounds_document(bound_report(2), "2")
    assert (doc["lower"], doc["upper"]) == (5, 5)


def test_bad_documents():
    with pytest.raises(documents.DocumentError):
        documents.loads("[1, 2]")
    with pytest.raises(documents.DocumentError):
        documents.loads("not json")
    with pytest.raises(documents.DocumentError):
        documents.load_polygon({"format": "other@1"})


def test_render_is_presentation_only():
    poly = seven_point(PHI).polygon
    svg = render_svg(poly)
    assert svg.startswith("<svg") and "approx" in svg
    assert render_svg(poly, log_scale=False).count("<polygon") == 1


# -- command line


def test_cli_bounds(capsys):
    code, out, _ = cli(capsys, "bounds", "--alpha", "2")
    assert code == 0 and "lower 5" in out and "upper 5" in out
    code, out, _ = cli(capsys, "bounds", "--alpha", "3/2")
    assert code == 0 and "upper 12" in out
    code, out, _ = cli(capsys, "bounds", "--alpha", "2", "--beta", "3")
    assert code == 0 and "upper infinite" in out


def test_cli_search_both_algorithms(capsys, tmp_path):
    for algo in ("naive", "dp"):
        out_file = tmp_path / f"{algo}.json"
        code, out, _ = cli(capsys, "search", "--lattice", "exp:2", "--window", "4,4",
                           "--algo", algo, "--out", str(out_file))
        assert code == 0 and "cardinality 5" in out
        assert json.loads(out_file.read_text())["cardinality"] == 5
    code, _, _ = cli(capsys, "verify", "--in", str(tmp_path / "dp.json"))
    assert code == 0


def test_cli_construct_then_verify(capsys, tmp_path, monkeypatch):
    path = tmp_path / "five_point_2.poly"
    code, _, _ = cli(capsys, "construct", "five", "--alpha", "2", "--out", str(path))
    assert code == 0
    code, out, _ = cli(capsys, "verify", "--in", str(path))
    assert code == 0 and out.startswith("empty")
    for argv in (["seven", "--alpha", "17/10"], ["hyperbola", "--alpha", "101/100"],
                 ["fibonacci", "--k", "5"], ["rational-beta", "--alpha", "10201/10000", "--q", "2"],
                 ["semiconvergent", "--alpha", "2", "--beta", "3", "--m", "3"],
                 ["convergent", "--alpha", "2", "--ratio", "sqrt(2)"]):
        code, out, err = cli(capsys, "construct", *argv)
        assert code == 0, err
        monkeypatch.setattr("sys.stdin", __import__("io").StringIO(out))
        code, _, err = cli(capsys, "verify", "--in", "-")
        assert code == 0, err


def test_cli_verify_reports_witness(capsys, tmp_path):
    doc = {"format": documents.POLYGON_FORMAT, "lattice": "exp:2",
           "vertices": [[0, 0], [2, 0], [0, 2]]}
    path = tmp_path / "tri.json"
    path.write_text(json.dumps(doc))
    code, out, _ = cli(capsys, "verify", "--in", str(path))
    assert code == 1 and "witness (1,1)" in out
    doc["vertices"] = [[0, 0], [0, 2], [2, 0]]
    path.write_text(json.dumps(doc))
    code, _, _ = cli(capsys, "verify", "--in", str(path))
    assert code == 1


def test_cli_cf(capsys):
    code, out, _ = cli(capsys, "cf", "--target", "log(3)/log(2)", "--terms", "10")
    assert code == 0 and out.startswith("[1;1,1,2,2,3,1,5,2,23]")
    assert "485/306" in out
    code, out, _ = cli(capsys, "cf", "--target", "(1+sqrt(5))/2", "--best", "lower", "--qmax", "3")
    assert "best lower 1/1 3/2" in out


def test_cli_exit_codes(capsys, tmp_path):
    assert cli(capsys, "construct", "seven", "--alpha", "2")[0] == 2
    assert cli(capsys, "search", "--lattice", "exp:2", "--window", "7,7", "--algo", "naive")[0] == 2
    assert cli(capsys, "bounds", "--alpha", "sqrt(2)", "--beta", "sqrt(3)")[0] == 3
    assert cli(capsys, "--max-bits", "128", "bounds", "--alpha", "log(4)/log(2)")[0] == 3
    assert cli(capsys, "verify", "--in", str(tmp_path / "missing.json"))[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["search", "--window", "4,4", "--bogus"])
    assert info.value.code == 2
    capsys.readouterr()


def test_cli_render(capsys, tmp_path):
    src = tmp_path / "p.json"
    cli(capsys, "construct", "fibonacci", "--k", "3", "--out", str(src))
    svg = tmp_path / "p.svg"
    assert cli(capsys, "render", "--in", str(src), "--svg", str(svg))[0] == 0
    assert svg.read_text().startswith("<svg")


def test_module_entry_point(tmp_path):
    run = subprocess.run([sys.executable, "-m", "helly_lattice", "bounds", "--alpha", "(1+sqrt(5))/2"],
                         capture_output=True, text=True)
    assert run.returncode == 0 and "upper 7" in run.stdout
