"""Command-line interface: exact-element parsing, JSON outputs, renders and
exit codes."""
import json

import pytest

from pisotiles.cli import main, parse_element
from pisotiles.errors import ValidationError

QUAD_RAM = "1->121;2->11"
QUAD_UNRAM = "1->1^5 2;2->1^3"


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_parse_element(quad_ram):
    from fractions import Fraction
    f = quad_ram.field
    assert parse_element("1/4", quad_ram) == f.from_rational(Fraction(1, 4))
    assert parse_element("(-2+1a)/1", quad_ram) == f.alpha() - 2
    assert parse_element("(1+2a)/3", quad_ram) == (f.alpha() * 2 + 1) / 3
    assert parse_element("a", quad_ram) == f.alpha()
    with pytest.raises(ValidationError):
        parse_element("b+1", quad_ram)


def test_analyze_json(capsys):
    code, data = run_json(capsys, ["analyze", "--sub", QUAD_UNRAM])
    assert code == 0
    assert data["char_poly"] == [-3, -5, 1]
    assert data["alpha_primes"] == [3]
    assert data["d_p"] == [0]
    assert abs(data["bound_M"] - 2.1804604217163703) < 1e-9
    assert abs(data["contraction_certificate"] - 1.0) < 1e-9


def test_expand_json(capsys):
    code, data = run_json(capsys, ["expand", "--sub", QUAD_RAM, "--x", "1/4",
                                   "--letter", "1"])
    assert code == 0
    assert data["kind"] == "finite"
    assert data["preperiod"] == 3
    assert len(data["digits"]) == 3
    assert data["digits"][0]["float"] == 0.0


def test_integers_json(capsys):
    code, data = run_json(capsys, ["integers", "--sub", QUAD_RAM,
                                   "--letter", "1", "--level", "2"])
    assert code == 0
    assert data["count"] == len(data["values"])
    assert data["count"] > 1


def test_check_f_json(capsys):
    code, data = run_json(capsys, ["check-f", "--sub", QUAD_UNRAM])
    assert code == 0 and data["property_f"] == "holds"
    code, data = run_json(capsys, ["check-f", "--sub", "1->2121^3;2->12"])
    assert code == 0 and data["property_f"] == "fails"


def test_graph_zero_json(capsys):
    code, data = run_json(capsys, ["graph-zero", "--sub", QUAD_UNRAM])
    assert code == 0
    assert data["property_f"] == "holds"
    assert len(data["surviving"]) == 1


def test_render_stepped_json(capsys):
    code, data = run_json(capsys, ["render-stepped", "--sub", QUAD_UNRAM,
                                   "--window", "3.5"])
    assert code == 0
    assert data["count"] == 11
    xs = {tuple(d["x"]["coeffs"]) for d in data["faces"]}
    assert len(xs) == 7


def test_render_tile_svg_deterministic(tmp_path, capsys):
    out1 = tmp_path / "a.svg"
    out2 = tmp_path / "b.svg"
    for out in (out1, out2):
        code = main(["render-tile", "--sub", QUAD_RAM, "--level", "4",
                     "--format", "svg", "--out", str(out)])
        capsys.readouterr()
        assert code == 0 and out.exists() and out.stat().st_size > 0
    assert out1.read_bytes() == out2.read_bytes()


def test_render_line_json(capsys):
    code, data = run_json(capsys, ["render-line", "--sub", QUAD_RAM,
                                   "--depth", "3"])
    assert code == 0
    letters = [t["letter"] for t in data["intervals"]]
    w = list(__import__("pisotiles.substitution", fromlist=["Substitution"])
             .Substitution.parse(QUAD_RAM).fixed_point_prefix(len(letters)))
    assert letters == w


def test_domain_exchange_csv(tmp_path):
    out = tmp_path / "pts.csv"
    code = main(["domain-exchange", "--sub", QUAD_RAM, "--level", "3",
                 "--format", "csv", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) > 1 and "letter" in lines[0]


def test_validation_exit_code(capsys):
    code = main(["analyze", "--sub", "1->12;2->21"])
    err = capsys.readouterr().err
    assert code == 2
    assert "error:" in err


def test_unit_pisot_rejected(capsys):
    code = main(["analyze", "--sub", "1->12;2->1"])   # golden mean, unit
    err = capsys.readouterr().err
    assert code == 2 and "unit" in err


def test_expand_rejects_out_of_domain(capsys):
    code = main(["expand", "--sub", QUAD_RAM, "--x", "5", "--letter", "1"])
    capsys.readouterr()
    assert code == 2
