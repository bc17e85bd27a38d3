import json

import numpy as np
import pytest

from liebend import serialize
from liebend.cli import main
from liebend.report import (PRESETS, cmd_bend, cmd_check, cmd_reproduce_sec53,
                            cmd_reproduce_sec6, compare_to_golden, load_golden)

SEC53_AH = [["2", "-2", "0", "0", "0"], ["4", "2", "0", "-2", "-4"]]


def test_sec53_matches_golden():
    report = cmd_reproduce_sec53()
    ok, mismatches = compare_to_golden(report, load_golden("golden_sec53.json"))
    assert ok, mismatches


def test_sec6_sample_matches_golden():
    golden = load_golden("golden_sec6.json")
    for p, q in [(2, 1), (2, 2), (3, 2), (6, 6)]:
        report = cmd_reproduce_sec6(p, q)
        present = {c.check_id for c in report.checks}
        ok, mismatches = compare_to_golden(
            report, {k: v for k, v in golden.items() if k in present})
        assert ok, mismatches


def test_golden_mismatch_detected():
    report = cmd_reproduce_sec53()
    golden = dict(load_golden("golden_sec53.json"))
    golden["sec53/row[5]"] = dict(golden["sec53/row[5]"], proper=True)
    ok, mismatches = compare_to_golden(report, golden)
    assert not ok and mismatches[0]["check"] == "sec53/row[5]"


def test_report_determinism():
    r1 = cmd_reproduce_sec53()
    r2 = cmd_reproduce_sec53()
    assert r1.to_json() == r2.to_json()
    assert r1.to_text() == r2.to_text()
    b1 = cmd_bend("su21-rho1-g2")
    b2 = cmd_bend("su21-rho1-g2")
    assert b1.to_json() == b2.to_json()


def test_timings_excluded_from_canonical_bytes():
    report = cmd_reproduce_sec53()
    assert "runtime_ms" not in report.to_json()
    assert "runtime_ms" in report.to_json(include_timings=True)


def test_bend_preset_reports():
    report = cmd_bend("su21-rho1-g2")
    by_id = {c.check_id: c.verdict for c in report.checks}
    assert by_id["bend/certificate"]["verdict"] == "PASS"
    assert by_id["bend/certificate"]["achieved_dim"] == 4
    assert by_id["bend/residuals"]["bent_residual"] <= 1e-8
    assert by_id["bend/residuals"]["verified"]["bent_residual"] < 1e-20
    assert by_id["bend/inequalities"]["ok"] is True

    report5 = cmd_bend("sl5-even5-g4")
    by_id5 = {c.check_id: c.verdict for c in report5.checks}
    assert by_id5["bend/certificate"]["verdict"] == "PASS"
    assert by_id5["bend/certificate"]["achieved_dim"] == 24
    assert by_id5["bend/residuals"]["verified"]["bent_residual"] < 1e-15


def test_bend_generators_serialized():
    report = cmd_bend("su21-rho1-g2")
    gens = next(c for c in report.checks if c.check_id == "bend/generators")
    mats = gens.verdict["matrices"]
    assert len(mats) == 2
    m = serialize.matrix_from_json(mats[0]["a"])
    assert m.shape == (3, 3) and np.iscomplexobj(m)


def test_cmd_check_su_examples(su32_torus):
    report = cmd_check({"family": "su", "p": 3, "q": 2}, [["0", "1"]])
    by_id = {c.check_id: c for c in report.checks}
    assert by_id["check/benoist"].verdict is True
    assert by_id["check/benoist"].witness is not None
    assert by_id["check/calabi-markus"].verdict is False

    full = cmd_check({"family": "su", "p": 3, "q": 2}, [["1", "0"], ["0", "1"]])
    by_id = {c.check_id: c for c in full.checks}
    assert by_id["check/benoist"].verdict is False
    assert by_id["check/calabi-markus"].verdict is True


def test_cmd_check_sl5_no_even_witness():
    report = cmd_check({"family": "sl", "n": 5}, SEC53_AH)
    by_id = {c.check_id: c for c in report.checks}
    assert by_id["check/benoist"].verdict is True
    ew = by_id["check/even-witness"].verdict
    assert ew["even_witness"] is None
    assert "no even witness among partitions of 5" in ew["note"]


def test_cmd_check_sl4_has_even_witness(tmp_path):
    # a_h = span{(1,-1,0,0)}: the even [4]-vector (3,1,-1,-3) avoids its orbit
    report = cmd_check({"family": "sl", "n": 4}, [["1", "-1", "0", "0"]])
    by_id = {c.check_id: c for c in report.checks}
    assert by_id["check/even-witness"].verdict["even_witness"] is not None


def test_serialize_roundtrips():
    m = np.array([[1.5, -2.0], [0.25, 3.0]])
    assert np.allclose(serialize.matrix_from_json(serialize.matrix_to_json(m)), m)
    c = np.array([[1 + 2j, 0], [0.5j, -1]])
    assert np.allclose(serialize.matrix_from_json(serialize.matrix_to_json(c)), c)
    from fractions import Fraction
    vec = (Fraction(3, 2), Fraction(-4), Fraction(0))
    assert serialize.rationals_from_json(serialize.rationals_to_json(vec)) == vec
    x = 0.1234567890123456789
    assert serialize.f17(x) == pytest.approx(x, abs=0.0)


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["reproduce", "sec53"]) == 0
    capsys.readouterr()
    assert main(["reproduce", "sec6", "--p", "3", "--q", "2"]) == 0
    capsys.readouterr()
    assert main(["bend", "--preset", "su21-rho1-g2"]) == 0
    capsys.readouterr()

    bad_plan = tmp_path / "plan.json"
    bad_plan.write_text(json.dumps(
        {"family": "sl", "n": 5, "triple": {"partition": [5]}, "genus": 3, "t": "auto"}))
    assert main(["bend", "--plan", str(bad_plan)]) == 2  # genus below |Lambda|
    capsys.readouterr()

    ah = tmp_path / "ah.json"
    ah.write_text(json.dumps([["0", "1"]]))
    assert main(["check", "--family", "su", "--p", "3", "--q", "2",
                 "--ah", str(ah)]) == 0
    capsys.readouterr()

    assert main(["reproduce", "sec6", "--p", "1", "--q", "2"]) == 2
    capsys.readouterr()


def test_cli_witness_output(tmp_path, capsys):
    out = tmp_path / "w.json"
    assert main(["reproduce", "sec53", "--witness", "--out", str(out)]) == 0
    capsys.readouterr()
    data = json.loads(out.read_text())
    by_id = {c["check"]: c for c in data["checks"]}
    assert "witness" in by_id["sec53/row[5]"]      # orbit member carries a Weyl witness
    assert "witness" not in by_id["sec53/row[4,1]"]


def test_cli_out_file_and_text(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["reproduce", "sec53", "--out", str(out)]) == 0
    capsys.readouterr()
    data = json.loads(out.read_text())
    assert data["tool"]["name"] == "liebend"
    assert len(data["checks"]) == 6

    out_txt = tmp_path / "report.txt"
    assert main(["reproduce", "sec53", "--text", "--out", str(out_txt)]) == 0
    capsys.readouterr()
    assert "sec53/row[5]" in out_txt.read_text()


def test_cli_deterministic_bytes(tmp_path, capsys):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["bend", "--preset", "sl5-even5-g4", "--out", str(f1)]) == 0
    assert main(["bend", "--preset", "sl5-even5-g4", "--out", str(f2)]) == 0
    capsys.readouterr()
    assert f1.read_bytes() == f2.read_bytes()


def test_presets_cover_spec_names():
    assert set(PRESETS) == {"su21-rho1-g2", "sl5-even5-g4"}
