"""End-to-end CLI behavior: exit codes, documents, and printed output."""

import argparse
import json

import numpy as np
import pytest

from semisic import cli
from semisic.documents import parse_povm_document


def run(capsys, *argv):
    rc = cli.main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def member_path(tmp_path, capsys, b="2/25"):
    path = tmp_path / "member.json"
    rc, _, _ = run(capsys, "construct", "--b", b, "--out", str(path))
    assert rc == 0
    return path


def test_parse_number():
    assert cli.parse_number("2/25") == 0.08
    assert cli.parse_number("-1/4") == -0.25
    assert cli.parse_number("0.07") == 0.07
    with pytest.raises(argparse.ArgumentTypeError):
        cli.parse_number("abc")


def test_construct_verify_cycle(tmp_path, capsys):
    path = member_path(tmp_path, capsys)
    doc = json.loads(path.read_text())
    assert doc["dim"] == 2
    assert doc["b"] == 0.08
    assert doc["k"] == 2
    assert "theta" in doc["metadata"]

    rc, out, _ = run(capsys, "verify", "--in", str(path))
    assert rc == 0
    assert "StrictSemiSIC" in out

    rc, out, _ = run(capsys, "verify", "--in", str(path), "--json")
    assert rc == 0
    report = json.loads(out)
    assert report["classification"] == "StrictSemiSIC"
    assert report["k"] == 2
    assert report["fitted_b"] == pytest.approx(0.08, abs=1e-13)


def test_construct_writes_stdout(tmp_path, capsys):
    rc, out, _ = run(capsys, "construct", "--b", "2/25")
    assert rc == 0
    doc = parse_povm_document(json.loads(out))
    assert doc.povm.dim == 2
    assert len(doc.povm.elements) == 4


def test_verify_flags_perturbed_member(tmp_path, capsys):
    path = member_path(tmp_path, capsys)
    doc = json.loads(path.read_text())
    doc["elements"][0][0][0][0] += 1e-3
    bad = tmp_path / "perturbed.json"
    bad.write_text(json.dumps(doc))
    rc, out, _ = run(capsys, "verify", "--in", str(bad))
    assert rc == 1
    assert "NotSemiSIC" in out


def test_usage_and_range_errors_exit_2(tmp_path, capsys):
    rc, _, err = run(capsys, "construct", "--b", "1/16")
    assert rc == 2 and "error:" in err

    rc, _, err = run(capsys, "verify", "--in", str(tmp_path / "missing.json"))
    assert rc == 2

    garbled = tmp_path / "garbled.json"
    garbled.write_text("{oops")
    rc, _, err = run(capsys, "verify", "--in", str(garbled))
    assert rc == 2 and "error:" in err


def test_construct_snaps_to_sic(tmp_path, capsys):
    path = tmp_path / "sic.json"
    rc, _, _ = run(capsys, "construct", "--b", "0.0833333333333333", "--out", str(path))
    assert rc == 0
    doc = parse_povm_document(json.loads(path.read_text()))
    traces = np.einsum("xii->x", doc.povm.elements).real
    assert np.allclose(traces, 0.5, atol=1e-12)
    assert doc.k == 4


def test_dual_roundtrip(tmp_path, capsys):
    path = member_path(tmp_path, capsys)
    out_path = tmp_path / "frame.json"
    rc, _, _ = run(capsys, "dual", "--in", str(path), "--out", str(out_path))
    assert rc == 0
    frame_doc = json.loads(out_path.read_text())
    assert frame_doc["metadata"]["kind"] == "dual-frame"
    assert frame_doc["k"] == 2
    povm = parse_povm_document(json.loads(path.read_text())).povm
    duals = np.array(
        [[[complex(re, im) for re, im in row] for row in e]
         for e in frame_doc["elements"]]
    )
    prod = np.einsum("xij,yji->xy", povm.elements, duals)
    assert np.max(np.abs(prod - np.eye(4))) < 1e-10


def test_region_scan(tmp_path, capsys):
    path = member_path(tmp_path, capsys)
    rc, out, err = run(capsys, "region", "--in", str(path), "--resolution", "10")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("p1,")
    assert len(lines) == 1 + 286
    assert "feasible" in err


def test_bloch_conversions(capsys):
    rc, out, _ = run(capsys, "bloch", "--b", "2/25", "--to-probs", "0", "0", "1")
    assert rc == 0
    probs = [float(v) for v in out.split()]
    assert np.allclose(probs, [0.4, 0.2, 0.2, 0.2], atol=1e-11)

    rc, out, _ = run(capsys, "bloch", "--b", "2/25",
                     "--to-bloch", "0.4", "0.2", "0.2", "0.2")
    assert rc == 0
    vec = [float(v) for v in out.split()]
    assert np.allclose(vec, [0.0, 0.0, 1.0], atol=1e-10)

    rc, _, err = run(capsys, "bloch", "--b", "2/25",
                     "--to-bloch", "0.9", "0.05", "0.03", "0.02")
    assert rc == 1 and "error:" in err


def test_search_command(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    rc, out, _ = run(capsys, "search", "--d", "2", "--k", "2", "--b", "2/25",
                     "--restarts", "2", "--seed", "3", "--out", str(report_path))
    assert rc == 0
    assert "solution found" in out
    report = json.loads(report_path.read_text())
    assert report["best_residual"] < 1e-12

    rc, out, _ = run(capsys, "search", "--d", "3", "--k", "7", "--restarts", "1",
                     "--max-iterations", "150", "--require-solution")
    assert rc == 1
    assert "no candidate" in out


def test_search_rejects_inadmissible_counts(capsys):
    rc, _, err = run(capsys, "search", "--d", "3", "--k", "6")
    assert rc == 2 and "error:" in err


def test_spectrum_table(capsys):
    rc, out, _ = run(capsys, "spectrum", "--d", "3")
    assert rc == 0
    for token in ("1/50", "5/196", "1/36", "2/7", "5/7"):
        assert token in out

    rc, _, err = run(capsys, "spectrum", "--d", "2")
    assert rc == 2 and "error:" in err


def test_unknown_command_is_usage_error(capsys):
    with pytest.raises(SystemExit):
        cli.main(["bogus"])
    with pytest.raises(SystemExit):
        cli.main([])
    capsys.readouterr()
