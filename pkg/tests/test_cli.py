import csv
import io
import json
import math

import numpy as np
import pytest
from scipy.special import jv

from specgate import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_synth_hadamard_epe_time(capsys):
    code, out, err = run(capsys, "synth", "--gate", "hadamard", "--config", "epe", "--encoding", "time", "--qubit", "0")
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "ok"
    assert rep["fidelity"] == pytest.approx(1, abs=1e-12)
    assert rep["success_prob"] == pytest.approx(1, abs=1e-12)
    assert len(rep["reduced_matrix"]) == 2 and len(rep["reduced_matrix"][0][0]) == 2
    assert "F=" in err and "P=" in err


def test_synth_x_frequency(capsys):
    code, out, _ = run(capsys, "synth", "--gate", "pauli-x", "--config", "pep", "--encoding", "freq")
    rep = json.loads(out)
    assert code == 0
    assert rep["fidelity"] == pytest.approx(1, abs=1e-9)
    assert rep["success_prob"] == pytest.approx(jv(1, 2.404825557695773) ** 2, abs=1e-9)
    assert "explanation" in rep


def test_synth_identity(capsys):
    code, out, _ = run(capsys, "synth", "--gate", "identity", "--config", "pep", "--encoding", "time", "--qubit", "4")
    rep = json.loads(out)
    assert code == 0 and rep["fidelity"] == pytest.approx(1, abs=1e-12)
    W = np.array([[complex(*z) for z in row] for row in rep["reduced_matrix"]])
    assert abs(abs(W[0, 0]) - 1) < 1e-12 and abs(W[0, 1]) < 1e-12


def test_synth_unsupported_combination(capsys):
    code, out, _ = run(capsys, "synth", "--gate", "hadamard", "--config", "epe", "--encoding", "freq")
    rep = json.loads(out)
    assert code == 0
    assert rep["status"] == "unsupported" and rep["explanation"]


def test_synth_raw_angles_in_units_of_pi(capsys):
    code, out, _ = run(capsys, "synth", "--abcd", "0.5", "0", "0.5", "1", "--config", "pep")
    rep = json.loads(out)
    assert code == 0
    assert rep["gate"]["c"] == pytest.approx(math.pi / 2)


def test_synth_phase_gate(capsys):
    code, out, _ = run(capsys, "synth", "--gate", "phase", "--nu", "0.5", "--config", "epe", "--qubit", "9")
    assert code == 0 and json.loads(out)["fidelity"] == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize(
    "argv",
    [
        ["synth", "--gate", "toffoli"],
        ["synth", "--config", "xyz"],
        ["synth", "--encoding", "spatial"],
        ["synth", "--qubit", "64"],
        ["synth", "--M", "7"],
        ["figure", "fig9"],
        ["sweep", "bogus"],
        ["sweep"],
        ["frobnicate"],
        ["synth", "--qubit", "one"],
    ],
)
def test_usage_and_config_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(cli.main(argv))
    assert exc.value.code == 1
    assert capsys.readouterr().err


def test_config_file_and_overrides(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"gate": {"a": 0, "b": 0, "c": 1, "d": 0}, "config": "pep", "qubit": 2}))
    code, out, _ = run(capsys, "synth", "--config-file", str(cfg))
    rep = json.loads(out)
    assert code == 0 and rep["configuration"] == "PEP" and rep["qubit"] == 2
    code, out, _ = run(capsys, "synth", "--config-file", str(cfg), "--config", "epe", "--qubit", "7")
    rep = json.loads(out)
    assert rep["configuration"] == "EPE" and rep["qubit"] == 7


def test_config_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["synth", "--config-file", str(bad)]) == 1
    bad.write_text(json.dumps({"colour": "blue"}))
    assert cli.main(["synth", "--config-file", str(bad)]) == 1
    assert cli.main(["synth", "--config-file", str(tmp_path / "missing.json")]) == 1


def test_unitarity_failure_exits_2(monkeypatch, capsys):
    monkeypatch.setattr(cli, "full_unitary", lambda *a, **k: 1.1 * np.eye(128))
    code, _, err = run(capsys, "synth", "--gate", "hadamard")
    assert code == 2 and "unitarity" in err


def test_fig2(capsys):
    code, out, _ = run(capsys, "figure", "fig2")
    rows = table(out)
    assert code == 0
    assert list(rows[0]) == ["mu", "success_prob", "fid_phase", "fid_hadamard", "fid_x"]
    r0 = rows[0]
    assert float(r0["mu"]) == 0
    assert float(r0["success_prob"]) == pytest.approx(1, abs=1e-12)
    assert float(r0["fid_phase"]) == pytest.approx(1, abs=1e-12)
    assert float(r0["fid_hadamard"]) == pytest.approx(0.5, abs=1e-12)
    assert float(r0["fid_x"]) == pytest.approx(0, abs=1e-12)
    for r in rows:
        mu = float(r["mu"])
        assert float(r["success_prob"]) == pytest.approx(jv(0, mu) ** 2 + jv(1, mu) ** 2, abs=1e-6)


def test_fig4_row(capsys):
    code, out, _ = run(capsys, "figure", "fig4")
    rows = table(out)
    hit = [r for r in rows if r["nu_over_pi"] == "0.5" and r["f_th"] == "0.99"]
    assert code == 0 and len(rows) == 80
    assert hit[0]["count_formula"] == "28" and hit[0]["count_bruteforce"] == "28"


def test_table1_and_guardband(capsys):
    code, out, _ = run(capsys, "figure", "table1")
    rows = table(out)
    assert code == 0
    for r in rows:
        if r["method"] != "none" and r["encoding"] == "time":
            assert float(r["fidelity"]) == pytest.approx(1, abs=1e-9)
    code, out, _ = run(capsys, "figure", "guardband")
    rows = table(out)
    first = next(r for r in rows if float(r["crosstalk_amplitude"]) < 1e-3)
    assert first["spacing"] == "6" and first["n_qubits"] == "16"


def test_csv_provenance_header(capsys):
    _, out, _ = run(capsys, "figure", "fig4", "--f-th", "0.95")
    head = out.splitlines()[:4]
    assert head[0].startswith("# specgate ")
    assert head[1].startswith("# config_sha256 ") and len(head[1].split()[-1]) == 64
    assert head[2] == "# M 128"
    assert head[3] == "# thresholds fidelity=0.95 success_prob=0.9999"
    assert "\r" not in out


def test_output_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["sweep", "n_tones", "--config", "pep", "--stop", "2", "--out", str(a)]) == 0
    assert cli.main(["sweep", "n_tones", "--config", "pep", "--stop", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    ja, jb = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["synth", "--gate", "pauli-y", "--out", str(ja)])
    cli.main(["synth", "--gate", "pauli-y", "--out", str(jb)])
    assert ja.read_bytes() == jb.read_bytes()


def test_config_hash_tracks_inputs(capsys):
    _, a, _ = run(capsys, "figure", "fig4")
    _, b, _ = run(capsys, "figure", "fig4", "--p-th", "0.999")
    assert a.splitlines()[1] != b.splitlines()[1]


def test_sweep_mu(capsys):
    code, out, _ = run(capsys, "sweep", "mu", "--start", "0", "--stop", "3", "--steps", "31")
    rows = table(out)
    assert code == 0 and len(rows) == 31
    for r in rows:
        mu = float(r["mu"])
        assert float(r["success_prob"]) == pytest.approx(jv(0, mu) ** 2 + jv(1, mu) ** 2, abs=1e-6)


def test_sweep_f_th_monotone(capsys):
    code, out, _ = run(capsys, "sweep", "f_th", "--start", "0.9", "--stop", "0.9999", "--steps", "15")
    rows = table(out)
    assert code == 0
    for col in ("epe_count", "pep_count"):
        vals = [int(r[col]) for r in rows]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_sweep_guard_spacing(capsys):
    code, out, _ = run(capsys, "sweep", "guard_spacing", "--start", "0", "--stop", "8")
    rows = table(out)
    assert code == 0 and [r["spacing"] for r in rows] == [str(i) for i in range(9)]
    first = next(r for r in rows if float(r["crosstalk_amplitude"]) < 1e-3)
    assert first["spacing"] == "6"


@pytest.mark.parametrize("param", ["theta", "nu"])
def test_other_sweeps(capsys, param):
    code, out, _ = run(capsys, "sweep", param, "--steps", "4")
    assert code == 0 and len(table(out)) == 4


def test_sweep_from_config_file(tmp_path, capsys):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({"sweep": {"parameter": "nu", "start": 0.25, "stop": 0.5, "steps": 2}}))
    code, out, _ = run(capsys, "sweep", "--config-file", str(cfg))
    rows = table(out)
    assert code == 0 and [r["nu_over_pi"] for r in rows] == ["0.25", "0.5"]
    assert rows[1]["count_formula"] == "28"


def test_selftest_command(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert out.count("PASS") == 7 and "FAIL" not in out
