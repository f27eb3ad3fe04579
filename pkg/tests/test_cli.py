import json
from pathlib import Path

import pytest

from ghzgen.cli import main

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_run_ideal_json_payload(capsys):
    code, out, _ = run(capsys, "run-ideal")
    assert code == 0
    payload = json.loads(out)
    probs = payload["probabilities"]
    assert probs["no_invasion_retention"] == pytest.approx(0.1875, abs=1e-12)
    assert probs["survivor_arrival"] == pytest.approx(5 / 256, abs=1e-12)
    assert probs["conditional"] == pytest.approx(
        {"D1D3": 0.05, "D1D4": 0.25, "D2D3": 0.25, "D2D4": 0.45}, abs=1e-12
    )
    assert probs["unconditional"]["D1D3"] == pytest.approx(1 / 1024, abs=1e-15)
    assert probs["quoted_reference"] == 0.183211
    assert probs["quoted_reference_reproducible"] is False
    assert len(payload["survivor_state"]["terms"]) == 6
    assert [o["pair"] for o in payload["outcomes"]] == ["D1D3", "D1D4", "D2D3", "D2D4"]


def test_run_ideal_table(capsys):
    code, out, _ = run(capsys, "run-ideal", "--table1")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 5
    assert lines[0].split() == ["pair", "S1", "S3", "S5", "tau", "class"]
    row = dict(zip(("pair", "s1", "s3", "s5", "tau", "label"), lines[1].split()))
    assert row["pair"] == "D1D3"
    assert (row["s1"], row["s3"], row["s5"], row["tau"]) == ("1.000", "1.000", "1.000", "1.000")
    assert row["label"] == "GHZ_CLASS"
    last = lines[4].split()
    assert last[0] == "D2D4"
    assert last[1:5] == ["0.187", "0.310", "0.187", "0.012"]


def test_emit_states_matches_shipped_fixtures(tmp_path, capsys):
    code, _, _ = run(capsys, "run-ideal", "--emit-states", str(tmp_path / "out"))
    assert code == 0
    produced = sorted(p.name for p in (tmp_path / "out").iterdir())
    shipped = sorted(p.name for p in FIXTURES.iterdir())
    assert produced == shipped
    for name in produced:
        assert (tmp_path / "out" / name).read_bytes() == (FIXTURES / name).read_bytes()


def test_sweep_csv_shape_and_determinism(capsys):
    code, out, _ = run(capsys, "sweep-delta", "--points", "5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "delta,pair,p_gen,f_postselected,f_single_occupancy"
    assert len(lines) == 1 + 5 * 4
    assert lines[1].startswith("0,D1D3,")
    assert lines[2].startswith("0,D1D4,")
    assert lines[-1].startswith("0.5,D2D4,")
    code2, out2, _ = run(capsys, "sweep-delta", "--points", "5")
    assert out2 == out


def test_sweep_workers_do_not_change_output(capsys):
    _, serial, _ = run(capsys, "sweep-delta", "--points", "7")
    _, threaded, _ = run(capsys, "sweep-delta", "--points", "7", "--workers", "4")
    assert serial == threaded


def test_sweep_json_variant(capsys):
    code, out, _ = run(capsys, "sweep-delta", "--points", "3", "--json")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 12
    assert rows[0]["pair"] == "D1D3"
    assert rows[0]["delta"] == 0
    assert rows[0]["f_single_occupancy"] == pytest.approx(1.0, abs=1e-12)


def test_sweep_writes_file_and_figures(tmp_path, capsys):
    target = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "sweep-delta", "--points", "4", "-o", str(target))
    assert code == 0
    assert out == ""
    assert target.exists()
    assert (tmp_path / "sweep_generation.png").exists()
    assert (tmp_path / "sweep_fidelity.png").exists()


def test_sweep_no_figures_flag(tmp_path, capsys):
    target = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep-delta", "--points", "4", "-o", str(target), "--no-figures")
    assert code == 0
    assert target.exists()
    assert not (tmp_path / "sweep_generation.png").exists()


def test_sweep_rejects_bad_grid(capsys):
    code, _, err = run(capsys, "sweep-delta", "--points", "5", "--max", "0.9")
    assert code == 2
    assert "grid bounds" in err


def test_classify_fixture_states(capsys):
    code, out, _ = run(capsys, "classify", str(FIXTURES / "w.json"))
    assert code == 0
    report = json.loads(out)
    assert report["class"] == "W_CLASS"
    assert report["tau"] == pytest.approx(0.0, abs=1e-10)

    code, out, _ = run(capsys, "classify", str(FIXTURES / "conditional_d2d4.json"))
    assert code == 0
    report = json.loads(out)
    assert report["class"] == "GHZ_CLASS"
    assert report["tau"] == pytest.approx(0.012, abs=5e-4)


def test_classify_missing_file(capsys):
    code, _, err = run(capsys, "classify", "no-such-state.json")
    assert code == 2
    assert err


def test_oracle_check_passes(capsys):
    code, out, _ = run(capsys, "oracle-check")
    assert code == 0
    assert "PASS" in out
    assert "FAIL" not in out
    assert "quoted success probability" in out
    assert "0.01953125" in out


def test_oracle_check_impossible_tolerance(capsys):
    code, out, _ = run(capsys, "oracle-check", "--tol", "1e-30")
    assert code == 2
    assert "FAIL" in out


def test_usage_error_exits_one(capsys):
    code, _, err = run(capsys, "no-such-command")
    assert code == 1


def test_layout_override_roundtrip(tmp_path, capsys):
    from ghzgen.circuit import standard_layout

    layout = standard_layout()
    payload = {
        "elements": [
            {"kind": e.kind, "id": e.eid, "ports": list(e.ports), "layer": e.layer,
             "r": e.r, "t": e.t}
            for e in layout.elements
        ]
    }
    path = tmp_path / "layout.json"
    path.write_text(json.dumps(payload))
    _, default_out, _ = run(capsys, "sweep-delta", "--points", "3")
    _, override_out, _ = run(capsys, "sweep-delta", "--points", "3", "--layout", str(path))
    assert override_out == default_out
