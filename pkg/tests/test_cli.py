import json
import os

import numpy as np
import pytest

import boltcert as bc
from boltcert import cli, serialize


CANONICAL_PROBLEM = {
    "space": {
        "n_points": 4,
        "s_class": [0, 1, 0, 1],
        "p_class": [0, 0, 1, 1],
        "coords": [[0, 0], [1, 0], [0, 1], [1, 1]],
    },
    "f": {"values": [0, 0, 0, 1]},
    "u0": {"g": [0, 0.5], "h": [-0.25, 0.25]},
}


@pytest.fixture
def problem_file(tmp_path):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(CANONICAL_PROBLEM))
    return str(path)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolveCommand:
    def test_lp_canonical(self, problem_file, capsys):
        code, out, _ = run_cli(capsys, "solve", "--method", "lp", problem_file)
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["error"] - 0.25) <= 1e-9
        assert payload["method"] == "lp"

    def test_ds_one_sweep_not_below_lp(self, problem_file, capsys):
        code, out, _ = run_cli(
            capsys, "solve", "--method", "ds", "--max-iter", "1", problem_file
        )
        assert code == 0
        assert json.loads(out)["error"] >= 0.25 - 1e-12

    def test_missing_field_names_it(self, tmp_path, capsys):
        bad = dict(CANONICAL_PROBLEM, space={"n_points": 4, "s_class": [0, 1, 0, 1]})
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        code, _, err = run_cli(capsys, "solve", str(path))
        assert code == 2
        assert "p_class" in err

    def test_csv_grid_shorthand(self, tmp_path, capsys):
        path = tmp_path / "grid.csv"
        path.write_text("0,0\n0,1\n")
        code, out, _ = run_cli(capsys, "solve", str(path))
        assert code == 0
        assert abs(json.loads(out)["error"] - 0.25) <= 1e-9

    def test_ragged_csv_rejected(self, tmp_path, capsys):
        path = tmp_path / "grid.csv"
        path.write_text("0,0\n0,1,2\n")
        code, _, err = run_cli(capsys, "solve", str(path))
        assert code == 2
        assert "line 2" in err

    def test_out_file(self, problem_file, tmp_path, capsys):
        target = tmp_path / "result.json"
        code, out, _ = run_cli(capsys, "solve", problem_file, "--out", str(target))
        assert code == 0
        assert out == ""
        assert abs(json.loads(target.read_text())["error"] - 0.25) <= 1e-9


class TestCertifyCommand:
    def test_optimal_exit_zero(self, problem_file, capsys):
        code, out, _ = run_cli(capsys, "certify", problem_file)
        assert code == 0
        payload = json.loads(out)
        assert payload["verdict"] == "Optimal"
        assert payload["bolt"]["closed"] is True
        assert len(payload["bolt"]["points"]) == 4

    def test_not_optimal_exit_one_with_improvement(self, tmp_path, capsys):
        prob = dict(CANONICAL_PROBLEM, u0={"g": [0, 0], "h": [0, 0]})
        path = tmp_path / "p.json"
        path.write_text(json.dumps(prob))
        code, out, _ = run_cli(capsys, "certify", str(path))
        assert code == 1
        payload = json.loads(out)
        assert payload["verdict"] == "NotOptimal"
        assert "improvement" in payload
        assert payload["improved_error"] < payload["error"]

    def test_missing_u0_exit_two(self, tmp_path, capsys):
        prob = {k: v for k, v in CANONICAL_PROBLEM.items() if k != "u0"}
        path = tmp_path / "p.json"
        path.write_text(json.dumps(prob))
        code, _, err = run_cli(capsys, "certify", str(path))
        assert code == 2
        assert "u0" in err

    def test_emitted_certificate_reverifies_standalone(self, problem_file, capsys):
        # round trip: everything needed to re-check optimality is in the JSON
        code, out, _ = run_cli(capsys, "certify", problem_file)
        assert code == 0
        payload = json.loads(out)
        space = serialize.space_from_jsonable(CANONICAL_PROBLEM["space"])
        f = serialize.function_from_jsonable(CANONICAL_PROBLEM["f"])
        u0 = serialize.sum_element_from_jsonable(CANONICAL_PROBLEM["u0"])
        bolt = serialize.bolt_from_jsonable(space, payload["bolt"])
        assert bc.is_closed(space, bolt)
        mu = bc.SignedMeasure(np.asarray(payload["measure"]))
        report = bc.verify_singer(space, mu, f, u0, tol=1e-9)
        assert report.passed
        residual = f - bc.evaluate_sum(space, u0)
        value = abs(bc.bolt_functional(bolt, residual))
        assert abs(value - payload["error"]) <= 1e-9


class TestBoltsCommand:
    def test_prints_quad_and_svg(self, problem_file, tmp_path, capsys):
        svg = tmp_path / "bolt.svg"
        code, out, _ = run_cli(capsys, "bolts", problem_file, "--emit-svg", str(svg))
        assert code == 0
        payload = json.loads(out)
        assert payload["found"] and len(payload["bolt"]["points"]) == 4
        text = svg.read_text()
        assert text.lstrip().startswith("<?xml")
        assert "<svg" in text

    def test_no_bolt_exits_one(self, tmp_path, capsys):
        prob = dict(CANONICAL_PROBLEM, u0={"g": [0, 0], "h": [0, 0]})
        path = tmp_path / "p.json"
        path.write_text(json.dumps(prob))
        code, out, _ = run_cli(capsys, "bolts", str(path))
        assert code == 1
        payload = json.loads(out)
        assert payload["found"] is False
        assert payload["note"] == "none found"

    def test_zero_residual_trivial_note(self, tmp_path, capsys):
        prob = {
            "space": {"n_points": 3, "s_class": [0, 0, 0], "p_class": [0, 1, 2]},
            "f": {"values": [1.0, 2.0, 3.0]},
            "u0": {"g": [0.0], "h": [1.0, 2.0, 3.0]},
        }
        path = tmp_path / "p.json"
        path.write_text(json.dumps(prob))
        code, out, _ = run_cli(capsys, "bolts", str(path))
        assert code == 0
        assert "trivially optimal" in json.loads(out)["note"]

    def test_svg_without_coords_exits_two(self, tmp_path, capsys):
        prob = {
            "space": {"n_points": 4, "s_class": [0, 1, 0, 1], "p_class": [0, 0, 1, 1]},
            "f": {"values": [0, 0, 0, 1]},
        }
        path = tmp_path / "p.json"
        path.write_text(json.dumps(prob))
        code, _, err = run_cli(
            capsys, "bolts", str(path), "--emit-svg", str(tmp_path / "x.svg")
        )
        assert code == 2
        assert "coords" in err

    def test_lp_solution_used_when_u0_absent(self, tmp_path, capsys):
        prob = {k: v for k, v in CANONICAL_PROBLEM.items() if k != "u0"}
        path = tmp_path / "p.json"
        path.write_text(json.dumps(prob))
        code, out, _ = run_cli(capsys, "bolts", str(path))
        assert code == 0
        assert json.loads(out)["found"] is True


class TestReportCommand:
    def test_writes_csv_and_figures(self, problem_file, tmp_path, capsys):
        outdir = tmp_path / "rep"
        code, out, _ = run_cli(
            capsys, "report", problem_file, "--outdir", str(outdir)
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["verdict"] == "Optimal"
        lines = (outdir / "report.csv").read_text().strip().splitlines()
        assert lines[0].split(",")[:4] == ["point", "label", "s_class", "p_class"]
        assert len(lines) == 5
        for fig in payload["figures"]:
            assert os.path.exists(fig)
            assert fig.endswith(".svg")
        cert = json.loads((outdir / "certificate.json").read_text())
        assert cert["verdict"] == "Optimal"


class TestSelftestCommand:
    def test_default_seed_passes(self, capsys):
        code, _, err = run_cli(capsys, "selftest", "--seed", "0")
        assert code == 0
        assert "weak_duality: ok" in err

    def test_seed_variation_still_passes(self, capsys):
        assert run_cli(capsys, "selftest", "--seed", "99")[0] == 0

    def test_injected_sign_flip_is_caught(self, capsys, monkeypatch):
        import boltcert.bolts as bolts_mod

        true_fn = bolts_mod.bolt_functional

        def flipped(bolt, F):
            value = true_fn(bolt, F)
            # corrupt only nontrivial values so the fault is observable
            return -value + (0.1 if value != 0 else 0.0)

        monkeypatch.setattr(bolts_mod, "bolt_functional", flipped)
        code, out, _ = run_cli(capsys, "selftest", "--seed", "0")
        assert code == 1
        assert any(json.loads(line) for line in out.strip().splitlines())


class TestEnvTolerance:
    def test_env_override_used(self, tmp_path, capsys, monkeypatch):
        # a loose env tolerance turns a near-optimal u0 into a certified one
        prob = dict(CANONICAL_PROBLEM, u0={"g": [0, 0.5], "h": [-0.2501, 0.2501]})
        path = tmp_path / "p.json"
        path.write_text(json.dumps(prob))
        code, out, _ = run_cli(capsys, "certify", str(path))
        assert json.loads(out)["verdict"] == "NotOptimal"
        monkeypatch.setenv("BOLTCERT_TOL", "0.01")
        code, out, _ = run_cli(capsys, "certify", str(path))
        assert json.loads(out)["verdict"] == "Optimal"

    def test_bad_env_value_exits_two(self, problem_file, capsys, monkeypatch):
        monkeypatch.setenv("BOLTCERT_TOL", "banana")
        code, _, err = run_cli(capsys, "certify", problem_file)
        assert code == 2
        assert "BOLTCERT_TOL" in err
