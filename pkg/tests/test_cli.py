import csv
import json
import math

import pytest

from qroulette.cli import main, parse_state
from qroulette.errors import ValidationError
from qroulette.noise import zero_line
from qroulette.states import StateSpec


def run_cli(*argv):
    return main(list(argv))


class TestStateGrammar:
    def test_all_kinds(self):
        assert parse_state("kind=coherent N=1.5") == StateSpec.coherent(1.5)
        assert parse_state("kind=thermal N=0.7") == StateSpec.thermal(0.7)
        assert parse_state("kind=fock n=2") == StateSpec.fock(2)
        assert parse_state("kind=squeezed N=2.0 beta=0.5") == StateSpec.squeezed(2.0, 0.5)
        assert parse_state("kind=custom weights=0.25,0.5,0.25") == StateSpec.custom(
            [0.25, 0.5, 0.25]
        )

    def test_describe_round_trips(self):
        for spec in (
            StateSpec.coherent(1.5),
            StateSpec.thermal(0.7),
            StateSpec.fock(2),
            StateSpec.squeezed(2.0, 0.5),
            StateSpec.custom([0.25, 0.5, 0.25]),
        ):
            assert parse_state(spec.describe()) == spec

    @pytest.mark.parametrize(
        "text, field",
        [
            ("kind=coherent", "N"),
            ("kind=fock", "n"),
            ("kind=squeezed N=1", "beta"),
            ("kind=fock n=two", "n"),
            ("kind=fock nn=2", "n"),
            ("N=1", "kind"),
            ("kind=warp N=1", "kind"),
            ("kind=custom weights=a,b", "weights"),
        ],
    )
    def test_errors_name_the_bad_field(self, text, field):
        with pytest.raises(ValidationError) as info:
            parse_state(text)
        assert f"'{field}'" in str(info.value)


class TestNoiseCommand:
    def test_coherent_crossover_verdict(self, tmp_path, capsys):
        code = run_cli(
            "--output-dir", str(tmp_path), "noise", "--state", "kind=coherent N=1", "--eta", "1"
        )
        out = capsys.readouterr().out
        assert code == 0
        delta_line = next(line for line in out.splitlines() if line.startswith("delta_rh"))
        assert float(delta_line.split()[-1]) == 0.0
        assert "verdict             indifferent" in out

    def test_vacuum_favours_roulette(self, capsys):
        assert run_cli("noise", "--state", "kind=fock n=0", "--eta", "1") == 0
        out = capsys.readouterr().out
        assert "delta_rh            -0.5" in out
        assert "verdict             roulette" in out

    def test_bright_fock_favours_heterodyne(self, capsys):
        assert run_cli("noise", "--state", "kind=fock n=5", "--eta", "1") == 0
        assert "verdict             heterodyne" in capsys.readouterr().out

    def test_json_round_trip(self, tmp_path, capsys):
        code = run_cli(
            "--output-dir",
            str(tmp_path),
            "noise",
            "--state",
            "kind=squeezed N=2 beta=0.5",
            "--eta",
            "0.75",
            "--json",
            "noise.json",
        )
        assert code == 0
        payload = json.loads((tmp_path / "noise.json").read_text())
        assert payload["eta"] == 0.75
        assert payload["roulette_var"] == payload["direct_var"] + payload["added_roulette"]
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["outputs"] == ["noise.json"]

    def test_parse_failure_exit_code(self, capsys):
        assert run_cli("noise", "--state", "kind=fock", "--eta", "1") == 1
        assert "'n'" in capsys.readouterr().err

    def test_bad_eta_exit_code(self, capsys):
        assert run_cli("noise", "--state", "kind=fock n=1", "--eta", "1.5") == 1
        assert "'eta'" in capsys.readouterr().err


class TestThresholdCommand:
    def test_default_curves(self, tmp_path, capsys):
        code = run_cli(
            "--output-dir", str(tmp_path), "threshold", "--n-points", "48", "--output", "c.csv"
        )
        assert code == 0
        with open(tmp_path / "c.csv", newline="") as handle:
            rows = list(csv.DictReader(handle))
        etas = sorted({float(row["eta"]) for row in rows}, reverse=True)
        assert etas == [1.0, 0.75, 0.5, 0.25, 0.1]
        for eta, intercept in ((1.0, 1.0), (0.25, 4.0), (0.1, 10.0)):
            axis = [
                row
                for row in rows
                if float(row["eta"]) == eta
                and float(row["beta"]) == 0.0
                and row["converged"] == "true"
            ]
            assert len(axis) == 1
            assert float(axis[0]["N"]) == pytest.approx(intercept, abs=1e-8)

    def test_round_trip_exact(self, tmp_path):
        run_cli(
            "--output-dir",
            str(tmp_path),
            "threshold",
            "--etas",
            "0.5",
            "--n-points",
            "32",
            "--n-max",
            "6.0",
            "--output",
            "c.csv",
        )
        with open(tmp_path / "c.csv", newline="") as handle:
            rows = list(csv.DictReader(handle))
        points = zero_line(0.5, n_points=32, n_max=6.0)
        assert len(rows) == len(points)
        for row, point in zip(rows, points):
            parsed = float(row["beta"])
            assert parsed == point.beta or (math.isnan(parsed) and math.isnan(point.beta))
            assert float(row["N"]) == point.total_n

    def test_empty_etas_rejected(self, capsys):
        assert run_cli("threshold", "--etas", ",") == 1


class TestSimulateCommand:
    def simulate(self, tmp_path, sub, *extra):
        return run_cli(
            "--output-dir",
            str(tmp_path / sub),
            "simulate",
            "--state",
            "kind=fock n=1",
            "--scheme",
            "direct",
            "--eta",
            "0.5",
            "--n-samples",
            "150000",
            "--seed",
            "42",
            *extra,
        )

    def test_outputs_and_values(self, tmp_path, capsys):
        assert self.simulate(tmp_path, "a") == 0
        payload = json.loads((tmp_path / "a" / "summary.json").read_text())
        assert abs(payload["mean"] - 1.0) <= 5 * payload["standard_error"]
        assert payload["sample_variance"] == pytest.approx(1.0, rel=0.03)
        with open(tmp_path / "a" / "histogram.csv", newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert sum(int(r["count"]) for r in rows) == 150000

    def test_roulette_vacuum_variance(self, tmp_path, capsys):
        code = run_cli(
            "--output-dir",
            str(tmp_path),
            "simulate",
            "--state",
            "kind=fock n=0",
            "--scheme",
            "roulette",
            "--eta",
            "1",
            "--n-samples",
            "200000",
            "--seed",
            "7",
        )
        assert code == 0
        payload = json.loads((tmp_path / "summary.json").read_text())
        assert abs(payload["mean"]) <= 5 * payload["standard_error"]
        assert payload["sample_variance"] == pytest.approx(0.5, rel=0.02)

    def test_worker_count_invariance(self, tmp_path, capsys):
        assert self.simulate(tmp_path, "w1", "--workers", "1") == 0
        assert self.simulate(tmp_path, "w4", "--workers", "4") == 0
        for name in ("summary.json", "histogram.csv"):
            assert (tmp_path / "w1" / name).read_bytes() == (
                tmp_path / "w4" / name
            ).read_bytes()

    def test_manifest_replay_is_bit_exact(self, tmp_path, capsys):
        assert self.simulate(tmp_path, "orig") == 0
        code = run_cli(
            "--output-dir",
            str(tmp_path / "replay"),
            "--manifest",
            str(tmp_path / "orig" / "manifest.json"),
        )
        assert code == 0
        for name in ("summary.json", "histogram.csv"):
            assert (tmp_path / "orig" / name).read_bytes() == (
                tmp_path / "replay" / name
            ).read_bytes()

    def test_environment_default_output_dir(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("QROULETTE_OUTPUT_DIR", str(tmp_path / "from_env"))
        code = run_cli(
            "simulate",
            "--state",
            "kind=fock n=0",
            "--scheme",
            "direct",
            "--eta",
            "1",
            "--n-samples",
            "1000",
            "--seed",
            "1",
        )
        assert code == 0
        assert (tmp_path / "from_env" / "summary.json").exists()


class TestNaimarkCommand:
    def test_discrete_random_residuals(self, tmp_path, capsys):
        code = run_cli(
            "--output-dir",
            str(tmp_path),
            "naimark",
            "discrete-random",
            "--trials",
            "25",
            "--seed",
            "5",
            "--json",
            "n.json",
        )
        assert code == 0
        payload = json.loads((tmp_path / "n.json").read_text())
        assert payload["max_partial_trace_residual"] <= 1e-12

    def test_corrupted_family_fails(self, capsys):
        code = run_cli("naimark", "discrete-random", "--trials", "2", "--corrupt")
        assert code == 1

    def test_semiclassical_ladder(self, tmp_path, capsys):
        code = run_cli(
            "--output-dir",
            str(tmp_path),
            "naimark",
            "semiclassical",
            "--alpha-re",
            "1",
            "--amplitudes",
            "2,4,8",
            "--json",
            "ladder.json",
        )
        assert code == 0
        ladder = json.loads((tmp_path / "ladder.json").read_text())["ladder"]
        deviations = [d for _z, d in ladder]
        assert deviations[0] >= deviations[1] >= deviations[2]

    def test_truncation_failure_exit_code(self, capsys):
        code = run_cli(
            "naimark", "semiclassical", "--amplitudes", "8", "--probe-trunc", "40"
        )
        assert code == 2
        assert "truncation" in capsys.readouterr().err


class TestTopLevel:
    def test_missing_command(self, capsys):
        assert run_cli() == 1

    def test_unknown_argument(self, capsys):
        assert run_cli("noise", "--state", "kind=fock n=0", "--eta", "1", "--bogus") == 1
