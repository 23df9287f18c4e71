import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from recenter import cli, compute_Cp
from recenter.errors import ConvergenceError


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(argv, capsys):
    code, out, _ = run(argv + ["--format", "json"], capsys)
    return code, json.loads(out)


class TestCp:
    def test_p3_json(self, capsys):
        code, doc = run_json(["cp", "--p", "3"], capsys)
        assert code == 0
        assert doc["format_version"] == 1 and doc["command"] == "cp"
        assert doc["results"]["C_p"] == compute_Cp(3).c_p
        assert doc["results"]["b_p"] == pytest.approx(0.0819522, abs=1e-7)
        assert doc["results"]["t_bp"] == pytest.approx(-0.1480929, abs=1e-7)
        assert doc["diagnostics"]["achieved_tolerance"] <= 1e-12

    def test_p2(self, capsys):
        code, doc = run_json(["cp", "--p", "2"], capsys)
        assert code == 0
        assert doc["results"]["C_p"] == 1 and doc["results"]["b_p"] is None

    def test_below_one(self, capsys):
        code, _, err = run(["cp", "--p", "0.5"], capsys)
        assert code == 2
        assert "infinite" in err

    def test_p1_flag(self, capsys):
        assert run(["cp", "--p", "1"], capsys)[0] == 2
        code, doc = run_json(["cp", "--p", "1", "--allow-p1"], capsys)
        assert code == 0 and doc["results"]["C_p"] == 2

    def test_text_six_digits(self, capsys):
        _, out, _ = run(["cp", "--p", "3", "--format", "text"], capsys)
        assert "C_p  = 1.31557\n" in out
        assert "t_bp = -0.148093\n" in out

    def test_csv_seventeen_digits(self, capsys):
        _, out, _ = run(["cp", "--p", "3", "--format", "csv"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert rows[0]["C_p"] == format(compute_Cp(3).c_p, ".17g")
        assert float(rows[0]["C_p"]) == compute_Cp(3).c_p

    def test_env_tolerance(self, capsys, monkeypatch):
        monkeypatch.setenv(cli.TOL_ENV, "1e-6")
        _, doc = run_json(["cp", "--p", "3"], capsys)
        assert doc["inputs"]["tol"] == 1e-6
        monkeypatch.setenv(cli.TOL_ENV, "nope")
        assert run(["cp", "--p", "3"], capsys)[0] == 2

    def test_tolerance_floor(self, capsys):
        assert run(["cp", "--p", "3", "--tol", "1e-300"], capsys)[0] == 2

    def test_nonconvergence_exit(self, capsys, monkeypatch):
        def boom(*a, **k):
            raise ConvergenceError("no bracket")

        monkeypatch.setattr(cli, "compute_Cp", boom)
        code, _, err = run(["cp", "--p", "3"], capsys)
        assert code == 3 and "no bracket" in err


class TestTable:
    def _rows(self, argv, capsys):
        code, out, _ = run(["table"] + argv, capsys)
        assert code == 0
        return list(csv.DictReader(io.StringIO(out)))

    def test_hundred_rows(self, capsys):
        rows = self._rows(["--p-min", "1.1", "--p-max", "8", "--steps", "100"], capsys)
        assert len(rows) == 100
        assert list(rows[0]) == cli.TABLE_COLUMNS
        two = [r for r in rows if float(r["p"]) == 2.0]
        assert len(two) == 1 and float(two[0]["C_p"]) == 1.0 and two[0]["b_p"] == ""

    def test_round_trip(self, capsys):
        rows = self._rows(["--p-min", "1.1", "--p-max", "8", "--steps", "25"], capsys)
        for r in rows:
            sol = compute_Cp(float(r["p"]))
            assert float(r["C_p"]) == pytest.approx(sol.c_p, rel=1e-12)
            if sol.b_p is not None:
                assert float(r["b_p"]) == pytest.approx(sol.b_p, rel=1e-12)
                assert float(r["t_bp"]) == pytest.approx(sol.t_bp, rel=1e-12)

    def test_log_spacing_tracks_asymptote(self, capsys):
        rows = self._rows(["--p-min", "4", "--p-max", "200", "--steps", "50", "--log-spacing"], capsys)
        ratios = [float(r["naive_over_C_p"]) / float(r["sqrt_8ep"]) for r in rows]
        assert all(u < v for u, v in zip(ratios, ratios[1:]))
        assert 0.95 < ratios[-1] < 1.0

    def test_dual_b_symmetry(self, capsys):
        rows = self._rows(["--p-min", "1.1", "--p-max", "1.9", "--steps", "9"], capsys)
        for r in rows:
            p = float(r["p"])
            assert float(r["b_p"]) == pytest.approx(compute_Cp(p / (p - 1)).b_p, abs=1e-13)

    def test_pin_to_two(self):
        grid = cli.table_grid(1.1, 8, 100)
        plain = np.linspace(1.1, 8, 100)
        moved = np.flatnonzero(np.asarray(grid) != plain)
        assert len(moved) == 1 and grid[moved[0]] == 2.0
        assert all(u < v for u, v in zip(grid, grid[1:]))
        assert 2.0 not in cli.table_grid(2.5, 4, 5)

    def test_bad_range(self, capsys):
        assert run(["table", "--p-min", "0.5", "--p-max", "3", "--steps", "4"], capsys)[0] == 2


class TestVerify:
    def test_pass(self, capsys):
        code, doc = run_json(["verify", "--p", "3", "--trials", "500", "--seed", "42"], capsys)
        assert code == 0
        assert doc["results"]["violations"] == 0
        assert doc["diagnostics"]["seed"] == 42

    def test_dist_file_pass(self, capsys, tmp_path):
        path = tmp_path / "d.json"
        path.write_text(json.dumps({"atoms": [{"x": -1, "prob": 0.5}, {"x": 1, "prob": 0.5}]}))
        code, doc = run_json(["verify", "--p", "3", "--trials", "10", "--dist", str(path)], capsys)
        assert code == 0 and doc["results"]["file"]["ratio"] == 1

    def test_violation_exit(self, capsys, monkeypatch):
        from recenter.oracles import SweepResult
        from recenter.distributions import DiscreteDistribution

        bad = SweepResult(3.0, 1.3, 10, 1, 2.0, DiscreteDistribution.point_mass(1.0))
        monkeypatch.setattr(cli, "random_distribution_sweep", lambda *a, **k: bad)
        code, doc = run_json(["verify", "--p", "3", "--trials", "10"], capsys)
        assert code == 1 and doc["diagnostics"]["verdict"] == "fail"

    def test_bad_file(self, capsys, tmp_path):
        path = tmp_path / "d.json"
        path.write_text(json.dumps({"atoms": [{"x": 0, "prob": 0.2}]}))
        assert run(["verify", "--p", "3", "--trials", "10", "--dist", str(path)], capsys)[0] == 2
        assert run(["verify", "--p", "3", "--trials", "10", "--dist", str(tmp_path / "missing")], capsys)[0] == 2


class TestCf:
    def test_power(self, capsys):
        code, doc = run_json(["cf", "--family", "power:3", "--grid", "64", "--refine", "6"], capsys)
        assert code == 0
        assert doc["results"]["lower_bound"] == pytest.approx(1.3155651, abs=1e-4)
        assert len(doc["diagnostics"]["refinement_history"]) == 7

    def test_table_family(self, capsys, tmp_path):
        path = tmp_path / "f.txt"
        xs = np.linspace(0, 3, 301)
        path.write_text("\n".join(f"{float(x)!r} {float(x * x)!r}" for x in xs))
        code, doc = run_json(
            ["cf", "--family", f"table:{path}", "--grid", "16", "--refine", "2", "--table-exponent", "2"], capsys
        )
        assert code == 0
        assert doc["results"]["lower_bound"] == pytest.approx(1.0, abs=1e-2)

    @pytest.mark.parametrize("family", ["cubic", "power:x", "power:-1", "table:"])
    def test_bad_family(self, family, capsys):
        assert run(["cf", "--family", family, "--grid", "8", "--refine", "1"], capsys)[0] == 2


class TestRosenthal:
    def test_coords(self, capsys, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps([{"rho_p_moment": 1, "rho_2_moment": 1}]))
        code, doc = run_json(["rosenthal", "--p", "3", "--coords", str(path)], capsys)
        assert code == 0
        assert doc["results"]["bound"] == pytest.approx(4.3155651, abs=1e-7)

    def test_user_constants(self, capsys, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps([{"rho_p_moment": 1, "rho_2_moment": 4}]))
        argv = ["rosenthal", "--p", "4", "--coords", str(path)]
        assert run(argv, capsys)[0] == 2
        code, doc = run_json(argv + ["--c1", "2", "--c2", "1", "--constants-source", "notes"], capsys)
        assert code == 0
        assert doc["results"]["bound"] == pytest.approx(2 * compute_Cp(4).c_p + 16)

    def test_simulate(self, capsys, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({"n": 10, "dim": 3, "p": 2, "generator": "normal", "samples": 5000, "seed": 1}))
        code, doc = run_json(["rosenthal", "--simulate", str(path)], capsys)
        assert code == 0
        assert doc["results"]["bound"] == 30
        assert doc["diagnostics"]["standard_error"] > 0

    def test_needs_one_source(self, capsys):
        assert run(["rosenthal", "--p", "3"], capsys)[0] == 2


class TestFormatting:
    def test_dumps_specials(self):
        text = cli.dumps({"a": 0.1, "b": math.inf, "c": None, "d": [1, 2.5], "e": True})
        assert '"a": 0.10000000000000001' in text
        assert '"b": Infinity' in text
        assert json.loads(text)["d"] == [1, 2.5]

    def test_byte_identical_runs(self):
        argv = [sys.executable, "-m", "recenter.cli", "verify", "--p", "2.5", "--trials", "300", "--seed", "5"]
        a = subprocess.run(argv, capture_output=True, check=True).stdout
        b = subprocess.run(argv, capture_output=True, check=True).stdout
        assert a == b and a

    def test_console_script(self):
        out = subprocess.run(["recenter", "cp", "--p", "3", "--format", "text"], capture_output=True, text=True)
        assert out.returncode == 0 and "1.31557" in out.stdout
