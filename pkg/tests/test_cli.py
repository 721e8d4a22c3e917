import csv
import io
import json
import os

import numpy as np
import pytest

from degenpair import load_tabulated
from degenpair.cli import fault_index, main, real


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


class TestConstruct:
    def test_koley_kar_defaults(self, capsys):
        code, out, _ = run(capsys, "construct")
        assert code == 0
        table = rows(out)
        assert table[0] == ["x", "v", "psi_plus", "psi_minus", "energy"]
        assert len(table) == 2002
        centre = table[1001]
        assert float(centre[0]) == 0.0
        assert float(centre[1]) == pytest.approx(-109 / 144, rel=1e-15)
        assert float(centre[4]) == -0.25

    def test_deterministic(self, capsys):
        _, first, _ = run(capsys, "construct", "--n", "101")
        _, second, _ = run(capsys, "construct", "--n", "101")
        assert first == second

    def test_json(self, capsys):
        code, out, _ = run(capsys, "construct", "--family", "lorentz", "--gamma", "1", "--n", "11", "--format", "json")
        doc = json.loads(out)
        assert code == 0
        assert doc["energy"] == 2.0
        assert doc["wronskian_const"] == -1.0
        assert len(doc["x"]) == 11

    def test_rational_argument(self):
        assert real("1/144") == 1 / 144
        assert real("2.5e-3") == 2.5e-3

    def test_round_trip_through_tabulated(self, capsys, tmp_path):
        path = tmp_path / "pair.csv"
        code, _, _ = run(capsys, "construct", "--family", "lorentz", "--gamma", "0", "--xmax", "5", "--n", "201", "--out", str(path))
        assert code == 0
        profile = load_tabulated(str(path), column="psi_plus")
        x = np.linspace(-4.9, 4.9, 37)
        np.testing.assert_allclose(profile.f(x), 1 / np.sqrt(1 + x**2), atol=1e-6)

    def test_tabulated_family(self, capsys, tmp_path):
        x = np.linspace(-6, 6, 1201)
        table = tmp_path / "f.txt"
        np.savetxt(table, np.column_stack([x, 1 / np.sqrt(np.cosh(x))]))
        code, out, _ = run(capsys, "construct", "--family", "tabulated", "--table", str(table), "--gamma", "1/12", "--xmax", "5", "--n", "11")
        assert code == 0
        assert len(rows(out)) == 12


class TestVerify:
    def test_default_pair_passes(self, capsys):
        code, out, _ = run(capsys, "verify")
        doc = json.loads(out)
        assert code == 0
        assert doc["all_pass"] is True
        assert doc["fault_injected"] is False

    def test_inject_fault_fails(self, capsys):
        code, out, err = run(capsys, "verify", "--inject-fault")
        doc = json.loads(out)
        assert code == 1
        assert doc["all_pass"] is False
        assert doc["residual_max_plus"]["pass"] is False

    def test_csv_report(self, capsys):
        code, out, _ = run(capsys, "verify", "--family", "lorentz", "--gamma", "1", "--format", "csv")
        table = rows(out)
        assert code == 0
        assert table[0] == ["check", "value", "threshold", "pass"]
        assert all(r[3] == "true" for r in table[1:])
        assert len(table) == 9

    def test_window(self, capsys):
        code, out, _ = run(capsys, "verify", "--family", "lorentz", "--gamma", "1", "--window=-4,4")
        assert code == 0
        assert max(json.loads(out)["witness"]["zeros_plus"]) < 4

    def test_unresolved_grid_is_numerical_error(self, capsys):
        code, _, err = run(capsys, "verify", "--family", "lorentz", "--gamma", "1", "--n", "41")
        assert code == 3
        assert "numerical error" in err

    def test_fault_index_interior(self):
        for n in (7, 101, 4001):
            assert n // 2 < fault_index(n) < n - 1


class TestErrors:
    def test_malformed_flag_leaves_no_output(self, capsys, tmp_path):
        out = tmp_path / "x.csv"
        code, _, _ = run(capsys, "construct", "--gamma", "abc", "--out", str(out))
        assert code == 2
        assert not out.exists()

    def test_single_point_grid(self, capsys):
        code, _, err = run(capsys, "construct", "--n", "1")
        assert code == 2

    def test_even_grid(self, capsys):
        assert run(capsys, "construct", "--n", "100")[0] == 2

    def test_unwritable_path(self, capsys, tmp_path):
        code, _, err = run(capsys, "construct", "--out", str(tmp_path / "missing" / "x.csv"))
        assert code == 2

    def test_missing_gamma(self, capsys):
        assert run(capsys, "construct", "--family", "lorentz")[0] == 2

    def test_a1_conflicts(self, capsys):
        assert run(capsys, "construct", "--a1", "0.01", "--gamma", "0.1")[0] == 2
        assert run(capsys, "construct", "--family", "lorentz", "--a1", "0.01")[0] == 2
        assert run(capsys, "construct", "--b", "2")[0] == 2

    def test_gaussian_figure2_unsupported(self, capsys):
        # only families with a finite curvature limit are offered
        assert run(capsys, "figure2", "--family", "gaussian")[0] == 2

    def test_unknown_subcommand(self, capsys):
        assert run(capsys, "nope")[0] == 2


class TestConfig:
    def test_config_file_and_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# Lorentzian pair\nfamily = lorentz\ngamma = 1\nn = 11\nxmax = 2\n")
        code, out, _ = run(capsys, "construct", "--config", str(cfg))
        assert code == 0
        assert len(rows(out)) == 12
        assert float(rows(out)[6][4]) == 2.0
        code, out, _ = run(capsys, "construct", "--config", str(cfg), "--n", "21")
        assert len(rows(out)) == 22

    def test_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("colour = blue\n")
        code, _, err = run(capsys, "construct", "--config", str(cfg))
        assert code == 2
        assert "colour" in err

    def test_bad_value(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("gamma = lots\n")
        assert run(capsys, "construct", "--config", str(cfg))[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "construct", "--config", str(tmp_path / "none.cfg"))[0] == 2

    def test_boolean_key(self, capsys, tmp_path):
        cfg = tmp_path / "fault.cfg"
        cfg.write_text("inject-fault = yes\n")
        assert run(capsys, "verify", "--config", str(cfg))[0] == 1


class TestWellscape:
    def test_single(self, capsys):
        code, out, _ = run(capsys, "wellscape", "--gamma-sq", "1/16")
        doc = json.loads(out)
        assert code == 0
        assert doc["regime"] == "CriticalBoundary"

    def test_sweep_csv(self, capsys):
        code, out, _ = run(capsys, "wellscape", "--sweep", "0.01,0.5,2", "--format", "csv")
        table = rows(out)
        assert table[0] == ["gamma_sq", "regime", "z", "x_max", "barrier"]
        assert [r[1] for r in table[1:]] == ["WellStatesInside", "WellStatesAbove", "ConvexNoWell"]
        assert table[3][3] == ""

    def test_needs_gamma(self, capsys):
        assert run(capsys, "wellscape")[0] == 2


class TestSpectrum:
    def test_koley_kar_first_node(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--h", "1e-4")
        doc = json.loads(out)
        assert code == 0
        (ev,) = doc["results"][0]["eigenvalues"]
        assert abs(ev + 0.25) <= 1e-4

    def test_free_box(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--family", "free", "--parity", "both")
        doc = json.loads(out)
        even, odd = doc["results"]
        assert even["eigenvalues"] == pytest.approx([0.25, 2.25], abs=1e-9)
        assert odd["eigenvalues"] == pytest.approx([1.0], abs=1e-9)

    def test_paired_splitting(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--parity", "both", "--node", "2")
        doc = json.loads(out)
        assert code == 0
        assert doc["splitting"] > 0

    def test_empty_window(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--family", "free", "--emin", "0.3", "--emax", "2")
        assert code == 0
        assert json.loads(out)["results"][0]["empty"] is True

    def test_trace(self, capsys, tmp_path):
        trace = tmp_path / "trace.csv"
        code, out, _ = run(capsys, "spectrum", "--trace", str(trace))
        assert code == 0
        table = rows(trace.read_text())
        assert table[0] == ["x", "psi"]
        assert float(table[1][1]) == 1.0
        assert abs(float(table[-1][1])) < 1e-6

    def test_coarse_step(self, capsys):
        assert run(capsys, "spectrum", "--family", "free", "--h", "0.5", "--emax", "100", "--emin", "0.1")[0] == 3

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--family", "free", "--format", "csv")
        assert rows(out)[0] == ["parity", "eigenvalue"]


class TestFigure2AndSweep:
    def test_figure2(self, capsys):
        code, out, _ = run(capsys, "figure2")
        table = rows(out)
        assert code == 0
        assert table[0] == ["x", "v"]
        assert float(table[1001][1]) == -1.0

    def test_sweep_json(self, capsys):
        code, out, _ = run(capsys, "sweep", "--format", "json")
        doc = json.loads(out)
        assert code == 0
        assert doc["slope"] == pytest.approx(2.0, abs=0.05)

    def test_sweep_fails_outside_small_gamma(self, capsys):
        code, out, _ = run(capsys, "sweep", "--gammas", "3,1", "--window-x", "4")
        assert code == 1
        assert rows(out)[0] == ["gamma", "ratio"]
