import json
import subprocess
import sys

import numpy as np
import pytest

from seqforge import bench, fileio, seqlib
from seqforge.cli import cmd_eval, config_from_dict, main
from seqforge.corr import NumericalConsistencyError, autocorrelation, psl
from seqforge.solvers import SolverConfig


def run(*argv):
    return main([str(a) for a in argv])


class TestGen:
    def test_frank(self, tmp_path):
        out = tmp_path / "f.txt"
        assert run("gen", "frank", "--m", 10, "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "# seqforge phases v1 N=100" and len(lines) == 101

    def test_golomb(self, tmp_path):
        assert run("gen", "golomb", "--n", 13, "--out", tmp_path / "g.txt") == 0
        np.testing.assert_allclose(fileio.read_phases(tmp_path / "g.txt").x,
                                   seqlib.golomb(13).x, atol=1e-15)

    def test_random_byte_identical(self, tmp_path):
        for name in ("a", "b"):
            assert run("gen", "random", "--n", 100, "--seed", 7, "--out", tmp_path / name) == 0
        assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()

    def test_missing_length(self, tmp_path, capsys):
        assert run("gen", "golomb", "--out", tmp_path / "g") == 2
        assert run("gen", "frank", "--n", 10, "--out", tmp_path / "g") == 2


class TestEval:
    def test_frank_1e4(self, tmp_path):
        run("gen", "frank", "--m", 100, "--out", tmp_path / "f.txt")
        assert run("eval", "--in", tmp_path / "f.txt", "--out", tmp_path / "m.json") == 0
        m = fileio.read_json(tmp_path / "m.json")
        assert m["psl"] == pytest.approx(31.84, abs=0.01)
        assert m["n"] == 10000 and "wisl" not in m and "lp" not in m
        lvl = fileio.read_convergence(m["correlation_level_path"])
        assert lvl["lag"].size == 19999

    def test_constant(self, tmp_path):
        fileio.write_phases(tmp_path / "c", seqlib.frank(1).__class__(np.zeros(4)))
        m = cmd_eval(tmp_path / "c", tmp_path / "c.json")
        assert m["isl"] == pytest.approx(14)

    def test_barker_with_weights_and_p(self, tmp_path):
        fileio.write_phases(tmp_path / "b", seqlib.barker13())
        fileio.write_weights(tmp_path / "w", np.ones(12))
        m = cmd_eval(tmp_path / "b", tmp_path / "b.json", tmp_path / "w", 4.0)
        assert m["psl"] == pytest.approx(1.0)
        assert m["wisl"] == pytest.approx(6.0) and m["lp"] == pytest.approx(6 ** 0.25)
        assert set(m) == {"n", "isl", "wisl", "psl", "lp", "correlation_level_path"}

    def test_weight_length_mismatch(self, tmp_path):
        fileio.write_phases(tmp_path / "b", seqlib.barker13())
        fileio.write_weights(tmp_path / "w", np.ones(5))
        assert run("eval", "--in", tmp_path / "b", "--weights", tmp_path / "w") == 2

    def test_roundtrip(self, tmp_path):
        run("gen", "random", "--n", 50, "--seed", 3, "--out", tmp_path / "r")
        seq = fileio.read_phases(tmp_path / "r")
        fileio.write_phases(tmp_path / "r2", seq)
        np.testing.assert_allclose(fileio.read_phases(tmp_path / "r2").phases,
                                   seqlib.random_unimodular(50, 3).phases, rtol=0, atol=1e-12)
        assert (tmp_path / "r").read_bytes() == (tmp_path / "r2").read_bytes()


class TestDesign:
    def test_zone_accelerated(self, tmp_path):
        fileio.write_weights(tmp_path / "w", seqlib.zone_weights(100))
        assert run("design", "--method", "mwisl-diag", "--n", 100, "--weights", tmp_path / "w",
                   "--accelerate", "--abs-floor", 1e-10, "--max-iter", 100000,
                   "--out", tmp_path / "d.txt") == 0
        conv = fileio.read_convergence(tmp_path / "d.convergence.csv")
        assert conv["objective"][-1] <= 1e-10
        assert list(conv) == ["iter", "objective", "cum_seconds", "backtracks"]
        assert np.all(np.diff(conv["cum_seconds"]) >= 0)

    def test_max_iter_one(self, tmp_path):
        assert run("design", "--method", "mm-psl", "--n", 16, "--max-iter", 1,
                   "--out", tmp_path / "d.txt") == 0
        conv = fileio.read_convergence(tmp_path / "d.convergence.csv")
        assert conv["iter"].tolist() == [1.0]

    def test_adaptive_frank25(self, tmp_path):
        assert run("design", "--method", "mm-psl-adaptive", "--n", 25, "--init", "frank",
                   "--accelerate", "--max-iter", 2000, "--out", tmp_path / "d.txt") == 0
        man = fileio.read_json(tmp_path / "d.manifest.json")
        assert man["metrics"]["psl"] <= psl(autocorrelation(seqlib.frank(5))) + 1e-12

    def test_manifest_roundtrip_and_determinism(self, tmp_path):
        a = tmp_path / "a" / "d.txt"
        assert run("design", "--method", "mwisl", "--n", 30, "--seed", 4, "--max-iter", 50,
                   "--out", a) == 0
        man = fileio.read_json(tmp_path / "a" / "d.manifest.json")
        assert json.loads(json.dumps(man)) == man
        cfg = config_from_dict(man["config"])
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text(json.dumps(man["config"]))
        b = tmp_path / "b" / "d.txt"
        assert run("design", "--config", cfg_file, "--out", b) == 0
        assert a.read_bytes() == b.read_bytes()
        assert isinstance(cfg, SolverConfig) and cfg.seed == 4
        for key in ("config", "versions", "seed", "timings", "outputs", "metrics"):
            assert key in man
        assert {"isl", "psl", "wisl"} <= set(man["metrics"])

    def test_init_file(self, tmp_path):
        fileio.write_phases(tmp_path / "i", seqlib.golomb(20))
        assert run("design", "--method", "mm-psl", "--p", 8, "--init", "file", "--init-file",
                   tmp_path / "i", "--max-iter", 5, "--out", tmp_path / "d") == 0
        man = fileio.read_json(tmp_path / "d.manifest.json")
        assert man["config"]["N"] == 20

    @pytest.mark.parametrize("argv", [
        ["--method", "mwisl", "--n", 1],
        ["--method", "mm-psl", "--n", 10, "--init", "frank"],
        ["--method", "mm-psl", "--n", 10, "--max-iter", 0],
        ["--method", "mm-psl-adaptive", "--n", 9, "--p-schedule", "8,4"],
    ])
    def test_config_errors(self, tmp_path, argv):
        assert run("design", *argv, "--out", tmp_path / "x") == 2

    def test_unknown_config_key(self, tmp_path):
        (tmp_path / "c.json").write_text('{"bogus": 1}')
        assert run("design", "--config", tmp_path / "c.json", "--out", tmp_path / "x") == 2

    def test_numerical_error_exit_code(self, tmp_path, monkeypatch):
        def boom(cfg, callback=None):
            raise NumericalConsistencyError("mu has imaginary residue")
        monkeypatch.setattr("seqforge.cli.run_solver", boom)
        assert run("design", "--method", "mm-psl", "--n", 8, "--out", tmp_path / "x") == 3


class TestFiles:
    def test_phase_precision(self, tmp_path):
        seq = seqlib.random_unimodular(30, 1)
        fileio.write_phases(tmp_path / "p", seq)
        np.testing.assert_array_equal(fileio.read_phases(tmp_path / "p").phases, seq.phases)

    def test_bad_header(self, tmp_path):
        (tmp_path / "p").write_text("0.1\n0.2\n")
        with pytest.raises(fileio.FormatError):
            fileio.read_phases(tmp_path / "p")

    def test_count_mismatch(self, tmp_path):
        (tmp_path / "p").write_text("# seqforge phases v1 N=3\n0.1\n0.2\n")
        with pytest.raises(fileio.FormatError):
            fileio.read_phases(tmp_path / "p")

    def test_weights_roundtrip(self, tmp_path):
        w = seqlib.zone_weights(100)
        fileio.write_weights(tmp_path / "w", w)
        assert (tmp_path / "w").read_text().startswith("# seqforge weights v1 N=100\n")
        np.testing.assert_array_equal(fileio.read_weights(tmp_path / "w"), w)

    def test_wrong_kind(self, tmp_path):
        fileio.write_weights(tmp_path / "w", np.ones(3))
        with pytest.raises(fileio.FormatError):
            fileio.read_phases(tmp_path / "w")


class TestBench:
    def test_unknown_experiment(self, tmp_path):
        assert run("bench", "--experiment", "nope", "--out", tmp_path) == 2
        with pytest.raises(ValueError):
            bench.run("nope", tmp_path)

    def test_psl_sweep_small(self, tmp_path, monkeypatch):
        import time
        monkeypatch.setenv("SEQFORGE_THREADS", "2")
        t0 = time.perf_counter()
        assert run("bench", "--experiment", "psl-sweep", "--m", 5, 7, "--out", tmp_path) == 0
        assert time.perf_counter() - t0 < 60
        tab = fileio.read_convergence(tmp_path / "psl_sweep.csv")
        assert tab["N"].tolist() == [25, 49]
        for col in ("mm_psl_g", "mm_psl_f", "mm_psl_adaptive"):
            assert np.all(tab[col] <= tab["frank"] + 1e-9)

    def test_p_compare_small(self, tmp_path):
        res = bench.p_compare(tmp_path, N=64, p_values=(10, 100), max_iter=200)
        for p in (10, 100):
            conv = fileio.read_convergence(tmp_path / f"p{p}.csv")
            assert np.all(np.diff(conv["objective"]) <= 1e-12)
            assert "psl" in conv and conv["psl"].size == conv["objective"].size
            assert res[p]["lp_check"] == pytest.approx(res[p]["final_lp"], rel=1e-12)

    def test_p_compare_rejects_non_square(self, tmp_path):
        with pytest.raises(ValueError):
            bench.p_compare(tmp_path, N=50)

    def test_wisl_zone(self, tmp_path):
        summary = bench.wisl_zone(tmp_path, max_iter=300, floor=1e-6, corr_floor=1e-6)
        w = fileio.read_weights(tmp_path / "weights.txt")
        np.testing.assert_array_equal(w, seqlib.zone_weights(100))
        for name in ("mwisl", "mwisl-acc", "mwisl-diag", "mwisl-diag-acc"):
            conv = fileio.read_convergence(tmp_path / f"{name}.csv")
            assert np.all(np.diff(conv["objective"]) <= 1e-12)
            assert name in summary
        lvl = fileio.read_convergence(tmp_path / "correlation_level.csv")
        assert lvl["lag"].size == 199


def test_module_entry_point(tmp_path):
    out = tmp_path / "g.txt"
    proc = subprocess.run([sys.executable, "-m", "seqforge", "gen", "golomb", "--n", "5",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0 and out.exists()
