"""Command-line behavior: exit codes, produced files, determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from mamqa.cli import main
from mamqa.experiment import read_metrics_csv
from mamqa.ising import ProblemInstance, load_instance, save_instance
from mamqa.pareto import classify_supported, enumerate_pareto, read_front_csv
from mamqa.report import read_scatter_csv


def run_cli(*argv):
    try:
        return main([str(a) for a in argv])
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code)


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


@pytest.fixture(scope="module")
def instance_path(workdir):
    path = workdir / "inst4.json"
    assert run_cli("gen", "--n", 4, "--seed", 1, "--out", path) == 0
    return path


@pytest.fixture(scope="module")
def results_dir(workdir, instance_path):
    out = workdir / "results"
    code = run_cli(
        "sweep",
        "--instance", instance_path,
        "--timings", "0,0.5,1",
        "--grid", 5,
        "--samples", 20,
        "--seed", 3,
        "--out", out,
    )
    assert code == 0
    return out


class TestGen:
    def test_output_loads(self, instance_path):
        inst = load_instance(instance_path)
        assert inst.n == 4
        assert inst.m == 2
        assert len(inst.edges) == 6

    def test_same_seed_same_bytes(self, workdir):
        a, b = workdir / "a.json", workdir / "b.json"
        assert run_cli("gen", "--n", 5, "--seed", 7, "--out", a) == 0
        assert run_cli("gen", "--n", 5, "--seed", 7, "--out", b) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_seed_changes_output(self, workdir):
        a, b = workdir / "s0.json", workdir / "s1.json"
        assert run_cli("gen", "--n", 5, "--seed", 0, "--out", a) == 0
        assert run_cli("gen", "--n", 5, "--seed", 1, "--out", b) == 0
        assert a.read_bytes() != b.read_bytes()

    def test_usage_errors(self, workdir):
        out = workdir / "never.json"
        assert run_cli("gen", "--n", 1, "--out", out) == 2
        assert run_cli("gen", "--n", 4, "--seed", -1, "--out", out) == 2
        assert run_cli("gen", "--n", 4, "--topology", "ring", "--out", out) == 2
        assert run_cli("gen", "--n", 4, "--out", out, "--bogus") == 2
        assert not out.exists()

    def test_overwrite_guard(self, workdir):
        out = workdir / "guarded.json"
        assert run_cli("gen", "--n", 4, "--out", out) == 0
        before = out.read_bytes()
        assert run_cli("gen", "--n", 4, "--seed", 9, "--out", out) == 4
        assert out.read_bytes() == before
        assert run_cli("gen", "--n", 4, "--seed", 9, "--out", out, "--force") == 0
        assert out.read_bytes() != before


class TestEnumerate:
    def test_matches_library(self, workdir, instance_path):
        out = workdir / "front.csv"
        assert run_cli("enumerate", "--instance", instance_path, "--out", out) == 0
        loaded = read_front_csv(out)
        expected = classify_supported(enumerate_pareto(load_instance(instance_path)))
        np.testing.assert_array_equal(loaded.vectors, expected.vectors)
        np.testing.assert_array_equal(loaded.configs, expected.configs)
        np.testing.assert_array_equal(loaded.supported, expected.supported)

    def test_missing_instance(self, workdir):
        code = run_cli(
            "enumerate", "--instance", workdir / "nope.json",
            "--out", workdir / "x.csv",
        )
        assert code == 5

    def test_capacity(self, workdir):
        big = workdir / "chain21.json"
        inst = ProblemInstance(
            n=21,
            m=2,
            edges=tuple((i, i + 1) for i in range(20)),
            weights=np.tile([-0.5, 0.5], (20, 1)),
            fields=np.zeros(21),
        )
        save_instance(inst, big)
        code = run_cli("enumerate", "--instance", big, "--out", workdir / "y.csv")
        assert code == 3


class TestSweep:
    def test_directory_layout(self, results_dir):
        names = {p.name for p in results_dir.iterdir()}
        assert names == {
            "plan.json",
            "metrics.csv",
            "front.csv",
            "recovery.csv",
            "timing_0.0.csv",
            "timing_0.5.csv",
            "timing_1.0.csv",
        }

    def test_plan_echo(self, results_dir, instance_path):
        plan = json.loads((results_dir / "plan.json").read_text())
        assert plan["instance"] == str(instance_path)
        assert plan["schedule"] == "default"
        assert plan["timings"] == [0.0, 0.5, 1.0]
        assert plan["omega_grid_size"] == 5
        assert plan["samples_per_point"] == 20
        assert plan["seed"] == 3

    def test_metrics_row_per_timing(self, results_dir):
        metrics = read_metrics_csv(results_dir / "metrics.csv")
        np.testing.assert_array_equal(metrics.s, [0.0, 0.5, 1.0])
        assert metrics.hv_norm[0] == 1.0
        assert metrics.sp_norm[-1] == 1.0 or np.isnan(metrics.sp_norm[-1])

    def test_existing_dir_refused(self, results_dir, instance_path):
        code = run_cli(
            "sweep", "--instance", instance_path, "--timings", "0,1",
            "--grid", 2, "--samples", 1, "--out", results_dir,
        )
        assert code == 4
        # refusal must not clobber anything
        assert (results_dir / "timing_0.5.csv").exists()

    def test_force_rerun_byte_identical(self, workdir, instance_path):
        args = (
            "sweep", "--instance", instance_path, "--timings", "0,0.5,1",
            "--grid", 4, "--samples", 10, "--seed", 2,
        )
        first = workdir / "rerun_a"
        second = workdir / "rerun_b"
        assert run_cli(*args, "--out", first) == 0
        assert run_cli(*args, "--out", second) == 0
        for path in sorted(first.iterdir()):
            assert path.read_bytes() == (second / path.name).read_bytes()

    def test_capacity(self, workdir, capsys):
        big = workdir / "inst15.json"
        assert run_cli("gen", "--n", 15, "--out", big) == 0
        out = workdir / "never_dir"
        code = run_cli(
            "sweep", "--instance", big, "--timings", "0.5",
            "--grid", 2, "--samples", 1, "--out", out,
        )
        assert code == 3
        assert "14" in capsys.readouterr().err
        assert not out.exists()

    def test_usage_errors(self, workdir, instance_path):
        out = workdir / "never_dir2"
        base = ("sweep", "--instance", instance_path, "--out", out)
        assert run_cli(*base, "--timings", "0.5,0.2") == 2
        assert run_cli(*base, "--timings", "abc") == 2
        assert run_cli(*base, "--timings", "0.5,0.5") == 2
        assert run_cli(*base, "--grid", 1) == 2
        assert run_cli(*base, "--samples", 0) == 2
        assert not out.exists()

    def test_missing_instance(self, workdir):
        code = run_cli(
            "sweep", "--instance", workdir / "ghost.json",
            "--grid", 2, "--samples", 1, "--out", workdir / "never_dir3",
        )
        assert code == 5


class TestMetrics:
    def test_stdout_matches_stored_csv(self, results_dir, capsys):
        capsys.readouterr()
        assert run_cli("metrics", results_dir) == 0
        out = capsys.readouterr().out
        assert out == (results_dir / "metrics.csv").read_text()

    def test_out_file(self, workdir, results_dir):
        out = workdir / "metrics_copy.csv"
        assert run_cli("metrics", results_dir, "--out", out) == 0
        assert out.read_bytes() == (results_dir / "metrics.csv").read_bytes()
        assert run_cli("metrics", results_dir, "--out", out) == 4
        assert run_cli("metrics", results_dir, "--out", out, "--force") == 0

    def test_missing_dir(self, workdir):
        assert run_cli("metrics", workdir / "no_such_dir") == 5


class TestExportPlot:
    def test_metrics_view(self, results_dir):
        csv_out = results_dir / "plot_metrics_vs_s.csv"
        png_out = results_dir / "plot_metrics_vs_s.png"
        assert run_cli(
            "export-plot", results_dir, "--kind", "metrics-vs-s"
        ) == 0
        assert csv_out.exists() and png_out.exists()
        assert csv_out.read_bytes() == (results_dir / "metrics.csv").read_bytes()
        assert png_out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
        # guard, then forced rerun reproduces both outputs exactly
        assert run_cli("export-plot", results_dir, "--kind", "metrics-vs-s") == 4
        csv_bytes, png_bytes = csv_out.read_bytes(), png_out.read_bytes()
        assert run_cli(
            "export-plot", results_dir, "--kind", "metrics-vs-s", "--force"
        ) == 0
        assert csv_out.read_bytes() == csv_bytes
        assert png_out.read_bytes() == png_bytes

    def test_scatter_view(self, results_dir, instance_path):
        assert run_cli(
            "export-plot", results_dir, "--kind", "objective-scatter",
            "--timing", "1.0",
        ) == 0
        csv_out = results_dir / "plot_scatter_1.0.csv"
        assert csv_out.exists()
        assert csv_out.with_suffix(".png").exists()
        rows = read_scatter_csv(csv_out)
        assert sum(r.count for r in rows) == 5 * 20
        front = classify_supported(enumerate_pareto(load_instance(instance_path)))
        front_vecs = {tuple(v) for v in front.vectors}
        assert {(r.e1, r.e2) for r in rows if r.is_pareto} == front_vecs
        for r in rows:
            if not r.is_pareto:
                assert not r.is_supported
            if r.count == 0:
                assert r.is_pareto

    def test_custom_out_path(self, results_dir, workdir):
        custom = workdir / "plots" / "late.csv"
        assert run_cli(
            "export-plot", results_dir, "--kind", "objective-scatter",
            "--timing", "0.5", "--out", custom,
        ) == 0
        assert custom.exists()
        assert custom.with_suffix(".png").exists()

    def test_timing_not_in_plan(self, results_dir):
        code = run_cli(
            "export-plot", results_dir, "--kind", "objective-scatter",
            "--timing", "0.25",
        )
        assert code == 5

    def test_timing_flag_required(self, results_dir):
        assert run_cli("export-plot", results_dir, "--kind", "objective-scatter") == 2

    def test_unknown_kind(self, results_dir):
        assert run_cli("export-plot", results_dir, "--kind", "pie") == 2

    def test_missing_metrics_csv(self, workdir):
        empty = workdir / "empty_dir"
        empty.mkdir()
        assert run_cli("export-plot", empty, "--kind", "metrics-vs-s") == 5


class TestEntryPoints:
    def test_module_help(self):
        proc = subprocess.run(
            [sys.executable, "-m", "mamqa", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "sweep" in proc.stdout

    def test_no_command_is_usage_error(self):
        assert run_cli() == 2
