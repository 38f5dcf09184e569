"""Batch command-line frontend.

Subcommands: ``gen`` (seeded instance files), ``enumerate`` (exhaustive
Pareto front with supported flags), ``sweep`` (full sampling campaign into
a results directory), ``metrics`` (recompute metric curves from a results
directory), ``export-plot`` (tidy plot-data CSV plus a rendered PNG).

Exit codes: 0 success, 1 input/validation failure, 2 usage, 3 capacity,
4 overwrite refusal, 5 missing input.  All randomness flows from --seed.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import (
    CapacityError,
    ConnectivityError,
    FormatError,
    NumericError,
    OverwriteRefusalError,
    UndefinedMetricError,
    UnsupportedDimensionError,
)
from .experiment import (
    DEFAULT_OMEGA_GRID,
    DEFAULT_SAMPLES,
    DEFAULT_TIMINGS,
    ExperimentPlan,
    compute_metrics,
    load_timing_results,
    read_metrics_csv,
    read_plan_dict,
    run_campaign,
    timing_filename,
    write_metrics_csv,
    write_results_dir,
)
from .ising import generate_instance, load_instance, save_instance
from .pareto import (
    classify_supported,
    enumerate_pareto,
    read_front_csv,
    read_solution_set_csv,
    write_front_csv,
)
from .report import (
    render_metrics_figure,
    render_scatter_figure,
    scatter_rows,
    write_scatter_csv,
)
from .schedule import default_schedule, load_schedule

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_OVERWRITE = 4
EXIT_MISSING = 5

_FRONT_FILENAME = "front.csv"
_METRICS_FILENAME = "metrics.csv"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mamqa",
        description=(
            "Simulate quantum annealing with mid-anneal measurement on "
            "multi-objective Ising instances and evaluate the sampled fronts."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a seeded instance JSON file")
    gen.add_argument("--n", type=int, required=True, help="number of spins (>= 2)")
    gen.add_argument(
        "--topology", default="complete", help="edge topology (only: complete)"
    )
    gen.add_argument("--seed", type=int, default=0, help="RNG seed (>= 0)")
    gen.add_argument("--out", required=True, help="output instance path")
    gen.add_argument("--force", action="store_true", help="overwrite existing output")
    gen.set_defaults(func=_cmd_gen)

    enum = sub.add_parser(
        "enumerate", help="exhaustive Pareto front with supported flags"
    )
    enum.add_argument("--instance", required=True, help="instance JSON path")
    enum.add_argument("--out", required=True, help="output front CSV path")
    enum.add_argument("--force", action="store_true", help="overwrite existing output")
    enum.set_defaults(func=_cmd_enumerate)

    sweep = sub.add_parser(
        "sweep", help="run the full timing x weight sampling campaign"
    )
    sweep.add_argument("--instance", required=True, help="instance JSON path")
    sweep.add_argument(
        "--schedule", default=None, help="schedule CSV path (default: analytic ramp)"
    )
    sweep.add_argument(
        "--timings",
        default=",".join(repr(s) for s in DEFAULT_TIMINGS),
        help="comma-separated measurement timings in [0, 1]",
    )
    sweep.add_argument(
        "--grid", type=int, default=DEFAULT_OMEGA_GRID, help="weight grid size (>= 2)"
    )
    sweep.add_argument(
        "--samples",
        type=int,
        default=DEFAULT_SAMPLES,
        help="samples per (timing, weight) cell (>= 1)",
    )
    sweep.add_argument("--seed", type=int, default=0, help="RNG seed (>= 0)")
    sweep.add_argument("--out", required=True, help="output results directory")
    sweep.add_argument("--force", action="store_true", help="overwrite existing output")
    sweep.set_defaults(func=_cmd_sweep)

    metrics = sub.add_parser(
        "metrics", help="recompute metric curves from a results directory"
    )
    metrics.add_argument("results_dir", help="results directory from sweep")
    metrics.add_argument(
        "--out", default=None, help="output CSV path (default: print to stdout)"
    )
    metrics.add_argument(
        "--force", action="store_true", help="overwrite existing output"
    )
    metrics.set_defaults(func=_cmd_metrics)

    plot = sub.add_parser(
        "export-plot", help="export plot data CSV and render the figure"
    )
    plot.add_argument("results_dir", help="results directory from sweep")
    plot.add_argument(
        "--kind",
        required=True,
        choices=["metrics-vs-s", "objective-scatter"],
        help="which view to export",
    )
    plot.add_argument(
        "--timing",
        type=float,
        default=None,
        help="timing s for objective-scatter (must be in the plan)",
    )
    plot.add_argument(
        "--out", default=None, help="output CSV path (PNG lands alongside)"
    )
    plot.add_argument("--force", action="store_true", help="overwrite existing output")
    plot.set_defaults(func=_cmd_export_plot)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except OverwriteRefusalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERWRITE
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (FileNotFoundError, NotADirectoryError) as exc:
        print(f"error: missing input: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (
        FormatError,
        ConnectivityError,
        NumericError,
        UndefinedMetricError,
        UnsupportedDimensionError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


def _guard(path: Path, force: bool) -> None:
    if path.exists() and not force:
        raise OverwriteRefusalError(f"{path} exists; pass --force to overwrite")


def _cmd_gen(args, parser) -> int:
    if args.n < 2:
        parser.error("--n must be >= 2")
    if args.seed < 0:
        parser.error("--seed must be >= 0")
    if args.topology != "complete":
        parser.error(f"unknown --topology {args.topology!r} (only: complete)")
    out = Path(args.out)
    _guard(out, args.force)
    instance = generate_instance(args.n, args.topology, args.seed)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_instance(instance, out)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_enumerate(args, parser) -> int:
    instance = load_instance(args.instance)
    out = Path(args.out)
    _guard(out, args.force)
    front = classify_supported(enumerate_pareto(instance))
    out.parent.mkdir(parents=True, exist_ok=True)
    write_front_csv(front, out)
    print(f"wrote {out} ({len(front)} front points)")
    return EXIT_OK


def _parse_timings(raw: str, parser) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in raw.split(",") if part.strip())
    except ValueError:
        parser.error(f"--timings must be a comma list of floats, got {raw!r}")
    if not values:
        parser.error("--timings must name at least one timing")
    if any(not (0.0 <= s <= 1.0) for s in values):
        parser.error(f"--timings must lie in [0, 1], got {raw!r}")
    if any(b <= a for a, b in zip(values, values[1:])):
        parser.error(f"--timings must strictly increase, got {raw!r}")
    return values


def _cmd_sweep(args, parser) -> int:
    timings = _parse_timings(args.timings, parser)
    if args.grid < 2:
        parser.error("--grid must be >= 2")
    if args.samples < 1:
        parser.error("--samples must be >= 1")
    if args.seed < 0:
        parser.error("--seed must be >= 0")
    instance = load_instance(args.instance)
    if args.schedule is None:
        schedule = default_schedule()
        schedule_label = "default"
    else:
        schedule = load_schedule(args.schedule)
        schedule_label = str(args.schedule)
    out = Path(args.out)
    _guard(out, args.force)
    plan = ExperimentPlan(
        instance=instance,
        schedule=schedule,
        timings=timings,
        omega_grid_size=args.grid,
        samples_per_point=args.samples,
        seed=args.seed,
        instance_label=str(args.instance),
        schedule_label=schedule_label,
    )
    campaign = run_campaign(plan)
    write_results_dir(out, campaign)
    print(f"wrote {out} ({len(timings)} timings x {args.grid} weights)")
    return EXIT_OK


def _cmd_metrics(args, parser) -> int:
    results = load_timing_results(args.results_dir)
    metrics = compute_metrics(results)
    if args.out is None:
        lines = ["s,hv,hv_norm,sp,sp_norm,rni"]
        for i in range(metrics.s.size):
            cells = [repr(float(metrics.s[i]))]
            for col in (metrics.hv, metrics.hv_norm, metrics.sp, metrics.sp_norm, metrics.rni):
                value = float(col[i])
                cells.append("" if math.isnan(value) else repr(value))
            lines.append(",".join(cells))
        print("\n".join(lines))
        return EXIT_OK
    out = Path(args.out)
    _guard(out, args.force)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_metrics_csv(metrics, out)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_export_plot(args, parser) -> int:
    results_dir = Path(args.results_dir)
    if args.kind == "objective-scatter" and args.timing is None:
        parser.error("--timing is required for --kind objective-scatter")

    if args.kind == "metrics-vs-s":
        source = results_dir / _METRICS_FILENAME
        if not source.exists():
            raise FileNotFoundError(f"missing {source}")
        metrics = read_metrics_csv(source)
        csv_out = Path(args.out) if args.out else results_dir / "plot_metrics_vs_s.csv"
        png_out = csv_out.with_suffix(".png")
        _guard(csv_out, args.force)
        _guard(png_out, args.force)
        csv_out.parent.mkdir(parents=True, exist_ok=True)
        write_metrics_csv(metrics, csv_out)
        render_metrics_figure(metrics, png_out)
        print(f"wrote {csv_out}")
        print(f"wrote {png_out}")
        return EXIT_OK

    plan = read_plan_dict(results_dir)
    timing = float(args.timing)
    matches = [float(s) for s in plan["timings"] if float(s) == timing]
    if not matches:
        raise FileNotFoundError(
            f"timing {timing!r} not in plan {sorted(float(s) for s in plan['timings'])}"
        )
    timing_path = results_dir / timing_filename(matches[0])
    if not timing_path.exists():
        raise FileNotFoundError(f"missing {timing_path}")
    front_path = results_dir / _FRONT_FILENAME
    if not front_path.exists():
        raise FileNotFoundError(f"missing {front_path}")
    sset = read_solution_set_csv(timing_path, provenance=f"s={matches[0]!r}")
    front = read_front_csv(front_path)
    rows = scatter_rows(sset, front)
    stem = f"plot_scatter_{matches[0]!r}"
    csv_out = Path(args.out) if args.out else results_dir / f"{stem}.csv"
    png_out = csv_out.with_suffix(".png")
    _guard(csv_out, args.force)
    _guard(png_out, args.force)
    csv_out.parent.mkdir(parents=True, exist_ok=True)
    write_scatter_csv(rows, csv_out)
    render_scatter_figure(rows, matches[0], png_out)
    print(f"wrote {csv_out}")
    print(f"wrote {png_out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
