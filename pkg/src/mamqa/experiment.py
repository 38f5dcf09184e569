"""Campaign orchestration: weight sweep x timing grid x sampling, plus metrics.

For each measurement timing s and each weight point omega1 on an inclusive
[0, 1] grid, the sweep computes the mid-anneal measurement distribution and
draws a fixed number of samples from a substream keyed by (seed, timing
index, omega index).  Samples are aggregated per timing into one solution
set; metric curves are evaluated against the reference front and reference
point built from the union over all timings, and HV / SP are normalized by
their values at s = 0 and s = 1 respectively.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .errors import CapacityError, FormatError, NumericError, UndefinedMetricError
from .ising import ProblemInstance, all_objective_vectors
from .pareto import (
    ParetoFront,
    SolutionSet,
    classify_supported,
    enumerate_pareto,
    hypervolume,
    nondominated_filter,
    read_solution_set_csv,
    rni,
    spacing,
    write_front_csv,
    write_solution_set_csv,
)
from .schedule import AnnealSchedule
from .spectrum import SIZE_CAP, draw_samples, measurement_distribution

DEFAULT_TIMINGS: tuple[float, ...] = tuple(i / 10 for i in range(11))
DEFAULT_OMEGA_GRID = 101
DEFAULT_SAMPLES = 1000

PLAN_FILENAME = "plan.json"
METRICS_FILENAME = "metrics.csv"
FRONT_FILENAME = "front.csv"
RECOVERY_FILENAME = "recovery.csv"


def omega_grid(size: int) -> np.ndarray:
    """(size, 2) weight grid: omega1 equally spaced over [0, 1] inclusive."""
    if size < 2:
        raise ValueError(f"omega grid size must be >= 2, got {size}")
    w1 = np.arange(size, dtype=np.float64) / (size - 1)
    return np.column_stack([w1, 1.0 - w1])


@dataclass(frozen=True)
class ExperimentPlan:
    """Immutable description of one campaign over a single instance."""

    instance: ProblemInstance
    schedule: AnnealSchedule
    timings: tuple[float, ...] = DEFAULT_TIMINGS
    omega_grid_size: int = DEFAULT_OMEGA_GRID
    samples_per_point: int = DEFAULT_SAMPLES
    seed: int = 0
    keep_raw: bool = False
    instance_label: str = "inline"
    schedule_label: str = "default"

    def __post_init__(self) -> None:
        timings = tuple(float(s) for s in self.timings)
        if not timings:
            raise ValueError("plan needs at least one timing")
        if any(not (0.0 <= s <= 1.0) for s in timings):
            raise ValueError(f"timings must lie in [0, 1]: {timings}")
        if any(b <= a for a, b in zip(timings, timings[1:])):
            raise ValueError(f"timings must strictly increase: {timings}")
        if self.omega_grid_size < 2:
            raise ValueError(f"omega grid size must be >= 2, got {self.omega_grid_size}")
        if self.samples_per_point < 1:
            raise ValueError(f"samples per point must be >= 1, got {self.samples_per_point}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        if self.instance.m != 2:
            raise ValueError("the weight sweep is defined for two objectives")
        object.__setattr__(self, "timings", timings)

    def to_dict(self) -> dict:
        return {
            "instance": self.instance_label,
            "schedule": self.schedule_label,
            "timings": list(self.timings),
            "omega_grid_size": self.omega_grid_size,
            "samples_per_point": self.samples_per_point,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class TimingResult:
    """Samples collected at one timing: union over the weight grid."""

    s: float
    aggregated: SolutionSet
    per_omega: Optional[tuple[SolutionSet, ...]] = None


@dataclass(frozen=True)
class MetricsCurve:
    """Per-timing metric values; NaN marks an absent entry.

    hv_norm divides by the s = 0 value and sp_norm by the s = 1 value;
    either column is all-NaN when its anchor timing is missing from the
    plan (no rescaling to a different timing).  sp is NaN at timings whose
    aggregated set has fewer than two distinct vectors.
    """

    s: np.ndarray
    hv: np.ndarray
    hv_norm: np.ndarray
    sp: np.ndarray
    sp_norm: np.ndarray
    rni: np.ndarray

    def __post_init__(self) -> None:
        s = np.ascontiguousarray(self.s, dtype=np.float64)
        if s.ndim != 1:
            raise ValueError("s must be a 1-d array")
        for name in ("s", "hv", "hv_norm", "sp", "sp_norm", "rni"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            if arr.shape != s.shape:
                raise ValueError(f"column {name} length mismatch")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        valid = self.rni[np.isfinite(self.rni)]
        if valid.size and (valid.min() < 0.0 or valid.max() > 1.0):
            raise ValueError("rni outside [0, 1]")


@dataclass(frozen=True)
class RecoveryRow:
    """Unsupported-front recovery at one timing."""

    s: float
    unsupported_distinct: int
    unsupported_samples: int


def _sample_cell(
    instance: ProblemInstance,
    schedule: AnnealSchedule,
    s: float,
    omega: tuple[float, float],
    samples: int,
    seed: int,
    key: tuple[int, int],
    dim: int,
) -> np.ndarray:
    """Histogram of `samples` draws at one (s, omega) cell."""
    try:
        dist = measurement_distribution(instance, omega, schedule, s)
        states = draw_samples(dist, samples, seed, key=key)
    except NumericError as exc:
        raise NumericError(f"at s={s!r}, omega1={omega[0]!r}: {exc}") from exc
    return np.bincount(states, minlength=dim)


def run_sweep(plan: ExperimentPlan, workers: Optional[int] = None) -> list[TimingResult]:
    """Execute the full (timing x weight) sampling campaign.

    ``workers`` > 1 runs grid cells on a thread pool; cells are pure and the
    per-cell sample substreams are keyed by grid indices, so results are
    identical to the serial run regardless of worker count or interleaving.
    Memory scales with workers (each holds one dense 2^N matrix).
    """
    instance, schedule = plan.instance, plan.schedule
    if instance.n > SIZE_CAP:
        raise CapacityError(
            f"dense diagonalization capped at N <= {SIZE_CAP}, got N = {instance.n}"
        )
    table = all_objective_vectors(instance)
    grid = omega_grid(plan.omega_grid_size)
    dim = instance.num_configurations
    cells = [
        (ti, wi)
        for ti in range(len(plan.timings))
        for wi in range(plan.omega_grid_size)
    ]

    def work(cell: tuple[int, int]) -> np.ndarray:
        ti, wi = cell
        omega = (float(grid[wi, 0]), float(grid[wi, 1]))
        return _sample_cell(
            instance,
            schedule,
            plan.timings[ti],
            omega,
            plan.samples_per_point,
            plan.seed,
            key=(ti, wi),
            dim=dim,
        )

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            histograms = list(pool.map(work, cells))
    else:
        histograms = [work(cell) for cell in cells]

    results = []
    for ti, s in enumerate(plan.timings):
        per_timing = histograms[ti * plan.omega_grid_size : (ti + 1) * plan.omega_grid_size]
        total = np.sum(per_timing, axis=0)
        aggregated = _histogram_to_set(
            instance.n, table, total, provenance=f"s={s!r} omega1=full-grid"
        )
        expected = plan.omega_grid_size * plan.samples_per_point
        if aggregated.total_count != expected:
            raise AssertionError(
                f"sample conservation broken at s={s!r}: "
                f"{aggregated.total_count} != {expected}"
            )
        raw = None
        if plan.keep_raw:
            raw = tuple(
                _histogram_to_set(
                    instance.n,
                    table,
                    hist,
                    provenance=f"s={s!r} omega1={grid[wi, 0]!r}",
                )
                for wi, hist in enumerate(per_timing)
            )
        results.append(TimingResult(s=s, aggregated=aggregated, per_omega=raw))
    return results


def _histogram_to_set(
    n: int, table: np.ndarray, histogram: np.ndarray, provenance: str
) -> SolutionSet:
    hit = np.flatnonzero(histogram)
    return SolutionSet(
        n=n,
        configs=hit.astype(np.int64),
        vectors=table[hit],
        counts=histogram[hit].astype(np.int64),
        provenance=provenance,
    )


def compute_metrics(results: Sequence[TimingResult]) -> MetricsCurve:
    """Metric curves against the union reference over all given timings."""
    if not results:
        raise ValueError("need at least one timing result")
    union = np.vstack([r.aggregated.vectors for r in results])
    reference_front = nondominated_filter(union)
    reference_pt = union.max(axis=0)

    s_vals = np.array([r.s for r in results], dtype=np.float64)
    hv = np.empty(len(results))
    sp = np.empty(len(results))
    rni_vals = np.empty(len(results))
    for i, r in enumerate(results):
        hv[i] = hypervolume(r.aggregated, reference_pt)
        try:
            sp[i] = spacing(r.aggregated)
        except UndefinedMetricError:
            sp[i] = math.nan
        rni_vals[i] = rni(r.aggregated, reference_front)

    hv_norm = _normalize(hv, s_vals, anchor=0.0)
    sp_norm = _normalize(sp, s_vals, anchor=1.0)
    return MetricsCurve(
        s=s_vals, hv=hv, hv_norm=hv_norm, sp=sp, sp_norm=sp_norm, rni=rni_vals
    )


def _normalize(values: np.ndarray, s_vals: np.ndarray, anchor: float) -> np.ndarray:
    hit = np.flatnonzero(s_vals == anchor)
    if hit.size == 0:
        return np.full_like(values, math.nan)
    denom = values[int(hit[0])]
    if not math.isfinite(denom) or denom <= 0.0:
        return np.full_like(values, math.nan)
    return values / denom


def unsupported_recovery_report(
    results: Sequence[TimingResult], front: ParetoFront
) -> tuple[RecoveryRow, ...]:
    """How much of the unsupported front each timing's samples recovered."""
    if front.supported is None:
        raise ValueError("front must carry supported flags; run classify_supported")
    unsupported = {tuple(v) for v in front.vectors[~front.supported]}
    rows = []
    for r in results:
        mask = np.fromiter(
            (tuple(v) in unsupported for v in r.aggregated.vectors),
            dtype=bool,
            count=len(r.aggregated.vectors),
        )
        # Distinct objective vectors, not configs: spin-flip twins share one.
        seen = {tuple(v) for v in r.aggregated.vectors[mask]}
        rows.append(
            RecoveryRow(
                s=r.s,
                unsupported_distinct=len(seen),
                unsupported_samples=int(r.aggregated.counts[mask].sum()),
            )
        )
    return tuple(rows)


@dataclass(frozen=True)
class CampaignResult:
    """Everything one campaign produces, ready for writing or plotting."""

    plan: ExperimentPlan
    results: tuple[TimingResult, ...]
    metrics: MetricsCurve
    front: ParetoFront
    recovery: tuple[RecoveryRow, ...]


def run_campaign(plan: ExperimentPlan, workers: Optional[int] = None) -> CampaignResult:
    """Sweep, metrics, enumerated front, and recovery report in one call."""
    results = run_sweep(plan, workers=workers)
    metrics = compute_metrics(results)
    front = classify_supported(enumerate_pareto(plan.instance))
    recovery = unsupported_recovery_report(results, front)
    return CampaignResult(
        plan=plan,
        results=tuple(results),
        metrics=metrics,
        front=front,
        recovery=recovery,
    )


def timing_filename(s: float) -> str:
    return f"timing_{float(s)!r}.csv"


def _metric_cell(value: float) -> str:
    return "" if math.isnan(value) else repr(float(value))


def write_metrics_csv(metrics: MetricsCurve, target: Union[str, Path]) -> None:
    lines = ["s,hv,hv_norm,sp,sp_norm,rni"]
    for i in range(metrics.s.size):
        lines.append(
            ",".join(
                [
                    repr(float(metrics.s[i])),
                    _metric_cell(metrics.hv[i]),
                    _metric_cell(metrics.hv_norm[i]),
                    _metric_cell(metrics.sp[i]),
                    _metric_cell(metrics.sp_norm[i]),
                    _metric_cell(metrics.rni[i]),
                ]
            )
        )
    Path(target).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_metrics_csv(source: Union[str, Path]) -> MetricsCurve:
    text = Path(source).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "s,hv,hv_norm,sp,sp_norm,rni":
        raise FormatError(f"unexpected metrics header: {lines[:1]}")
    cols: list[list[float]] = [[], [], [], [], [], []]
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 6:
            raise FormatError(f"metrics row has {len(parts)} fields: {ln!r}")
        for col, cell in zip(cols, parts):
            col.append(math.nan if cell == "" else float(cell))
    return MetricsCurve(
        s=np.array(cols[0]),
        hv=np.array(cols[1]),
        hv_norm=np.array(cols[2]),
        sp=np.array(cols[3]),
        sp_norm=np.array(cols[4]),
        rni=np.array(cols[5]),
    )


def write_recovery_csv(rows: Sequence[RecoveryRow], target: Union[str, Path]) -> None:
    lines = ["s,unsupported_distinct,unsupported_samples"]
    for row in rows:
        lines.append(
            f"{float(row.s)!r},{row.unsupported_distinct},{row.unsupported_samples}"
        )
    Path(target).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_results_dir(out_dir: Union[str, Path], campaign: CampaignResult) -> None:
    """Materialize a campaign as the on-disk results layout.

    plan.json, one timing_<s>.csv per timing (solution-set format),
    metrics.csv, front.csv (with supported flags), recovery.csv.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / PLAN_FILENAME).write_text(
        json.dumps(campaign.plan.to_dict(), indent=2) + "\n", encoding="utf-8"
    )
    for result in campaign.results:
        write_solution_set_csv(result.aggregated, out / timing_filename(result.s))
    write_metrics_csv(campaign.metrics, out / METRICS_FILENAME)
    write_front_csv(campaign.front, out / FRONT_FILENAME)
    write_recovery_csv(campaign.recovery, out / RECOVERY_FILENAME)


def read_plan_dict(results_dir: Union[str, Path]) -> dict:
    path = Path(results_dir) / PLAN_FILENAME
    if not path.exists():
        raise FileNotFoundError(f"missing {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid plan.json: {exc}") from exc
    if not isinstance(data, dict) or "timings" not in data:
        raise FormatError("plan.json must be an object with a timings list")
    return data


def load_timing_results(results_dir: Union[str, Path]) -> list[TimingResult]:
    """Rebuild per-timing aggregated sets from an on-disk results directory."""
    plan = read_plan_dict(results_dir)
    out = []
    for s in plan["timings"]:
        path = Path(results_dir) / timing_filename(float(s))
        if not path.exists():
            raise FileNotFoundError(f"missing {path}")
        sset = read_solution_set_csv(path, provenance=f"s={float(s)!r} (loaded)")
        out.append(TimingResult(s=float(s), aggregated=sset))
    return out
