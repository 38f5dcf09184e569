"""Plot-data export: tidy CSVs plus rendered matplotlib figures.

Two report kinds mirror the two standard views of a campaign: metric curves
against measurement timing, and the objective-space scatter of one timing's
samples colored by sampling frequency, with Pareto-front membership and
supported/unsupported status flagged per point.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence, Union

import numpy as np

from .errors import FormatError
from .experiment import MetricsCurve
from .pareto import ParetoFront, SolutionSet


@dataclass(frozen=True)
class ScatterRow:
    """One objective-space point of a timing scatter."""

    e1: float
    e2: float
    count: int
    is_pareto: bool
    is_supported: bool


def scatter_rows(sset: SolutionSet, front: ParetoFront) -> list[ScatterRow]:
    """Join a timing's samples against the enumerated front.

    Every sampled vector appears with its count; front vectors the sampler
    missed are appended with count 0 so the view always shows the whole
    front.  Rows are sorted by (e1, e2).
    """
    if front.supported is None:
        raise ValueError("front must carry supported flags")
    if sset.m != 2 or front.m != 2:
        raise ValueError("scatter export is defined for two objectives")
    front_info = {
        tuple(v): bool(front.supported[i]) for i, v in enumerate(front.vectors)
    }
    rows = []
    seen = set()
    if len(sset.vectors):
        # Distinct configurations can share one objective vector; merge them.
        uniq, inverse = np.unique(sset.vectors, axis=0, return_inverse=True)
        sums = np.zeros(uniq.shape[0], dtype=np.int64)
        np.add.at(sums, inverse, sset.counts)
        for vec, count in zip(uniq, sums):
            key = (float(vec[0]), float(vec[1]))
            seen.add(key)
            supported = front_info.get(key)
            rows.append(
                ScatterRow(
                    e1=key[0],
                    e2=key[1],
                    count=int(count),
                    is_pareto=supported is not None,
                    is_supported=bool(supported),
                )
            )
    for key, supported in front_info.items():
        if key not in seen:
            rows.append(
                ScatterRow(
                    e1=key[0],
                    e2=key[1],
                    count=0,
                    is_pareto=True,
                    is_supported=supported,
                )
            )
    rows.sort(key=lambda r: (r.e1, r.e2))
    return rows


def write_scatter_csv(
    rows: Sequence[ScatterRow], target: Union[str, Path, IO[str]]
) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["e1", "e2", "count", "is_pareto", "is_supported"])
    for row in rows:
        writer.writerow(
            [
                repr(float(row.e1)),
                repr(float(row.e2)),
                int(row.count),
                str(bool(row.is_pareto)).lower(),
                str(bool(row.is_supported)).lower(),
            ]
        )
    text = buf.getvalue()
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def read_scatter_csv(source: Union[str, Path]) -> list[ScatterRow]:
    text = Path(source).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    table = [row for row in reader if row]
    if not table or table[0] != ["e1", "e2", "count", "is_pareto", "is_supported"]:
        raise FormatError(f"unexpected scatter header: {table[:1]}")
    rows = []
    for lineno, row in enumerate(table[1:], start=2):
        try:
            rows.append(
                ScatterRow(
                    e1=float(row[0]),
                    e2=float(row[1]),
                    count=int(row[2]),
                    is_pareto=row[3] == "true",
                    is_supported=row[4] == "true",
                )
            )
        except (IndexError, ValueError) as exc:
            raise FormatError(f"row {lineno}: {exc}") from exc
    return rows


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def render_metrics_figure(metrics: MetricsCurve, target: Union[str, Path]) -> None:
    """Line plot of the normalized metric curves against timing."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    series = [
        ("hv_norm", metrics.hv_norm, "o-"),
        ("sp_norm", metrics.sp_norm, "s-"),
        ("rni", metrics.rni, "^-"),
    ]
    for label, values, style in series:
        mask = np.isfinite(values)
        if mask.any():
            ax.plot(metrics.s[mask], values[mask], style, label=label, markersize=4)
    ax.set_xlabel("measurement timing s")
    ax.set_ylabel("normalized metric value")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(target, dpi=200)
    plt.close(fig)


def render_scatter_figure(
    rows: Sequence[ScatterRow], s: float, target: Union[str, Path]
) -> None:
    """Objective-space scatter: sampled points colored by frequency.

    Front points are ringed; unsupported front points get a distinct marker
    so non-convex recoveries stand out.
    """
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    sampled = [r for r in rows if r.count > 0]
    if sampled:
        e1 = [r.e1 for r in sampled]
        e2 = [r.e2 for r in sampled]
        counts = [r.count for r in sampled]
        sc = ax.scatter(e1, e2, c=counts, cmap="viridis", s=28, zorder=2)
        fig.colorbar(sc, ax=ax, label="samples")
    front = [r for r in rows if r.is_pareto]
    supported = [r for r in front if r.is_supported]
    unsupported = [r for r in front if not r.is_supported]
    if supported:
        ax.scatter(
            [r.e1 for r in supported],
            [r.e2 for r in supported],
            facecolors="none",
            edgecolors="tab:red",
            s=90,
            linewidths=1.2,
            label="supported front",
            zorder=3,
        )
    if unsupported:
        ax.scatter(
            [r.e1 for r in unsupported],
            [r.e2 for r in unsupported],
            marker="x",
            color="tab:red",
            s=70,
            linewidths=1.4,
            label="unsupported front",
            zorder=3,
        )
    ax.set_xlabel("objective 1")
    ax.set_ylabel("objective 2")
    ax.set_title(f"samples at s = {s:g}")
    ax.grid(alpha=0.3)
    if front:
        ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(target, dpi=200)
    plt.close(fig)
