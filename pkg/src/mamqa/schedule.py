"""Annealing schedule: the envelope pair (A(s), B(s)) over normalized time.

A schedule is a table of breakpoints interpolated linearly.  The default is
the analytic ramp A(s) = 1 - s, B(s) = s.  Hardware-style tables load from
CSV with header ``s,A,B``; lines starting with ``#`` are comments.  Energy
units are abstract: the simulation depends only on the ratio A/B.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Union

import numpy as np

from .errors import FormatError

_HEADER = ("s", "A", "B")


@dataclass(frozen=True)
class AnnealSchedule:
    """Piecewise-linear schedule over s in [0, 1].

    Breakpoint abscissas are strictly increasing and span [0, 1] exactly.
    Envelope values must be nonnegative; non-monotone envelopes (A rising or
    B falling somewhere) are legal but draw a warning, since real hardware
    tables only ripple slightly.
    """

    s: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        s = np.ascontiguousarray(self.s, dtype=np.float64)
        a = np.ascontiguousarray(self.a, dtype=np.float64)
        b = np.ascontiguousarray(self.b, dtype=np.float64)
        if not (s.ndim == a.ndim == b.ndim == 1) or not (s.size == a.size == b.size):
            raise ValueError("s, a, b must be 1-d arrays of equal length")
        if s.size < 2:
            raise FormatError("schedule needs at least two breakpoints")
        if np.any(np.diff(s) <= 0.0):
            row = int(np.flatnonzero(np.diff(s) <= 0.0)[0]) + 1
            raise FormatError(f"breakpoint s values must strictly increase (row {row})")
        if s[0] != 0.0 or s[-1] != 1.0:
            raise FormatError(
                f"schedule must start at s=0 and end at s=1, got [{s[0]!r}, {s[-1]!r}]"
            )
        for name, col in (("A", a), ("B", b)):
            if not np.all(np.isfinite(col)):
                raise FormatError(f"column {name} contains non-finite values")
            if np.any(col < 0.0):
                row = int(np.flatnonzero(col < 0.0)[0])
                raise FormatError(f"negative {name} at row {row}")
        if np.any(np.diff(a) > 0.0):
            warnings.warn("schedule A(s) is not non-increasing", stacklevel=2)
        if np.any(np.diff(b) < 0.0):
            warnings.warn("schedule B(s) is not non-decreasing", stacklevel=2)
        for name, col in (("s", s), ("a", a), ("b", b)):
            col.setflags(write=False)
            object.__setattr__(self, name, col)

    def evaluate(self, s: float) -> tuple[float, float]:
        """Interpolated (A, B) at normalized time s; exact at breakpoints."""
        s = float(s)
        if not (0.0 <= s <= 1.0):
            raise ValueError(f"s must lie in [0, 1], got {s}")
        hit = np.flatnonzero(self.s == s)
        if hit.size:
            # Exact breakpoint: return stored values, bypassing interpolation
            # rounding so tabulated pairs reproduce bit for bit.
            k = int(hit[0])
            return float(self.a[k]), float(self.b[k])
        return (
            float(np.interp(s, self.s, self.a)),
            float(np.interp(s, self.s, self.b)),
        )


def default_schedule() -> AnnealSchedule:
    """Analytic ramp A(s) = 1 - s, B(s) = s (two breakpoints)."""
    return AnnealSchedule(
        s=np.array([0.0, 1.0]), a=np.array([1.0, 0.0]), b=np.array([0.0, 1.0])
    )


def load_schedule(source: Union[str, Path, IO[str]]) -> AnnealSchedule:
    """Parse a schedule CSV (header ``s,A,B``, ``#`` comments allowed).

    Format violations raise FormatError naming the offending row.  A table
    whose final breakpoint has A(1) != 0 is accepted but draws a warning:
    at such an endpoint the sampler never enters the exactly-classical
    degenerate-manifold regime.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    rows: list[tuple[float, float, float]] = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if not header_seen:
            if tuple(parts) != _HEADER:
                raise FormatError(
                    f"line {lineno}: expected header 's,A,B', got {line!r}"
                )
            header_seen = True
            continue
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: expected 3 fields, got {len(parts)}")
        try:
            rows.append((float(parts[0]), float(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if not header_seen:
        raise FormatError("missing header 's,A,B'")
    if len(rows) < 2:
        raise FormatError(f"need at least 2 breakpoints, got {len(rows)}")
    arr = np.array(rows, dtype=np.float64)
    sched = AnnealSchedule(s=arr[:, 0], a=arr[:, 1], b=arr[:, 2])
    if sched.a[-1] != 0.0:
        warnings.warn(
            "loaded schedule has A(1) != 0; the s=1 endpoint will be treated "
            "as a quantum point, not the classical degenerate manifold",
            stacklevel=2,
        )
    return sched


def save_schedule(schedule: AnnealSchedule, target: Union[str, Path, IO[str]]) -> None:
    """Write the schedule as CSV; floats use repr so load round-trips exactly."""
    buf = io.StringIO()
    buf.write("s,A,B\n")
    for s, a, b in zip(schedule.s, schedule.a, schedule.b):
        buf.write(f"{float(s)!r},{float(a)!r},{float(b)!r}\n")
    text = buf.getvalue()
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")
