"""Pareto machinery: dominance, exhaustive fronts, hull classification, metrics.

All objectives are minimized.  Dominance and front membership use exact
floating comparison: objective values are short sums of given doubles, and
an epsilon would make dominance non-transitive.  Hypervolume and spacing
deduplicate by exact objective-vector equality, since both metrics live in
objective space and globally spin-flipped configurations share one vector.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO, Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    CapacityError,
    FormatError,
    UndefinedMetricError,
    UnsupportedDimensionError,
)
from .ising import ProblemInstance, all_objective_vectors

# Exhaustive enumeration walks all 2^N configurations.
ENUMERATION_CAP = 20

# Grid resolution and tolerance for the scalarization certificate.
CERTIFICATE_GRID = 10_000
CERTIFICATE_RTOL = 1e-9


@dataclass(frozen=True)
class SolutionSet:
    """Multiset of sampled configurations with their objective vectors.

    One record per distinct configuration: integer label, objective vector,
    positive count.  ``provenance`` is a free-form label of where the
    samples came from (timing and weight range).
    """

    n: int
    configs: np.ndarray
    vectors: np.ndarray
    counts: np.ndarray
    provenance: str = ""

    def __post_init__(self) -> None:
        configs = np.ascontiguousarray(self.configs, dtype=np.int64)
        vectors = np.ascontiguousarray(self.vectors, dtype=np.float64)
        counts = np.ascontiguousarray(self.counts, dtype=np.int64)
        if configs.ndim != 1 or vectors.ndim != 2 or counts.ndim != 1:
            raise ValueError("configs/counts must be 1-d, vectors 2-d")
        k = configs.size
        if vectors.shape[0] != k or counts.size != k:
            raise ValueError("configs, vectors, counts must have equal length")
        if k and (configs.min() < 0 or configs.max() >= (1 << self.n)):
            raise ValueError(f"configurations outside [0, 2**{self.n})")
        if np.any(counts < 1):
            raise ValueError("record counts must be positive")
        if not np.all(np.isfinite(vectors)):
            raise ValueError("objective vectors must be finite")
        for name, arr in (("configs", configs), ("vectors", vectors), ("counts", counts)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def m(self) -> int:
        return self.vectors.shape[1]

    @property
    def total_count(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class ParetoFront:
    """Mutually non-dominated objective vectors with representative configs.

    Rows are kept in canonical order (lexicographic by vector).  With two
    objectives this means e1 strictly increasing and e2 strictly
    decreasing.  ``multiplicity`` counts how many configurations map to
    each vector; ``supported`` is None until classify_supported runs.
    """

    n: int
    vectors: np.ndarray
    configs: np.ndarray
    multiplicity: np.ndarray
    supported: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        vectors = np.ascontiguousarray(self.vectors, dtype=np.float64)
        configs = np.ascontiguousarray(self.configs, dtype=np.int64)
        multiplicity = np.ascontiguousarray(self.multiplicity, dtype=np.int64)
        if vectors.ndim != 2:
            raise ValueError("vectors must be 2-d")
        k = vectors.shape[0]
        if configs.shape != (k,) or multiplicity.shape != (k,):
            raise ValueError("configs and multiplicity must match vectors")
        if np.any(multiplicity < 1):
            raise ValueError("multiplicities must be positive")
        supported = self.supported
        if supported is not None:
            supported = np.ascontiguousarray(supported, dtype=bool)
            if supported.shape != (k,):
                raise ValueError("supported flags must match vectors")
        order = np.lexsort(vectors.T[::-1]) if k else np.arange(0)
        vectors = np.ascontiguousarray(vectors[order])
        configs = np.ascontiguousarray(configs[order])
        multiplicity = np.ascontiguousarray(multiplicity[order])
        if supported is not None:
            supported = np.ascontiguousarray(supported[order])
        _check_mutually_nondominated(vectors)
        for name, arr in (
            ("vectors", vectors),
            ("configs", configs),
            ("multiplicity", multiplicity),
        ):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if supported is not None:
            supported.setflags(write=False)
        object.__setattr__(self, "supported", supported)

    @property
    def m(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.vectors.shape[0]


def _check_mutually_nondominated(vectors: np.ndarray) -> None:
    for i in range(vectors.shape[0]):
        le = np.all(vectors <= vectors[i], axis=1)
        lt = np.any(vectors < vectors[i], axis=1)
        if np.any(le & lt):
            raise ValueError(f"front row {i} is dominated by another row")


def as_vectors(solutions) -> np.ndarray:
    """Coerce a SolutionSet, ParetoFront, or array-like to an (k, M) array."""
    if isinstance(solutions, (SolutionSet, ParetoFront)):
        return np.asarray(solutions.vectors, dtype=np.float64)
    arr = np.asarray(solutions, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(0, 0) if arr.size == 0 else arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d array of vectors, got shape {arr.shape}")
    return arr


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True iff a is at most b everywhere and strictly below somewhere."""
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.shape != bv.shape or av.ndim != 1:
        raise ValueError(f"dimension mismatch: {av.shape} vs {bv.shape}")
    return bool(np.all(av <= bv) and np.any(av < bv))


def nondominated_filter(vectors) -> np.ndarray:
    """Maximal non-dominated subset, deduplicated, in lexicographic order."""
    arr = as_vectors(vectors)
    if arr.shape[0] == 0:
        return arr
    uniq = np.unique(arr, axis=0)
    return uniq[_nondominated_mask_sorted(uniq)]


def _nondominated_mask_sorted(uniq: np.ndarray) -> np.ndarray:
    """Mask of non-dominated rows; input must be unique and lex-sorted."""
    k = uniq.shape[0]
    if uniq.shape[1] == 2:
        # Sweep over ascending e1: a row survives iff its e2 is strictly
        # below every earlier row's e2 (ties in e1 resolve by sort order).
        e2 = uniq[:, 1]
        keep = np.empty(k, dtype=bool)
        keep[0] = True
        if k > 1:
            keep[1:] = e2[1:] < np.minimum.accumulate(e2)[:-1]
        return keep
    keep = np.empty(k, dtype=bool)
    for i in range(k):
        le = np.all(uniq <= uniq[i], axis=1)
        lt = np.any(uniq < uniq[i], axis=1)
        keep[i] = not np.any(le & lt)
    return keep


def enumerate_pareto(instance: ProblemInstance) -> ParetoFront:
    """Exhaustive Pareto front over all 2^N configurations.

    Returns one representative configuration (the smallest integer label)
    per distinct front vector, plus how many configurations map to it.
    """
    if instance.n > ENUMERATION_CAP:
        raise CapacityError(
            f"exhaustive enumeration capped at N <= {ENUMERATION_CAP}, "
            f"got N = {instance.n}"
        )
    table = all_objective_vectors(instance)
    uniq, first, mult = np.unique(
        table, axis=0, return_index=True, return_counts=True
    )
    keep = _nondominated_mask_sorted(uniq)
    return ParetoFront(
        n=instance.n,
        vectors=uniq[keep],
        configs=first[keep].astype(np.int64),
        multiplicity=mult[keep],
    )


def classify_supported(front: ParetoFront) -> ParetoFront:
    """Flag front points on the lower-left convex hull as supported.

    A supported point minimizes omega1*e1 + (1-omega1)*e2 for some
    omega1 in [0, 1]; geometrically these are the hull vertices plus any
    points collinear with a hull facet (weak support).  Only defined for
    two objectives.
    """
    if front.m != 2:
        raise UnsupportedDimensionError(
            f"supported/unsupported split needs 2 objectives, got {front.m}"
        )
    pts = front.vectors
    k = pts.shape[0]
    supported = np.zeros(k, dtype=bool)
    if k:
        # Monotone chain over e1-ascending points; pop clockwise turns,
        # keep collinear points so facet-interior vectors count as supported.
        stack: list[int] = []
        for i in range(k):
            while len(stack) >= 2 and _cross(
                pts[stack[-2]], pts[stack[-1]], pts[i]
            ) < 0.0:
                stack.pop()
            stack.append(i)
        supported[stack] = True
    return replace(front, supported=supported)


def _cross(o: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    return float((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]))


def supported_certificate(
    vectors,
    grid_size: int = CERTIFICATE_GRID,
    rtol: float = CERTIFICATE_RTOL,
) -> np.ndarray:
    """Grid certificate: which vectors attain a scalarized minimum.

    Scans omega1 over ``grid_size`` equally spaced points in [0, 1] and
    marks every vector that reaches the minimum of the scalarized energy
    (within a small relative tolerance) at some grid point.  Cross-checks
    the geometric classification on generic instances; near-degenerate hull
    facets may need a finer grid.
    """
    pts = as_vectors(vectors)
    if pts.shape[1] != 2:
        raise UnsupportedDimensionError(
            f"certificate needs 2 objectives, got {pts.shape[1]}"
        )
    if grid_size < 2:
        raise ValueError(f"grid size must be >= 2, got {grid_size}")
    w1 = np.arange(grid_size, dtype=np.float64) / (grid_size - 1)
    scal = np.outer(pts[:, 0], w1) + np.outer(pts[:, 1], 1.0 - w1)
    mins = scal.min(axis=0)
    tol = rtol * np.maximum(1.0, np.abs(mins))
    return np.any(scal <= mins + tol, axis=1)


def hypervolume(solutions, ref) -> float:
    """Dominated area between a solution set and the reference point.

    Deduplicates, filters to the non-dominated subset, clips away points
    beyond the reference (they contribute zero area), then sums the sweep
    rectangles.  Two objectives only.
    """
    pts = as_vectors(solutions)
    refv = np.asarray(ref, dtype=np.float64).reshape(-1)
    if pts.shape[0] and pts.shape[1] != 2:
        raise UnsupportedDimensionError(
            f"hypervolume needs 2 objectives, got {pts.shape[1]}"
        )
    if refv.shape != (2,):
        raise ValueError(f"reference point must have 2 components, got {refv.shape}")
    if pts.shape[0] == 0:
        return 0.0
    nd = nondominated_filter(pts)
    nd = nd[(nd[:, 0] <= refv[0]) & (nd[:, 1] <= refv[1])]
    if nd.shape[0] == 0:
        return 0.0
    widths = np.diff(np.append(nd[:, 0], refv[0]))
    return float(np.sum(widths * (refv[1] - nd[:, 1])))


def spacing(solutions) -> float:
    """Schott's uniformity statistic over the deduplicated vector set.

    d_i is the L1 distance from vector i to its nearest distinct neighbor;
    SP is the sample standard deviation of the d_i.  Undefined for fewer
    than two distinct vectors.
    """
    pts = as_vectors(solutions)
    uniq = np.unique(pts, axis=0) if pts.shape[0] else pts
    k = uniq.shape[0]
    if k < 2:
        raise UndefinedMetricError(
            f"spacing needs at least 2 distinct vectors, got {k}"
        )
    nearest = np.empty(k, dtype=np.float64)
    chunk = 256
    for start in range(0, k, chunk):
        block = uniq[start : start + chunk]
        dist = np.abs(block[:, None, :] - uniq[None, :, :]).sum(axis=2)
        rows = np.arange(block.shape[0])
        dist[rows, start + rows] = np.inf
        nearest[start : start + chunk] = dist.min(axis=1)
    mean = nearest.mean()
    return math.sqrt(float(np.sum((mean - nearest) ** 2) / (k - 1)))


def rni(solution_set: SolutionSet, reference_front) -> float:
    """Fraction of sample occurrences whose vector sits on the reference front.

    Duplicates count: each of a record's ``count`` occurrences contributes.
    Membership is exact vector equality.
    """
    total = solution_set.total_count
    if total < 1:
        raise ValueError("solution set has no samples")
    members = {tuple(v) for v in as_vectors(reference_front)}
    mask = np.fromiter(
        (tuple(v) in members for v in solution_set.vectors),
        dtype=bool,
        count=len(solution_set.vectors),
    )
    return float(solution_set.counts[mask].sum() / total)


def reference_point(sets: Iterable) -> np.ndarray:
    """Component-wise worst (maximum) vector over every given solution set."""
    stacks = [as_vectors(s) for s in sets]
    stacks = [s for s in stacks if s.shape[0]]
    if not stacks:
        raise ValueError("reference point needs at least one record")
    return np.vstack(stacks).max(axis=0)


def _format_bits(z: int, n: int) -> str:
    return format(z, f"0{n}b")


def write_solution_set_csv(
    sset: SolutionSet, target: Union[str, Path, IO[str]]
) -> None:
    """Solution-set CSV: config_bits,e1,...,eM,count; spin 0 is the rightmost bit."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["config_bits"] + [f"e{m + 1}" for m in range(sset.m)] + ["count"]
    )
    order = np.argsort(sset.configs, kind="stable")
    for idx in order:
        writer.writerow(
            [_format_bits(int(sset.configs[idx]), sset.n)]
            + [repr(float(v)) for v in sset.vectors[idx]]
            + [int(sset.counts[idx])]
        )
    _write_text(target, buf.getvalue())


def read_solution_set_csv(
    source: Union[str, Path, IO[str]], provenance: str = ""
) -> SolutionSet:
    header, rows = _read_csv(source)
    m = _solution_header_m(header, trailing=["count"])
    configs, vectors, counts = [], [], []
    for lineno, row in rows:
        if len(row) != m + 2:
            raise FormatError(f"row {lineno}: expected {m + 2} fields")
        try:
            configs.append(int(row[0], 2))
            vectors.append([float(x) for x in row[1 : 1 + m]])
            counts.append(int(row[1 + m]))
        except ValueError as exc:
            raise FormatError(f"row {lineno}: {exc}") from exc
    n = len(rows[0][1][0]) if rows else 1
    return SolutionSet(
        n=n,
        configs=np.array(configs, dtype=np.int64),
        vectors=np.array(vectors, dtype=np.float64).reshape(len(configs), m),
        counts=np.array(counts, dtype=np.int64),
        provenance=provenance,
    )


def write_front_csv(front: ParetoFront, target: Union[str, Path, IO[str]]) -> None:
    """Front CSV: solution-set columns plus a supported flag per row."""
    if front.supported is None:
        raise ValueError("front must be classified before export")
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["config_bits"]
        + [f"e{m + 1}" for m in range(front.m)]
        + ["count", "supported"]
    )
    for idx in range(len(front)):
        writer.writerow(
            [_format_bits(int(front.configs[idx]), front.n)]
            + [repr(float(v)) for v in front.vectors[idx]]
            + [int(front.multiplicity[idx]), str(bool(front.supported[idx])).lower()]
        )
    _write_text(target, buf.getvalue())


def read_front_csv(source: Union[str, Path, IO[str]]) -> ParetoFront:
    header, rows = _read_csv(source)
    m = _solution_header_m(header, trailing=["count", "supported"])
    configs, vectors, mult, flags = [], [], [], []
    for lineno, row in rows:
        if len(row) != m + 3:
            raise FormatError(f"row {lineno}: expected {m + 3} fields")
        try:
            configs.append(int(row[0], 2))
            vectors.append([float(x) for x in row[1 : 1 + m]])
            mult.append(int(row[1 + m]))
            flag = row[2 + m].strip().lower()
            if flag not in ("true", "false"):
                raise ValueError(f"bad supported flag {row[2 + m]!r}")
            flags.append(flag == "true")
        except ValueError as exc:
            raise FormatError(f"row {lineno}: {exc}") from exc
    n = len(rows[0][1][0]) if rows else 1
    return ParetoFront(
        n=n,
        vectors=np.array(vectors, dtype=np.float64).reshape(len(configs), m),
        configs=np.array(configs, dtype=np.int64),
        multiplicity=np.array(mult, dtype=np.int64),
        supported=np.array(flags, dtype=bool),
    )


def _solution_header_m(header: list[str], trailing: list[str]) -> int:
    tail = len(trailing)
    if (
        len(header) < 2 + tail
        or header[0] != "config_bits"
        or header[-tail:] != trailing
    ):
        raise FormatError(f"unexpected header {header!r}")
    m = len(header) - 1 - tail
    if header[1 : 1 + m] != [f"e{i + 1}" for i in range(m)]:
        raise FormatError(f"unexpected objective columns in {header!r}")
    return m


def _read_csv(source: Union[str, Path, IO[str]]):
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    table = [(i, row) for i, row in enumerate(reader, start=1) if row]
    if not table:
        raise FormatError("empty CSV")
    header = [h.strip() for h in table[0][1]]
    return header, table[1:]


def _write_text(target: Union[str, Path, IO[str]], text: str) -> None:
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")
