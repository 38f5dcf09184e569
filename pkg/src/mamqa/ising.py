"""Multi-objective Ising instances and weighted-sum scalarization.

A problem instance is an undirected graph on ``n`` spins with one coupling
weight per edge per objective, plus an optional local field per spin.
Objective ``m`` of configuration ``z`` is

    E_m(z) = - sum_{(i,j) in edges} w[m,i,j] * s_i * s_j

with ``s_i = +1`` when bit ``i`` of ``z`` is 0 and ``-1`` when it is 1
(bit 0 is the least significant bit of the integer label).  Fields enter
only the scalarized diagonal, as ``- sum_i h_i * s_i``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

import numpy as np

from .errors import ConnectivityError, FormatError

# Tolerance on sum(omega) == 1 for scalarization weight vectors.
WEIGHT_SUM_TOL = 1e-12


def spin_values(n: int) -> np.ndarray:
    """Return the (2**n, n) table of sigma^z values for every configuration.

    Row ``z`` holds ``s_i = 1 - 2 * ((z >> i) & 1)``, i.e. bit 0 of the
    configuration label is spin 0 and a 0 bit means spin up (+1).
    """
    if n < 1:
        raise ValueError(f"spin count must be positive, got {n}")
    states = np.arange(1 << n, dtype=np.int64)
    bits = (states[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return (1.0 - 2.0 * bits).astype(np.float64)


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ProblemInstance:
    """Immutable multi-objective Ising instance.

    Attributes
    ----------
    n : int
        Number of spins (at least 2).
    m : int
        Number of objectives (at least 2).
    edges : tuple of (int, int)
        Undirected edges with i < j, sorted lexicographically, no duplicates.
        The edge set must form a connected graph on all n spins.
    weights : ndarray, shape (len(edges), m)
        Per-edge coupling weight for each objective, aligned with ``edges``.
    fields : ndarray, shape (n,)
        Local longitudinal fields (zero for generated instances).
    """

    n: int
    m: int
    edges: tuple[tuple[int, int], ...]
    weights: np.ndarray
    fields: np.ndarray

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"instance needs at least 2 spins, got {self.n}")
        if self.m < 2:
            raise ValueError(f"instance needs at least 2 objectives, got {self.m}")
        edges = tuple((int(i), int(j)) for i, j in self.edges)
        seen = set()
        for i, j in edges:
            if not (0 <= i < j < self.n):
                raise ValueError(f"edge ({i}, {j}) is not 0 <= i < j < {self.n}")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
        if edges != tuple(sorted(edges)):
            raise ValueError("edges must be sorted lexicographically")
        object.__setattr__(self, "edges", edges)

        weights = np.asarray(self.weights, dtype=np.float64)
        if weights.shape != (len(edges), self.m):
            raise ValueError(
                f"weights shape {weights.shape} does not match "
                f"({len(edges)}, {self.m})"
            )
        if not np.all(np.isfinite(weights)):
            raise ValueError("weights must be finite")
        object.__setattr__(self, "weights", _frozen(weights))

        fields = np.asarray(self.fields, dtype=np.float64)
        if fields.shape != (self.n,):
            raise ValueError(f"fields shape {fields.shape} does not match ({self.n},)")
        if not np.all(np.isfinite(fields)):
            raise ValueError("fields must be finite")
        object.__setattr__(self, "fields", _frozen(fields))

        _check_connected(self.n, edges)

    @property
    def num_configurations(self) -> int:
        return 1 << self.n


def _check_connected(n: int, edges: Sequence[tuple[int, int]]) -> None:
    """Breadth-first search from spin 0; every spin must be reachable."""
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        adjacency[i].append(j)
        adjacency[j].append(i)
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    missing = [i for i, ok in enumerate(seen) if not ok]
    if missing:
        raise ConnectivityError(
            f"graph is disconnected: spins {missing} unreachable from spin 0"
        )


def complete_edges(n: int) -> tuple[tuple[int, int], ...]:
    """All pairs (i, j) with i < j, lexicographically sorted."""
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


def generate_instance(
    n: int,
    topology: Union[str, Iterable[tuple[int, int]]] = "complete",
    seed: int = 0,
) -> ProblemInstance:
    """Generate a seeded two-objective instance.

    The first objective draws its edge weights uniformly from [-1, 0], the
    second from [0, 1], which makes the two objectives conflict.  Fields are
    zero.  ``topology`` is either ``"complete"`` or an explicit edge list;
    an explicit list is normalized (i < j, sorted) before weights are drawn,
    so the same seed gives the same instance regardless of listing order.
    """
    if n < 2:
        raise ValueError(f"need at least 2 spins, got {n}")
    if isinstance(topology, str):
        if topology != "complete":
            raise ValueError(f"unknown topology {topology!r}")
        edges = complete_edges(n)
    else:
        normalized = sorted(
            (min(int(i), int(j)), max(int(i), int(j))) for i, j in topology
        )
        edges = tuple(normalized)
    rng = np.random.default_rng(seed)
    w1 = rng.uniform(-1.0, 0.0, size=len(edges))
    w2 = rng.uniform(0.0, 1.0, size=len(edges))
    weights = np.column_stack([w1, w2])
    return ProblemInstance(
        n=n, m=2, edges=edges, weights=weights, fields=np.zeros(n)
    )


def _edge_spin_products(instance: ProblemInstance) -> np.ndarray:
    """(2**n, E) table of s_i * s_j for every configuration and edge."""
    spins = spin_values(instance.n)
    ii = np.fromiter((i for i, _ in instance.edges), dtype=np.int64)
    jj = np.fromiter((j for _, j in instance.edges), dtype=np.int64)
    return spins[:, ii] * spins[:, jj]


def all_objective_vectors(instance: ProblemInstance) -> np.ndarray:
    """Exhaustive (2**n, m) table of objective vectors, row z = config z.

    This table is the single source of objective values for enumeration and
    sampling, so equal configurations always map to bit-identical vectors.
    """
    return -(_edge_spin_products(instance) @ instance.weights)


def objective_vector(instance: ProblemInstance, z: int) -> np.ndarray:
    """Objective vector of one configuration."""
    _check_config(instance, z)
    spins = 1.0 - 2.0 * ((z >> np.arange(instance.n, dtype=np.int64)) & 1)
    prod = np.fromiter(
        (spins[i] * spins[j] for i, j in instance.edges),
        dtype=np.float64,
        count=len(instance.edges),
    )
    return -(prod @ instance.weights)


def objective_energy(instance: ProblemInstance, z: int, m: int) -> float:
    """Energy of configuration ``z`` under objective ``m`` (1-based index)."""
    if not (1 <= m <= instance.m):
        raise ValueError(f"objective index {m} outside 1..{instance.m}")
    return float(objective_vector(instance, z)[m - 1])


def _check_config(instance: ProblemInstance, z: int) -> None:
    if not (0 <= z < instance.num_configurations):
        raise ValueError(
            f"configuration {z} outside [0, {instance.num_configurations})"
        )


def check_weights(omega: Sequence[float], m: int) -> tuple[float, ...]:
    """Validate a scalarization weight vector: length m, nonnegative, sum 1."""
    om = tuple(float(w) for w in omega)
    if len(om) != m:
        raise ValueError(f"expected {m} weights, got {len(om)}")
    if any(not np.isfinite(w) or w < 0.0 for w in om):
        raise ValueError(f"weights must be finite and nonnegative: {om}")
    total = sum(om)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"weights must sum to 1 within {WEIGHT_SUM_TOL}, got {total!r}")
    return om


def weight_pair(omega1: float) -> tuple[float, float]:
    """Two-objective weight vector (omega1, 1 - omega1)."""
    if not (0.0 <= omega1 <= 1.0):
        raise ValueError(f"omega1 must lie in [0, 1], got {omega1}")
    return (float(omega1), 1.0 - float(omega1))


def scalarized_couplings(
    instance: ProblemInstance, omega: Sequence[float]
) -> np.ndarray:
    """Per-edge composite couplings W = sum_m omega_m * w_m, aligned with edges."""
    om = check_weights(omega, instance.m)
    return instance.weights @ np.asarray(om, dtype=np.float64)


def scalarize(
    instance: ProblemInstance, omega: Sequence[float]
) -> dict[tuple[int, int], float]:
    """Composite coupling map {(i, j): W_ij} for the given weights."""
    couplings = scalarized_couplings(instance, omega)
    return {edge: float(w) for edge, w in zip(instance.edges, couplings)}


def scalarized_energies(
    instance: ProblemInstance, omega: Sequence[float]
) -> np.ndarray:
    """(2**n,) classical composite energies, including local field terms.

    Entry z equals - sum_edges W_ij s_i s_j - sum_i h_i s_i, the diagonal of
    the classical Hamiltonian under the composite couplings.
    """
    couplings = scalarized_couplings(instance, omega)
    energies = -(_edge_spin_products(instance) @ couplings)
    if np.any(instance.fields != 0.0):
        energies = energies - spin_values(instance.n) @ instance.fields
    return energies


def instance_to_dict(instance: ProblemInstance) -> dict:
    return {
        "n": instance.n,
        "m": instance.m,
        "edges": [
            {"i": i, "j": j, "w": [float(w) for w in instance.weights[e]]}
            for e, (i, j) in enumerate(instance.edges)
        ],
        "h": [float(h) for h in instance.fields],
    }


def instance_from_dict(data: dict) -> ProblemInstance:
    try:
        n = int(data["n"])
        m = int(data["m"])
        raw_edges = data["edges"]
        fields = [float(h) for h in data["h"]]
        edges = []
        weights = []
        for entry in raw_edges:
            edges.append((int(entry["i"]), int(entry["j"])))
            weights.append([float(w) for w in entry["w"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed instance document: {exc}") from exc
    if any(len(w) != m for w in weights):
        raise FormatError(f"every edge needs exactly {m} weights")
    weight_arr = np.array(weights, dtype=np.float64).reshape(len(edges), m)
    return ProblemInstance(
        n=n, m=m, edges=tuple(edges), weights=weight_arr, fields=np.asarray(fields)
    )


def save_instance(instance: ProblemInstance, target: Union[str, Path, IO[str]]) -> None:
    """Write the instance as JSON (stable key order, repr-exact floats)."""
    text = json.dumps(instance_to_dict(instance), indent=2) + "\n"
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def load_instance(source: Union[str, Path, IO[str]]) -> ProblemInstance:
    """Read an instance from JSON; malformed documents raise FormatError."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError("instance document must be a JSON object")
    return instance_from_dict(data)
