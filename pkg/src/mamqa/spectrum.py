"""Instantaneous ground states of the interpolating Hamiltonian.

H(s) = A(s) * Hq + B(s) * Hc in the 2^N computational basis, where
Hq = -sum_i sigma_i^x and Hc is the scalarized classical Ising diagonal.
Hq couples basis states at Hamming distance 1 with entry -A(s), so H(s) is
real symmetric and is stored as a diagonal vector plus the implicit
hypercube off-diagonal structure.  Measurement of the instantaneous ground
state gives p[z] = amplitude[z]^2; at A(s) = 0 exactly the spectrum is
classical and degenerate, and the distribution is defined as uniform over
the ground manifold.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .errors import CapacityError, NumericError
from .ising import ProblemInstance, check_weights, scalarized_energies
from .schedule import AnnealSchedule

# Dense-diagonalization size cap: 2^14 = 16384 keeps a full solve in memory
# and under a minute.
SIZE_CAP = 14

# Residual bound for accepting an eigenpair, relative to ||H||_F.
RESIDUAL_RTOL = 1e-8

# Relative width of the classical ground manifold at A = 0.
DEGENERACY_RTOL = 1e-9


@dataclass(frozen=True)
class HamiltonianMatrix:
    """H(s) for one (instance, omega, s): diagonal + hypercube off-diagonals.

    ``transverse`` is A(s); every pair of basis states at Hamming distance 1
    carries the off-diagonal entry ``-transverse``.  ``diagonal[z]`` is
    B(s) times the scalarized classical energy of configuration z.
    """

    n: int
    transverse: float
    diagonal: np.ndarray

    def __post_init__(self) -> None:
        diag = np.ascontiguousarray(self.diagonal, dtype=np.float64)
        if diag.shape != (1 << self.n,):
            raise ValueError(f"diagonal shape {diag.shape} != (2**{self.n},)")
        diag.setflags(write=False)
        object.__setattr__(self, "diagonal", diag)
        object.__setattr__(self, "transverse", float(self.transverse))

    @property
    def dimension(self) -> int:
        return 1 << self.n

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """Apply H to a state vector without densifying."""
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.dimension,):
            raise ValueError(f"vector shape {v.shape} != ({self.dimension},)")
        out = self.diagonal * v
        if self.transverse != 0.0:
            idx = np.arange(self.dimension)
            for i in range(self.n):
                out -= self.transverse * v[idx ^ (1 << i)]
        return out

    def to_dense(self) -> np.ndarray:
        """Densify for the eigensolver; memory is the caller's problem."""
        h = np.diag(self.diagonal)
        if self.transverse != 0.0:
            idx = np.arange(self.dimension)
            for i in range(self.n):
                h[idx, idx ^ (1 << i)] = -self.transverse
        return h

    def frobenius_norm(self) -> float:
        off = self.n * (1 << self.n) * self.transverse**2
        return math.sqrt(float(np.dot(self.diagonal, self.diagonal)) + off)


@dataclass(frozen=True)
class GroundState:
    """Lowest eigenpair; amplitudes are real with positive overall sign."""

    amplitudes: np.ndarray
    energy: float

    def __post_init__(self) -> None:
        amp = np.ascontiguousarray(self.amplitudes, dtype=np.float64)
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "energy", float(self.energy))


@dataclass(frozen=True)
class MeasurementDistribution:
    """Projective-measurement probabilities over the 2^N basis at one (s, omega)."""

    probabilities: np.ndarray
    s: float
    omega: tuple[float, ...]

    def __post_init__(self) -> None:
        p = np.ascontiguousarray(self.probabilities, dtype=np.float64)
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "omega", tuple(float(w) for w in self.omega))

    @property
    def dimension(self) -> int:
        return self.probabilities.size


def build_hamiltonian(
    instance: ProblemInstance,
    omega: Sequence[float],
    schedule: AnnealSchedule,
    s: float,
) -> HamiltonianMatrix:
    """Assemble H(s) = A(s)*Hq + B(s)*Hc for the scalarized instance."""
    if instance.n > SIZE_CAP:
        raise CapacityError(
            f"dense diagonalization capped at N <= {SIZE_CAP}, got N = {instance.n}"
        )
    a, b = schedule.evaluate(s)
    diagonal = b * scalarized_energies(instance, omega)
    return HamiltonianMatrix(n=instance.n, transverse=a, diagonal=diagonal)


def ground_state(h: HamiltonianMatrix) -> GroundState:
    """Lowest eigenpair of H by dense symmetric eigendecomposition.

    The eigenpair must satisfy ||H v - E v|| <= 1e-8 ||H||_F or a
    NumericError carrying the residual is raised.  The sign is fixed so the
    amplitude sum is positive, which for A > 0 on a connected graph makes
    every amplitude strictly positive (Perron-Frobenius).

    When the diagonal is invariant under the global spin flip (index
    reversal, the zero-field case) and A > 0, H commutes with the flip and
    its unique ground state is flip-even.  The computed vector is projected
    onto the even sector: near the classical limit the even-odd splitting
    shrinks exponentially and the raw solver output mixes in an odd
    component of size eps/gap, which the projection removes exactly.  This
    is unconditional on the gap; in exact arithmetic it is the identity.
    """
    dense = h.to_dense()
    try:
        vals, vecs = scipy.linalg.eigh(dense, subset_by_index=(0, 0))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed to converge: {exc}") from exc
    energy = float(vals[0])
    amp = np.array(vecs[:, 0], dtype=np.float64)
    if float(amp.sum()) < 0.0:
        amp = -amp
    if h.transverse > 0.0 and np.array_equal(h.diagonal, h.diagonal[::-1]):
        even = 0.5 * (amp + amp[::-1])
        norm = float(np.linalg.norm(even))
        if norm == 0.0:
            raise NumericError("flip-even projection of the ground state vanished")
        amp = even / norm
    residual = float(np.linalg.norm(h.matvec(amp) - energy * amp))
    bound = RESIDUAL_RTOL * max(h.frobenius_norm(), 1.0)
    if residual > bound:
        raise NumericError(
            f"eigenpair residual {residual:.3e} exceeds bound {bound:.3e}"
        )
    return GroundState(amplitudes=amp, energy=energy)


def measurement_distribution(
    instance: ProblemInstance,
    omega: Sequence[float],
    schedule: AnnealSchedule,
    s: float,
) -> MeasurementDistribution:
    """Ideal mid-anneal measurement statistics at normalized time s.

    For A(s) > 0 this is the squared ground-state amplitude vector.  At
    A(s) = 0 exactly, H is diagonal and its ground space is spanned by
    degenerate basis states, so the returned distribution is uniform over
    all configurations within relative tolerance 1e-9 of the minimum
    diagonal energy.
    """
    om = check_weights(omega, instance.m)
    h = build_hamiltonian(instance, om, schedule, s)
    if h.transverse == 0.0:
        emin = float(h.diagonal.min())
        tol = DEGENERACY_RTOL * max(1.0, abs(emin))
        manifold = h.diagonal <= emin + tol
        p = manifold.astype(np.float64)
        p /= p.sum()
    else:
        gs = ground_state(h)
        p = gs.amplitudes**2
        p /= p.sum()
    return MeasurementDistribution(probabilities=p, s=float(s), omega=om)


def _float_key(*values: float) -> tuple[int, ...]:
    """Map floats to their bit patterns so they can key a seed sequence."""
    return tuple(
        int(np.float64(v).view(np.uint64)) for v in values
    )


def draw_samples(
    dist: MeasurementDistribution,
    count: int,
    seed: int,
    key: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """Draw ``count`` i.i.d. configurations by inverse-CDF sampling.

    The generator is a deterministic substream of ``seed``: by default the
    key is derived from the distribution's (s, omega) float bit patterns,
    and a caller running a sweep may pass explicit grid indices instead.
    Identical (dist, count, seed, key) always reproduce the same samples.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    if key is None:
        key = _float_key(dist.s, *dist.omega)
    entropy = [int(seed), *[int(k) for k in key]]
    rng = np.random.default_rng(np.random.SeedSequence(entropy))
    u = rng.random(count)
    cdf = np.cumsum(dist.probabilities)
    idx = np.searchsorted(cdf, u, side="right")
    # u < 1 always, but cdf[-1] may round a hair below 1; clip the overflow.
    return np.minimum(idx, dist.dimension - 1).astype(np.int64)


def dump_distribution(
    dist: MeasurementDistribution, target: Union[str, Path, IO[str]]
) -> None:
    """Debug CSV dump: state index, bitstring (spin 0 rightmost), probability."""
    n = int(dist.dimension).bit_length() - 1
    rows = [
        (z, format(z, f"0{n}b"), repr(float(p)))
        for z, p in enumerate(dist.probabilities)
    ]
    if hasattr(target, "write"):
        handle = target
        close = False
    else:
        handle = open(target, "w", encoding="utf-8", newline="")
        close = True
    try:
        writer = csv.writer(handle)
        writer.writerow(["state", "bits", "probability"])
        writer.writerows(rows)
    finally:
        if close:
            handle.close()
