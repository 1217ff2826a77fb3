"""Reduced density matrices and pure-state entanglement measures.

Implements the bipartition measure eta_S (rescaled linear entropy of the
reduced state), its geometric mean over all bipartitions (the global
measure R), and arithmetic averages over fixed-size subsets (Meyer-Wallach
for size 1, Scott for general size).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PureState",
    "ReducedDensity",
    "partial_trace",
    "purity",
    "eta",
    "love_R",
    "scott_measure",
]

NORM_TOL = 1e-10
ZERO_CLAMP = 1e-12


@dataclass(frozen=True)
class PureState:
    """Real amplitude vector of an M-qubit pure state in the z-basis.

    Bit k of the amplitude index encodes qubit k (cleared bit = spin up),
    matching the spectral module, so eigenvector columns can be wrapped
    directly.
    """

    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=float)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (1 << self.num_qubits,):
            raise ValueError(
                f"amplitude vector has length {amps.shape}, expected 2^{self.num_qubits}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: |psi| = {norm!r}")
        amps.flags.writeable = False

    @classmethod
    def from_vector(cls, amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=float)
        m = amps.shape[0].bit_length() - 1
        if (1 << m) != amps.shape[0]:
            raise ValueError(f"length {amps.shape[0]} is not a power of two")
        return cls(amps, m)


@dataclass(frozen=True)
class ReducedDensity:
    """Reduced density matrix of a sorted qubit subset (real symmetric, PSD,
    unit trace)."""

    subset: tuple
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "subset", tuple(sorted(self.subset)))
        trace = float(np.trace(self.matrix))
        if abs(trace - 1.0) > NORM_TOL:
            raise ValueError(f"reduced matrix trace {trace!r} != 1")
        self.matrix.flags.writeable = False

    def purity(self) -> float:
        return float(np.sum(self.matrix * self.matrix))


def partial_trace(state: PureState, subset) -> ReducedDensity:
    """Trace out everything except ``subset``.

    The reduced basis reuses the bit convention: bit r of the reduced index
    encodes the r-th smallest kept qubit.
    """
    m = state.num_qubits
    kept = tuple(sorted(set(int(q) for q in subset)))
    if not kept:
        raise ValueError("subset must be nonempty")
    if kept[0] < 0 or kept[-1] >= m:
        raise ValueError(f"qubit index out of range in {kept} for M={m}")

    # Axis j of the reshaped tensor carries qubit m-1-j (reshape is
    # big-endian in the index bits).
    tensor = state.amplitudes.reshape((2,) * m)
    kept_axes = [m - 1 - q for q in reversed(kept)]
    other_axes = [ax for ax in range(m) if ax not in kept_axes]
    block = tensor.transpose(kept_axes + other_axes).reshape(1 << len(kept), -1)
    return ReducedDensity(kept, block @ block.T)


def purity(state: PureState, subset) -> float:
    return partial_trace(state, subset).purity()


def eta(state: PureState, subset) -> float:
    """Bipartition entanglement of ``subset`` against its complement.

    eta = 2^|S|/(2^|S|-1) * (1 - purity of the reduced state); 0 for a
    separable cut, 1 for a maximally mixed marginal.  Values within 1e-12
    of 0 are clamped to exactly 0 so products over cuts terminate cleanly.
    """
    kept = tuple(sorted(set(int(q) for q in subset)))
    if not 1 <= len(kept) <= state.num_qubits - 1:
        raise ValueError(f"subset size {len(kept)} must be in [1, M-1]")
    size = 1 << len(kept)
    value = size / (size - 1) * (1.0 - partial_trace(state, kept).purity())
    if value < ZERO_CLAMP:
        return 0.0
    return min(value, 1.0)


def _bipartition_reps(num_qubits: int):
    """One representative subset per bipartition: all proper subsets
    containing qubit 0 (2^(M-1) - 1 of them)."""
    rest = range(1, num_qubits)
    for size in range(num_qubits - 1):
        for tail in itertools.combinations(rest, size):
            yield (0,) + tail


def love_R(state: PureState) -> float:
    """Geometric mean of eta over all bipartitions.

    Zero as soon as any cut is separable, which makes it a global
    entanglement measure rather than an average one.
    """
    if state.num_qubits < 2:
        raise ValueError("R needs at least two qubits")
    log_sum = 0.0
    count = 0
    for subset in _bipartition_reps(state.num_qubits):
        value = eta(state, subset)
        if value == 0.0:
            return 0.0
        log_sum += math.log(value)
        count += 1
    return math.exp(log_sum / count)


def scott_measure(state: PureState, k: int) -> float:
    """Arithmetic mean of eta over all subsets of size k (k=1 is the
    Meyer-Wallach value)."""
    if not 1 <= k <= state.num_qubits // 2:
        raise ValueError(f"subset size k={k} must be in [1, M/2]")
    values = [eta(state, subset)
              for subset in itertools.combinations(range(state.num_qubits), k)]
    return float(np.mean(values))
