"""Chain correlators of single-qubit sigma^z operators.

A correlator is labeled by an index string (which qubit each operator acts
on) and a chain of eigenstate labels threaded between the operators.  The
static chain value is the cyclic product of moment matrix elements; the
time-dependent version dresses each link with an interaction-picture phase.
Strings are classified as joint or disjoint relative to a cluster
partition, which controls whether the correlator can survive with all
labels distinct.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .clusters import ClusterPartition
from .spectral import MomentMatrices, Spectrum

__all__ = [
    "IndexString",
    "LabelChain",
    "Verdict",
    "StringClassification",
    "chain_value",
    "heisenberg_correlator",
    "classify_string",
    "global_irreducible",
]

ENUMERATION_CAP = 10_000_000


@dataclass(frozen=True)
class IndexString:
    """Ordered qubit indices (j_1 .. j_N), repeats allowed, N >= 2."""

    qubit_indices: tuple
    num_qubits: int

    def __post_init__(self):
        idx = tuple(int(j) for j in self.qubit_indices)
        object.__setattr__(self, "qubit_indices", idx)
        if len(idx) < 2:
            raise ValueError("index string needs at least two entries")
        if any(not 0 <= j < self.num_qubits for j in idx):
            raise ValueError(f"qubit index out of range in {idx}")

    def __len__(self) -> int:
        return len(self.qubit_indices)


@dataclass(frozen=True)
class LabelChain:
    """Ordered eigenstate labels (p_1 .. p_N); irreducible when pairwise
    distinct."""

    labels: tuple
    dim: int

    def __post_init__(self):
        labels = tuple(int(p) for p in self.labels)
        object.__setattr__(self, "labels", labels)
        if any(not 0 <= p < self.dim for p in labels):
            raise ValueError(f"eigenstate label out of range in {labels}")

    @property
    def irreducible(self) -> bool:
        return len(set(self.labels)) == len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)


class Verdict(Enum):
    JOINT = "joint"
    DISJOINT = "disjoint"


@dataclass(frozen=True)
class StringClassification:
    """Substring decomposition of an index string against a partition.

    ``substrings`` holds (positions, block_id) runs after the cyclic merge
    of the first and last run when they call the same block; ``verdict`` is
    JOINT when some block is called by exactly one substring, and
    ``unique_substring`` points at the first such run.
    """

    substrings: tuple
    verdict: Verdict
    unique_substring: Optional[int] = None

    @property
    def single_cluster(self) -> bool:
        return len(self.substrings) == 1


def chain_value(string: IndexString, chain: LabelChain,
                moments: MomentMatrices) -> float:
    """Cyclic product <p_1|S_j1|p_2><p_2|S_j2|p_3>...<p_N|S_jN|p_1>."""
    if len(string) != len(chain):
        raise ValueError(f"string length {len(string)} != chain length {len(chain)}")
    labels = chain.labels
    value = 1.0
    for k, qubit in enumerate(string.qubit_indices):
        value *= moments.per_qubit[qubit][labels[k], labels[(k + 1) % len(labels)]]
    return value


def heisenberg_correlator(string: IndexString, times: Sequence[float],
                          eigenstate: int, spectrum: Spectrum,
                          moments: MomentMatrices) -> complex:
    """<p| S_j1(t_1) ... S_jN(t_N) |p> by summing over internal labels.

    Times are in 1/mK (hbar = 1); each link (p_k -> p_{k+1}) picks up the
    phase exp(i (E_{p_k} - E_{p_{k+1}}) t_k).  Evaluated by chaining the
    phase-dressed moment matrices, which performs the label sums implicitly.
    """
    if len(times) != len(string):
        raise ValueError(f"need {len(string)} times, got {len(times)}")
    if not 0 <= eigenstate < spectrum.dim:
        raise ValueError(f"eigenstate label {eigenstate} out of range")
    energies = spectrum.energies
    row = np.zeros(spectrum.dim, dtype=complex)
    row[eigenstate] = 1.0
    for qubit, t in zip(string.qubit_indices, times):
        phase = np.exp(1j * energies * t)
        # link matrix A[p, q] = S_qubit[p, q] * e^{i(E_p - E_q) t}
        row = (row * phase) @ (moments.per_qubit[qubit] * np.conj(phase)[None, :])
    return complex(row[eigenstate])


def classify_string(string: IndexString,
                    partition: ClusterPartition) -> StringClassification:
    """Split the string into maximal same-block runs and look for a block
    called by exactly one run.

    Cyclic rule: when the first and last runs call the same block they
    concatenate into a single substring (positions of the last run first).
    """
    if partition.num_qubits != string.num_qubits:
        raise ValueError("partition and string cover different qubit counts")
    block_ids = [partition.block_of(j) for j in string.qubit_indices]

    runs = []
    for pos, block in enumerate(block_ids):
        if runs and runs[-1][1] == block:
            runs[-1][0].append(pos)
        else:
            runs.append(([pos], block))
    if len(runs) > 1 and runs[0][1] == runs[-1][1]:
        tail_positions, block = runs.pop()
        runs[0] = (tail_positions + runs[0][0], block)

    counts = {}
    for _, block in runs:
        counts[block] = counts.get(block, 0) + 1
    unique_pos = next((r for r, (_, block) in enumerate(runs) if counts[block] == 1),
                      None)
    substrings = tuple((tuple(positions), block) for positions, block in runs)
    verdict = Verdict.JOINT if unique_pos is not None else Verdict.DISJOINT
    return StringClassification(substrings, verdict, unique_pos)


def global_irreducible(order: int, chain: LabelChain, spectrum: Spectrum,
                       moments: MomentMatrices, debug: bool = False) -> float:
    """Average irreducible correlator M^-N sum over all N-index strings.

    By distributivity this equals the cyclic product of total-moment matrix
    elements divided by M^N; with ``debug`` the sum over index tuples is
    also enumerated (capped at M^N <= 1e7) and cross-checked.
    """
    if order != len(chain):
        raise ValueError(f"order {order} != chain length {len(chain)}")
    if not chain.irreducible:
        raise ValueError(f"labels {chain.labels} are not pairwise distinct")
    m = spectrum.num_qubits
    labels = chain.labels
    factored = 1.0
    for k in range(order):
        factored *= moments.total[labels[k], labels[(k + 1) % order]]
    factored /= float(m) ** order

    if debug:
        if m ** order > ENUMERATION_CAP:
            raise ValueError(f"M^N = {m ** order} exceeds enumeration cap")
        total = 0.0
        for tup in itertools.product(range(m), repeat=order):
            total += chain_value(IndexString(tup, m), chain, moments)
        distributed = total / float(m) ** order
        scale = max(abs(factored), abs(distributed), 1e-300)
        if abs(distributed - factored) > 1e-12 * scale:
            raise AssertionError(
                f"distributed {distributed!r} != factored {factored!r}"
            )
    return factored
