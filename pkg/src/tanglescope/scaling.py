"""Numerical checks of the large-system counting arguments.

Works on synthetic cluster structures (a qubit count plus a block
partition) so the combinatorics can be probed without any quantum
simulation: the fraction of index tuples with repeats, exact
classification counts of all index strings against the disjoint-count
bound, and the Monte Carlo decay of the disjoint fraction with the number
of clusters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .clusters import ClusterPartition
from .correlators import IndexString, Verdict, classify_string

__all__ = [
    "SyntheticSystem",
    "StringCounts",
    "DecayRow",
    "DecayResult",
    "uniform_partition",
    "repeated_fraction",
    "disjoint_bound",
    "count_strings",
    "decay_experiment",
]

EXACT_CAP = 100_000_000


@dataclass(frozen=True)
class SyntheticSystem:
    """Qubit count plus a cluster partition with Q blocks; no Hamiltonian."""

    num_qubits: int
    partition: ClusterPartition

    def __post_init__(self):
        if self.partition.num_qubits != self.num_qubits:
            raise ValueError("partition does not match qubit count")

    @property
    def num_clusters(self) -> int:
        return self.partition.num_blocks


def uniform_partition(num_clusters: int, cluster_size: int) -> ClusterPartition:
    """Q consecutive blocks of equal size."""
    blocks = tuple(
        tuple(range(b * cluster_size, (b + 1) * cluster_size))
        for b in range(num_clusters)
    )
    return ClusterPartition(blocks, num_clusters * cluster_size, source="synthetic")


def repeated_fraction(num_qubits: int, order: int) -> float:
    """Fraction of the M^N index tuples containing a repeated index.

    Exact integer arithmetic: 1 - M!/((M-N)! M^N); when N > M every tuple
    repeats and the fraction is 1.
    """
    if num_qubits < 1 or order < 1:
        raise ValueError("num_qubits and order must be >= 1")
    distinct = math.perm(num_qubits, order) if order <= num_qubits else 0
    from fractions import Fraction
    return float(1 - Fraction(distinct, num_qubits ** order))


def disjoint_bound(num_qubits: int, order: int, num_clusters: int) -> float:
    """Upper bound on the number of disjoint strings:
    M^N Q^-1 (N-1) (1 + Q^-1)^(N-2)."""
    m, n, q = num_qubits, order, num_clusters
    return m ** n / q * (n - 1) * (1.0 + 1.0 / q) ** (n - 2)


@dataclass(frozen=True)
class StringCounts:
    """Classification census of index strings of one order.

    total = single_cluster + joint + disjoint; ``joint`` counts
    multi-cluster strings with a unique substring.  ``exact`` is False when
    the counts were Monte Carlo estimates, in which case ``stderr_disjoint``
    carries the standard error of the disjoint fraction.
    """

    total: int
    single_cluster: int
    joint: int
    disjoint: int
    bound: float
    exact: bool
    stderr_disjoint: Optional[float] = None

    @property
    def bound_satisfied(self) -> bool:
        return self.disjoint <= self.bound

    @property
    def disjoint_fraction(self) -> float:
        return self.disjoint / self.total if self.total else 0.0


def _classify_counts(strings, system: SyntheticSystem):
    single = joint = disjoint = 0
    m = system.num_qubits
    for tup in strings:
        cls = classify_string(IndexString(tup, m), system.partition)
        if cls.single_cluster:
            single += 1
        elif cls.verdict is Verdict.JOINT:
            joint += 1
        else:
            disjoint += 1
    return single, joint, disjoint


def count_strings(system: SyntheticSystem, order: int, *,
                  cap: int = EXACT_CAP, trials: int = 100_000,
                  seed: int = 0) -> StringCounts:
    """Classify all M^N index strings (exact) or a uniform sample of them.

    Exact enumeration runs when M^N <= cap; above that the counts are
    scaled Monte Carlo estimates with a standard error on the disjoint
    fraction.
    """
    m = system.num_qubits
    total = m ** order
    bound = disjoint_bound(m, order, system.num_clusters)
    if total <= cap:
        import itertools
        single, joint, disjoint = _classify_counts(
            itertools.product(range(m), repeat=order), system)
        return StringCounts(total, single, joint, disjoint, bound, True)

    rng = np.random.Generator(np.random.Philox(seed))
    sample = rng.integers(0, m, size=(trials, order))
    single, joint, disjoint = _classify_counts(map(tuple, sample.tolist()), system)
    frac = disjoint / trials
    stderr = math.sqrt(max(frac * (1.0 - frac), 1.0 / trials) / trials)
    scale = total / trials
    return StringCounts(total, round(single * scale), round(joint * scale),
                        round(disjoint * scale), bound, False, stderr)


@dataclass(frozen=True)
class DecayRow:
    num_clusters: int
    num_qubits: int
    trials: int
    disjoint: int
    fraction: float
    stderr: float


@dataclass(frozen=True)
class DecayResult:
    """Sampled disjoint fractions per cluster count and the fitted exponent
    alpha of fraction ~ Q^-alpha."""

    rows: tuple
    alpha: float


def decay_experiment(order: int, cluster_counts: Sequence[int],
                     cluster_size: int, trials: int,
                     seed: int = 0) -> DecayResult:
    """Monte Carlo decay of the disjoint-string fraction with cluster count.

    For each Q builds a uniform Q-block synthetic system of M = Q * size
    qubits, samples ``trials`` random index strings from a counter-based
    generator (one child stream per Q, split from ``seed``), and fits
    log(fraction) against log(Q).
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    if cluster_size < 1 or not cluster_counts:
        raise ValueError("need a positive cluster size and at least one Q")

    children = np.random.SeedSequence(seed).spawn(len(cluster_counts))
    rows = []
    for q, child in zip(cluster_counts, children):
        system = SyntheticSystem(q * cluster_size,
                                 uniform_partition(q, cluster_size))
        m = system.num_qubits
        rng = np.random.Generator(np.random.Philox(child))
        sample = rng.integers(0, m, size=(trials, order))
        _, _, disjoint = _classify_counts(map(tuple, sample.tolist()), system)
        frac = disjoint / trials
        stderr = math.sqrt(max(frac * (1.0 - frac), 1.0 / trials) / trials)
        rows.append(DecayRow(q, m, trials, disjoint, frac, stderr))

    usable = [(math.log(r.num_clusters), math.log(r.fraction))
              for r in rows if r.fraction > 0]
    if len(usable) < 2:
        raise ValueError("not enough nonzero disjoint fractions to fit a slope")
    logq, logf = np.array(usable).T
    slope = float(np.polyfit(logq, logf, 1)[0])
    return DecayResult(tuple(rows), -slope)
