"""Per-eigenstate cluster partitions, maximal clusters, nesting checks.

Each eigenstate of a spin Hamiltonian factorizes into states on disjoint
qubit clusters; the partition is found numerically by merging blocks whose
joint marginal is purer than the product of their separate marginals.
Partitions from several eigenstates combine into maximal clusters (the
finest common coarsening), and the nesting ("Russian-doll") condition can
be checked across eigenstates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .entanglement import PureState, partial_trace

__all__ = [
    "ClusterPartition",
    "RussianDollReport",
    "eigenstate_partition",
    "maximal_clusters",
    "russian_doll_check",
]

DEFAULT_PURITY_TOL = 1e-8


def _canonical(blocks) -> tuple:
    return tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))


@dataclass(frozen=True)
class ClusterPartition:
    """Disjoint qubit blocks covering {0..M-1}, canonically ordered by each
    block's smallest member.  ``source`` names the eigenstate (or "maximal").
    ``flags`` records purity decisions that fell near the threshold."""

    blocks: tuple
    num_qubits: int
    source: str = ""
    flags: tuple = field(default=())

    def __post_init__(self):
        blocks = _canonical(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        covered = sorted(q for block in blocks for q in block)
        if covered != list(range(self.num_qubits)):
            raise ValueError(
                f"blocks {blocks} do not partition 0..{self.num_qubits - 1}"
            )

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def block_of(self, qubit: int) -> int:
        for b, block in enumerate(self.blocks):
            if qubit in block:
                return b
        raise ValueError(f"qubit {qubit} not covered")

    def largest_block(self) -> int:
        return max(len(b) for b in self.blocks)


@dataclass(frozen=True)
class RussianDollReport:
    """Outcome of the nesting check; on failure carries the first witness:
    source labels of the two clashing partitions and qubits (a, b, c) with
    a,b clustered in the first but a,c split, b,c clustered in the second."""

    satisfied: bool
    violation: Optional[tuple] = None

    def __post_init__(self):
        if self.satisfied == (self.violation is not None):
            raise ValueError("violation must be present exactly when not satisfied")


def eigenstate_partition(state: PureState, tol: float = DEFAULT_PURITY_TOL,
                         source: str = "") -> ClusterPartition:
    """Finest partition whose blocks all have pure marginals (purity >= 1-tol).

    Starts from singletons and greedily merges correlated block pairs: a
    pair qualifies when the purity of the union's marginal exceeds the
    product of the blocks' purities by more than a small gate (for blocks
    belonging to independent factors the two agree to machine precision).
    Among qualifying pairs the one with the purest union wins; ties fall to
    canonical order.  If no pair shows correlation but an impure block
    remains, that block absorbs whichever partner purifies it most.
    """
    if not 0.0 < tol < 0.5:
        raise ValueError(f"tol={tol} outside (0, 0.5)")
    m = state.num_qubits
    gate = 10.0 * tol
    flags = []

    blocks = [(q,) for q in range(m)]
    if m == 1:
        return ClusterPartition(tuple(blocks), m, source)
    purities = [partial_trace(state, b).purity() for b in blocks]

    def near(margin):
        return abs(margin) <= 10.0 * tol

    while True:
        impure = [i for i, p in enumerate(purities) if p < 1.0 - tol]
        for i, p in enumerate(purities):
            if near(p - (1.0 - tol)):
                flags.append(f"block {blocks[i]} purity {p:.3e} near 1-tol")
        if not impure or len(blocks) == 1:
            break

        best = None  # (union_purity, i, j)
        fallback = None
        first_impure = impure[0]
        for i in range(len(blocks) - 1):
            for j in range(i + 1, len(blocks)):
                union_purity = partial_trace(state, blocks[i] + blocks[j]).purity()
                excess = union_purity - purities[i] * purities[j]
                if near(excess - gate):
                    flags.append(
                        f"pair {blocks[i]}+{blocks[j]} correlation {excess:.3e} near gate"
                    )
                if excess > gate and (best is None or union_purity > best[0]):
                    best = (union_purity, i, j)
                if first_impure in (i, j) and (fallback is None or union_purity > fallback[0]):
                    fallback = (union_purity, i, j)
        union_purity, i, j = best if best is not None else fallback
        blocks[i] = blocks[i] + blocks[j]
        purities[i] = union_purity
        del blocks[j], purities[j]

    return ClusterPartition(tuple(blocks), m, source, tuple(dict.fromkeys(flags)))


def eigenstate_partitions(spectrum, tol: float = DEFAULT_PURITY_TOL) -> list:
    """Cluster partition of every eigenstate of a Spectrum."""
    return [
        eigenstate_partition(
            PureState(spectrum.vectors[:, n].copy(), spectrum.num_qubits),
            tol, source=str(n))
        for n in range(spectrum.dim)
    ]


def maximal_clusters(partitions: Sequence[ClusterPartition]) -> ClusterPartition:
    """Finest common coarsening: union-find merge of intersecting blocks."""
    if not partitions:
        raise ValueError("need at least one partition")
    m = partitions[0].num_qubits
    if any(p.num_qubits != m for p in partitions):
        raise ValueError("partitions cover different qubit counts")

    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for partition in partitions:
        for block in partition.blocks:
            root = find(block[0])
            for q in block[1:]:
                parent[find(q)] = root

    groups = {}
    for q in range(m):
        groups.setdefault(find(q), []).append(q)
    return ClusterPartition(tuple(tuple(g) for g in groups.values()), m,
                            source="maximal")


def russian_doll_check(partitions: Sequence[ClusterPartition]) -> RussianDollReport:
    """Check that blocks from different partitions are nested or disjoint.

    Scans partition pairs, then blocks, in canonical order and reports the
    first violation with a witness triple (a, b, c): a and b share a block
    in the first partition but not in the second, where b and c do.
    """
    if not partitions:
        raise ValueError("need at least one partition")
    m = partitions[0].num_qubits
    if any(p.num_qubits != m for p in partitions):
        raise ValueError("partitions cover different qubit counts")

    for pi in range(len(partitions) - 1):
        for qi in range(pi + 1, len(partitions)):
            for block_p in partitions[pi].blocks:
                set_p = set(block_p)
                for block_q in partitions[qi].blocks:
                    set_q = set(block_q)
                    common = set_p & set_q
                    if not common or set_p <= set_q or set_q <= set_p:
                        continue
                    a = min(set_p - set_q)
                    b = min(common)
                    c = min(set_q - set_p)
                    return RussianDollReport(
                        False,
                        (partitions[pi].source, partitions[qi].source, (a, b, c)),
                    )
    return RussianDollReport(True)
