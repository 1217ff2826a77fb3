"""Pseudospin Hamiltonians, dense symmetric diagonalization, moment matrices.

Energies are in mK throughout (k_B = hbar = 1).  Basis convention: the
computational z-basis, where bit k of a basis-state index encodes qubit k
and a cleared bit means sigma^z eigenvalue +1.  Qubits are numbered from 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

import numpy as np

__all__ = [
    "Convention",
    "SpinHamiltonian",
    "Spectrum",
    "MomentMatrices",
    "build_hamiltonian",
    "jacobi_eigh",
    "diagonalize",
    "moment_matrices",
]

ORTHONORMALITY_TOL = 1e-10
RESIDUAL_TOL = 1e-9
DEGENERACY_SCALE = 1e-9


class Convention(Enum):
    """Sign/factor convention for the spin Hamiltonian.

    MAIN_TEXT:  H = -sum_i (eps_i sz_i + delta_i sx_i) + sum_{i<j} J_ij sz_i sz_j
    APPENDIX:   H = -1/2 sum_i (delta_i sx_i + eps_i sz_i) - sum_{i<j} J_ij sz_i sz_j

    The two describe the same physics with rescaled parameters:
    MAIN_TEXT(delta, eps, J) == APPENDIX(2*delta, 2*eps, -J).
    """

    MAIN_TEXT = "main_text"
    APPENDIX = "appendix"


@dataclass(frozen=True)
class SpinHamiltonian:
    """M-qubit pseudospin system: transverse splittings, longitudinal biases,
    and Ising z-z couplings, all in mK.

    ``couplings`` maps ordered pairs (i, j) with i < j to J_ij.
    """

    num_qubits: int
    delta: tuple
    epsilon: tuple
    couplings: dict
    convention: Convention = Convention.MAIN_TEXT

    def __post_init__(self):
        m = self.num_qubits
        if m < 1:
            raise ValueError(f"need at least one qubit, got {m}")
        object.__setattr__(self, "delta", tuple(float(d) for d in self.delta))
        object.__setattr__(self, "epsilon", tuple(float(e) for e in self.epsilon))
        if len(self.delta) != m or len(self.epsilon) != m:
            raise ValueError(
                f"delta/epsilon must have {m} entries, got "
                f"{len(self.delta)}/{len(self.epsilon)}"
            )
        coup = {}
        for (i, j), val in dict(self.couplings).items():
            if not (0 <= i < j < m):
                raise ValueError(f"coupling index pair ({i}, {j}) must satisfy 0 <= i < j < {m}")
            coup[(int(i), int(j))] = float(val)
        object.__setattr__(self, "couplings", coup)
        for name, values in (("delta", self.delta), ("epsilon", self.epsilon),
                             ("coupling", tuple(coup.values()))):
            if not all(math.isfinite(v) for v in values):
                raise ValueError(f"nonfinite {name} value")
        if not isinstance(self.convention, Convention):
            object.__setattr__(self, "convention", Convention(self.convention))

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def with_epsilon(self, epsilon) -> "SpinHamiltonian":
        """Same system at different longitudinal biases."""
        return SpinHamiltonian(self.num_qubits, self.delta, tuple(epsilon),
                               self.couplings, self.convention)


def _z_pattern(num_qubits: int, qubit: int) -> np.ndarray:
    """sigma^z eigenvalues (+1/-1) of one qubit over all basis states."""
    idx = np.arange(1 << num_qubits)
    return 1.0 - 2.0 * ((idx >> qubit) & 1)


def build_hamiltonian(spec: SpinHamiltonian) -> np.ndarray:
    """Assemble the dense real symmetric Hamiltonian matrix (dim x dim).

    Diagonal terms (sigma^z, sigma^z sigma^z) are accumulated per basis state
    via bit tests; each sigma^x term fills one off-diagonal per state, so the
    assembly is O(M * 2^M) per term without explicit Kronecker products.
    """
    m = spec.num_qubits
    dim = spec.dim
    half = 0.5 if spec.convention is Convention.APPENDIX else 1.0
    j_sign = -1.0 if spec.convention is Convention.APPENDIX else 1.0

    h = np.zeros((dim, dim))
    diag = np.zeros(dim)
    for k in range(m):
        diag -= half * spec.epsilon[k] * _z_pattern(m, k)
    for (i, j), coupling in spec.couplings.items():
        diag += j_sign * coupling * _z_pattern(m, i) * _z_pattern(m, j)
    h[np.diag_indices(dim)] = diag

    idx = np.arange(dim)
    for k in range(m):
        flipped = idx ^ (1 << k)
        h[flipped, idx] += -half * spec.delta[k]
    return h


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (ascending, mK) and the orthonormal eigenvector matrix.

    Column n of ``vectors`` is the eigenstate |n> expressed in the z-basis.
    ``degeneracy_tol`` is the energy window within which two levels count as
    degenerate; restricted sums downstream use it for their exclusions.
    """

    energies: np.ndarray
    vectors: np.ndarray
    degeneracy_tol: float = field(default=-1.0)

    def __post_init__(self):
        energies = np.asarray(self.energies, dtype=float)
        vectors = np.asarray(self.vectors, dtype=float)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "vectors", vectors)
        if self.degeneracy_tol < 0:
            spread = float(energies[-1] - energies[0]) if energies.size else 0.0
            object.__setattr__(self, "degeneracy_tol", DEGENERACY_SCALE * spread)
        energies.flags.writeable = False
        vectors.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.energies.shape[0]

    @property
    def num_qubits(self) -> int:
        m = self.dim.bit_length() - 1
        if (1 << m) != self.dim:
            raise ValueError(f"dimension {self.dim} is not a power of two")
        return m

    def degenerate_with(self, n: int) -> np.ndarray:
        """Boolean mask of levels within degeneracy_tol of level n (incl. n)."""
        return np.abs(self.energies - self.energies[n]) <= self.degeneracy_tol

    def smallest_gap(self) -> float:
        """Smallest level spacing above the degeneracy tolerance."""
        diffs = np.diff(self.energies)
        open_gaps = diffs[diffs > self.degeneracy_tol]
        if open_gaps.size == 0:
            raise ValueError("spectrum has no resolvable level gap")
        return float(open_gaps.min())


class JacobiConvergenceError(RuntimeError):
    pass


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip eigenvector columns so the first largest-magnitude entry is positive."""
    lead = np.abs(vectors).argmax(axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def jacobi_eigh(matrix: np.ndarray, *, sweep_cap: int = 100,
                rel_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Sweeps the upper triangle row by row, rotating every off-diagonal
    element, until the largest off-diagonal magnitude drops below
    ``rel_tol`` times the largest diagonal magnitude.  Returns (eigenvalues
    ascending, eigenvector columns); ties in the sort keep the original
    column order and every column's sign is fixed deterministically.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    scale = np.abs(a).max()
    if scale > 0 and np.abs(a - a.T).max() > 1e-12 * scale:
        raise ValueError("matrix is not symmetric within 1e-12 relative")
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v

    for _ in range(sweep_cap):
        off = np.abs(np.triu(a, k=1)).max()
        if off <= rel_tol * max(np.abs(a.diagonal()).max(), np.finfo(float).tiny):
            order = np.argsort(a.diagonal(), kind="stable")
            return a.diagonal()[order].copy(), _fix_signs(v[:, order])
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app, aqq = a[p, p], a[q, q]
                if abs(apq) <= 1e-18 * (abs(app) + abs(aqq)):
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, :] = a[:, p]
                a[q, :] = a[:, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    raise JacobiConvergenceError(f"no convergence after {sweep_cap} sweeps")


def diagonalize(matrix: np.ndarray, *, degeneracy_tol: float = -1.0,
                sweep_cap: int = 100) -> Spectrum:
    """Diagonalize a real symmetric matrix and package the result.

    Raises on non-symmetric input or if the Jacobi sweeps fail to converge
    within ``sweep_cap``; checks orthonormality and the reconstruction
    residual before returning.
    """
    matrix = np.asarray(matrix, dtype=float)
    energies, vectors = jacobi_eigh(matrix, sweep_cap=sweep_cap)
    spectrum = Spectrum(energies, vectors, degeneracy_tol)

    gram_err = np.abs(vectors.T @ vectors - np.eye(spectrum.dim)).max()
    if gram_err > ORTHONORMALITY_TOL:
        raise JacobiConvergenceError(f"eigenvectors not orthonormal: {gram_err:.3e}")
    e_scale = max(np.abs(energies).max(), np.finfo(float).tiny)
    residual = np.abs(matrix @ vectors - vectors * energies).max()
    if residual > RESIDUAL_TOL * e_scale:
        raise JacobiConvergenceError(
            f"reconstruction residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e} * max|E|"
        )
    return spectrum


@dataclass(frozen=True)
class MomentMatrices:
    """sigma^z matrix elements between eigenstates.

    ``per_qubit[k]`` holds <p|sigma^z_k|q>; ``total`` is the z-component of
    the total magnetic moment, mu^z_pq = sum_k <p|sigma^z_k|q>.  All real
    symmetric since the eigenvectors are real.
    """

    per_qubit: np.ndarray
    total: np.ndarray

    def __post_init__(self):
        self.per_qubit.flags.writeable = False
        self.total.flags.writeable = False

    @property
    def num_qubits(self) -> int:
        return self.per_qubit.shape[0]


def moment_matrices(spectrum: Spectrum) -> MomentMatrices:
    """Transform each qubit's sigma^z into the energy eigenbasis."""
    m = spectrum.num_qubits
    v = spectrum.vectors
    per_qubit = np.empty((m, spectrum.dim, spectrum.dim))
    for k in range(m):
        pattern = _z_pattern(m, k)
        per_qubit[k] = v.T @ (pattern[:, None] * v)
    return MomentMatrices(per_qubit, per_qubit.sum(axis=0))
