"""Entanglement signature family built from restricted moment-element sums.

The order-N signature of eigenstate n chains N total-moment matrix
elements through N-1 internal labels, divides by the energy denominators
(E_p - E_n), and averages with the M^-N prefactor.  Internal labels must
be pairwise distinct and non-degenerate with n; the thermal signature is
the Boltzmann average over n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import MomentMatrices, Spectrum

__all__ = [
    "SignatureResult",
    "linear_signature",
    "z_signature",
    "z4_ground",
    "thermal_signature",
]

TENSOR_CAP = 10_000_000


@dataclass(frozen=True)
class SignatureResult:
    """Per-eigenstate signatures Z^n_N (units mK^-(N-1)), their thermal
    average at temperature T (mK), and the restricted-sum bookkeeping."""

    order: int
    per_state: np.ndarray
    thermal: float
    temperature: float
    normalized: bool
    excluded_terms: int

    def __post_init__(self):
        self.per_state.flags.writeable = False


def linear_signature(p: int, q: int, spectrum: Spectrum,
                     moments: MomentMatrices, cross_only: bool = False) -> float:
    """Two-point signature sum_ij <p|sz_i|q><q|sz_j|p> for p != q.

    With ``cross_only`` the i = j diagonal is dropped, leaving the part
    that vanishes when |p> and |q> differ in a single qubit factor.
    """
    if p == q:
        raise ValueError("linear signature requires p != q")
    elements = moments.per_qubit[:, p, q]
    full = float(elements.sum() ** 2)
    if cross_only:
        return full - float((elements ** 2).sum())
    return full


def _allowed_labels(spectrum: Spectrum, n: int) -> np.ndarray:
    """Labels whose energy differs from E_n by more than the degeneracy
    tolerance (this excludes n itself)."""
    return np.flatnonzero(~spectrum.degenerate_with(n))


def _distinct_tuple_count(pool: int, take: int) -> int:
    return math.perm(pool, take) if take <= pool else 0


def z_signature(n: int, order: int, spectrum: Spectrum,
                moments: MomentMatrices) -> float:
    """Signature Z^n_N: restricted sum over N-1 internal labels.

    Labels run over eigenstates non-degenerate with n (by energy, within
    the spectrum's tolerance) and must be pairwise distinct; degenerate
    internal pairs are kept since only E_n enters the denominators.  The
    empty sum is 0.
    """
    if order < 2:
        raise ValueError(f"signature order must be >= 2, got {order}")
    if not 0 <= n < spectrum.dim:
        raise ValueError(f"eigenstate label {n} out of range")
    allowed = _allowed_labels(spectrum, n)
    width = order - 1
    d = allowed.size
    if d < width:
        return 0.0
    if d ** width > TENSOR_CAP:
        raise ValueError(f"label tensor size {d}^{width} exceeds cap {TENSOR_CAP}")

    mu = moments.total
    inv_denom = 1.0 / (spectrum.energies[allowed] - spectrum.energies[n])
    mu_sub = mu[np.ix_(allowed, allowed)]

    # terms[a_1, ..., a_{N-1}] = mu[n,p_1] mu[p_1,p_2] ... mu[p_{N-1},n]
    #                            / prod_k (E_{p_k} - E_n)
    terms = mu[n, allowed] * inv_denom
    for _ in range(width - 1):
        terms = terms[..., None] * (mu_sub * inv_denom[None, :])
    terms = terms * mu[allowed, n]

    if width > 1:
        same = np.eye(d, dtype=bool)
        for i in range(width - 1):
            for j in range(i + 1, width):
                shape = [1] * width
                shape[i] = shape[j] = d
                terms = terms * ~same.reshape(shape)
    prefactor = float(spectrum.num_qubits) ** (-order)
    return prefactor * float(terms.sum())


def z4_ground(spectrum: Spectrum, moments: MomentMatrices) -> float:
    """Ground-state fourth-order signature (prefactor 4^-4 at M = 4);
    defers to z_signature for any qubit count."""
    return z_signature(0, 4, spectrum, moments)


def thermal_signature(order: int, spectrum: Spectrum, moments: MomentMatrices,
                      temperature: float, normalized: bool = True) -> SignatureResult:
    """Boltzmann average of Z^n_N over eigenstates at temperature T (mK).

    Weights are exp(-(E_n - E_0)/T), shifted by the ground energy for
    stability; with ``normalized`` they are divided by their sum (the
    literal definition omits the partition function, so both modes exist).
    """
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    per_state = np.array([z_signature(n, order, spectrum, moments)
                          for n in range(spectrum.dim)])
    weights = np.exp(-(spectrum.energies - spectrum.energies[0]) / temperature)
    thermal = float(per_state @ weights)
    if normalized:
        thermal /= float(weights.sum())

    full_pool = spectrum.dim - 1
    excluded = 0
    for n in range(spectrum.dim):
        pool = _allowed_labels(spectrum, n).size
        excluded += (_distinct_tuple_count(full_pool, order - 1)
                     - _distinct_tuple_count(pool, order - 1))
    return SignatureResult(order, per_state, thermal, float(temperature),
                           normalized, excluded)
