"""Quadratic susceptibility of the total z-moment and its static limit.

chi_zz(w, w') is assembled per eigenstate from weight factors (cyclic
triple products of moment elements) and formfactors (the three-denominator
bracket with +i0 replaced by a finite broadening).  The static limit
splits into a single-qubit-like part and an irreducible three-chain part;
the latter vanishes identically for uncoupled qubits, which makes it a
three-qubit entanglement signature.

Drive and measurement are both along z and the coupling inhomogeneities
are absorbed into the field units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import MomentMatrices, Spectrum

__all__ = [
    "FrequencyPoint",
    "Chi2Result",
    "StaticSplit",
    "default_broadening",
    "weight_factor",
    "formfactor",
    "chi2",
    "static_split",
    "second_harmonic",
]


def default_broadening(spectrum: Spectrum) -> float:
    """1e-6 times the smallest resolvable level gap."""
    return 1e-6 * spectrum.smallest_gap()


@dataclass(frozen=True)
class FrequencyPoint:
    """Frequency pair (mK, hbar = 1) and the broadening eta > 0 standing in
    for the +i0 prescription."""

    omega: float
    omega_prime: float
    eta: float

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"broadening must be positive, got {self.eta}")


@dataclass(frozen=True)
class Chi2Result:
    """Per-eigenstate chi^n_zz(w, w'), Boltzmann occupations, and their
    weighted sum."""

    per_state: np.ndarray
    occupation: np.ndarray
    thermal: complex

    def __post_init__(self):
        self.per_state.flags.writeable = False
        self.occupation.flags.writeable = False


@dataclass(frozen=True)
class StaticSplit:
    """Static quadratic susceptibility chi0 = chi0A + chi0B (mK^-2):
    single-qubit-like part and irreducible three-chain part."""

    chi0A: float
    chi0B: float

    @property
    def total(self) -> float:
        return self.chi0A + self.chi0B


def weight_factor(n: int, p: int, q: int, moments: MomentMatrices) -> float:
    """Cyclic triple product mu_np mu_pq mu_qn of total-moment elements."""
    mu = moments.total
    return float(mu[n, p] * mu[p, q] * mu[q, n])


def formfactor(n: int, p: int, q: int, point: FrequencyPoint,
               spectrum: Spectrum) -> complex:
    """Frequency bracket of the (n; p, q) term of chi^n_zz.

    Finite for all label combinations thanks to the broadening, and
    identically zero for p = q = n.
    """
    e = spectrum.energies
    w, wp, ieta = point.omega, point.omega_prime, 1j * point.eta
    lead = 1.0 / (w + wp - (e[q] - e[p]) + ieta)
    first = (e[n] + e[q] - 2.0 * e[p]) / (
        (wp - (e[q] - e[n]) + ieta) * (w + wp - (e[p] - e[n]) + ieta))
    second = (e[n] + e[p] - 2.0 * e[q]) / (
        (wp - (e[n] - e[p]) + ieta) * (w + wp - (e[n] - e[q]) + ieta))
    return lead * (first - second)


def _bracket(n: int, point: FrequencyPoint, spectrum: Spectrum,
             moments: MomentMatrices) -> complex:
    """sum_{p,q} C_{n;pq} f_{n;pq}(w, w') over all label pairs."""
    e = spectrum.energies
    mu = moments.total
    w, wp, ieta = point.omega, point.omega_prime, 1j * point.eta

    ediff = e[:, None] - e[None, :]  # ediff[p, q] = E_p - E_q
    lead = 1.0 / (w + wp + ediff + ieta)
    first_num = e[n] + e[None, :] - 2.0 * e[:, None]
    first = first_num / ((wp - (e[None, :] - e[n]) + ieta)
                         * (w + wp - (e[:, None] - e[n]) + ieta))
    second_num = e[n] + e[:, None] - 2.0 * e[None, :]
    second = second_num / ((wp - (e[n] - e[:, None]) + ieta)
                           * (w + wp - (e[n] - e[None, :]) + ieta))
    weights = mu[n, :][:, None] * mu * mu[:, n][None, :]
    return complex((weights * lead * (first - second)).sum())


def chi2(point: FrequencyPoint, spectrum: Spectrum, moments: MomentMatrices,
         temperature: float) -> Chi2Result:
    """Quadratic susceptibility at one frequency pair and temperature (mK)."""
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    per_state = np.array([_bracket(n, point, spectrum, moments)
                          for n in range(spectrum.dim)])
    occupation = np.exp(-(spectrum.energies - spectrum.energies[0]) / temperature)
    occupation /= occupation.sum()
    return Chi2Result(per_state, occupation, complex(per_state @ occupation))


def second_harmonic(field: float, omega0: float, spectrum: Spectrum,
                    moments: MomentMatrices, temperature: float,
                    eta: float) -> complex:
    """Amplitude of the frequency-doubled response to a monochromatic drive
    of strength ``field``: field^2 * chi_zz(w0, w0)."""
    if field == 0.0:
        return 0.0 + 0.0j
    point = FrequencyPoint(omega0, omega0, eta)
    return field ** 2 * chi2(point, spectrum, moments, temperature).thermal


def static_split(n: int, spectrum: Spectrum, moments: MomentMatrices) -> StaticSplit:
    """Static limit of chi^n_zz split into its two parts.

    chi0A = 3 sum_q' |mu_nq|^2 (mu_nn - mu_qq) / (E_q - E_n)^2
    chi0B = -6 sum_p' sum_{q<p}' mu_np mu_pq mu_qn / ((E_p - E_n)(E_q - E_n))

    where the primes exclude labels degenerate with n (by energy, within
    the spectrum's tolerance).
    """
    mu = moments.total
    e = spectrum.energies
    allowed = np.flatnonzero(~spectrum.degenerate_with(n))
    denom = e[allowed] - e[n]

    chi0a = 3.0 * float(np.sum(mu[n, allowed] ** 2 * (mu[n, n] - mu[allowed, allowed])
                               / denom ** 2))

    chain = (mu[n, allowed][:, None] * mu[np.ix_(allowed, allowed)]
             * mu[allowed, n][None, :]) / (denom[:, None] * denom[None, :])
    chi0b = -6.0 * float(np.sum(np.tril(chain, k=-1)))
    return StaticSplit(chi0a, chi0b)
