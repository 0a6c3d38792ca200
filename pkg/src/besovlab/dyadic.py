"""Smooth dyadic partition of unity and spectral band projectors.

The base bump is the compactly supported exponential

    b(x) = exp(-1 / ((x - 1/2) (2 - x)))   on (1/2, 2),  0 elsewhere,

normalized so that its dyadic dilates sum to one: for x in (1/2, 2) at most
the three dilates b(x/2), b(x), b(2x) are nonzero, so

    phi0(x) = b(x) / (b(x/2) + b(x) + b(2x))

and phi_j(x) = phi0(2^(-j) x).  Because scaling by powers of two is exact in
floating point, consecutive ladder terms share their denominator bit for bit
and the partition identity holds to machine rounding.

The active index range adapts to the spectrum of a decomposition with one
empty margin band on each side, so every band projector outside the range is
exactly zero on the spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import lp_norm
from .errors import SpectrumError
from .spectral import SpectralDecomposition, apply_function


def bump(x) -> np.ndarray:
    """Smooth bump supported exactly on [1/2, 2]."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    inside = (x > 0.5) & (x < 2.0)
    xi = x[inside]
    out[inside] = np.exp(-1.0 / ((xi - 0.5) * (2.0 - xi)))
    return out


def band_profile(j: int, lam) -> np.ndarray:
    """Value of the j-th ladder function at frequencies ``lam``."""
    x = np.atleast_1d(np.asarray(lam, dtype=float)) * 2.0 ** (-j)
    num = bump(x)
    # at most the three neighboring dilates are nonzero on the support
    den = bump(0.5 * x) + num + bump(2.0 * x)
    out = np.zeros_like(num)
    pos = num > 0.0
    out[pos] = num[pos] / den[pos]
    return out


@dataclass(frozen=True)
class DyadicPartition:
    """Dyadic ladder adapted to a spectral range.

    ``j_min``/``j_max`` bracket every index whose band meets
    ``[sqrt(lambda_1), sqrt(lambda_M)]``, with one empty margin band on each
    side.  The ladder itself lives at absolute frequencies; only the active
    window adapts to the operator, so the weights ``2^(s j)`` are comparable
    across resolutions.
    """

    j_min: int
    j_max: int
    lambda_min: float
    lambda_max: float

    @property
    def indices(self) -> range:
        return range(self.j_min, self.j_max + 1)

    def phi(self, j: int, lam) -> np.ndarray:
        """Ladder function phi_j at frequency lam (not squared)."""
        return band_profile(j, lam)

    def low_profile(self, j: int, lam) -> np.ndarray:
        """Sum of ladder functions with index at most ``j`` at frequency lam."""
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        out = np.zeros_like(lam)
        for k in range(self.j_min, min(j, self.j_max) + 1):
            out += band_profile(k, lam)
        return out

    def psi(self, mu) -> np.ndarray:
        """Low-frequency profile: ``1 - sum_{j >= 1} phi_j(sqrt(mu))``, clamped to [0, 1]."""
        mu = np.atleast_1d(np.asarray(mu, dtype=float))
        lam = np.sqrt(np.maximum(mu, 0.0))
        top = max(int(np.ceil(np.log2(lam.max()))) + 2, 1) if np.any(lam > 0) else 1
        acc = np.zeros_like(lam)
        for j in range(1, top + 1):
            acc += band_profile(j, lam)
        return np.clip(1.0 - acc, 0.0, 1.0)

    def psi_scaled(self, j: int, mu) -> np.ndarray:
        """``psi(2^(-2j) mu)``; scaling by an exact power of two."""
        return self.psi(np.asarray(mu, dtype=float) * 2.0 ** (-2 * j))


def build_partition(dec: SpectralDecomposition) -> DyadicPartition:
    """Construct the dyadic ladder bracketing the spectrum of ``dec``.

    Raises
    ------
    SpectrumError
        If the lowest eigenvalue is not strictly positive.
    """
    lam = dec.eigenvalues
    if lam[0] <= 0.0:
        raise SpectrumError(f"lowest eigenvalue must be positive, got {lam[0]:.6e}")
    sq_lo, sq_hi = np.sqrt(lam[0]), np.sqrt(lam[-1])
    j_min = int(np.floor(np.log2(sq_lo))) - 1
    j_max = int(np.ceil(np.log2(sq_hi))) + 1
    return DyadicPartition(j_min=j_min, j_max=j_max,
                           lambda_min=float(lam[0]), lambda_max=float(lam[-1]))


def block_values(dec: SpectralDecomposition, part: DyadicPartition, j: int) -> np.ndarray:
    """Multiplier values of the j-th band projector on the spectrum."""
    return part.phi(j, np.sqrt(dec.eigenvalues))


def block(dec: SpectralDecomposition, part: DyadicPartition, j: int, f) -> np.ndarray:
    """Band projector ``phi_j(sqrt(H)) f``; zero outside the active range."""
    if j < part.j_min or j > part.j_max:
        return np.zeros(dec.size)
    return apply_function(dec, block_values(dec, part, j), f)


def all_blocks(dec: SpectralDecomposition, part: DyadicPartition, f) -> dict[int, np.ndarray]:
    """All active band projections of ``f``, computed from one coefficient pass."""
    coeffs = dec.coefficients(f)
    sq = np.sqrt(dec.eigenvalues)
    return {j: dec.synthesize(part.phi(j, sq) * coeffs) for j in part.indices}


def low_pass(dec: SpectralDecomposition, part: DyadicPartition, j: int, f) -> np.ndarray:
    """Partial sum of band projections with index at most ``j``."""
    out = np.zeros(dec.size)
    for k in range(part.j_min, min(j, part.j_max) + 1):
        out += block(dec, part, k, f)
    return out


def reconstruction_error(dec: SpectralDecomposition, part: DyadicPartition, f) -> float:
    """Relative L^2 defect of the band reconstruction; 0 for the zero function.

    On these grids the defect is pure rounding: no nonzero grid function is
    invisible to every band, because the spectrum is strictly positive and
    the ladder sums to one on it.
    """
    grid = dec.grid
    nf = lp_norm(grid, f, 2)
    if nf == 0.0:
        return 0.0
    total = low_pass(dec, part, part.j_max, f)
    return lp_norm(grid, np.asarray(f, dtype=float) - total, 2) / nf


def partition_deviation(part: DyadicPartition, lam) -> float:
    """Max deviation of the ladder sum from 1 at the sampled frequencies."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    total = np.zeros_like(lam)
    for j in range(part.j_min - 2, part.j_max + 3):
        total += band_profile(j, lam)
    return float(np.abs(total - 1.0).max())


def inhomogeneous_split_deviation(part: DyadicPartition, lam) -> float:
    """Max deviation of ``psi(lam^2) + sum_{j>=1} phi_j(lam)`` from 1, lam >= 0."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    top = max(int(np.ceil(np.log2(lam.max()))) + 2, 1) if np.any(lam > 0) else 1
    acc = part.psi(lam * lam)
    for j in range(1, top + 1):
        acc = acc + band_profile(j, lam)
    return float(np.abs(acc - 1.0).max())
