"""Dyadic-frame norms evaluated from block profiles.

A block profile stores, for one function and one integrability exponent p,
the L^p size of every active band projection plus the low-frequency piece.
Norms are pure functions of profiles so parameter scans can sweep the
regularity s and the summability q without redoing any spectral work.

The dyadic sum is truncated to the active index range; this is exact here
because every band outside the range vanishes identically on the spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import lp_norm
from .dyadic import DyadicPartition, all_blocks
from .errors import ParameterError, ProfileError
from .spectral import SpectralDecomposition, apply_function


@dataclass(frozen=True)
class BesovParams:
    """Regularity s, integrability p and summability q, with p, q in [1, inf]."""

    s: float
    p: float
    q: float

    def __post_init__(self):
        for name, v in (("p", self.p), ("q", self.q)):
            if not (v == np.inf or v >= 1.0):
                raise ParameterError(f"{name} must lie in [1, inf], got {v}")


@dataclass(frozen=True, eq=False)
class BlockProfile:
    """Per-band L^p sizes of one grid function.

    ``indices`` is the strictly increasing active index range and ``values``
    the matching band norms; ``low_pass`` is the L^p size of the
    low-frequency projection, present unless the profile was built for a
    purely homogeneous purpose.
    """

    indices: tuple[int, ...]
    values: np.ndarray
    p: float
    low_pass: float | None = None

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ProfileError("profile indices must be strictly increasing")
        if np.any(np.asarray(self.values) < 0.0):
            raise ProfileError("profile values must be nonnegative")

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("j,value\n")
            for j, v in zip(self.indices, self.values):
                fh.write(f"{j},{float(v)!r}\n")


def block_profile(dec: SpectralDecomposition, part: DyadicPartition, f,
                  p) -> BlockProfile:
    """Compute the band-norm profile of ``f`` at exponent ``p``."""
    grid = dec.grid
    blocks = all_blocks(dec, part, f)
    values = np.array([lp_norm(grid, blocks[j], p) for j in part.indices])
    low = lp_norm(grid, apply_function(dec, part.psi(dec.eigenvalues), f), p)
    return BlockProfile(indices=tuple(part.indices), values=values, p=p,
                        low_pass=low)


def _weighted_lq(weights: np.ndarray, q: float) -> float:
    if weights.size == 0:
        return 0.0
    if q == np.inf:
        return float(weights.max())
    q = float(q)
    if q == 1.0:
        return float(weights.sum())
    return float((weights ** q).sum() ** (1.0 / q))


def homogeneous_norm(profile: BlockProfile, params: BesovParams) -> float:
    """l^q over all active bands of ``2^(s j)`` times the band norm."""
    if params.p != profile.p:
        raise ProfileError(f"profile was computed at p = {profile.p}, "
                           f"requested p = {params.p}")
    j = np.asarray(profile.indices, dtype=float)
    weights = 2.0 ** (params.s * j) * np.asarray(profile.values)
    return _weighted_lq(weights, params.q)


def inhomogeneous_norm(profile: BlockProfile, params: BesovParams) -> float:
    """Low-frequency L^p term plus the l^q band sum over indices j >= 1."""
    if params.p != profile.p:
        raise ProfileError(f"profile was computed at p = {profile.p}, "
                           f"requested p = {params.p}")
    if profile.low_pass is None:
        raise ProfileError("profile has no low-frequency entry")
    j = np.asarray(profile.indices, dtype=float)
    keep = j >= 1.0
    weights = 2.0 ** (params.s * j[keep]) * np.asarray(profile.values)[keep]
    return profile.low_pass + _weighted_lq(weights, params.q)
