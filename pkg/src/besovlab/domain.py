"""Rasterized domains, the Dirichlet stencil operator, and weighted norms.

A domain from the catalog is rasterized on a uniform Cartesian lattice: a
cell belongs to the interior iff its center lies in the open domain.  The
zero Dirichlet condition is imposed by extension: stencil legs that leave
the interior read the value 0 and contribute no matrix row.  All grid
functions are plain 1-D numpy vectors indexed by interior points; the grid
object carries the geometry and the cell measure used by every weighted
norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, GridError, ParameterError, PotentialError

SHAPES = ("interval", "rectangle", "l_shape", "disk_raster", "punctured_square")

# Intended boundary class of each catalog shape.  Metadata only: a raster
# grid cannot distinguish these classes, so reports carry the tag verbatim
# without claiming it was verified.
BOUNDARY_NOTES = {
    "interval": "smooth bounded interval",
    "rectangle": "bounded Lipschitz product domain",
    "l_shape": "bounded Lipschitz domain with a reentrant corner",
    "disk_raster": "smooth bounded domain (center-inclusion raster)",
    "punctured_square": "bounded proxy for the exterior of a compact obstacle",
}


@dataclass(frozen=True)
class DomainSpec:
    """Shape, extents, per-axis interior resolution and optional potential.

    Parameters
    ----------
    shape : str
        One of ``SHAPES``.
    extents : float or sequence of float
        Strictly positive side lengths, one per axis (a scalar is broadcast).
    resolution : int or sequence of int
        Interior points per axis of the bounding box, at least 3 per axis.
    potential : callable, optional
        Sampler ``V(points) -> values`` evaluated on interior points,
        units 1/length^2.  Only bounded pointwise samplers are admitted;
        no integrability class is checked.
    """

    shape: str
    extents: tuple[float, ...] = (1.0,)
    resolution: tuple[int, ...] = (15,)
    potential: Callable | None = None

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise DomainError(f"unknown shape {self.shape!r}; expected one of {SHAPES}")
        dim = 1 if self.shape == "interval" else 2
        ext = _as_tuple(self.extents, dim, float)
        res = _as_tuple(self.resolution, dim, int)
        object.__setattr__(self, "extents", ext)
        object.__setattr__(self, "resolution", res)
        if any(e <= 0 for e in ext):
            raise DomainError(f"extents must be strictly positive, got {ext}")
        if any(n < 3 for n in res):
            raise DomainError(f"resolution must be >= 3 per axis, got {res}")

    @property
    def dim(self) -> int:
        return len(self.extents)

    @property
    def boundary_note(self) -> str:
        return BOUNDARY_NOTES[self.shape]


def _as_tuple(value, dim, cast):
    if isinstance(value, (int, float)):
        return tuple(cast(value) for _ in range(dim))
    seq = tuple(cast(v) for v in value)
    if len(seq) == 1 and dim > 1:
        return seq * dim
    if len(seq) != dim:
        raise DomainError(f"expected {dim} per-axis values, got {seq}")
    return seq


@dataclass(frozen=True, eq=False)
class Grid:
    """Interior points of a rasterized domain.

    Attributes
    ----------
    points : ndarray, shape (size, dim)
        Coordinates of interior cell centers, pairwise distinct.
    h : tuple of float
        Lattice spacing per axis.
    w : float
        Cell measure, the product of the spacings.
    neighbors : ndarray, shape (size, dim, 2), int
        Interior index of the (-, +) lattice neighbor along each axis,
        or -1 where the neighbor is a boundary cell (Dirichlet zero).
    """

    spec: DomainSpec
    points: np.ndarray
    h: tuple[float, ...]
    neighbors: np.ndarray
    lattice_index: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.h)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def w(self) -> float:
        return float(np.prod(self.h))

    def resolution_label(self) -> str:
        return "x".join(str(n) for n in self.spec.resolution)


def _interior_mask(spec: DomainSpec, axes: list[np.ndarray]) -> np.ndarray:
    """Classify lattice cell centers; True marks interior cells."""
    if spec.shape == "interval":
        return np.ones(len(axes[0]), dtype=bool)
    X, Y = np.meshgrid(axes[0], axes[1], indexing="ij")
    Lx, Ly = spec.extents
    if spec.shape == "rectangle":
        return np.ones_like(X, dtype=bool)
    if spec.shape == "l_shape":
        # full box minus the closed upper-right quadrant
        return ~((X >= 0.5 * Lx) & (Y >= 0.5 * Ly))
    if spec.shape == "disk_raster":
        r = 0.5 * min(Lx, Ly)
        cx, cy = 0.5 * Lx, 0.5 * Ly
        return (X - cx) ** 2 + (Y - cy) ** 2 < r * r
    if spec.shape == "punctured_square":
        # closed centered block of one third of each extent is removed
        bx0, bx1 = Lx / 3.0, 2.0 * Lx / 3.0
        by0, by1 = Ly / 3.0, 2.0 * Ly / 3.0
        return ~((X >= bx0) & (X <= bx1) & (Y >= by0) & (Y <= by1))
    raise DomainError(f"unknown shape {spec.shape!r}")


def build_grid(spec: DomainSpec) -> Grid:
    """Rasterize a domain spec into an interior grid with stencil adjacency."""
    h = tuple(L / (n + 1) for L, n in zip(spec.extents, spec.resolution))
    axes = [np.arange(1, n + 1) * hd for n, hd in zip(spec.resolution, h)]
    mask = _interior_mask(spec, axes)
    flat = mask.reshape(-1)
    count = int(flat.sum())
    if count == 0:
        raise DomainError(f"rasterization of {spec.shape!r} at resolution "
                          f"{spec.resolution} has an empty interior")

    index = np.full(flat.shape, -1, dtype=np.int64)
    index[flat] = np.arange(count)
    shape = tuple(len(a) for a in axes)
    index = index.reshape(shape)

    if spec.dim == 1:
        pts = axes[0][flat].reshape(-1, 1)
    else:
        X, Y = np.meshgrid(axes[0], axes[1], indexing="ij")
        pts = np.column_stack([X.reshape(-1)[flat], Y.reshape(-1)[flat]])

    coords = np.argwhere(mask)
    neighbors = np.full((count, spec.dim, 2), -1, dtype=np.int64)
    for d in range(spec.dim):
        for side, step in ((0, -1), (1, +1)):
            shifted = coords.copy()
            shifted[:, d] += step
            ok = (shifted[:, d] >= 0) & (shifted[:, d] < shape[d])
            idx = np.full(count, -1, dtype=np.int64)
            idx[ok] = index[tuple(shifted[ok].T)]
            neighbors[:, d, side] = idx

    return Grid(spec=spec, points=pts, h=h, neighbors=neighbors, lattice_index=index)


@dataclass(frozen=True, eq=False)
class DirichletOperator:
    """Symmetric stencil matrix of the zero-boundary Laplacian, optionally + V.

    The diagonal is ``sum_d 2/h_d^2 + V(x_i)`` and every interior stencil
    neighbor contributes ``-1/h_d^2``; legs into the boundary contribute
    nothing (zero extension).  Symmetry is exact by construction.
    """

    grid: Grid
    matrix: np.ndarray
    potential_values: np.ndarray | None = None

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def sample_potential(grid: Grid, potential) -> np.ndarray:
    """Evaluate a potential on the interior points; reject non-finite samples."""
    if potential is None:
        return np.zeros(grid.size)
    if callable(potential):
        vals = np.asarray(potential(grid.points), dtype=float).reshape(-1)
    else:
        vals = np.asarray(potential, dtype=float).reshape(-1)
    if vals.shape != (grid.size,):
        raise PotentialError(f"potential sample has shape {vals.shape}, "
                             f"expected ({grid.size},)")
    if not np.all(np.isfinite(vals)):
        bad = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise PotentialError(f"potential is non-finite at point index {bad}")
    return vals


def assemble_operator(grid: Grid, potential=None) -> DirichletOperator:
    """Assemble the dense symmetric stencil matrix on a grid.

    ``potential`` may be ``None``, a sampler called on the point array, or a
    precomputed vector of length ``grid.size``.  When the grid's spec already
    carries a potential and none is passed here, the spec's sampler is used.
    """
    if potential is None:
        potential = grid.spec.potential
    vals = sample_potential(grid, potential)
    m = grid.size
    A = np.zeros((m, m))
    diag = sum(2.0 / hd**2 for hd in grid.h) + vals
    A[np.arange(m), np.arange(m)] = diag
    for d in range(grid.dim):
        off = -1.0 / grid.h[d] ** 2
        nb = grid.neighbors[:, d, 1]
        rows = np.flatnonzero(nb >= 0)
        cols = nb[rows]
        A[rows, cols] = off
        A[cols, rows] = off
    return DirichletOperator(grid=grid, matrix=A,
                             potential_values=None if potential is None else vals)


def as_values(grid: Grid, f) -> np.ndarray:
    """Coerce a grid function to a validated 1-D vector on this grid."""
    vals = np.asarray(f, dtype=float).reshape(-1)
    if vals.shape != (grid.size,):
        raise GridError(f"grid function has length {vals.size}, "
                        f"expected {grid.size}")
    return vals


def gradient_apply(grid: Grid, f) -> np.ndarray:
    """Forward-difference gradient with Dirichlet zero extension.

    Returns an array of shape ``(dim, size)``; component ``d`` at point ``i``
    is ``(f(next_i) - f(i)) / h_d`` where a missing forward neighbor reads 0.
    """
    vals = as_values(grid, f)
    out = np.empty((grid.dim, grid.size))
    for d in range(grid.dim):
        nb = grid.neighbors[:, d, 1]
        fwd = np.where(nb >= 0, vals[np.clip(nb, 0, None)], 0.0)
        out[d] = (fwd - vals) / grid.h[d]
    return out


def lp_norm(grid: Grid, f, p) -> float:
    """Weighted discrete L^p norm: ``(sum |f_i|^p w)^(1/p)``, sup for p = inf."""
    vals = as_values(grid, f)
    if p == np.inf:
        return float(np.max(np.abs(vals))) if vals.size else 0.0
    p = float(p)
    if p < 1.0:
        raise ParameterError(f"L^p norm requires p >= 1, got {p}")
    if p == 1.0:
        return float(np.sum(np.abs(vals)) * grid.w)
    if p == 2.0:
        return float(np.sqrt(np.sum(vals * vals) * grid.w))
    return float((np.sum(np.abs(vals) ** p) * grid.w) ** (1.0 / p))
