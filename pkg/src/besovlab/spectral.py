"""Dense eigendecomposition and exact functional calculus.

Every operator here acts through the full symmetric eigendecomposition of a
Dirichlet stencil matrix, so a scalar function of the operator is applied
exactly (to rounding) as multiplication by its values on the spectrum.
Kernels use the quadrature convention ``(Tf)(x_i) = sum_j K(x_i, x_j) f_j w``
so that discrete operator norms coincide with the weighted-norm operator
norms of ``T``.

Exactness is preferred to scalability throughout: there is no iterative
eigensolver and kernels are dense, with a configurable entry cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domain import DirichletOperator, Grid, as_values, gradient_apply
from .errors import (KernelSizeError, MultiplierError, ParameterError,
                     SolverError, UnsupportedNormError)

# Decompositions failing these are rejected, not repaired.
RESIDUAL_RTOL = 1e-8
GRAM_TOL = 1e-10

MAX_KERNEL_ENTRIES = 8000 * 8000


@dataclass(eq=False)
class SpectralDecomposition:
    """Full eigenpairs of a Dirichlet stencil operator.

    ``eigenvalues`` are ascending; ``vectors`` holds eigenvectors as columns,
    orthonormal in the weighted inner product ``<u, v> = sum_i u_i v_i w``.
    """

    operator: DirichletOperator
    eigenvalues: np.ndarray
    vectors: np.ndarray
    _norm_cache: dict = field(default_factory=dict, repr=False)

    @property
    def grid(self) -> Grid:
        return self.operator.grid

    @property
    def size(self) -> int:
        return self.eigenvalues.size

    @property
    def w(self) -> float:
        return self.grid.w

    def coefficients(self, f) -> np.ndarray:
        """Expansion coefficients of ``f`` in the weighted eigenbasis."""
        vals = as_values(self.grid, f)
        return (self.vectors.T @ vals) * self.w

    def synthesize(self, coeffs) -> np.ndarray:
        """Grid function with the given eigenbasis coefficients."""
        return self.vectors @ np.asarray(coeffs, dtype=float)


def decompose(op: DirichletOperator) -> SpectralDecomposition:
    """Eigendecompose a symmetric stencil operator.

    Raises
    ------
    SolverError
        If the eigensolver fails, or the residual / orthonormality
        tolerances are not met.
    """
    A = op.matrix
    if not np.array_equal(A, A.T):
        raise SolverError("operator matrix is not exactly symmetric")
    try:
        lam, Q = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigensolver did not converge: {exc}") from exc
    w = op.grid.w
    V = Q / np.sqrt(w)

    scale = max(abs(lam[0]), abs(lam[-1]))
    residual = np.linalg.norm(A @ V - V * lam, axis=0).max()
    if residual > RESIDUAL_RTOL * scale:
        raise SolverError(f"eigen residual {residual:.3e} exceeds "
                          f"{RESIDUAL_RTOL:.1e} * {scale:.3e}")
    gram = (V.T @ V) * w
    gram_err = np.abs(gram - np.eye(lam.size)).max()
    if gram_err > GRAM_TOL:
        raise SolverError(f"weighted Gram deviation {gram_err:.3e} exceeds {GRAM_TOL:.1e}")
    return SpectralDecomposition(operator=op, eigenvalues=lam, vectors=V)


def multiplier_values(dec: SpectralDecomposition, phi) -> np.ndarray:
    """Evaluate a scalar multiplier on the spectrum, vectorizing if needed."""
    lam = dec.eigenvalues
    if callable(phi):
        try:
            vals = np.asarray(phi(lam), dtype=float)
        except (TypeError, ValueError):
            vals = np.array([float(phi(x)) for x in lam])
        if vals.shape != lam.shape:
            vals = np.broadcast_to(vals, lam.shape).astype(float)
    else:
        vals = np.asarray(phi, dtype=float)
        if vals.shape != lam.shape:
            raise MultiplierError(f"multiplier value array has shape {vals.shape}, "
                                  f"expected {lam.shape}")
    if not np.all(np.isfinite(vals)):
        k = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise MultiplierError(f"multiplier non-finite at eigenvalue index {k} "
                              f"(lambda = {lam[k]:.6e})")
    return vals


def apply_function(dec: SpectralDecomposition, phi, f) -> np.ndarray:
    """Apply the operator function ``phi`` to a grid function.

    ``phi`` is a scalar callable evaluated on the eigenvalues, or a
    precomputed vector of values on the spectrum.
    """
    m = multiplier_values(dec, phi)
    return dec.synthesize(m * dec.coefficients(f))


def heat_apply(dec: SpectralDecomposition, t: float, f) -> np.ndarray:
    """Heat flow ``exp(-t H) f`` for t >= 0."""
    if t < 0:
        raise ParameterError(f"heat flow requires t >= 0, got {t}")
    return apply_function(dec, np.exp(-t * dec.eigenvalues), f)


@dataclass(eq=False)
class OperatorKernel:
    """Dense kernel of an operator in the quadrature convention.

    ``matrix[i, j]`` is ``K(x_i, x_j)`` with ``(Tf)(x_i) = sum_j K(x_i, x_j)
    f_j w``.  ``values`` holds the multiplier on the spectrum when the kernel
    came from the functional calculus (enabling the exact 2->2 norm); it is
    ``None`` for derived kernels such as differentiated ones.
    """

    matrix: np.ndarray
    w: float
    tag: str = ""
    values: np.ndarray | None = None

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def apply(self, f) -> np.ndarray:
        return self.matrix @ (np.asarray(f, dtype=float) * self.w)

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.matrix, self.matrix.T))

    def to_csv(self, path) -> None:
        """Write the kernel row-major as ``i,j,K`` (debugging aid)."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("i,j,K\n")
            m = self.matrix
            for i in range(m.shape[0]):
                for j in range(m.shape[1]):
                    fh.write(f"{i},{j},{float(m[i, j])!r}\n")


def operator_matrix(dec: SpectralDecomposition, phi, tag: str = "",
                    max_entries: int = MAX_KERNEL_ENTRIES) -> OperatorKernel:
    """Assemble the dense kernel of ``phi(H)``.

    Refuses kernels above ``max_entries`` dense entries.
    """
    m = multiplier_values(dec, phi)
    n = dec.size
    if n * n > max_entries:
        raise KernelSizeError(f"kernel would hold {n*n} entries, cap is {max_entries}")
    K = (dec.vectors * m) @ dec.vectors.T
    # the operator is self-adjoint; symmetrizing removes matmul rounding skew
    # so transpose duality of the 1->1 and inf->inf norms is exact
    K = 0.5 * (K + K.T)
    return OperatorKernel(matrix=K, w=dec.w, tag=tag, values=m)


def _conjugate(p: float) -> float:
    if p == np.inf:
        return 1.0
    p = float(p)
    if p < 1.0:
        raise ParameterError(f"exponent must satisfy p >= 1, got {p}")
    if p == 1.0:
        return np.inf
    return p / (p - 1.0)


def norm_p_to_infty(kernel: OperatorKernel, p) -> float:
    """Operator norm onto the sup norm via kernel rows.

    Equals ``max_i || K(x_i, .) ||_{p'}`` with ``p'`` conjugate to ``p``; on
    the discrete space this is the exact operator norm from the weighted
    ``L^p`` norm to the sup norm.
    """
    pc = _conjugate(p)
    K = np.abs(kernel.matrix)
    if pc == np.inf:          # p = 1
        return float(K.max())
    if pc == 1.0:             # p = inf
        return float((K.sum(axis=1) * kernel.w).max())
    return float(((K ** pc).sum(axis=1) * kernel.w).max() ** (1.0 / pc))


def norm_p_to_p(kernel: OperatorKernel, p, *, lower_bound_probes: int | None = None,
                seed: int = 0) -> float:
    """Operator norm on the weighted ``L^p`` space, exact for p in {1, 2, inf}.

    p = 1 is the largest weighted column absolute sum, p = inf the largest
    weighted row absolute sum, and p = 2 the largest singular value in the
    weighted inner product (the largest absolute multiplier value when the
    kernel came from the functional calculus).  Other ``p`` are rejected
    unless ``lower_bound_probes`` is set, in which case a seeded randomized
    lower bound is returned instead of an exact value.
    """
    if p == 1:
        # column sums, computed as row sums of the materialized transpose so
        # that transpose duality is bit-exact on symmetric kernels
        S = np.abs(np.ascontiguousarray(kernel.matrix.T))
        return float((S.sum(axis=1) * kernel.w).max())
    if p == np.inf:
        return float((np.abs(kernel.matrix).sum(axis=1) * kernel.w).max())
    if p == 2:
        if kernel.values is not None:
            return float(np.abs(kernel.values).max())
        sv = np.linalg.svd(kernel.matrix * kernel.w, compute_uv=False)
        return float(sv[0])
    if lower_bound_probes:
        return _randomized_lower_bound(kernel, float(p), int(lower_bound_probes), seed)
    raise UnsupportedNormError(
        f"exact p->p norms support p in {{1, 2, inf}}; got p = {p}. "
        "Pass lower_bound_probes=... for a randomized lower bound.")


def _randomized_lower_bound(kernel, p, probes, seed):
    rng = np.random.default_rng(seed)
    n = kernel.size
    w = kernel.w
    best = 0.0
    for _ in range(probes):
        f = rng.standard_normal(n)
        nf = (np.sum(np.abs(f) ** p) * w) ** (1.0 / p)
        if nf == 0.0:
            continue
        tf = kernel.apply(f)
        nt = (np.sum(np.abs(tf) ** p) * w) ** (1.0 / p)
        best = max(best, nt / nf)
    return best


def multiplier_norm_p_to_p(dec: SpectralDecomposition, phi, p, tag: str = "") -> float:
    """p->p norm of ``phi(H)`` with kernel reuse across repeated calls.

    For p = 2 no kernel is formed.  For p in {1, inf} the weighted row sums
    of the dense kernel are computed once per distinct multiplier and
    memoized on the decomposition (row and column sums agree for these
    symmetric kernels, so both norms come from one assembly).
    """
    m = multiplier_values(dec, phi)
    if p == 2:
        return float(np.abs(m).max())
    if p not in (1, np.inf):
        raise UnsupportedNormError(f"exact p->p norms support p in {{1, 2, inf}}; got {p}")
    key = m.tobytes()
    cached = dec._norm_cache.get(key)
    if cached is None:
        kernel = operator_matrix(dec, m, tag=tag)
        row = float((np.abs(kernel.matrix).sum(axis=1) * kernel.w).max())
        col = norm_p_to_p(kernel, 1)
        cached = (col, row)
        dec._norm_cache[key] = cached
    return cached[0] if p == 1 else cached[1]


def differentiated_kernel(dec: SpectralDecomposition, kernel: OperatorKernel,
                          axis: int) -> OperatorKernel:
    """Forward-difference the kernel in its output variable along one axis."""
    grid = dec.grid
    nb = grid.neighbors[:, axis, 1]
    K = kernel.matrix
    fwd = K[np.clip(nb, 0, None), :].copy()
    fwd[nb < 0, :] = 0.0
    GK = (fwd - K) / grid.h[axis]
    return OperatorKernel(matrix=GK, w=kernel.w,
                          tag=f"d{axis}({kernel.tag})" if kernel.tag else f"d{axis}",
                          values=None)


def grad_operator_norms(dec: SpectralDecomposition, phi, p, tag: str = "") -> float:
    """Componentwise-max gradient operator norm of ``grad phi(H)``.

    Assembles the kernel of ``phi(H)``, differentiates it per axis in the
    output variable and reports the maximum of the per-axis p->p norms.
    This componentwise convention is within a factor ``sqrt(dim)`` of the
    Euclidean-gradient convention; reports record which one was used.
    """
    kernel = operator_matrix(dec, phi, tag=tag)
    best = 0.0
    for d in range(dec.grid.dim):
        gk = differentiated_kernel(dec, kernel, d)
        best = max(best, norm_p_to_p(gk, p))
    return best


def gradient_of(dec: SpectralDecomposition, f) -> np.ndarray:
    """Forward-difference gradient of a grid function, shape (dim, size)."""
    return gradient_apply(dec.grid, f)
