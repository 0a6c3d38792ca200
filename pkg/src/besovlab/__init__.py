"""besovlab: dyadic-frame norms and product estimates for discretized Dirichlet operators.

The library rasterizes a small catalog of planar and interval domains,
assembles the zero-boundary stencil Laplacian (optionally with a bounded
potential), eigendecomposes it exactly, and builds a smooth dyadic frame on
its spectrum.  On top of that sit frame norms, a frequency-interaction
split of pointwise products, and a collection of parameter scans that turn
the classical multiplier, gradient and product estimates into measured,
reproducible CSV reports.
"""

from ._version import __version__
from .besov import BesovParams, BlockProfile, block_profile, homogeneous_norm, \
    inhomogeneous_norm
from .config import KNOWN_EXPERIMENTS, RunConfig, load_config
from .domain import (BOUNDARY_NOTES, SHAPES, DirichletOperator, DomainSpec, Grid,
                     assemble_operator, build_grid, gradient_apply, lp_norm)
from .dyadic import (DyadicPartition, all_blocks, band_profile, block,
                     block_values, build_partition, bump, low_pass,
                     partition_deviation, reconstruction_error)
from .errors import (BesovLabError, ChainViolationError, ConfigError, DomainError,
                     EnsembleError, GridError, HardAssertionError,
                     KernelSizeError, MultiplierError, ParameterError,
                     PotentialError, ProfileError, SolverError, SpectrumError,
                     UnsupportedNormError)
from .lab import (Ensemble, appendix_a_probe, bernstein_scan, bilinear_scan,
                  gradient_scan, inhomogeneous_bilinear_scan, partition_report,
                  schrodinger_equivalence_scan)
from .paraproduct import (DecayRow, ParaproductSplit, TermBounds, bony_split,
                          case_b_decay, decay_table_to_csv, interior_bands,
                          key_identity_residual, leibniz_residual, term_bounds)
from .reports import ExperimentReport
from .spectral import (OperatorKernel, SpectralDecomposition, apply_function,
                       decompose, grad_operator_norms, heat_apply,
                       multiplier_norm_p_to_p, norm_p_to_infty, norm_p_to_p,
                       operator_matrix)

__all__ = [
    "__version__",
    # domains and operators
    "SHAPES", "BOUNDARY_NOTES", "DomainSpec", "Grid", "DirichletOperator",
    "build_grid", "assemble_operator", "gradient_apply", "lp_norm",
    # spectral calculus
    "SpectralDecomposition", "OperatorKernel", "decompose", "apply_function",
    "heat_apply", "operator_matrix", "norm_p_to_infty", "norm_p_to_p",
    "multiplier_norm_p_to_p", "grad_operator_norms",
    # dyadic frame
    "DyadicPartition", "build_partition", "bump", "band_profile", "block",
    "block_values", "all_blocks", "low_pass", "reconstruction_error",
    "partition_deviation",
    # frame norms
    "BesovParams", "BlockProfile", "block_profile", "homogeneous_norm",
    "inhomogeneous_norm",
    # product split
    "ParaproductSplit", "TermBounds", "DecayRow", "bony_split", "term_bounds",
    "case_b_decay", "decay_table_to_csv", "interior_bands",
    "key_identity_residual", "leibniz_residual",
    # scans
    "Ensemble", "ExperimentReport", "partition_report", "bernstein_scan",
    "gradient_scan", "bilinear_scan", "inhomogeneous_bilinear_scan",
    "appendix_a_probe", "schrodinger_equivalence_scan",
    # configuration
    "RunConfig", "load_config", "KNOWN_EXPERIMENTS",
    # errors
    "BesovLabError", "DomainError", "PotentialError", "GridError",
    "SolverError", "MultiplierError", "ParameterError", "SpectrumError",
    "ProfileError", "EnsembleError", "UnsupportedNormError", "KernelSizeError",
    "ConfigError", "HardAssertionError", "ChainViolationError",
]
