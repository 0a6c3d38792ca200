import math
from types import SimpleNamespace

import numpy as np
import pytest

import besovlab as bl


def make_lab(shape, extents, resolution, potential=None):
    """Build the full stack for one domain: grid, operator, eigenpairs, ladder."""
    spec = bl.DomainSpec(shape, extents, resolution, potential)
    grid = bl.build_grid(spec)
    op = bl.assemble_operator(grid)
    dec = bl.decompose(op)
    part = bl.build_partition(dec)
    return SimpleNamespace(spec=spec, grid=grid, op=op, dec=dec, part=part)


def smooth_function(dec, seed=0):
    """One member of the smoothed Gaussian ensemble law."""
    rng = np.random.default_rng(seed)
    return dec.synthesize(rng.standard_normal(dec.size) / dec.eigenvalues)


@pytest.fixture(scope="session")
def lab1d():
    return make_lab("interval", math.pi, 63)


@pytest.fixture(scope="session")
def lab1d_small():
    return make_lab("interval", math.pi, 15)


@pytest.fixture(scope="session")
def lab2d():
    return make_lab("rectangle", (math.pi, 2.0), (12, 10))
