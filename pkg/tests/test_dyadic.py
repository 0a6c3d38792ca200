import math

import numpy as np
import pytest

import besovlab as bl
from besovlab.dyadic import inhomogeneous_split_deviation
from conftest import make_lab, smooth_function


def test_bump_support_exact():
    x = np.array([0.0, 0.5, 2.0, 2.5, -1.0])
    assert np.array_equal(bl.bump(x), np.zeros(5))
    assert bl.bump(np.array([1.0]))[0] == math.exp(-2.0)


def test_ladder_sums_to_one_on_log_grid(lab1d):
    part = lab1d.part
    lam = np.geomspace(1e-4, 1e6, 10000)
    total = np.zeros_like(lam)
    for j in range(int(np.floor(np.log2(lam[0]))) - 2,
                   int(np.ceil(np.log2(lam[-1]))) + 3):
        total += bl.band_profile(j, lam)
    assert np.abs(total - 1.0).max() <= 1e-10


def test_partition_deviation_within_bracketed_range(lab1d):
    sq = np.sqrt(lab1d.dec.eigenvalues)
    lam = np.geomspace(0.5 * sq[0], 2.0 * sq[-1], 10000)
    assert bl.partition_deviation(lab1d.part, lam) <= 1e-10


def test_neighbor_scales_share_value_one_at_dyadic_points():
    for j in (-3, 0, 5):
        lam = np.array([2.0 ** j])
        vals = [bl.band_profile(k, lam)[0] for k in (j - 1, j, j + 1)]
        assert sum(v > 0 for v in vals) in (1, 2)
        assert sum(vals) == pytest.approx(1.0, abs=1e-14)


def test_band_vanishes_below_half_scale():
    lam = np.geomspace(1e-3, 2.0 ** 4, 2000)
    for j in (5, 6):
        vals = bl.band_profile(j, lam)
        assert np.array_equal(vals[lam <= 2.0 ** (j - 1)],
                              np.zeros(int((lam <= 2.0 ** (j - 1)).sum())))


def test_support_discipline_products_vanish():
    lam = np.geomspace(1e-3, 1e3, 4000)
    for j in (-2, 0, 3):
        for k in (j + 2, j + 3, j - 2):
            prod = bl.band_profile(j, lam) * bl.band_profile(k, lam)
            assert np.array_equal(prod, np.zeros_like(prod))


def test_bump_and_derivatives_vanish_at_support_edges():
    # centered finite-difference estimates up to fourth order; the profile
    # continues by zero outside its support
    delta = 5e-3
    for edge in (0.5, 2.0):
        for order in range(5):
            coeffs = np.array([(-1.0) ** (order - i) * math.comb(order, i)
                               for i in range(order + 1)])
            xs = np.array([edge + (i - order / 2.0) * delta
                           for i in range(order + 1)])
            est = float(coeffs @ bl.band_profile(0, xs)) / delta ** order
            assert abs(est) <= 1e-6


def test_active_range_brackets_spectrum(lab1d):
    dec, part = lab1d.dec, lab1d.part
    sq = np.sqrt(dec.eigenvalues)
    assert part.j_min == int(np.floor(np.log2(sq[0]))) - 1
    assert part.j_max == int(np.ceil(np.log2(sq[-1]))) + 1
    for j in (part.j_min - 1, part.j_min, part.j_max, part.j_max + 1):
        vals = part.phi(j, sq)
        if j < part.j_min or j > part.j_max:
            assert np.array_equal(vals, np.zeros_like(vals))
    # the margins themselves are empty by construction
    assert part.phi(part.j_min, sq).max() == 0.0
    assert part.phi(part.j_max, sq).max() == 0.0


def test_partition_sums_to_one_on_spectrum(lab1d):
    dec, part = lab1d.dec, lab1d.part
    total = np.zeros(dec.size)
    for j in part.indices:
        total += bl.block_values(dec, part, j)
    assert np.abs(total - 1.0).max() <= 1e-12


def test_inhomogeneous_split_identity(lab1d):
    lam = np.concatenate([[0.0], np.geomspace(1e-4, 1e4, 5000)])
    assert inhomogeneous_split_deviation(lab1d.part, lam) <= 1e-10


def test_psi_clamped_to_unit_interval(lab1d):
    part = lab1d.part
    mu = np.geomspace(1e-8, 1e8, 1000)
    vals = part.psi(mu)
    assert np.all(vals >= 0.0) and np.all(vals <= 1.0)
    assert part.psi(np.array([0.0]))[0] == 1.0
    assert part.psi(np.array([1e8]))[0] == 0.0


def test_block_of_eigenvector_is_scaling(lab1d):
    dec, part = lab1d.dec, lab1d.part
    k = dec.size // 2
    vk = dec.vectors[:, k]
    j = int(np.round(np.log2(np.sqrt(dec.eigenvalues[k]))))
    out = bl.block(dec, part, j, vk)
    expected = part.phi(j, np.sqrt(dec.eigenvalues[k:k + 1]))[0] * vk
    assert np.abs(out - expected).max() <= 1e-10 * max(np.abs(vk).max(), 1.0)


def test_blocks_sum_to_identity(lab1d):
    dec, part = lab1d.dec, lab1d.part
    f = smooth_function(dec, 11)
    total = sum(bl.block(dec, part, j, f) for j in part.indices)
    rel = bl.lp_norm(dec.grid, total - f, 2) / bl.lp_norm(dec.grid, f, 2)
    assert rel <= 1e-8


def test_block_outside_active_range_is_zero(lab1d):
    dec, part = lab1d.dec, lab1d.part
    f = smooth_function(dec, 12)
    assert np.array_equal(bl.block(dec, part, part.j_max + 3, f), np.zeros(dec.size))


def test_far_separated_blocks_compose_to_zero(lab1d):
    dec, part = lab1d.dec, lab1d.part
    f = smooth_function(dec, 13)
    mid = (part.j_min + part.j_max) // 2
    out = bl.block(dec, part, mid + 2, bl.block(dec, part, mid, f))
    assert bl.lp_norm(dec.grid, out, 2) <= 1e-12 * bl.lp_norm(dec.grid, f, 2)


def test_all_blocks_matches_single_block(lab1d):
    dec, part = lab1d.dec, lab1d.part
    f = smooth_function(dec, 14)
    table = bl.all_blocks(dec, part, f)
    for j in (part.j_min, (part.j_min + part.j_max) // 2, part.j_max):
        assert np.allclose(table[j], bl.block(dec, part, j, f), atol=1e-14)


def test_low_pass_below_range_is_zero(lab1d):
    dec, part = lab1d.dec, lab1d.part
    f = smooth_function(dec, 15)
    assert np.array_equal(bl.low_pass(dec, part, part.j_min - 1, f),
                          np.zeros(dec.size))


def test_low_pass_at_top_reconstructs(lab1d):
    dec, part = lab1d.dec, lab1d.part
    f = smooth_function(dec, 16)
    out = bl.low_pass(dec, part, part.j_max, f)
    assert bl.lp_norm(dec.grid, out - f, 2) <= 1e-8 * bl.lp_norm(dec.grid, f, 2)


def test_low_pass_equals_rescaled_low_profile(lab1d):
    dec, part = lab1d.dec, lab1d.part
    f = smooth_function(dec, 17)
    for j in (part.j_min + 2, (part.j_min + part.j_max) // 2, part.j_max - 1):
        via_sum = bl.low_pass(dec, part, j, f)
        via_psi = bl.apply_function(dec, part.psi_scaled(j, dec.eigenvalues), f)
        rel = bl.lp_norm(dec.grid, via_sum - via_psi, 2) / bl.lp_norm(dec.grid, f, 2)
        assert rel <= 1e-8


def test_reconstruction_error_eigenvector(lab1d):
    dec, part = lab1d.dec, lab1d.part
    assert bl.reconstruction_error(dec, part, dec.vectors[:, 3]) <= 1e-10


def test_reconstruction_error_random(lab1d):
    dec, part = lab1d.dec, lab1d.part
    rng = np.random.default_rng(99)
    assert bl.reconstruction_error(dec, part, rng.standard_normal(dec.size)) <= 1e-8


def test_reconstruction_error_zero_function(lab1d):
    assert bl.reconstruction_error(lab1d.dec, lab1d.part,
                                   np.zeros(lab1d.dec.size)) == 0.0


def test_partition_requires_positive_spectrum():
    lab = make_lab("interval", math.pi, 15)
    shifted = bl.assemble_operator(lab.grid,
                                   lambda pts: np.full(len(pts), -10.0))
    dec = bl.decompose(shifted)
    assert dec.eigenvalues[0] < 0.0
    with pytest.raises(bl.SpectrumError):
        bl.build_partition(dec)
