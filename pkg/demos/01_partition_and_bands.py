"""
Dyadic ladder on a discretized interval
=======================================

Build the Dirichlet stencil operator on an interval, eigendecompose it, and
look at the smooth dyadic ladder adapted to its spectrum: partition of
unity, band projections of a random smooth function, and the reconstruction
defect.
"""
import numpy as np

import besovlab as bl

# Assemble the operator on (0, pi) with 127 interior points and decompose.
spec = bl.DomainSpec("interval", np.pi, 127)
grid = bl.build_grid(spec)
dec = bl.decompose(bl.assemble_operator(grid))
print(f"{grid.size} interior points, spectrum "
      f"[{dec.eigenvalues[0]:.3f}, {dec.eigenvalues[-1]:.1f}]")

# The ladder brackets the spectrum with one empty margin band on each side.
part = bl.build_partition(dec)
print(f"active band indices: {part.j_min} .. {part.j_max}")

# Partition of unity: the ladder sums to one on a log grid of frequencies.
sq = np.sqrt(dec.eigenvalues)
lam = np.geomspace(0.5 * sq[0], 2.0 * sq[-1], 10000)
print(f"max |ladder sum - 1| = {bl.partition_deviation(part, lam):.2e}")

# Project a smooth random function onto each band and print its profile.
rng = np.random.default_rng(0)
f = dec.synthesize(rng.standard_normal(dec.size) / dec.eigenvalues)
profile = bl.block_profile(dec, part, f, p=2)
print("\n  j   ||band_j f||_2")
for j, val in zip(profile.indices, profile.values):
    bar = "#" * int(50 * val / max(profile.values))
    print(f"{j:3d}   {val:10.3e}  {bar}")
print(f"low-frequency part: {profile.low_pass:.3e}")

# Summing the bands recovers the function to rounding.
print(f"\nreconstruction defect: {bl.reconstruction_error(dec, part, f):.2e}")

# Frame norms follow from the profile for any regularity and summability.
for s in (0.5, 1.0, 1.5):
    norm = bl.homogeneous_norm(profile, bl.BesovParams(s, 2, 2))
    print(f"homogeneous frame norm, s={s}: {norm:.4f}")
