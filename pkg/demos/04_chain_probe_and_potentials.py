"""
Gradient-square chain probe and potential perturbations
=======================================================

Two smaller capabilities: the hard-asserted chain inequality for the
squared gradient of the heat flow (with its explicitly not-reproducible
large-time row), and frame-norm ratios under a bounded potential well.
"""
import numpy as np

import besovlab as bl

spec = bl.DomainSpec("interval", np.pi, 63)
grid = bl.build_grid(spec)
dec = bl.decompose(bl.assemble_operator(grid))
part = bl.build_partition(dec)
ens = bl.Ensemble(seed=42, count=4)

# The probe raises if any row violates grad_sq <= h_square_sup + flow_product.
report = bl.appendix_a_probe(dec, part, ens, range(-6, 5), epsilon=0.5)
chain = [r for r in report.rows if r[0] == "chain"]
margins = [(r[5] + r[6]) / r[4] for r in chain if r[4] > 0]
print(f"{len(chain)} chain rows, min majorant/lhs margin = {min(margins):.3f}")
print("recorded constants c_row:",
      [round(r[10], 4) for r in chain[:5]], "...")
marker = [r for r in report.rows if r[11] == "not-reproducible"]
print(f"marker row: {marker[0][0]} ({marker[0][11]})")

# A bounded potential well shifts the operator; frame norms change by a
# controlled ratio.
well = bl.assemble_operator(grid, lambda pts: np.where(
    np.abs(pts[:, 0] - 0.5 * np.pi) <= 0.25 * np.pi, 5.0, 0.0))
dec_v = bl.decompose(well)
rep = bl.schrodinger_equivalence_scan(dec_v, dec, bl.build_partition(dec_v),
                                      part, ens, s=0.5, p=2, q=2)
summary = {r[0]: r[3] for r in rep.rows if r[0] in ("min", "max")}
print(f"\nwell potential ratio band: [{summary['min']:.4f}, {summary['max']:.4f}]")
print(f"advisory regularity window for (dim, p): {rep.metadata['window']}")
