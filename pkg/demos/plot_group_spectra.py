"""
Spectra of multiplication tables
================================

For a group table, each d-dimensional irrep contributes eigenvalues +1/d and
-1/d to the two-step operator.  A5 has no nontrivial irrep below dimension 3.
"""

import numpy as np

from latinlab import build_operator, group_square, predict_group_spectrum, rho, trace_power
from latinlab.spectral import dense_spectrum

for name in ("Z4", "S3", "Q8", "A4"):
    L, spec = group_square(name)
    w = np.round(dense_spectrum(build_operator(L)), 9)
    vals, mult = np.unique(w, return_counts=True)
    print(name, spec.irrep_dims, dict(zip(vals.tolist(), mult.tolist())))
    print("   predicted", {str(k): v for k, v in predict_group_spectrum(spec).items()})

###############################################################################
# A5 is too large for a dense solve, so Lanczos with the constants deflated.

L, _ = group_square("A5")
op = build_operator(L)
r = rho(op)
print(f"rho(A5) = {r.rho:.12f} via {r.method}, residual {r.residual:.1e}")
print("tr A^6 =", trace_power(op, 6))
