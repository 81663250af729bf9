"""
The bijection indicator and its projections
===========================================

P_A 1_S depends only on the kernel of x restricted to A, and its sign is
(-1)^rank.  Squared norms come from the U functional.
"""

import itertools

from latinlab import cyclic_square, lambda_eval, pa1s, pa1s_kernel_formula, sparseval
from latinlab.fourier import decomposition_check, u_shifted_power
from latinlab.partitions import kernel

n, A = 4, (0, 1, 2)
f = pa1s(n, A)
seen = {}
for x in itertools.product(range(n), repeat=len(A)):
    seen.setdefault(kernel(x).rgs, f.values[x])
for rgs, v in sorted(seen.items()):
    print(rgs, v, "formula:", pa1s_kernel_formula(n, A, rgs))

###############################################################################
# Squared norms: the projection pipeline against density^2 U((z-1)^|A|).

for k in range(n + 1):
    r = sparseval(n, tuple(range(k)))
    print(k, r["lhs"], r["rhs"], "U((z-1)^k) =", u_shifted_power(n, k))

###############################################################################
# Lambda of the bijection indicator splits over A, with no cross terms.

L = cyclic_square(3)
print(decomposition_check(L))
print("cross term:", lambda_eval(L, pa1s(3, (0, 1)), pa1s(3, (1, 2)), pa1s(3, (0, 1))))
