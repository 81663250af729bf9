"""
Transversals of cyclic and random latin squares
===============================================

Cyclic squares of even order have no transversal at all, odd ones have
plenty.  Random squares sit close to e^{-1/2} n!^2 / n^n.
"""

from latinlab import count_transversals, cyclic_square, jm_sample, transversal_asymptotic

for n in range(1, 10):
    approx, _ = transversal_asymptotic(n)
    print(f"Z{n}: {count_transversals(cyclic_square(n)):6d}   e^(-1/2) n!^2/n^n = {approx:9.2f}")

###############################################################################
# A few Jacobson-Matthews samples of order 8.  The seed fixes the square.

n = 8
target, _ = transversal_asymptotic(n)
counts = [count_transversals(jm_sample(n, seed=s)) for s in range(10)]
print("random order 8:", counts)
print(f"mean / target = {sum(counts) / len(counts) / target:.3f}")
