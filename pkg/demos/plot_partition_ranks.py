"""
Ranks of partition triples
==========================

crank is found by searching for a least generating cell set.  For cells of
size at most two it has a closed form, and it always dominates trank and lrank.
"""

from collections import Counter

from latinlab import PartitionTriple, crank, crank_pi2_formula, cyclic_square, lambda_indicator, lrank, trank
from latinlab.ranks import enumerate_triples

M = [0, 0, 1, 1]
psi = PartitionTriple.of(M, M, M)
print("matching system:", crank(psi), trank(psi), lrank(psi))

psi = PartitionTriple.of([0, 0, 1, 1], [0, 1, 0, 1], [0, 1, 1, 0])
print("three matchings:", crank(psi), crank_pi2_formula(psi))

###############################################################################
# Distribution of crank - trank over every triple on four points.

gap = Counter(crank(p) - trank(p) for p in enumerate_triples(4))
print(sorted(gap.items()))

###############################################################################
# Lambda(c, c, c) never exceeds n^-crank.

L = cyclic_square(5)
worst = max(lambda_indicator(L, p) * 5 ** crank(p) for p in enumerate_triples(3))
print("max of Lambda * n^crank over Pi_3 triples on Z5:", worst)
