"""
Collective decoherence
======================

When every register spin couples to the bath in the same way (all rows of
the coupling matrix equal), two basis states keep their coherence exactly
when they contain the same number of zeros. The register space splits into
K + 1 decoherence-free subspaces with dimensions binom(K, l).
"""

import math
from fractions import Fraction

import numpy as np

from spindfs import InteractionMatrix, dfs_partition, dfs_report
from spindfs.dfs import collective_partition

# A 4-spin register, 3 bath spins, identical couplings for every register spin.
G = InteractionMatrix.collective(4, ["1/2", 1, "-0.75"])
part = dfs_partition(G)

for c in part.classes:
    labels = [format(k, "04b") for k in c.members]
    print(f"dim {c.dim}: {labels}   signature {c.signature}")

# Same blocks as grouping by number of zeros:
print("matches Hamming-weight classes:",
      part.blocks() == frozenset(frozenset(g) for g in collective_partition(4)))

# %%
# Breaking the symmetry by an arbitrarily small amount splits the classes;
# nothing is snapped back to the collective answer.
rows = [list(r) for r in G.g]
rows[0][0] += Fraction(1, 10**9)
print("perturbed class sizes:", dfs_partition(InteractionMatrix.from_rows(rows)).sizes)

# %%
# The largest subspace grows like 2**K / sqrt(K); the prefactor tends to sqrt(2/pi).
print("\n K   largest   largest*sqrt(K)/2^K")
for K in (2, 4, 8, 12, 16, 20):
    largest = max(len(c) for c in collective_partition(K))
    print(f"{K:2d}  {largest:8d}   {largest * math.sqrt(K) / 2**K:.4f}")
print(f"sqrt(2/pi) = {math.sqrt(2 / math.pi):.4f}")

# %%
rep = dfs_report(InteractionMatrix.collective(10, [1]))
print("\nK=10 report: largest", rep.largest_dim, "classes", len(rep.partition),
      "collective", rep.collective, "ratio", np.round(rep.growth_ratio, 4))
