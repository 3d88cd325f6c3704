"""
Row symmetries and two-dimensional DFSs
=======================================

For two basis states that differ in one or two digits, coherence survives
iff the coupling matrix has a matching row relation:

* digits l1, l2 both flip the same way (..1..1.. vs ..0..0..): row l2 = -row l1
* digits swap (..0..1.. vs ..1..0..): rows l1 and l2 coincide
* a single digit l flips: row l vanishes
"""

from spindfs import (
    BasisIndex,
    InteractionMatrix,
    check_symmetry,
    count_pair_dfs,
    pair_case,
    preserved_pairs,
    preserves_coherence,
    required_symmetry,
)

B = BasisIndex.from_bits

examples = [
    ("rows opposite", [[1, 2], [-1, -2], [3, 1]], "110", "000"),
    ("rows equal", [[1, 2], [1, 2], [3, 1]], "010", "100"),
    ("zero row", [[1, 2], [0, 0], [3, 1]], "000", "010"),
    ("no symmetry", [[1, 2], [1, 3], [3, 1]], "010", "100"),
]

for name, rows, a, b in examples:
    G = InteractionMatrix.from_rows(rows)
    case = pair_case(B(a), B(b))
    sym = required_symmetry(case)
    print(f"{name:14s} |{a}> vs |{b}>: case {case.tag.label:2s} needs {sym}, "
          f"holds={check_symmetry(G, sym)}, preserved={preserves_coherence(G, B(a), B(b))}")

# %%
# One symmetry yields 2**(K-2) preserved pairs (two-digit cases) or
# 2**(K-1) (a vanishing row). Enumerate them for a 5-spin register.
rows = [[1, 2], [3, -1], [1, 2], [2, 5], [-4, 1]]   # rows 1 and 3 equal
G = InteractionMatrix.from_rows(rows)
pairs = preserved_pairs(G)
print("\npreserved pairs:", [(format(k, "05b"), format(k2, "05b")) for k, k2 in pairs])
print("count", len(pairs), "expected", count_pair_dfs(5, pair_case(*pairs[0], 5).tag))
