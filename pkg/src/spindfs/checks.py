"""Brute-force cross-checks on small instances.

Each check recomputes a structural fact by exhaustive enumeration over all
bath configurations and compares it with the signature machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .dfs import (
    check_symmetry,
    collective_partition,
    conjugate_class,
    conjugate_index,
    dfs_partition,
    pair_case,
    preserves_coherence,
    required_symmetry,
)
from .model import BasisIndex, CapacityError, InteractionMatrix
from .spectrum import energy, forall_env_zero, h_vector, signature

MAX_ORACLE_K = 5
MAX_ORACLE_N = 5


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}" + (f": {self.detail}" if self.detail else "")


def h_table(G: InteractionMatrix) -> list[list[Fraction]]:
    return [[h_vector(G, i, n) for n in range(1 << G.N)] for i in range(1, G.K + 1)]


def no_decoherence_exhaustive(G: InteractionMatrix, k: int, k2: int, h=None) -> bool:
    """Evaluate ``sum_i [(-1)^k_i - (-1)^k'_i] h_i^(n) == 0`` for every n."""
    if h is None:
        h = h_table(G)
    a, b = BasisIndex(k, G.K), BasisIndex(k2, G.K)
    weights = []
    for i in range(G.K):
        shift = G.K - 1 - i
        x = (1 - 2 * ((a.value >> shift) & 1)) - (1 - 2 * ((b.value >> shift) & 1))
        if x:
            weights.append((x, h[i]))
    return all(
        sum((x * row[n] for x, row in weights), Fraction(0)) == 0 for n in range(1 << G.N)
    )


def _all_pairs(K: int):
    return combinations(range(1 << K), 2)


def check_lemma(G: InteractionMatrix) -> CheckResult:
    """Equal signatures iff equal energies for all n, and signature differences
    are zero iff their signed sums vanish for every pattern."""
    bad = 0
    E = [[energy(G, k, n) for n in range(1 << G.N)] for k in range(1 << G.K)]
    for k, k2 in _all_pairs(G.K):
        diff = signature(G, k) - signature(G, k2)
        same_sig = diff.is_zero()
        if same_sig != (E[k] == E[k2]) or same_sig != forall_env_zero(diff.values):
            bad += 1
    return CheckResult("signature lemma", bad == 0, f"{bad} mismatching pairs" if bad else "")


def check_no_decoherence(G: InteractionMatrix) -> CheckResult:
    h = h_table(G)
    bad = sum(
        preserves_coherence(G, k, k2) != no_decoherence_exhaustive(G, k, k2, h)
        for k, k2 in _all_pairs(G.K)
    )
    return CheckResult("no-decoherence condition (exhaustive over n)", bad == 0,
                       f"{bad} mismatching pairs" if bad else "")


def check_conjugation(G: InteractionMatrix) -> CheckResult:
    part = dfs_partition(G)
    ok = all(
        signature(G, conjugate_index(BasisIndex(k, G.K))) == -signature(G, k)
        for k in range(1 << G.K)
    )
    blocks = part.blocks()
    images = [frozenset(conjugate_class(G, c.members, part)) for c in part.classes]
    ok = ok and all(img in blocks for img in images) and len(set(images)) == len(images)
    return CheckResult("conjugate subspaces", ok)


def check_totality(G: InteractionMatrix) -> CheckResult:
    part = dfs_partition(G)
    members = [k for c in part.classes for k in c.members]
    sigs = [c.signature for c in part.classes]
    ok = (sorted(members) == list(range(1 << G.K)) and sum(part.sizes) == 1 << G.K
          and len(set(sigs)) == len(sigs))
    return CheckResult("partition totality", ok)


def check_cases(G: InteractionMatrix) -> CheckResult:
    bad = 0
    for k, k2 in _all_pairs(G.K):
        case = pair_case(k, k2, G.K)
        if case.l1 is None:
            continue
        if preserves_coherence(G, k, k2) != check_symmetry(G, required_symmetry(case)):
            bad += 1
    return CheckResult("row-symmetry cases", bad == 0, f"{bad} mismatching pairs" if bad else "")


def check_collective(G: InteractionMatrix) -> CheckResult | None:
    """Only meaningful when all rows agree and are nonzero."""
    if any(row != G.g[0] for row in G.g) or not any(G.g[0]):
        return None
    expected = frozenset(frozenset(c) for c in collective_partition(G.K))
    return CheckResult("collective Hamming-weight partition",
                       dfs_partition(G).blocks() == expected)


def run_oracle_suite(G: InteractionMatrix) -> list[CheckResult]:
    if G.K > MAX_ORACLE_K or G.N > MAX_ORACLE_N:
        raise CapacityError(
            f"oracle suite needs K <= {MAX_ORACLE_K} and N <= {MAX_ORACLE_N}, got K={G.K}, N={G.N}"
        )
    results = [
        check_lemma(G),
        check_no_decoherence(G),
        check_conjugation(G),
        check_totality(G),
        check_cases(G),
    ]
    extra = check_collective(G)
    if extra is not None:
        results.append(extra)
    return results
