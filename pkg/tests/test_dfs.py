import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spindfs.checks import h_table, no_decoherence_exhaustive, run_oracle_suite
from spindfs.dfs import (
    CaseTag,
    GSymmetry,
    PairCase,
    SymmetryKind,
    check_symmetry,
    collective_partition,
    conjugate_class,
    conjugate_index,
    count_pair_dfs,
    dfs_partition,
    dfs_report,
    pair_case,
    preserved_pairs,
    preserves_coherence,
    required_symmetry,
    row_symmetries,
)
from spindfs.model import BasisIndex, CapacityError, InteractionMatrix, ModelError
from spindfs.sampling import impose_symmetry, random_interaction_matrix, random_row
from spindfs.spectrum import signature

B = BasisIndex.from_bits


def blocks(groups):
    return frozenset(frozenset(g) for g in groups)


def brute_partition(G):
    """Group labels by the full table of exact energies (no signatures)."""
    from spindfs.spectrum import energy

    groups = {}
    for k in range(2**G.K):
        key = tuple(energy(G, k, n) for n in range(2**G.N))
        groups.setdefault(key, []).append(k)
    return blocks(groups.values())


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


# --- preserves_coherence -------------------------------------------------


def test_preserves_reflexive(rng):
    G = random_interaction_matrix(rng, 3, 2)
    assert all(preserves_coherence(G, k, k) for k in range(8))


def test_preserves_collective_pair():
    G = InteractionMatrix.from_rows([[1], [1]])
    assert preserves_coherence(G, 1, 2)
    assert not preserves_coherence(G, 0, 1)


def test_preserves_matches_exhaustive(rng):
    for _ in range(100):
        K, N = (int(x) for x in rng.integers(1, 6, size=2))
        G = random_interaction_matrix(rng, K, N, max_num=1, max_den=2)
        h = h_table(G)
        for k, k2 in combinations(range(2**K), 2):
            assert preserves_coherence(G, k, k2) == no_decoherence_exhaustive(G, k, k2, h)


def test_preserves_is_equivalence(rng):
    G = random_interaction_matrix(rng, 4, 2, max_num=1, max_den=1)
    for _ in range(300):
        a, b, c = (int(x) for x in rng.integers(0, 16, size=3))
        assert preserves_coherence(G, a, b) == preserves_coherence(G, b, a)
        if preserves_coherence(G, a, b) and preserves_coherence(G, b, c):
            assert preserves_coherence(G, a, c)


# --- partitions ----------------------------------------------------------


def test_partition_collective_two():
    part = dfs_partition(InteractionMatrix.from_rows([[1], [1]]))
    assert [c.members for c in part.classes] == [(1, 2), (0,), (3,)]


def test_partition_zero_row():
    part = dfs_partition(InteractionMatrix.from_rows([[0], [1]]))
    assert [c.members for c in part.classes] == [(0, 2), (1, 3)]


def test_partition_generic():
    G = InteractionMatrix.from_rows([[1], [2]])
    # signatures 3, -1, 1, -3 for k = 0..3
    assert [signature(G, k).values for k in range(4)] == [(3,), (-1,), (1,), (-3,)]
    assert [c.members for c in dfs_partition(G).classes] == [(0,), (1,), (2,), (3,)]


def test_partition_zero_matrix():
    part = dfs_partition(InteractionMatrix.zeros(3, 2))
    assert part.sizes == [8]


def test_partition_matches_energy_table(rng):
    for _ in range(40):
        K, N = (int(x) for x in rng.integers(1, 5, size=2))
        G = random_interaction_matrix(rng, K, N, max_num=1, max_den=1)
        part = dfs_partition(G)
        assert part.blocks() == brute_partition(G)
        assert sum(part.sizes) == 2**K
        assert len({c.signature for c in part.classes}) == len(part)
        assert part.sizes == sorted(part.sizes, reverse=True)


def test_partition_too_large():
    with pytest.raises(CapacityError):
        collective_partition(25)


def test_collective_partition_examples():
    assert collective_partition(2) == [(3,), (1, 2), (0,)]
    assert max(len(c) for c in collective_partition(10)) == math.comb(10, 5)
    for K in range(1, 17):
        groups = collective_partition(K)
        assert [len(g) for g in groups] == [math.comb(K, l) for l in range(K + 1)]
        assert sum(len(g) for g in groups) == 2**K


def test_collective_theorem(rng):
    for K in range(1, 11):
        G = InteractionMatrix.collective(K, random_row(rng, int(rng.integers(1, 4))))
        assert dfs_partition(G).blocks() == blocks(collective_partition(K))


def test_perturbed_collective_splits(rng):
    row = random_row(rng, 2)
    rows = [list(row) for _ in range(4)]
    rows[2][0] += Fraction(1, 1000)
    part = dfs_partition(InteractionMatrix.from_rows(rows))
    assert part.blocks() != blocks(collective_partition(4))
    assert len(part) > 5


# --- conjugation -----------------------------------------------------------


def test_conjugate_index_examples():
    assert conjugate_index(BasisIndex(0, 2)) == BasisIndex(3, 2)
    assert conjugate_index(BasisIndex(5, 3)) == BasisIndex(2, 3)


def test_conjugate_class_examples():
    G = InteractionMatrix.collective(3, [1])
    assert conjugate_class(G, [3, 5, 6]) == (1, 2, 4)
    opp = InteractionMatrix.from_rows([[1], [-1]])
    cls = [c for c in dfs_partition(opp).classes if 0 in c.members][0]
    assert 3 in cls.members
    assert conjugate_class(opp, cls.members) == cls.members
    gen = InteractionMatrix.from_rows([[1], [2], [5]])
    assert conjugate_class(gen, [0]) == (7,)


def test_conjugate_class_rejects_non_class():
    G = InteractionMatrix.collective(3, [1])
    with pytest.raises(ModelError):
        conjugate_class(G, [3, 5])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_conjugation_permutes_classes(K, N, seed):
    rng = np.random.default_rng(seed)
    G = random_interaction_matrix(rng, K, N, max_num=1, max_den=1)
    part = dfs_partition(G)
    for k in range(2**K):
        assert signature(G, conjugate_index(BasisIndex(k, K))) == -signature(G, k)
    images = [conjugate_class(G, c.members, part) for c in part.classes]
    assert blocks(images) == part.blocks()
    for c in part.classes:
        assert conjugate_class(G, conjugate_class(G, c.members, part), part) == c.members


# --- pair cases --------------------------------------------------------------


def test_pair_case_examples():
    assert pair_case(B("11"), B("00")) == PairCase(CaseTag.EQUAL_SIGNS, 1, 2)
    assert pair_case(B("01"), B("10")) == PairCase(CaseTag.OPPOSITE_SIGNS, 1, 2)
    assert pair_case(B("00"), B("01")) == PairCase(CaseTag.FIRST_ZERO, 2)
    assert pair_case(B("00"), B("10")) == PairCase(CaseTag.SECOND_ZERO, 1)
    assert pair_case(B("101"), B("101")).tag is CaseTag.IDENTICAL
    assert pair_case(B("101"), B("010")).tag is CaseTag.TOO_FAR
    assert pair_case(5, 2, 3).tag is CaseTag.TOO_FAR


def test_required_symmetry_examples():
    assert required_symmetry(PairCase(CaseTag.EQUAL_SIGNS, 1, 2)) == \
        GSymmetry(SymmetryKind.ROWS_OPPOSITE, (1, 2))
    assert required_symmetry(PairCase(CaseTag.OPPOSITE_SIGNS, 1, 2)) == \
        GSymmetry(SymmetryKind.ROWS_EQUAL, (1, 2))
    assert required_symmetry(PairCase(CaseTag.FIRST_ZERO, 2)) == \
        GSymmetry(SymmetryKind.ROW_ZERO, (2,))
    with pytest.raises(ModelError):
        required_symmetry(PairCase(CaseTag.TOO_FAR))


def test_check_symmetry_examples():
    assert check_symmetry(InteractionMatrix.from_rows([[1, 2], [-1, -2]]),
                          GSymmetry(SymmetryKind.ROWS_OPPOSITE, (1, 2)))
    assert check_symmetry(InteractionMatrix.from_rows([[1, 2], [1, 2]]),
                          GSymmetry(SymmetryKind.ROWS_EQUAL, (1, 2)))
    assert not check_symmetry(InteractionMatrix.from_rows([[1, 2], [1, 3]]),
                              GSymmetry(SymmetryKind.ROWS_EQUAL, (1, 2)))
    with pytest.raises(IndexError):
        check_symmetry(InteractionMatrix.from_rows([[1, 2]]), GSymmetry(SymmetryKind.ROW_ZERO, (2,)))


def _case_theorem_holds(G):
    for k, k2 in combinations(range(2**G.K), 2):
        case = pair_case(k, k2, G.K)
        if case.l1 is None:
            continue
        sym = required_symmetry(case)
        assert preserves_coherence(G, k, k2) == check_symmetry(G, sym), (G, k, k2, sym)


def test_case_theorem_random_and_constructed(rng):
    for _ in range(60):
        K, N = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        G = random_interaction_matrix(rng, K, N)
        _case_theorem_holds(G)
        l1, l2 = sorted(rng.choice(np.arange(1, K + 1), size=min(2, K), replace=False).tolist()) \
            if K > 1 else (1, 1)
        for sym in (GSymmetry(SymmetryKind.ROW_ZERO, (l1,)),) + (
            (GSymmetry(SymmetryKind.ROWS_EQUAL, (l1, l2)),
             GSymmetry(SymmetryKind.ROWS_OPPOSITE, (l1, l2))) if K > 1 else ()
        ):
            H = impose_symmetry(G, sym)
            assert check_symmetry(H, sym)
            _case_theorem_holds(H)


def test_count_pair_dfs_examples():
    assert count_pair_dfs(3, CaseTag.EQUAL_SIGNS) == 2
    assert count_pair_dfs(3, CaseTag.FIRST_ZERO) == 4
    assert count_pair_dfs(2, CaseTag.OPPOSITE_SIGNS) == 1
    with pytest.raises(ModelError):
        count_pair_dfs(1, CaseTag.EQUAL_SIGNS)
    with pytest.raises(ModelError):
        count_pair_dfs(3, CaseTag.TOO_FAR)


def test_preserved_pairs_brute(rng):
    for _ in range(20):
        K = int(rng.integers(1, 6))
        G = random_interaction_matrix(rng, K, 2, max_num=1, max_den=1)
        expected = sorted(
            (k, k2) for k, k2 in combinations(range(2**K), 2)
            if bin(k ^ k2).count("1") <= 2 and signature(G, k) == signature(G, k2)
        )
        assert preserved_pairs(G) == expected


def test_row_symmetries():
    G = InteractionMatrix.from_rows([[1, 2], [1, 2], [-1, -2], [0, 0]])
    found = {str(s) for s in row_symmetries(G)}
    assert found == {"RowZero(4)", "RowsEqual(1, 2)", "RowsOpposite(1, 3)", "RowsOpposite(2, 3)"}


# --- report --------------------------------------------------------------------


def test_report_collective_ten(rng):
    rep = dfs_report(InteractionMatrix.collective(10, random_row(rng, 2)))
    assert rep.largest_dim == 252
    assert len(rep.partition) == 11
    assert rep.collective
    assert rep.growth_ratio == pytest.approx(252 * math.sqrt(10) / 1024)


def test_report_equal_rows():
    G = InteractionMatrix.from_rows([[1, 2], [1, 2], [5, 7]])
    rep = dfs_report(G)
    assert GSymmetry(SymmetryKind.ROWS_EQUAL, (1, 2)) in rep.symmetries
    assert not rep.collective and rep.growth_ratio is None
    swap = lambda k: ((k & 0b100) >> 1) | ((k & 0b010) << 1) | (k & 0b001)
    for c in rep.partition.classes:
        assert {swap(k) for k in c.members} == set(c.members)
    assert rep.pair_counts == {"1": 0, "2": 2, "3": 0}


def test_report_zero_matrix():
    rep = dfs_report(InteractionMatrix.zeros(3, 1))
    assert rep.partition.sizes == [8]
    assert rep.conjugation == ((0, 0),)


def test_report_json_schema():
    import json

    doc = json.loads(dfs_report(InteractionMatrix.from_rows([[1], [1]])).to_json())
    assert {"K", "N", "classes", "collective", "symmetries", "conjugation"} <= set(doc)
    assert doc["classes"][0] == {"members": [1, 2], "dim": 2, "signature": [["0", "1"]]}
    assert doc["conjugation"] == [[0, 0], [1, 2], [2, 1]]


def test_report_is_deterministic(rng):
    G = random_interaction_matrix(rng, 4, 3, max_num=1, max_den=1)
    assert dfs_report(G).to_json() == dfs_report(G).to_json()


def test_oracle_suite_passes(rng):
    for _ in range(10):
        G = random_interaction_matrix(rng, 3, 3, max_num=1, max_den=1)
        assert all(r.passed for r in run_oracle_suite(G))
    names = [r.name for r in run_oracle_suite(InteractionMatrix.collective(3, [1, 2]))]
    assert "collective Hamming-weight partition" in names
    with pytest.raises(CapacityError):
        run_oracle_suite(InteractionMatrix.collective(8, [1]))
