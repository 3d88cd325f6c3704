"""Decoherence-free subspaces of the register.

Two basis states keep their mutual coherence for every bath state and every
time iff their signatures coincide, so the register basis splits into
signature classes and each class spans a decoherence-free subspace. The
whole register space is the direct sum of these subspaces.

Besides the partition, this module carries the row-symmetry diagnostics for
pairs of basis states differing in one or two digits: which symmetry of the
coupling matrix a pair needs, and whether the matrix has it.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .model import (
    MAX_REGISTER,
    BasisIndex,
    CapacityError,
    DimensionError,
    InteractionMatrix,
    ModelError,
    as_index,
    bit,
)
from .spectrum import Signature, signature, signature_keys


# --------------------------------------------------------------------------
# Partitions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DfsClass:
    signature: Signature
    members: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class DfsPartition:
    """Register basis grouped by exact signature.

    Classes are ordered by size (largest first), ties broken by smallest member.
    """

    K: int
    classes: tuple[DfsClass, ...]

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    @property
    def sizes(self) -> list[int]:
        return [c.dim for c in self.classes]

    @property
    def largest_dim(self) -> int:
        return self.classes[0].dim

    def blocks(self) -> frozenset[frozenset[int]]:
        """Order-free view, for comparing partitions."""
        return frozenset(frozenset(c.members) for c in self.classes)

    def class_of(self, k: BasisIndex | int) -> int:
        """Position of the class containing ``k``."""
        k = as_index(k, self.K).value
        return int(self._lookup[k])

    @property
    def _lookup(self) -> np.ndarray:
        table = self.__dict__.get("_lookup_cache")
        if table is None:
            table = np.empty(1 << self.K, dtype=np.int64)
            for pos, c in enumerate(self.classes):
                table[list(c.members)] = pos
            object.__setattr__(self, "_lookup_cache", table)
        return table


def _check_register(K: int):
    if not 1 <= K <= MAX_REGISTER:
        raise CapacityError(f"K={K} outside supported range 1..{MAX_REGISTER}")


def _group(keys: np.ndarray) -> list[np.ndarray]:
    """Index groups of equal keys; each group ascending."""
    order = np.argsort(keys, kind="stable")
    ordered = keys[order]
    cuts = np.flatnonzero(ordered[1:] != ordered[:-1]) + 1
    return np.split(order, cuts)


def _sort_classes(groups):
    return sorted(groups, key=lambda g: (-len(g), int(g[0])))


def dfs_partition(G: InteractionMatrix) -> DfsPartition:
    """Maximal decoherence-free subspaces: classes of equal signature."""
    _check_register(G.K)
    groups = _sort_classes(_group(signature_keys(G)))
    classes = tuple(
        DfsClass(signature(G, int(g[0])), tuple(int(x) for x in g)) for g in groups
    )
    return DfsPartition(G.K, classes)


def zero_count(K: int) -> np.ndarray:
    """Number of zero digits of every K-bit label."""
    k = np.arange(1 << K, dtype=np.int64)
    ones = np.zeros_like(k)
    for i in range(K):
        ones += (k >> i) & 1
    return K - ones


def collective_partition(K: int) -> list[tuple[int, ...]]:
    """Hamming-weight classes: entry ``l`` holds every label with exactly ``l`` zeros."""
    _check_register(K)
    zeros = zero_count(K)
    order = np.argsort(zeros, kind="stable")
    counts = np.bincount(zeros, minlength=K + 1)
    groups = np.split(order, np.cumsum(counts)[:-1])
    return [tuple(int(x) for x in g) for g in groups]


def conjugate_index(k: BasisIndex) -> BasisIndex:
    """Bitwise complement ``2**K - k - 1``."""
    if not isinstance(k, BasisIndex):
        raise TypeError("conjugate_index needs a BasisIndex (the width matters)")
    return BasisIndex((1 << k.width) - k.value - 1, k.width)


def conjugate_class(G: InteractionMatrix, members: Iterable[int],
                    partition: DfsPartition | None = None) -> tuple[int, ...]:
    """Image of a partition class under complement; always another class."""
    if partition is None:
        partition = dfs_partition(G)
    members = sorted(as_index(k, G.K).value for k in members)
    if not members:
        raise ModelError("empty class")
    pos = partition.class_of(members[0])
    if tuple(members) != partition.classes[pos].members:
        raise ModelError(f"{members} is not a class of the partition")
    top = (1 << G.K) - 1
    return tuple(sorted(top - k for k in members))


def conjugation_map(partition: DfsPartition) -> list[tuple[int, int]]:
    """Pairs ``(i, j)``: class ``i`` complements onto class ``j``."""
    top = (1 << partition.K) - 1
    return [(i, partition.class_of(top - c.members[0]))
            for i, c in enumerate(partition.classes)]


def preserves_coherence(G: InteractionMatrix, k: BasisIndex | int,
                        k2: BasisIndex | int) -> bool:
    """True iff ``|k>`` and ``|k2>`` never dephase, for any bath state and time."""
    return signature(G, k) == signature(G, k2)


# --------------------------------------------------------------------------
# One- and two-digit pairs and row symmetries
# --------------------------------------------------------------------------


class CaseTag(enum.Enum):
    EQUAL_SIGNS = "EqualSigns"      # case 1: ..1..1.. vs ..0..0..
    OPPOSITE_SIGNS = "OppositeSigns"  # case 2: ..0..1.. vs ..1..0..
    FIRST_ZERO = "FirstZero"        # case 3a: single digit, not the leading one
    SECOND_ZERO = "SecondZero"      # case 3b: single digit, the leading one
    IDENTICAL = "Identical"
    TOO_FAR = "TooFar"

    @property
    def label(self) -> str:
        return _CASE_LABELS[self]

    @property
    def single_bit(self) -> bool:
        return self in (CaseTag.FIRST_ZERO, CaseTag.SECOND_ZERO)


_CASE_LABELS = {
    CaseTag.EQUAL_SIGNS: "1",
    CaseTag.OPPOSITE_SIGNS: "2",
    CaseTag.FIRST_ZERO: "3a",
    CaseTag.SECOND_ZERO: "3b",
    CaseTag.IDENTICAL: "-",
    CaseTag.TOO_FAR: "-",
}


@dataclass(frozen=True)
class PairCase:
    """Where two labels differ: ``l1 < l2`` for two digits, ``l2 is None`` for one."""

    tag: CaseTag
    l1: int | None = None
    l2: int | None = None


def pair_case(k: BasisIndex | int, k2: BasisIndex | int, width: int | None = None) -> PairCase:
    """Classify a pair of labels by the digits in which they differ.

    With ints, ``width`` gives the register size. A single differing digit at
    position ``l`` is tagged FIRST_ZERO when ``l > 1`` (the unchanged partner
    digit precedes it) and SECOND_ZERO when ``l == 1``; either way the
    condition is that row ``l`` of G vanishes.
    """
    if width is None:
        if not isinstance(k, BasisIndex):
            raise DimensionError("width required when passing plain integers")
        width = k.width
    k, k2 = as_index(k, width), as_index(k2, width)
    diff = [i for i in range(1, width + 1) if bit(k, i) != bit(k2, i)]
    if not diff:
        return PairCase(CaseTag.IDENTICAL)
    if len(diff) > 2:
        return PairCase(CaseTag.TOO_FAR)
    if len(diff) == 1:
        (l,) = diff
        return PairCase(CaseTag.FIRST_ZERO if l > 1 else CaseTag.SECOND_ZERO, l)
    l1, l2 = diff
    tag = CaseTag.EQUAL_SIGNS if bit(k, l1) == bit(k, l2) else CaseTag.OPPOSITE_SIGNS
    return PairCase(tag, l1, l2)


class SymmetryKind(enum.Enum):
    ROWS_OPPOSITE = "RowsOpposite"
    ROWS_EQUAL = "RowsEqual"
    ROW_ZERO = "RowZero"


@dataclass(frozen=True)
class GSymmetry:
    """A row relation of G (rows 1-based): ``g_l1 = -g_l2``, ``g_l1 = g_l2`` or ``g_l = 0``."""

    kind: SymmetryKind
    rows: tuple[int, ...]

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "rows": list(self.rows)}

    def __str__(self) -> str:
        return f"{self.kind.value}({', '.join(map(str, self.rows))})"


def required_symmetry(case: PairCase) -> GSymmetry:
    if case.tag is CaseTag.EQUAL_SIGNS:
        return GSymmetry(SymmetryKind.ROWS_OPPOSITE, (case.l1, case.l2))
    if case.tag is CaseTag.OPPOSITE_SIGNS:
        return GSymmetry(SymmetryKind.ROWS_EQUAL, (case.l1, case.l2))
    if case.tag.single_bit:
        return GSymmetry(SymmetryKind.ROW_ZERO, (case.l1,))
    raise ModelError(f"no row symmetry attached to case {case.tag.value}")


def check_symmetry(G: InteractionMatrix, sym: GSymmetry) -> bool:
    rows = [G.row(l) for l in sym.rows]
    if sym.kind is SymmetryKind.ROW_ZERO:
        return not any(rows[0])
    a, b = rows
    if sym.kind is SymmetryKind.ROWS_EQUAL:
        return a == b
    return all(x + y == 0 for x, y in zip(a, b))


def row_symmetries(G: InteractionMatrix) -> list[GSymmetry]:
    """Every row relation of the three kinds that G satisfies."""
    found = [GSymmetry(SymmetryKind.ROW_ZERO, (l,)) for l in range(1, G.K + 1)]
    for l1, l2 in combinations(range(1, G.K + 1), 2):
        found.append(GSymmetry(SymmetryKind.ROWS_OPPOSITE, (l1, l2)))
        found.append(GSymmetry(SymmetryKind.ROWS_EQUAL, (l1, l2)))
    return [s for s in found if check_symmetry(G, s)]


def count_pair_dfs(K: int, tag: CaseTag) -> int:
    """Two-dimensional DFSs a single symmetry yields: ``2**(K-2)`` per two-digit
    case, ``2**(K-1)`` in total for a vanishing row."""
    if tag in (CaseTag.EQUAL_SIGNS, CaseTag.OPPOSITE_SIGNS):
        if K < 2:
            raise ModelError("two-digit cases need K >= 2")
        return 1 << (K - 2)
    if tag.single_bit:
        if K < 1:
            raise ModelError("K must be positive")
        return 1 << (K - 1)
    raise ModelError(f"nothing to count for case {tag.value}")


def preserved_pairs(G: InteractionMatrix, max_distance: int = 2) -> list[tuple[int, int]]:
    """Coherence-preserving pairs ``k < k2`` differing in at most ``max_distance`` digits."""
    _check_register(G.K)
    keys = signature_keys(G)
    k = np.arange(1 << G.K, dtype=np.int64)
    out = []
    for d in range(1, min(max_distance, G.K) + 1):
        for pos in combinations(range(G.K), d):
            mask = sum(1 << p for p in pos)
            partner = k ^ mask
            hit = (k < partner) & (keys == keys[partner])
            out.extend(zip(k[hit].tolist(), partner[hit].tolist()))
    return sorted(out)


def pair_inventory(G: InteractionMatrix) -> dict[str, int]:
    """Preserved one- and two-digit pairs, counted by case label."""
    counts = {"1": 0, "2": 0, "3": 0}
    for k, k2 in preserved_pairs(G, 2):
        tag = pair_case(k, k2, G.K).tag
        counts["3" if tag.single_bit else tag.label] += 1
    return counts


# --------------------------------------------------------------------------
# Report
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DfsReport:
    K: int
    N: int
    partition: DfsPartition
    collective: bool
    symmetries: tuple[GSymmetry, ...]
    conjugation: tuple[tuple[int, int], ...]
    pair_counts: dict
    growth_ratio: float | None

    @property
    def largest_dim(self) -> int:
        return self.partition.largest_dim

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "N": self.N,
            "classes": [
                {
                    "members": list(c.members),
                    "dim": c.dim,
                    "signature": [[str(v.numerator), str(v.denominator)] for v in c.signature],
                }
                for c in self.partition.classes
            ],
            "largest_dim": self.largest_dim,
            "collective": self.collective,
            "growth_ratio": self.growth_ratio,
            "symmetries": [s.to_json() for s in self.symmetries],
            "conjugation": [list(p) for p in self.conjugation],
            "pair_counts": self.pair_counts,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def is_collective(partition: DfsPartition) -> bool:
    """Partition coincides with the Hamming-weight classes."""
    return partition.blocks() == frozenset(
        frozenset(c) for c in collective_partition(partition.K)
    )


def dfs_report(G: InteractionMatrix) -> DfsReport:
    """Partition, symmetries and counts for one coupling matrix.

    ``growth_ratio`` is ``largest_dim * sqrt(K) / 2**K``, filled in only for
    collective coupling, where it tends to ``sqrt(2/pi)``.
    """
    part = dfs_partition(G)
    collective = is_collective(part)
    ratio = part.largest_dim * math.sqrt(G.K) / 2 ** G.K if collective else None
    return DfsReport(
        K=G.K,
        N=G.N,
        partition=part,
        collective=collective,
        symmetries=tuple(row_symmetries(G)),
        conjugation=tuple(conjugation_map(part)),
        pair_counts=pair_inventory(G),
        growth_ratio=ratio,
    )
