"""Exact eigenvalues of the dephasing Hamiltonian and register-state signatures.

The Hamiltonian ``H = 1/2 sum_i sigma_z^(i) (x) sum_j g_ij sigma_z^(j)`` is
diagonal in the product basis, with eigenvalue

    E_kn = 1/2 * sum_i (-1)^k_i * sum_j (-1)^n_j * g_ij.

Writing ``s_k[j] = sum_i (-1)^k_i g_ij`` (the *signature* of register state
``k``) gives ``2 E_kn = sum_j (-1)^n_j s_k[j]``. Two register states see the
same energy for every bath configuration exactly when their signatures agree,
because a real vector whose signed sums vanish for every sign pattern is zero.
So coherence questions reduce to exact equality of length-N vectors and the
``2**K x 2**N`` table of energies is never built.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .model import (
    MAX_ENUMERATED_ENV,
    BasisIndex,
    CapacityError,
    DimensionError,
    InteractionMatrix,
    as_index,
    sign,
)

INT64_SAFE = 1 << 62
FLOAT_EXACT = 1 << 53


@dataclass(frozen=True)
class Signature:
    """Exact vector ``s_k[j] = sum_i (-1)^k_i g_ij``; hashable, compared exactly."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    def __neg__(self) -> "Signature":
        return Signature(tuple(-v for v in self.values))

    def __sub__(self, other: "Signature") -> "Signature":
        if len(self) != len(other):
            raise DimensionError("signatures of different lengths")
        return Signature(tuple(a - b for a, b in zip(self.values, other.values)))

    def __add__(self, other: "Signature") -> "Signature":
        if len(self) != len(other):
            raise DimensionError("signatures of different lengths")
        return Signature(tuple(a + b for a, b in zip(self.values, other.values)))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __getitem__(self, j: int) -> Fraction:
        return self.values[j]

    def is_zero(self) -> bool:
        return not any(self.values)

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.values) + ")"


def energy(G: InteractionMatrix, k: BasisIndex | int, n: BasisIndex | int) -> Fraction:
    """Eigenvalue ``E_kn`` of the interaction Hamiltonian, exactly."""
    k = as_index(k, G.K)
    n = as_index(n, G.N)
    total = Fraction(0)
    for i in range(1, G.K + 1):
        inner = Fraction(0)
        for j in range(1, G.N + 1):
            inner += sign(n, j) * G.g[i - 1][j - 1]
        total += sign(k, i) * inner
    return total / 2


def h_vector(G: InteractionMatrix, i: int, n: BasisIndex | int) -> Fraction:
    """Bath-weighted row sum ``h_i^(n) = sum_j (-1)^n_j g_ij`` for register spin ``i``."""
    n = as_index(n, G.N)
    row = G.row(i)
    return sum((sign(n, j) * row[j - 1] for j in range(1, G.N + 1)), Fraction(0))


def signature(G: InteractionMatrix, k: BasisIndex | int) -> Signature:
    k = as_index(k, G.K)
    signs = [sign(k, i) for i in range(1, G.K + 1)]
    return Signature(tuple(
        sum((s * G.g[i][j] for i, s in enumerate(signs)), Fraction(0))
        for j in range(G.N)
    ))


def s_entry(G: InteractionMatrix, k: BasisIndex | int, n: BasisIndex | int) -> Fraction:
    """Matrix element ``S_kn`` of ``S = A G B``; equal to ``2 * energy(G, k, n)``."""
    n = as_index(n, G.N)
    sig = signature(G, k)
    return sum((sign(n, j) * sig[j - 1] for j in range(1, G.N + 1)), Fraction(0))


def forall_env_zero(x: Sequence) -> bool:
    """True iff ``sum_j (-1)^n_j x_j == 0`` for all ``2**N`` sign patterns.

    Deliberately brute force; intended as a test oracle only.
    """
    x = [Fraction(v) for v in x]
    N = len(x)
    if N > MAX_ENUMERATED_ENV:
        raise CapacityError(f"enumeration over 2**{N} patterns refused (N > {MAX_ENUMERATED_ENV})")
    for n in range(1 << N):
        total = Fraction(0)
        for j in range(N):
            bit = (n >> (N - 1 - j)) & 1
            total += -x[j] if bit else x[j]
        if total != 0:
            return False
    return True


# --------------------------------------------------------------------------
# Vectorised exact integer tables
# --------------------------------------------------------------------------


def _int_dtype(bound: int):
    return np.int64 if bound < INT64_SAFE else object


def _expand_signs(weights: Sequence[int], dtype) -> np.ndarray:
    """Return ``sum_i (-1)^k_i weights[i]`` for every k in 0..2**K-1 (MSB first).

    Each new register spin becomes the next least-significant bit, so the
    table doubles by interleaving ``+w`` and ``-w``.
    """
    table = np.zeros(1, dtype=dtype)
    for w in weights:
        table = np.stack([table + w, table - w], axis=1).reshape(-1)
    return table


def scaled_signatures(G: InteractionMatrix) -> tuple[np.ndarray, int]:
    """All signatures at once as integers: ``(T, L)`` with ``T[k, j] = L * s_k[j]``.

    ``T`` has shape ``(2**K, N)``; dtype int64 when the entries provably fit,
    Python ints (object) otherwise.
    """
    M, L = G.integer_form
    bound = max((sum(abs(M[i][j]) for i in range(G.K)) for j in range(G.N)), default=0)
    dtype = _int_dtype(bound)
    cols = [_expand_signs([M[i][j] for i in range(G.K)], dtype) for j in range(G.N)]
    return np.stack(cols, axis=1), L


def _pivot_columns(G: InteractionMatrix) -> list[int]:
    """Indices of a maximal set of linearly independent columns of G."""
    rows = [list(r) for r in G.g]
    pivots = []
    r = 0
    for c in range(G.N):
        p = next((i for i in range(r, G.K) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(r + 1, G.K):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == G.K:
            break
    return pivots


def signature_keys(G: InteractionMatrix) -> np.ndarray:
    """Integer key per register state with ``key[k] == key[k']`` iff the signatures agree.

    Signature equality only depends on a set of independent columns of G.
    On those columns each scaled signature entry lies in ``[-B_c, B_c]``, so a
    mixed-radix encoding with radix ``2 B_c + 1`` is injective. The key is a
    linear function of the signs, built without ever forming the vectors.
    """
    M, _ = G.integer_form
    radix = 1
    weights = [0] * G.K
    for c in _pivot_columns(G):
        for i in range(G.K):
            weights[i] += M[i][c] * radix
        radix *= 2 * sum(abs(M[i][c]) for i in range(G.K)) + 1
    return _expand_signs(weights, _int_dtype(radix))
