"""Random instances for experiments and property tests."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .dfs import GSymmetry, SymmetryKind
from .model import EnvState, InteractionMatrix, RegisterDensity


def random_interaction_matrix(rng: np.random.Generator, K: int, N: int,
                              max_num: int = 5, max_den: int = 4) -> InteractionMatrix:
    """Entries ``p/q`` with ``|p| <= max_num`` and ``1 <= q <= max_den``."""
    rows = [[Fraction(int(rng.integers(-max_num, max_num + 1)), int(rng.integers(1, max_den + 1)))
             for _ in range(N)] for _ in range(K)]
    return InteractionMatrix.from_rows(rows)


def random_row(rng: np.random.Generator, N: int, max_num: int = 5, max_den: int = 4,
               nonzero: bool = True) -> list[Fraction]:
    while True:
        row = [Fraction(int(rng.integers(-max_num, max_num + 1)), int(rng.integers(1, max_den + 1)))
               for _ in range(N)]
        if any(row) or not nonzero:
            return row


def impose_symmetry(G: InteractionMatrix, sym: GSymmetry) -> InteractionMatrix:
    """Overwrite rows of G so that ``sym`` holds (the later row is rewritten)."""
    rows = [list(r) for r in G.g]
    if sym.kind is SymmetryKind.ROW_ZERO:
        rows[sym.rows[0] - 1] = [Fraction(0)] * G.N
    else:
        l1, l2 = sym.rows
        src = rows[l1 - 1]
        rows[l2 - 1] = list(src) if sym.kind is SymmetryKind.ROWS_EQUAL else [-x for x in src]
    return InteractionMatrix.from_rows(rows)


def random_env_state(rng: np.random.Generator, N: int, support: int | None = None) -> EnvState:
    """Random complex amplitudes on ``support`` distinct configurations (all by default)."""
    dim = 1 << N
    size = dim if support is None else min(support, dim)
    idx = np.sort(rng.choice(dim, size=size, replace=False))
    amp = rng.normal(size=size) + 1j * rng.normal(size=size)
    return EnvState.from_amplitudes(N, dict(zip(idx.tolist(), amp.tolist())), normalize=True)


def random_density(rng: np.random.Generator, K: int, rank: int | None = None) -> RegisterDensity:
    dim = 1 << K
    X = rng.normal(size=(dim, rank or dim)) + 1j * rng.normal(size=(dim, rank or dim))
    rho = X @ X.conj().T
    rho = (rho + rho.conj().T) / 2
    return RegisterDensity(K, rho / np.trace(rho).real)
