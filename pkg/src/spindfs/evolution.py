"""Closed-form pure-dephasing dynamics.

Starting from a product state ``sum_kn a_k b_n |k>|n>``, the environment
branch attached to ``|k>`` is ``|eps_k(t)> = sum_n exp(-i E_kn t) b_n |n>`` and
the register coherences evolve as ``rho_kk'(t) = rho_kk'(0) r_kk'(t)`` with

    r_kk'(t) = <eps_k'(t)|eps_k(t)> = sum_n exp(-i (E_kn - E_k'n) t) |b_n|^2.

Energy differences are formed exactly (scaled integers) and only the final
phase is evaluated in floating point.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, TextIO

import numpy as np

from .model import (
    BasisIndex,
    CapacityError,
    DimensionError,
    EnvState,
    InteractionMatrix,
    NonFiniteError,
    RegisterDensity,
    as_index,
    sign_matrix,
)
from .spectrum import FLOAT_EXACT, INT64_SAFE, scaled_signatures, signature_keys

MAX_DENSITY_REGISTER = 12


def _check_env(G: InteractionMatrix, env0: EnvState):
    if env0.width != G.N:
        raise DimensionError(f"environment has {env0.width} spins, matrix has N={G.N}")


def _check_time(t: float) -> float:
    t = float(t)
    if not math.isfinite(t):
        raise NonFiniteError(f"time must be finite, got {t!r}")
    return t


def _to_float(num: np.ndarray, den: int) -> np.ndarray:
    """Correctly rounded ``num / den`` for exact integer numerators."""
    if num.dtype != object and den < FLOAT_EXACT and (
        num.size == 0 or int(np.max(np.abs(num))) < FLOAT_EXACT
    ):
        return num.astype(float) / float(den)
    return np.array([float(Fraction(int(a), den)) for a in num], dtype=float)


def _row_numerators(G: InteractionMatrix, k: BasisIndex) -> list[int]:
    """Scaled signature ``L * s_k`` as Python ints."""
    M, _ = G.integer_form
    signs = [1 - 2 * ((k.value >> (G.K - 1 - i)) & 1) for i in range(G.K)]
    return [sum(s * M[i][j] for i, s in enumerate(signs)) for j in range(G.N)]


def energy_gaps(G: InteractionMatrix, k: BasisIndex | int, k2: BasisIndex | int,
                env0: EnvState) -> np.ndarray:
    """``E_kn - E_k'n`` over the support of ``env0`` (floats from exact values)."""
    k, k2 = as_index(k, G.K), as_index(k2, G.K)
    _check_env(G, env0)
    _, L = G.integer_form
    d = [a - b for a, b in zip(_row_numerators(G, k), _row_numerators(G, k2))]
    if not any(d):
        return np.zeros(len(env0))
    B = sign_matrix(G.N, env0.indices)
    bound = sum(abs(x) for x in d)
    if bound < INT64_SAFE:
        num = B @ np.asarray(d, dtype=np.int64)
    else:
        num = B.astype(object) @ np.asarray(d, dtype=object)
    return _to_float(num, 2 * L)


def branch_state(G: InteractionMatrix, k: BasisIndex | int, env0: EnvState,
                 t: float) -> EnvState:
    """Environment branch ``|eps_k(t)>`` correlated with register state ``|k>``."""
    k = as_index(k, G.K)
    _check_env(G, env0)
    t = _check_time(t)
    _, L = G.integer_form
    s = np.asarray(_row_numerators(G, k), dtype=object)
    num = sign_matrix(G.N, env0.indices).astype(object) @ s
    energies = _to_float(np.asarray(num, dtype=object), 2 * L)
    terms = tuple(
        (n, b * cmath.exp(-1j * e * t)) for (n, b), e in zip(env0.terms, energies)
    )
    return EnvState(G.N, terms)


def decoherence_rate(G: InteractionMatrix, k: BasisIndex | int, k2: BasisIndex | int,
                     env0: EnvState, t: float) -> complex:
    """Decoherence factor ``r_kk'(t)``.

    Exactly ``1`` at ``t = 0`` and whenever every energy gap vanishes (in
    particular ``k == k2``).
    """
    t = _check_time(t)
    gaps = energy_gaps(G, k, k2, env0)
    if t == 0 or not np.any(gaps):
        return 1 + 0j
    return complex(np.dot(env0.weights, np.exp(-1j * gaps * t)))


@dataclass(frozen=True)
class RateSeries:
    """Samples of ``r_kk'(t)`` on a time grid, in grid order."""

    k: BasisIndex
    k2: BasisIndex
    samples: tuple[tuple[float, complex], ...]

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([r for _, r in self.samples], dtype=complex)

    def write_csv(self, fh: TextIO) -> None:
        """Columns ``t,re_r,im_r,abs_r``; floats in shortest round-trip form."""
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "re_r", "im_r", "abs_r"])
        for t, r in self.samples:
            w.writerow([format_float(t), format_float(r.real), format_float(r.imag),
                        format_float(abs(r))])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def format_float(x: float) -> str:
    # repr is the shortest string that round-trips, never more than 17 digits
    return repr(float(x))


def rate_series(G: InteractionMatrix, k: BasisIndex | int, k2: BasisIndex | int,
                env0: EnvState, t_grid: Iterable[float]) -> RateSeries:
    k, k2 = as_index(k, G.K), as_index(k2, G.K)
    times = [_check_time(t) for t in t_grid]
    gaps = energy_gaps(G, k, k2, env0)
    if not np.any(gaps):
        values = [1 + 0j] * len(times)
    else:
        phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), gaps))
        values = [1 + 0j if t == 0 else complex(v)
                  for t, v in zip(times, phases @ env0.weights)]
    return RateSeries(k, k2, tuple(zip(times, values)))


def time_grid(t_max: float, t_steps: int) -> list[float]:
    """``t_j = j * t_max / t_steps`` for ``j = 0..t_steps``."""
    return [j * t_max / t_steps for j in range(t_steps + 1)]


def decoherence_matrix(G: InteractionMatrix, env0: EnvState, t: float) -> np.ndarray:
    """All ``r_kk'(t)`` as a ``2**K`` square matrix, Hermitian by construction."""
    if G.K > MAX_DENSITY_REGISTER:
        raise CapacityError(f"full register matrices need K <= {MAX_DENSITY_REGISTER}")
    _check_env(G, env0)
    t = _check_time(t)
    dim = 1 << G.K
    if t == 0:
        return np.ones((dim, dim), dtype=complex)
    T, L = scaled_signatures(G)
    B = sign_matrix(G.N, env0.indices)
    bound = G.N * int(np.max(np.abs(T), initial=0)) * 2
    if T.dtype != object and bound < INT64_SAFE:
        E = T @ B.T
    else:
        E = T.astype(object) @ B.T.astype(object)
    keys = signature_keys(G)
    w = env0.weights
    R = np.empty((dim, dim), dtype=complex)
    for k in range(dim):
        gaps = _to_float((E[k] - E[k:]).reshape(-1), 2 * L).reshape(dim - k, -1)
        row = np.exp(-1j * gaps * t) @ w
        # equal signatures give identically zero gaps
        row[keys[k:] == keys[k]] = 1.0
        R[k, k:] = row
        R[k:, k] = row.conj()
    R[np.diag_indices(dim)] = 1.0
    return R


def evolve_density(G: InteractionMatrix, rho0: RegisterDensity, env0: EnvState,
                   t: float) -> RegisterDensity:
    """Reduced register state at time ``t``: ``rho_kk'(0) * r_kk'(t)`` elementwise.

    Populations are untouched; the result is exactly Hermitian.
    """
    if not isinstance(rho0, RegisterDensity):
        rho0 = RegisterDensity(G.K, rho0)
    if rho0.K != G.K:
        raise DimensionError(f"density matrix is for K={rho0.K}, matrix has K={G.K}")
    R = decoherence_matrix(G, env0, t)
    rho = rho0.entries * R
    upper = np.triu(rho, 1)
    out = upper + upper.conj().T + np.diag(np.real(np.diag(rho0.entries)))
    return RegisterDensity(G.K, out)

