"""Core containers: the interaction matrix, basis labels and states.

Register and environment basis states are labelled by integers whose binary
digits are read most-significant first: for a K-bit label ``k``, digit
``k_1`` is the leading bit and ``k_K`` the trailing one. Every other module
goes through :func:`bit` and :func:`sign` instead of touching bit order.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

# Exact couplings are stdlib fractions: always reduced, positive denominator.
Rational = Fraction

MAX_REGISTER = 24
MAX_ENUMERATED_ENV = 20
NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = -1e-9


class ModelError(ValueError):
    """Base class for every error raised by this package."""


class ParseError(ModelError):
    """Malformed input document."""


class DimensionError(ModelError):
    """Shapes or label widths that do not agree."""


class NonFiniteError(ModelError):
    """Infinite or NaN value where a finite one is required."""


class CapacityError(ModelError):
    """Problem size beyond what an operation supports."""


class IndexRangeError(ModelError, IndexError):
    """Basis label, bit position or matrix row outside its range."""


class StateError(ModelError):
    """State that violates normalisation, Hermiticity or positivity."""


# --------------------------------------------------------------------------
# Basis labels
# --------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class BasisIndex:
    """A computational basis label ``value`` on ``width`` spins."""

    value: int
    width: int

    def __post_init__(self):
        if isinstance(self.value, bool) or not isinstance(self.value, (int, np.integer)):
            raise TypeError(f"basis value must be an integer, got {self.value!r}")
        if self.width < 1:
            raise IndexRangeError(f"width must be positive, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise IndexRangeError(
                f"basis value {self.value} out of range for width {self.width}"
            )
        object.__setattr__(self, "value", int(self.value))

    @classmethod
    def from_bits(cls, bits: str) -> "BasisIndex":
        """Label from an MSB-first bit string such as ``"0110"``."""
        if not bits or set(bits) - {"0", "1"}:
            raise ParseError(f"not a bit string: {bits!r}")
        return cls(int(bits, 2), len(bits))

    @property
    def bits(self) -> str:
        return format(self.value, f"0{self.width}b")

    def __index__(self) -> int:
        return self.value

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return self.bits


def as_index(k: BasisIndex | int, width: int) -> BasisIndex:
    """Coerce an int to a label of ``width`` bits, or check a label's width."""
    if isinstance(k, BasisIndex):
        if k.width != width:
            raise DimensionError(f"label {k} has width {k.width}, expected {width}")
        return k
    return BasisIndex(k, width)


def bit(idx: BasisIndex, i: int) -> int:
    """Digit ``k_i`` (1-based, most significant first)."""
    if not 1 <= i <= idx.width:
        raise IndexRangeError(f"bit position {i} outside 1..{idx.width}")
    return (idx.value >> (idx.width - i)) & 1


def sign(idx: BasisIndex, i: int) -> int:
    """``(-1)**k_i``."""
    return 1 - 2 * bit(idx, i)


def sign_matrix(width: int, values: Iterable[int] | None = None) -> np.ndarray:
    """Rows of ``(-1)**k_i`` for the given labels (all ``2**width`` by default).

    Shape ``(len(values), width)``, dtype int64, columns in MSB-first order.
    """
    if values is None:
        values = np.arange(1 << width, dtype=np.int64)
    values = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                        dtype=np.int64)
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    bits = (values[:, None] >> shifts[None, :]) & 1
    return 1 - 2 * bits


# --------------------------------------------------------------------------
# Interaction matrix
# --------------------------------------------------------------------------


def _to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ParseError(f"boolean is not a coupling: {x!r}")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise NonFiniteError(f"non-finite coupling {x!r}")
        return Fraction(repr(float(x)))
    if isinstance(x, str):
        return _parse_decimal(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return _parse_pair(x)
    raise ParseError(f"cannot read {x!r} as a rational")


_INT_RE = re.compile(r"^\s*[+-]?\d+\s*$")


def _parse_int(x) -> int:
    if isinstance(x, bool):
        raise ParseError(f"boolean is not an integer: {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str) and _INT_RE.match(x):
        return int(x)
    raise ParseError(f"expected an integer (or integer string), got {x!r}")


def _parse_pair(pair) -> Fraction:
    num, den = (_parse_int(p) for p in pair)
    if den == 0:
        raise NonFiniteError(f"zero denominator in {list(pair)!r}")
    return Fraction(num, den)


def _parse_decimal(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        pass
    try:
        value = float(s)
    except ValueError:
        raise ParseError(f"not a decimal or rational string: {s!r}") from None
    if not math.isfinite(value):
        raise NonFiniteError(f"non-finite coupling {s!r}")
    raise ParseError(f"not a decimal or rational string: {s!r}")


@dataclass(frozen=True)
class InteractionMatrix:
    """K x N exact coupling matrix ``g[i][j]`` between register spin i and bath spin j.

    Rows and columns are stored 0-based; the row helpers take the 1-based
    spin number.
    """

    K: int
    N: int
    g: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not isinstance(self.K, int) or not 1 <= self.K <= MAX_REGISTER:
            raise CapacityError(f"K={self.K} outside supported range 1..{MAX_REGISTER}")
        if not isinstance(self.N, int) or self.N < 1:
            raise DimensionError(f"N must be a positive integer, got {self.N!r}")
        if len(self.g) != self.K:
            raise DimensionError(f"matrix has {len(self.g)} rows, expected K={self.K}")
        rows = []
        for i, row in enumerate(self.g, start=1):
            if len(row) != self.N:
                raise DimensionError(
                    f"row {i} has {len(row)} entries, expected N={self.N}"
                )
            rows.append(tuple(_to_rational(x) for x in row))
        object.__setattr__(self, "g", tuple(rows))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "InteractionMatrix":
        """Build from nested rows; entries may be ints, Fractions, strings or [num, den]."""
        rows = [list(r) for r in rows]
        if not rows:
            raise CapacityError("matrix needs at least one row")
        return cls(len(rows), len(rows[0]), tuple(tuple(r) for r in rows))

    @classmethod
    def collective(cls, K: int, row: Sequence) -> "InteractionMatrix":
        """All register spins coupled identically through ``row``."""
        return cls.from_rows([list(row)] * K)

    @classmethod
    def zeros(cls, K: int, N: int) -> "InteractionMatrix":
        return cls.from_rows([[0] * N for _ in range(K)])

    def row(self, i: int) -> tuple[Fraction, ...]:
        if not 1 <= i <= self.K:
            raise IndexRangeError(f"row {i} outside 1..{self.K}")
        return self.g[i - 1]

    def __add__(self, other: "InteractionMatrix") -> "InteractionMatrix":
        if (self.K, self.N) != (other.K, other.N):
            raise DimensionError("cannot add matrices of different shapes")
        return InteractionMatrix.from_rows(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.g, other.g)]
        )

    def to_array(self) -> np.ndarray:
        """Float copy, for display only."""
        return np.array([[float(x) for x in row] for row in self.g])

    @cached_property
    def integer_form(self) -> tuple[tuple[tuple[int, ...], ...], int]:
        """``(M, L)`` with integer ``M = L * g`` and ``L`` the lcm of all denominators."""
        L = 1
        for row in self.g:
            for x in row:
                L = math.lcm(L, x.denominator)
        M = tuple(tuple(x.numerator * (L // x.denominator) for x in row) for row in self.g)
        return M, L

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(str(x) for x in r) for r in self.g)
        return f"InteractionMatrix(K={self.K}, N={self.N}, [{rows}])"


def parse_interaction_matrix(text: str | bytes | Mapping) -> InteractionMatrix:
    """Read ``{"K": int, "N": int, "g": [[rational, ...], ...]}``.

    A rational is ``["num", "den"]`` (integer strings) or a decimal string;
    decimals convert exactly, so ``"0.25"`` becomes ``1/4``.
    """
    if isinstance(text, Mapping):
        doc = text
    else:
        try:
            doc = json.loads(text)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, Mapping):
        raise ParseError("matrix document must be a JSON object")
    missing = {"K", "N", "g"} - set(doc)
    if missing:
        raise ParseError(f"matrix document lacks keys {sorted(missing)}")
    K, N, g = doc["K"], doc["N"], doc["g"]
    for name, v in (("K", K), ("N", N)):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ParseError(f"{name} must be an integer, got {v!r}")
    if not 1 <= K <= MAX_REGISTER:
        raise CapacityError(f"K={K} outside supported range 1..{MAX_REGISTER}")
    if not isinstance(g, list) or any(not isinstance(r, list) for r in g):
        raise ParseError("g must be a list of rows")
    if len(g) != K:
        raise DimensionError(f"g has {len(g)} rows but K={K}")
    return InteractionMatrix(K, N, tuple(tuple(r) for r in g))


def serialize_interaction_matrix(G: InteractionMatrix) -> str:
    doc = {
        "K": G.K,
        "N": G.N,
        "g": [[[str(x.numerator), str(x.denominator)] for x in row] for row in G.g],
    }
    return json.dumps(doc)


def load_interaction_matrix(path) -> InteractionMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_interaction_matrix(fh.read())


# --------------------------------------------------------------------------
# States
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EnvState:
    """Sparse normalised environment state ``sum_n b_n |n>`` on ``width`` spins."""

    width: int
    terms: tuple[tuple[int, complex], ...]
    _arrays: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.width < 1:
            raise DimensionError(f"environment width must be positive, got {self.width}")
        terms = []
        seen = set()
        for n, b in self.terms:
            n = as_index(n, self.width).value
            if n in seen:
                raise StateError(f"environment index {n} listed twice")
            seen.add(n)
            b = complex(b)
            if not (math.isfinite(b.real) and math.isfinite(b.imag)):
                raise NonFiniteError(f"non-finite amplitude at n={n}")
            if b != 0:
                terms.append((n, b))
        terms.sort()
        norm2 = math.fsum(abs(b) ** 2 for _, b in terms)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise StateError(f"environment state has squared norm {norm2!r}, expected 1")
        object.__setattr__(self, "terms", tuple(terms))
        idx = np.array([n for n, _ in terms], dtype=np.int64)
        amp = np.array([b for _, b in terms], dtype=complex)
        idx.setflags(write=False)
        amp.setflags(write=False)
        object.__setattr__(self, "_arrays", (idx, amp))

    @classmethod
    def from_amplitudes(cls, width: int, amplitudes: Mapping[int, complex] | Sequence[complex],
                        normalize: bool = False) -> "EnvState":
        """From a dict ``{n: b_n}`` or a dense length ``2**width`` vector."""
        if isinstance(amplitudes, Mapping):
            items = list(amplitudes.items())
        else:
            amplitudes = list(amplitudes)
            if len(amplitudes) != 1 << width:
                raise DimensionError(
                    f"dense vector has {len(amplitudes)} entries, expected {1 << width}"
                )
            items = [(n, b) for n, b in enumerate(amplitudes) if b != 0]
        if normalize:
            norm = math.sqrt(math.fsum(abs(complex(b)) ** 2 for _, b in items))
            if norm == 0:
                raise StateError("cannot normalise the zero vector")
            items = [(n, complex(b) / norm) for n, b in items]
        return cls(width, tuple(items))

    @classmethod
    def basis(cls, width: int, n: int) -> "EnvState":
        return cls(width, ((n, 1.0),))

    @classmethod
    def uniform(cls, width: int) -> "EnvState":
        """Equal-weight superposition of all ``2**width`` configurations."""
        if width > MAX_ENUMERATED_ENV:
            raise CapacityError(f"uniform state needs N <= {MAX_ENUMERATED_ENV}")
        amp = 1.0 / math.sqrt(1 << width)
        return cls(width, tuple((n, amp) for n in range(1 << width)))

    @property
    def indices(self) -> np.ndarray:
        return self._arrays[0]

    @property
    def amplitudes(self) -> np.ndarray:
        return self._arrays[1]

    @property
    def weights(self) -> np.ndarray:
        """``|b_n|**2`` over the support."""
        return np.abs(self._arrays[1]) ** 2

    def norm(self) -> float:
        return math.sqrt(math.fsum(abs(b) ** 2 for _, b in self.terms))

    def overlap(self, other: "EnvState") -> complex:
        """``<self|other>``."""
        if self.width != other.width:
            raise DimensionError("states live on different environments")
        mine = dict(self.terms)
        return sum((mine[n].conjugate() * b for n, b in other.terms if n in mine), 0j)

    def __len__(self) -> int:
        return len(self.terms)


def parse_env_state(text: str | bytes | Mapping) -> EnvState:
    """Read ``{"N": int, "terms": [{"n": int, "re": float, "im": float}, ...]}``."""
    if isinstance(text, Mapping):
        doc = text
    else:
        try:
            doc = json.loads(text)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, Mapping) or "N" not in doc or "terms" not in doc:
        raise ParseError('environment document needs keys "N" and "terms"')
    N = doc["N"]
    if isinstance(N, bool) or not isinstance(N, int):
        raise ParseError(f"N must be an integer, got {N!r}")
    terms = []
    for t in doc["terms"]:
        try:
            n = t["n"]
            re_, im = float(t.get("re", 0.0)), float(t.get("im", 0.0))
        except (TypeError, KeyError, ValueError) as exc:
            raise ParseError(f"bad environment term {t!r}: {exc}") from None
        if isinstance(n, bool) or not isinstance(n, int):
            raise ParseError(f"term index must be an integer, got {n!r}")
        terms.append((n, complex(re_, im)))
    return EnvState(N, tuple(terms))


def serialize_env_state(env: EnvState) -> str:
    terms = [{"n": n, "re": b.real, "im": b.imag} for n, b in env.terms]
    return json.dumps({"N": env.width, "terms": terms})


def load_env_state(path) -> EnvState:
    with open(path, encoding="utf-8") as fh:
        return parse_env_state(fh.read())


@dataclass(frozen=True, eq=False)
class RegisterDensity:
    """Reduced density matrix of the K-spin register (``2**K`` square)."""

    K: int
    entries: np.ndarray

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        dim = 1 << self.K
        if rho.shape != (dim, dim):
            raise DimensionError(f"density matrix shape {rho.shape}, expected {(dim, dim)}")
        if not np.all(np.isfinite(rho)):
            raise NonFiniteError("density matrix has non-finite entries")
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise StateError("density matrix is not Hermitian")
        tr = np.trace(rho)
        if abs(tr - 1.0) > NORM_TOL:
            raise StateError(f"density matrix has trace {tr!r}")
        lam = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
        if lam[0] < PSD_TOL:
            raise StateError(f"density matrix has negative eigenvalue {lam[0]!r}")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @classmethod
    def pure(cls, amplitudes: Sequence[complex]) -> "RegisterDensity":
        """``|a><a|`` from register amplitudes ``a_k`` (normalised here)."""
        a = np.asarray(amplitudes, dtype=complex)
        K = int(a.size).bit_length() - 1
        if a.ndim != 1 or a.size != 1 << K:
            raise DimensionError(f"amplitude vector length {a.size} is not a power of two")
        nrm = np.linalg.norm(a)
        if nrm == 0:
            raise StateError("cannot normalise the zero vector")
        a = a / nrm
        return cls(K, np.outer(a, a.conj()))

    @property
    def dim(self) -> int:
        return 1 << self.K

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries)[0])

    def purity(self) -> float:
        return float(np.real(np.vdot(self.entries, self.entries)))
