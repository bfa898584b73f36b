"""Exact algebra over n-qubit Pauli strings and weighted Pauli sums.

Strings are stored as a pair of bitmasks (x-mask, z-mask) so that products and
commutation checks are word-wide bit operations instead of per-qubit loops.
Internally a string is the operator ``i**k * X^x * Z^z``; the user-facing
phase is always one of the four units {1, i, -1, -i}.  Qubit ``j`` corresponds
to bit ``j`` of the masks and to character ``j`` of a letters string, with the
basis-index convention that qubit 0 is the least significant bit.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .errors import CapacityError, ContractError, DimensionError

PHASES = (1 + 0j, 1j, -1 + 0j, -1j)  # i**k for k = 0..3

DENSE_QUBIT_CAP = 14  # 2^14 x 2^14 complex matrices bound oracle memory

COEFF_PRUNE_TOL = 1e-12  # below double-precision noise; keeps sums canonical

_LETTER_TO_MASKS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_MASKS_TO_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}

_PHASE_TO_EXP = {1: 0, 1j: 1, -1: 2, -1j: 3}


def _popcount(mask: int) -> int:
    return mask.bit_count()


def _phase_exp(phase: complex) -> int:
    for unit, k in _PHASE_TO_EXP.items():
        if phase == unit:
            return k
    raise ValueError(f"phase must be one of +1, -1, +i, -i, got {phase!r}")


class PauliString:
    """Immutable n-qubit Pauli word with a unit phase.

    The operator represented is ``phase * L_0 ⊗ L_1 ⊗ ... ⊗ L_{n-1}`` with
    ``L_j`` the letter on qubit j.
    """

    __slots__ = ("n_qubits", "x_mask", "z_mask", "_k")

    def __init__(self, n_qubits: int, x_mask: int = 0, z_mask: int = 0, phase: complex = 1):
        if n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        full = (1 << n_qubits) - 1
        if x_mask & ~full or z_mask & ~full:
            raise ValueError("mask has bits beyond n_qubits")
        object.__setattr__(self, "n_qubits", n_qubits)
        object.__setattr__(self, "x_mask", x_mask)
        object.__setattr__(self, "z_mask", z_mask)
        # internal exponent: operator == i^k * X^x * Z^z
        k = (_phase_exp(phase) + _popcount(x_mask & z_mask)) & 3
        object.__setattr__(self, "_k", k)

    def __setattr__(self, name, value):
        raise AttributeError("PauliString is immutable")

    @classmethod
    def from_letters(cls, letters: str, phase: complex = 1) -> "PauliString":
        """Build from a letters string, e.g. ``"XXIZ"`` (character j = qubit j)."""
        x = z = 0
        for j, letter in enumerate(letters):
            try:
                xb, zb = _LETTER_TO_MASKS[letter]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {letter!r}") from None
            x |= xb << j
            z |= zb << j
        return cls(len(letters), x, z, phase)

    @classmethod
    def from_ops(cls, n_qubits: int, ops: Mapping[int, str], phase: complex = 1) -> "PauliString":
        """Build from a sparse map ``{qubit: letter}``; unlisted qubits are I."""
        x = z = 0
        for j, letter in ops.items():
            if not 0 <= j < n_qubits:
                raise ValueError(f"qubit index {j} outside 0..{n_qubits - 1}")
            xb, zb = _LETTER_TO_MASKS[letter]
            x |= xb << j
            z |= zb << j
        return cls(n_qubits, x, z, phase)

    @property
    def phase(self) -> complex:
        """The unit prefactor relative to the plain letters product."""
        return PHASES[(self._k - _popcount(self.x_mask & self.z_mask)) & 3]

    @property
    def letters(self) -> str:
        return "".join(
            _MASKS_TO_LETTER[((self.x_mask >> j) & 1, (self.z_mask >> j) & 1)]
            for j in range(self.n_qubits)
        )

    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def weight(self) -> int:
        """Number of non-identity positions."""
        return _popcount(self.x_mask | self.z_mask)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def commutes_with(self, other: "PauliString") -> bool:
        return commutes(self, other)

    def key(self) -> tuple[int, int]:
        """Phase-free identity of the word (x-mask, z-mask)."""
        return (self.x_mask, self.z_mask)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliString)
            and self.n_qubits == other.n_qubits
            and self.x_mask == other.x_mask
            and self.z_mask == other.z_mask
            and self._k == other._k
        )

    def __hash__(self) -> int:
        return hash((self.n_qubits, self.x_mask, self.z_mask, self._k))

    def __repr__(self) -> str:
        sign = {1: "+", 1j: "+i", -1: "-", -1j: "-i"}[self.phase]
        return f"{sign}{self.letters}"

    def dense(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix (capacity error beyond the dense qubit cap)."""
        _check_dense_cap(self.n_qubits)
        dim = 1 << self.n_qubits
        mat = np.zeros((dim, dim), dtype=complex)
        cols = np.arange(dim, dtype=np.int64)
        rows = cols ^ self.x_mask
        vals = PHASES[self._k] * _z_signs(cols, self.z_mask)
        mat[rows, cols] = vals
        return mat


def _z_signs(indices: np.ndarray, z_mask: int) -> np.ndarray:
    """(-1)^{popcount(index & z_mask)} for an int64 index array."""
    if z_mask == 0:
        return np.ones(indices.shape, dtype=np.float64)
    parity = np.bitwise_count(indices & np.int64(z_mask)).astype(np.int64) & 1
    return 1.0 - 2.0 * parity


def _check_dense_cap(n_qubits: int) -> None:
    if n_qubits > DENSE_QUBIT_CAP:
        raise CapacityError(
            f"dense materialization capped at {DENSE_QUBIT_CAP} qubits, got {n_qubits}"
        )


def _check_same_size(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Product ``a @ b`` with exact unit-phase tracking."""
    _check_same_size(a, b)
    # Z^{z_a} X^{x_b} = (-1)^{|z_a & x_b|} X^{x_b} Z^{z_a}
    k = (a._k + b._k + 2 * _popcount(a.z_mask & b.x_mask)) & 3
    x = a.x_mask ^ b.x_mask
    z = a.z_mask ^ b.z_mask
    out = PauliString(a.n_qubits, x, z)
    object.__setattr__(out, "_k", k)
    return out


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the words commute (symplectic product is even)."""
    _check_same_size(a, b)
    n_anti = _popcount(a.x_mask & b.z_mask) + _popcount(a.z_mask & b.x_mask)
    return n_anti % 2 == 0


class PauliSum:
    """Canonical weighted sum of Pauli words on a fixed qubit count.

    Phases are folded into the coefficients, duplicate words are merged and
    coefficients below ``COEFF_PRUNE_TOL`` in magnitude are dropped.  Terms
    iterate in a fixed (mask-sorted) order, so construction is deterministic.
    Instances are immutable; arithmetic returns new sums.
    """

    __slots__ = ("n_qubits", "_coeffs", "_term_cache")

    def __init__(self, n_qubits: int, terms: Iterable[tuple[complex, PauliString]] = ()):
        if n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        object.__setattr__(self, "n_qubits", n_qubits)
        acc: dict[tuple[int, int], complex] = {}
        for coeff, string in terms:
            if string.n_qubits != n_qubits:
                raise DimensionError(
                    f"term on {string.n_qubits} qubits in a {n_qubits}-qubit sum"
                )
            folded = complex(coeff) * string.phase
            key = string.key()
            acc[key] = acc.get(key, 0j) + folded
        pruned = {
            key: c for key, c in sorted(acc.items()) if abs(c) > COEFF_PRUNE_TOL
        }
        object.__setattr__(self, "_coeffs", pruned)
        object.__setattr__(self, "_term_cache", None)

    def __setattr__(self, name, value):
        raise AttributeError("PauliSum is immutable")

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliSum":
        return cls(n_qubits, [(coeff, PauliString(n_qubits))])

    @property
    def n_terms(self) -> int:
        return len(self._coeffs)

    def terms(self) -> tuple[tuple[complex, PauliString], ...]:
        """(coefficient, phase-free string) pairs in canonical order.

        Cached on first use: strings are immutable and gate kernels iterate
        the same sums thousands of times.
        """
        if self._term_cache is None:
            cache = tuple(
                (coeff, PauliString(self.n_qubits, x, z))
                for (x, z), coeff in self._coeffs.items()
            )
            object.__setattr__(self, "_term_cache", cache)
        return self._term_cache

    def coefficient(self, string: PauliString) -> complex:
        return self._coeffs.get(string.key(), 0j) * string.phase.conjugate()

    def is_hermitian(self, tol: float = COEFF_PRUNE_TOL) -> bool:
        """All coefficients real after phase folding (words are Hermitian)."""
        return all(abs(c.imag) <= tol for c in self._coeffs.values())

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n_qubits != other.n_qubits:
            raise DimensionError("qubit counts differ")
        merged = list(self.terms()) + list(other.terms())
        return PauliSum(self.n_qubits, merged)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            if self.n_qubits != other.n_qubits:
                raise DimensionError("qubit counts differ")
            prods = [
                (ca * cb, multiply(sa, sb))
                for ca, sa in self.terms()
                for cb, sb in other.terms()
            ]
            return PauliSum(self.n_qubits, prods)
        return PauliSum(self.n_qubits, [(other * c, s) for c, s in self.terms()])

    def __rmul__(self, scalar) -> "PauliSum":
        return self.__mul__(scalar)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliSum)
            and self.n_qubits == other.n_qubits
            and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash((self.n_qubits, tuple(self._coeffs.items())))

    def __repr__(self) -> str:
        if not self._coeffs:
            return f"PauliSum({self.n_qubits}, 0)"
        parts = [f"{c:g}*{PauliString(self.n_qubits, x, z).letters}"
                 for (x, z), c in list(self._coeffs.items())[:4]]
        more = " + ..." if self.n_terms > 4 else ""
        return f"PauliSum({self.n_qubits}, {' + '.join(parts)}{more})"

    def dense(self) -> np.ndarray:
        return to_dense(self)

    def to_text(self) -> str:
        """Serialize as lines ``<coeff> <letters>`` in canonical term order."""
        lines = []
        for coeff, string in self.terms():
            if abs(coeff.imag) <= COEFF_PRUNE_TOL:
                lines.append(f"{coeff.real!r} {string.letters}")
            else:
                lines.append(f"{coeff!r} {string.letters}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PauliSum":
        terms = []
        n_qubits = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                coeff_str, letters = line.split()
            except ValueError:
                raise ValueError(f"line {lineno}: expected '<coeff> <letters>'") from None
            coeff = complex(coeff_str)
            if n_qubits is None:
                n_qubits = len(letters)
            elif len(letters) != n_qubits:
                raise DimensionError(f"line {lineno}: inconsistent string length")
            terms.append((coeff, PauliString.from_letters(letters)))
        if n_qubits is None:
            raise ValueError("no terms found")
        return cls(n_qubits, terms)


def to_dense(p: PauliSum | PauliString) -> np.ndarray:
    """Dense 2^n x 2^n matrix of a Pauli sum or single string.

    Raises CapacityError beyond the dense qubit cap (14).
    """
    if isinstance(p, PauliString):
        return p.dense()
    _check_dense_cap(p.n_qubits)
    dim = 1 << p.n_qubits
    mat = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim, dtype=np.int64)
    for coeff, string in p.terms():
        rows = cols ^ string.x_mask
        mat[rows, cols] += coeff * PHASES[string._k] * _z_signs(cols, string.z_mask)
    return mat


def hermitian_check(p: PauliSum, what: str = "operator") -> None:
    if not p.is_hermitian():
        raise ContractError(f"{what} must be hermitian (real folded coefficients)")
