"""Dense statevector engine: basis preparation, Pauli-generator rotations,
expectation values, and exact adjoint-mode gradients.

Amplitudes are indexed LSB-first: qubit 0 is the least significant bit of the
basis index.  Rotation kernels work in a single vectorized pass over the
2^n amplitude array using the generator's x/z bitmasks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ContractError, DimensionError
from .paulis import PHASES, PauliString, PauliSum, commutes, _z_signs

STATEVECTOR_QUBIT_CAP = 24  # 2^24 complex doubles = 256 MB

NORM_TOL = 1e-10


class StateVector:
    """A 2^n complex amplitude array, kept normalized to unit L2 norm."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray):
        if n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if n_qubits > STATEVECTOR_QUBIT_CAP:
            raise CapacityError(
                f"statevectors capped at {STATEVECTOR_QUBIT_CAP} qubits, got {n_qubits}"
            )
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (1 << n_qubits,):
            raise DimensionError(
                f"expected {1 << n_qubits} amplitudes, got shape {amplitudes.shape}"
            )
        self.n_qubits = n_qubits
        self.amplitudes = amplitudes

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def overlap(self, other: "StateVector") -> complex:
        """<self|other>."""
        if self.n_qubits != other.n_qubits:
            raise DimensionError("qubit counts differ")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits})"


def computational_basis_state(n: int, bits: str) -> StateVector:
    """Basis state |bits>, reading `bits` as a binary numeral (qubit 0 = LSB)."""
    if len(bits) != n:
        raise DimensionError(f"expected {n} bits, got {len(bits)}")
    index = int(bits, 2)
    amps = np.zeros(1 << n, dtype=complex)
    amps[index] = 1.0
    return StateVector(n, amps)


def basis_state_from_index(n: int, index: int) -> StateVector:
    amps = np.zeros(1 << n, dtype=complex)
    amps[index] = 1.0
    return StateVector(n, amps)


@dataclass(frozen=True)
class ParamGate:
    """One-parameter gate exp(i * sign * theta * G) for a hermitian generator G.

    `sign` is -1 for rotation-convention gates exp(-i theta G) (Heisenberg
    ansatz, Givens rotations) and +1 for exp(+i theta G) (Hubbard HVA groups).
    Multi-term generators must be internally commuting so term rotations can
    be applied sequentially in any order.
    """

    generator: PauliSum
    sign: int
    label: str = ""

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")
        if not self.generator.is_hermitian():
            raise ContractError("gate generator must be hermitian")
        strings = [s for _, s in self.generator.terms()]
        for i in range(len(strings)):
            for j in range(i + 1, len(strings)):
                if not commutes(strings[i], strings[j]):
                    raise ContractError(
                        f"gate generator is not internally commuting ({self.label or 'unnamed'})"
                    )

    @property
    def n_qubits(self) -> int:
        return self.generator.n_qubits


_INDEX_CACHE: dict[int, np.ndarray] = {}


def _indices(n_qubits: int) -> np.ndarray:
    idx = _INDEX_CACHE.get(n_qubits)
    if idx is None:
        idx = np.arange(1 << n_qubits, dtype=np.int64)
        _INDEX_CACHE[n_qubits] = idx
    return idx


def _apply_word(amps: np.ndarray, n_qubits: int, string: PauliString) -> np.ndarray:
    """Return P @ amps for a single Pauli word (new array)."""
    idx = _indices(n_qubits)
    phase = PHASES[string._k]
    if string.z_mask:
        vals = amps * _z_signs(idx, string.z_mask)
    else:
        vals = amps.copy()
    if phase != 1:
        vals *= phase
    if string.x_mask:
        vals = vals[idx ^ string.x_mask]
    return vals


def apply_pauli_sum(state: StateVector, p: PauliSum) -> StateVector:
    """New StateVector holding (sum of terms) @ state; not normalized."""
    if state.n_qubits != p.n_qubits:
        raise DimensionError("qubit counts differ")
    acc = np.zeros_like(state.amplitudes)
    for coeff, string in p.terms():
        acc += coeff * _apply_word(state.amplitudes, state.n_qubits, string)
    return StateVector(state.n_qubits, acc)


def _rotate_term_inplace(
    amps: np.ndarray, n_qubits: int, string: PauliString, coeff: float, theta: float, sign: int
) -> None:
    """amps <- exp(i * sign * theta * coeff * P) amps for one Pauli word P."""
    angle = coeff * theta
    if angle == 0.0:
        return
    cos = np.cos(angle)
    isin = 1j * sign * np.sin(angle)
    if string.is_identity():
        amps *= cos + isin
        return
    p_amps = _apply_word(amps, n_qubits, string)
    amps *= cos
    amps += isin * p_amps


def apply_param_gate(state: StateVector, gate: ParamGate, theta: float) -> StateVector:
    """Apply exp(i * sign * theta * G) in place and return the state.

    Multi-term generators are applied term by term; internal commutation
    makes the order irrelevant.
    """
    if state.n_qubits != gate.n_qubits:
        raise DimensionError("qubit counts differ")
    for coeff, string in gate.generator.terms():
        _rotate_term_inplace(
            state.amplitudes, state.n_qubits, string, coeff.real, theta, gate.sign
        )
    return state


def apply_circuit(
    state: StateVector, gates: list[ParamGate], params: np.ndarray
) -> StateVector:
    """Apply gates in order with one parameter each (in place)."""
    if len(gates) != len(params):
        raise DimensionError(f"{len(gates)} gates but {len(params)} parameters")
    for gate, theta in zip(gates, params):
        apply_param_gate(state, gate, float(theta))
    return state


def expectation(state: StateVector, h: PauliSum) -> float:
    """<state| h |state> for a hermitian Pauli sum."""
    if state.n_qubits != h.n_qubits:
        raise DimensionError("qubit counts differ")
    if not h.is_hermitian():
        raise ContractError("expectation requires a hermitian operator")
    h_state = apply_pauli_sum(state, h)
    value = complex(np.vdot(state.amplitudes, h_state.amplitudes))
    if abs(value.imag) > NORM_TOL:
        raise ContractError(f"expectation has imaginary residue {value.imag:.3e}")
    return value.real


def adjoint_gradient(
    init: StateVector,
    circuit: list[ParamGate],
    params: np.ndarray,
    h: PauliSum,
) -> tuple[float, np.ndarray]:
    """Energy and exact gradient of <H> over all circuit parameters.

    One forward sweep builds the evolved ket; one backward sweep walks gate
    inverses over both the ket and the H-projected bra, accumulating
    d<H>/d theta_j = 2 Re <bra_j| i sign_j G_j |ket_j>.  Costs O(L) gate
    applications total.
    """
    params = np.asarray(params, dtype=float)
    if len(circuit) != params.size:
        raise DimensionError(f"{len(circuit)} gates but {params.size} parameters")
    ket = init.copy()
    apply_circuit(ket, circuit, params)
    bra = apply_pauli_sum(ket, h)
    value = complex(np.vdot(ket.amplitudes, bra.amplitudes))
    if abs(value.imag) > NORM_TOL:
        raise ContractError(f"energy has imaginary residue {value.imag:.3e}")
    energy = value.real

    grad = np.zeros(params.size)
    for j in range(len(circuit) - 1, -1, -1):
        gate = circuit[j]
        g_ket = apply_pauli_sum(ket, gate.generator)
        overlap = complex(np.vdot(bra.amplitudes, g_ket.amplitudes))
        grad[j] = -2.0 * gate.sign * overlap.imag
        apply_param_gate(ket, gate, -params[j])
        apply_param_gate(bra, gate, -params[j])
    return energy, grad
