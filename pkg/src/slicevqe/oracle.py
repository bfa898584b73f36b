"""Exact ground-space computation and degeneracy-safe fidelity.

Dense path (up to 14 qubits): LAPACK Hermitian solve of the lowest block of
the spectrum, widened until the whole near-degenerate ground window is
captured.  Iterative path (above 14 qubits): implicitly restarted Lanczos
with full reorthogonalization (ARPACK) on a matrix-free Pauli application,
restarted with a growing block until the window is resolved; capped at 5000
matrix-vector products.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .errors import CapacityError, ConvergenceError
from .paulis import PauliSum, hermitian_check, to_dense
from .states import STATEVECTOR_QUBIT_CAP, StateVector, apply_pauli_sum

DENSE_PATH_CAP = 14
GROUND_WINDOW = 1e-8  # eigenvalues within this of the minimum join the space
RESIDUAL_TOL = 1e-7
MATVEC_CAP = 5000


@dataclass(frozen=True)
class GroundSpace:
    """Lowest eigenvalue with an orthonormal basis of its eigenspace."""

    energy: float
    basis: tuple[StateVector, ...]
    multiplicity: int

    def basis_matrix(self) -> np.ndarray:
        return np.column_stack([b.amplitudes for b in self.basis])


def _collect_window(w: np.ndarray, v: np.ndarray, n_qubits: int) -> GroundSpace:
    inside = w <= w[0] + GROUND_WINDOW
    vecs = v[:, inside]
    # re-orthonormalize; eigensolver output is already near-orthonormal
    q, _ = np.linalg.qr(vecs)
    basis = tuple(StateVector(n_qubits, q[:, i].astype(complex)) for i in range(q.shape[1]))
    return GroundSpace(energy=float(w[0]), basis=basis, multiplicity=len(basis))


def _check_residuals(h: PauliSum, gs: GroundSpace) -> None:
    for b in gs.basis:
        hv = apply_pauli_sum(b, h)
        residual = float(np.linalg.norm(hv.amplitudes - gs.energy * b.amplitudes))
        if residual > RESIDUAL_TOL:
            raise ConvergenceError(
                f"ground vector residual {residual:.3e} exceeds {RESIDUAL_TOL}"
            )


def _ground_space_dense(h: PauliSum) -> GroundSpace:
    mat = to_dense(h)
    dim = mat.shape[0]
    k = min(dim, 8)
    while True:
        w, v = scipy.linalg.eigh(mat, subset_by_index=(0, k - 1))
        if k == dim or w[-1] > w[0] + GROUND_WINDOW:
            break
        k = min(dim, 2 * k)
    return _collect_window(w, v, h.n_qubits)


def _ground_space_lanczos(h: PauliSum) -> GroundSpace:
    n = h.n_qubits
    dim = 1 << n
    counter = {"matvecs": 0}

    def matvec(x: np.ndarray) -> np.ndarray:
        counter["matvecs"] += 1
        if counter["matvecs"] > MATVEC_CAP:
            raise ConvergenceError(
                f"Lanczos exceeded {MATVEC_CAP} matrix-vector products"
            )
        state = StateVector(n, np.ascontiguousarray(x.reshape(dim)))
        return apply_pauli_sum(state, h).amplitudes

    op = scipy.sparse.linalg.LinearOperator((dim, dim), matvec=matvec, dtype=complex)
    v0 = np.random.default_rng(1905).standard_normal(dim)  # deterministic start
    k = 2
    while True:
        try:
            w, v = scipy.sparse.linalg.eigsh(op, k=k, which="SA", v0=v0, tol=0)
        except scipy.sparse.linalg.ArpackNoConvergence as exc:
            raise ConvergenceError(f"ARPACK did not converge: {exc}") from exc
        order = np.argsort(w)
        w, v = w[order], v[:, order]
        if w[-1] > w[0] + GROUND_WINDOW or k >= min(dim - 1, 32):
            break
        k = min(2 * k, dim - 1)
    return _collect_window(w, v, n)


def ground_space(h: PauliSum, method: str = "auto") -> GroundSpace:
    """Lowest eigenvalue and an orthonormal basis of its eigenspace.

    `method` is "auto" (dense up to 14 qubits, Lanczos beyond), "dense", or
    "lanczos"; the explicit values exist for cross-validation in tests.
    """
    hermitian_check(h, "Hamiltonian")
    if h.n_qubits > STATEVECTOR_QUBIT_CAP:
        raise CapacityError(f"ground_space capped at {STATEVECTOR_QUBIT_CAP} qubits")
    if method == "auto":
        method = "dense" if h.n_qubits <= DENSE_PATH_CAP else "lanczos"
    if method == "dense":
        if h.n_qubits > DENSE_PATH_CAP:
            raise CapacityError(f"dense path capped at {DENSE_PATH_CAP} qubits")
        gs = _ground_space_dense(h)
    elif method == "lanczos":
        gs = _ground_space_lanczos(h)
    else:
        raise ValueError(f"unknown method {method!r}")
    _check_residuals(h, gs)
    return gs


def fidelity(state: StateVector, gs: GroundSpace) -> float:
    """Squared norm of the projection of `state` onto the ground space."""
    return float(
        sum(abs(np.vdot(b.amplitudes, state.amplitudes)) ** 2 for b in gs.basis)
    )
