"""Independent dense oracles used across the test suite.

Everything here is built from first principles (Kronecker products over
letter matrices, occupation-number fermionic operators) without touching the
package's bitmask or statevector code paths, so agreement is meaningful.
"""

from __future__ import annotations

import functools

import numpy as np

LETTER_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_word(letters: str, phase: complex = 1.0) -> np.ndarray:
    """Kron product of letter matrices; letters[j] = qubit j, qubit 0 = LSB."""
    mats = [LETTER_MATS[c] for c in reversed(letters)]
    return phase * functools.reduce(np.kron, mats)


def dense_sum(n_qubits: int, terms) -> np.ndarray:
    """Σ coeff * dense_word for (coeff, letters) pairs."""
    acc = np.zeros((2**n_qubits, 2**n_qubits), dtype=complex)
    for coeff, letters in terms:
        acc += coeff * dense_word(letters)
    return acc


def pauli_sum_dense(p) -> np.ndarray:
    """Dense matrix of a package PauliSum via the kron oracle (not to_dense)."""
    return dense_sum(p.n_qubits, [(c, s.letters) for c, s in p.terms()])


# --- occupation-number fermionic construction ------------------------------
#
# Fock basis: integer b encodes occupations, mode m occupied iff bit m set.
# c_m |b> = (-1)^{popcount(b & (2^m - 1))} |b ^ 2^m>   if bit m set, else 0.


def annihilation_matrix(n_modes: int, mode: int) -> np.ndarray:
    dim = 1 << n_modes
    mat = np.zeros((dim, dim), dtype=complex)
    lower = (1 << mode) - 1
    for b in range(dim):
        if b & (1 << mode):
            sign = -1.0 if (bin(b & lower).count("1") % 2) else 1.0
            mat[b ^ (1 << mode), b] = sign
    return mat


def fermionic_hubbard_dense(edges, n_sites: int, t: float, u: float) -> np.ndarray:
    """Hubbard Hamiltonian assembled directly from ladder matrices.

    Mode order: up modes 0..S-1 then down modes S..2S-1 (spectrum does not
    depend on this choice).  `edges` are (site_a, site_b) pairs.
    """
    n_modes = 2 * n_sites
    dim = 1 << n_modes
    c = [annihilation_matrix(n_modes, m) for m in range(n_modes)]
    cd = [m.conj().T for m in c]
    ham = np.zeros((dim, dim), dtype=complex)
    for a, b in edges:
        for spin_offset in (0, n_sites):
            i, j = a + spin_offset, b + spin_offset
            ham += -t * (cd[i] @ c[j] + cd[j] @ c[i])
    for s in range(n_sites):
        n_up = cd[s] @ c[s]
        n_dn = cd[s + n_sites] @ c[s + n_sites]
        ham += u * (n_up @ n_dn)
    return ham
