#!/usr/bin/env python3
# Fermi-Hubbard model on a 2x3 rectangle: snake-ordered Jordan-Wigner
# mapping, commuting term groups, and a spectrum cross-check on a chain.

import numpy as np

from slicevqe.models import (
    HubbardParams,
    LatticeSpec,
    build_hubbard,
    group_hubbard_terms,
    jw_anticommutation_check,
    snake_index,
)
from slicevqe.paulis import to_dense

lat = LatticeSpec("rectangle", 2, 3)

# the snake path walks row 0 left-to-right, row 1 right-to-left; spin-down
# modes repeat the path with offset S
print("snake indices (row, col) -> up/down qubit:")
for r in range(2):
    for c in range(3):
        up = snake_index(r, c, "up", lat)
        down = snake_index(r, c, "down", lat)
        print(f"  ({r},{c}) -> {up:2d} / {down:2d}")

h = build_hubbard(lat, HubbardParams(t=1.0, U=4.0))
print(f"\n2x3 Hubbard: {h.n_qubits} qubits, {h.n_terms} Pauli terms")

# a vertical hop spans non-adjacent snake indices and carries a Z string
vertical = [s.letters for _, s in h.terms() if s.letters.startswith("XZ")]
print("vertical hop with Z-string:", vertical[0])

groups = group_hubbard_terms(h, lat)
print("\nterm groups:")
for label, group in zip(groups.labels, groups.groups):
    print(f"  {label:16s} {group.n_terms:3d} terms")

# ladder operators satisfy the canonical anticommutation relations
chain = LatticeSpec("chain", 1, 3)
print("\nJW anticommutation check on 1x3:", jw_anticommutation_check(chain))

# spectrum of the qubit Hamiltonian on the 1x2 chain, sector by inspection
h12 = build_hubbard(LatticeSpec("chain", 1, 2), HubbardParams(t=1.0, U=4.0))
evals = np.linalg.eigvalsh(to_dense(h12))
closed_form = (4.0 - np.sqrt(32.0)) / 2
print(f"1x2 spectrum head: {np.round(evals[:4], 6)}")
print(f"half-filling ground energy (closed form): {closed_form:.6f}")
