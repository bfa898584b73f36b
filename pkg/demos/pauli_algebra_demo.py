#!/usr/bin/env python3
# Walkthrough of the bitmask Pauli algebra: products, phases, commutation,
# and dense materialization for small oracles.

import numpy as np

from slicevqe.paulis import PauliString, PauliSum, commutes, multiply, to_dense

# single-qubit products carry exact unit phases
x = PauliString.from_letters("X")
y = PauliString.from_letters("Y")
print("X * Y =", multiply(x, y))            # +iZ
print("Y * X =", multiply(y, x))            # -iZ

# multi-qubit words multiply position by position
a = PauliString.from_letters("XZ")
b = PauliString.from_letters("ZZ")
print("XZ * ZZ =", multiply(a, b))          # -i YI

# commutation is a parity count over anticommuting positions
print("XX vs ZZ commute:", commutes(PauliString.from_letters("XX"),
                                    PauliString.from_letters("ZZ")))
print("XI vs ZI commute:", commutes(PauliString.from_letters("XI"),
                                    PauliString.from_letters("ZI")))

# sums are canonical: duplicates merge, phases fold into coefficients
bond = PauliSum(2, [
    (1.0, PauliString.from_letters("XX")),
    (1.0, PauliString.from_letters("YY")),
    (1.0, PauliString.from_letters("ZZ")),
])
print("\nHeisenberg bond, text form:")
print(bond.to_text())

# dense materialization feeds the exact-diagonalization oracles
evals = np.linalg.eigvalsh(to_dense(bond))
print("bond eigenvalues:", np.round(evals, 9))   # singlet at -3, triplet at +1
