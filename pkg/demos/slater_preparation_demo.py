#!/usr/bin/env python3
# Preparing the non-interacting Hubbard ground state: orbital occupation plus
# a nearest-neighbour Givens-rotation network, verified against the orbital
# energy sum.

import numpy as np

from slicevqe.ansatz import hopping_matrix, noninteracting_ground_state
from slicevqe.models import HubbardParams, LatticeSpec, build_hubbard, number_operator
from slicevqe.states import expectation

lat = LatticeSpec("chain", 1, 5)
p = HubbardParams(t=1.0, U=4.0, n_up=2, n_down=3)

energies = np.linalg.eigvalsh(hopping_matrix(lat, p.t))
print("single-particle levels:", np.round(energies, 6))
target = energies[: p.n_up].sum() + energies[: p.n_down].sum()
print(f"Slater target energy (2 up + 3 down): {target:.9f}")

state = noninteracting_ground_state(lat, p)
h0 = build_hubbard(lat, HubbardParams(t=1.0, U=0.0))
print(f"prepared state energy under U=0:      {expectation(state, h0):.9f}")

n = 2 * lat.n_sites
n_up = number_operator(n, list(range(lat.n_sites)))
n_dn = number_operator(n, list(range(lat.n_sites, n)))
print(f"particle numbers: up={expectation(state, n_up):.10f} "
      f"down={expectation(state, n_dn):.10f}")

# the same preparation fails loudly on a degenerate Fermi level
from slicevqe.errors import DegenerateFermiLevelError

try:
    noninteracting_ground_state(
        LatticeSpec("rectangle", 2, 2), HubbardParams(t=1.0, U=4.0, n_up=2, n_down=2)
    )
except DegenerateFermiLevelError as exc:
    print("\n2x2 half filling:", exc)
