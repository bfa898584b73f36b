#!/usr/bin/env python3
# Heisenberg models: the all-to-one pair ansatz on a chain, and the kagome
# patch geometries with their bond lists.

from slicevqe.ansatz import build_heisenberg_ansatz, neel_state
from slicevqe.models import (
    HeisenbergParams,
    LatticeSpec,
    build_heisenberg,
    kagome_edges,
    kagome_site_coordinates,
)
from slicevqe.optimizer import count_report, run_standard_vqe
from slicevqe.oracle import ground_space
from slicevqe.states import expectation

# chain: the Neel state scores the classical bond energy, the single-layer
# ansatz recovers most of the quantum correlation energy
lat = LatticeSpec("chain", 1, 6)
h = build_heisenberg(lat, HeisenbergParams(J=1.0))
neel = neel_state(6)
oracle = ground_space(h)
print(f"chain-6: Neel energy {expectation(neel, h):.3f}, exact {oracle.energy:.6f}")

circuit = build_heisenberg_ansatz(6, 1)
res = run_standard_vqe(h, circuit, neel, gtol=1e-5, oracle=oracle)
print(f"chain-6 single layer: energy={res.energy:.6f} fidelity={res.fidelity:.6f} "
      f"evals={count_report(res.trace).cost_evals}")

# kagome patches: hexagon plus outer sites on alternating edges
for sites in (9, 10, 11):
    edges = kagome_edges(sites)
    print(f"\nkagome-{sites}: {len(edges)} bonds")
    coords = kagome_site_coordinates(sites)
    for i, (x, y) in enumerate(coords):
        print(f"  site {i:2d} at ({x:+.3f}, {y:+.3f})")

lat9 = LatticeSpec("kagome", 1, 9)
h9 = build_heisenberg(lat9, HeisenbergParams(J=1.0))
gs9 = ground_space(h9)
print(f"\nkagome-9 exact ground energy: {gs9.energy:.6f} "
      f"(multiplicity {gs9.multiplicity})")
