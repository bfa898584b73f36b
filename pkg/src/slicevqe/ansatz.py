"""Ansatz circuits and initial states.

Two circuit families are provided:

* the Hubbard Hamiltonian-variational ansatz: per layer one gate
  exp(+i theta H_alpha) per commuting term group, the interaction group
  applied first and the kinetic groups following in lattice-class order
  (the adiabatic product form lists the interaction factor last, i.e. it
  acts first on the state);
* the all-to-one Heisenberg ansatz: for every qubit pair two rotations
  exp(-i theta sigma^y_k sigma^x_l), with sigma^z on the last qubit appended
  whenever the pair does not contain it.

Initial states are the Neel product state and the non-interacting Hubbard
ground state (Slater determinant) prepared by a nearest-neighbour
Givens-rotation network.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DegenerateFermiLevelError
from .models import HubbardParams, LatticeSpec, TermGroups, snake_index
from .paulis import PauliString, PauliSum
from .states import ParamGate, StateVector, apply_param_gate, basis_state_from_index

FERMI_DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class AnsatzBlock:
    """Contiguous gate interval [start, stop) of an AnsatzCircuit."""

    start: int
    stop: int

    def __post_init__(self):
        if not 0 <= self.start < self.stop:
            raise ValueError(f"bad block bounds [{self.start}, {self.stop})")

    @property
    def param_count(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class AnsatzCircuit:
    """Ordered one-parameter gates with per-layer boundaries.

    Every layer repeats the same generator sequence with fresh parameters,
    so `n_params == len(gates)`.
    """

    gates: tuple[ParamGate, ...]
    layer_boundaries: tuple[int, ...]
    n_layers: int

    def __post_init__(self):
        if self.n_layers < 0:
            raise ValueError("n_layers must be non-negative")
        if len(self.layer_boundaries) != self.n_layers:
            raise ValueError("one boundary index per layer required")
        if self.n_layers:
            per_layer = len(self.gates) // self.n_layers
            expected = tuple(k * per_layer for k in range(self.n_layers))
            if len(self.gates) % self.n_layers or self.layer_boundaries != expected:
                raise ValueError("layers must tile the gate list evenly")

    @property
    def n_params(self) -> int:
        return len(self.gates)

    @property
    def gates_per_layer(self) -> int:
        if self.n_layers == 0:
            return 0
        return len(self.gates) // self.n_layers

    def summary(self, blocks: "list[AnsatzBlock] | None" = None) -> list[dict]:
        """Per-gate generator/layer/block listing used by fixtures and exports."""
        per_layer = self.gates_per_layer or 1
        block_of = {}
        if blocks:
            for b_idx, block in enumerate(blocks):
                for g_idx in range(block.start, block.stop):
                    block_of[g_idx] = b_idx
        out = []
        for idx, gate in enumerate(self.gates):
            gen = "; ".join(
                f"{c.real:g}*{s.letters}" for c, s in gate.generator.terms()
            )
            out.append(
                {
                    "index": idx,
                    "layer": idx // per_layer,
                    "block": block_of.get(idx),
                    "label": gate.label,
                    "generator": gen,
                }
            )
        return out


def _layered(gates_one_layer: list[ParamGate], n_layers: int) -> AnsatzCircuit:
    gates = tuple(gates_one_layer) * n_layers
    boundaries = tuple(k * len(gates_one_layer) for k in range(n_layers))
    return AnsatzCircuit(gates=gates, layer_boundaries=boundaries, n_layers=n_layers)


def build_hva(groups: TermGroups, n_layers: int) -> AnsatzCircuit:
    """Hamiltonian-variational ansatz over commuting term groups.

    Gate order per layer: the interaction group acts first, kinetic groups
    follow in their lattice-class order; every gate is exp(+i theta H_alpha).
    """
    if n_layers < 1:
        raise ValueError("n_layers must be at least 1")
    if not groups.groups:
        raise ContractError("term groups must be non-empty")
    order = list(range(len(groups.groups)))
    if "interaction" in groups.labels:
        inter = groups.labels.index("interaction")
        order = [inter] + [i for i in order if i != inter]
    layer = [
        ParamGate(groups.groups[i], sign=1, label=groups.labels[i]) for i in order
    ]
    return _layered(layer, n_layers)


def build_heisenberg_ansatz(n_sites: int, n_layers: int) -> AnsatzCircuit:
    """All-to-one pair ansatz: two exp(-i theta Y_k X_l [Z_last]) per pair.

    Pairs (l, k) are enumerated with l descending from n_sites-1 to 1 and k
    descending from n_sites to l+1 (1-based); each pair emits the (l, k)
    rotation then the (k, l) rotation.  Whenever neither index is the last
    qubit, sigma^z on the last qubit joins the generator.
    """
    if n_sites < 2:
        raise ValueError("need at least two sites")
    if n_layers < 1:
        raise ValueError("n_layers must be at least 1")
    last = n_sites - 1  # 0-based index of the ansatz's fixed rotation qubit
    layer = []
    for l in range(n_sites - 1, 0, -1):  # noqa: E741 - matches the pair notation
        for k in range(n_sites, l, -1):
            for first, second in ((l, k), (k, l)):
                ops = {first - 1: "Y", second - 1: "X"}
                if last + 1 not in (first, second):
                    ops[last] = "Z"
                gen = PauliSum(n_sites, [(1.0, PauliString.from_ops(n_sites, ops))])
                layer.append(
                    ParamGate(gen, sign=-1, label=f"pair-{first}-{second}")
                )
    return _layered(layer, n_layers)


def neel_state(n_sites: int) -> StateVector:
    """Alternating spin product state; site 0 is spin up (bit 0 clear)."""
    if n_sites < 1:
        raise ValueError("need at least one site")
    index = sum(1 << j for j in range(1, n_sites, 2))
    return basis_state_from_index(n_sites, index)


def _adjacent_givens_decomposition(v: np.ndarray) -> list[tuple[int, float]]:
    """Decompose an orthogonal matrix as V D = R(p1, a1) ... R(pK, aK).

    R(p, a) embeds [[cos a, sin a], [-sin a, cos a]] in rows/columns
    (p, p+1); D is a +-1 diagonal, dropped since it only flips Slater
    determinant signs.  The list is in product order (leftmost factor
    first), so a circuit applies it right to left.
    """
    w = v.copy()
    s = w.shape[0]
    rotations: list[tuple[int, float]] = []
    for col in range(s):
        for row in range(s - 1, col, -1):
            if abs(w[row, col]) < 1e-15:
                continue
            # rotate rows (row-1, row) to zero w[row, col]
            a, b = w[row - 1, col], w[row, col]
            angle = np.arctan2(b, a)
            c, sn = np.cos(angle), np.sin(angle)
            upper = c * w[row - 1] + sn * w[row]
            lower = -sn * w[row - 1] + c * w[row]
            w[row - 1], w[row] = upper, lower
            rotations.append((row - 1, -angle))
    if not np.allclose(np.abs(np.diag(w)), 1.0, atol=1e-10):
        raise ContractError("Givens elimination did not reach diagonal form")
    # elimination gives R(pK, aK)^T ... R(p1, a1)^T V = D, i.e. the negated
    # angles satisfy R(p1, -a1) ... R(pK, -aK) = V D
    return rotations


def givens_gate(n_qubits: int, p: int, angle_sign: int = 1) -> ParamGate:
    """Two-qubit rotation generated by (X_p Y_{p+1} - Y_p X_{p+1}) / 2."""
    gen = PauliSum(
        n_qubits,
        [
            (0.5 * angle_sign, PauliString.from_ops(n_qubits, {p: "X", p + 1: "Y"})),
            (-0.5 * angle_sign, PauliString.from_ops(n_qubits, {p: "Y", p + 1: "X"})),
        ],
    )
    return ParamGate(gen, sign=1, label=f"givens-{p}")


def hopping_matrix(lattice: LatticeSpec, t: float) -> np.ndarray:
    """Single-particle hopping matrix over snake-ordered sites."""
    s = lattice.n_sites
    mat = np.zeros((s, s))
    for (ra, ca), (rb, cb) in lattice.grid_edges():
        i = snake_index(ra, ca, "up", lattice)
        j = snake_index(rb, cb, "up", lattice)
        mat[i, j] = mat[j, i] = -t
    return mat


def noninteracting_ground_state(lattice: LatticeSpec, p: HubbardParams) -> StateVector:
    """Slater determinant of the U=0 ground state, built by Givens rotations.

    Per spin sector the n_sigma lowest orbitals of the hopping matrix are
    occupied: the first n_sigma snake qubits of the sector are filled and a
    nearest-neighbour Givens network rotates them into the orbital basis.
    Raises DegenerateFermiLevelError when the filling cuts through a
    degenerate single-particle level.
    """
    s = lattice.n_sites
    n = 2 * s
    if p.n_up > s or p.n_down > s:
        raise ValueError("sector filling exceeds site count")
    energies, orbitals = np.linalg.eigh(hopping_matrix(lattice, p.t))
    for count in (p.n_up, p.n_down):
        if 0 < count < s and energies[count] - energies[count - 1] < FERMI_DEGENERACY_TOL:
            raise DegenerateFermiLevelError(
                f"orbitals {count} and {count + 1} are degenerate "
                f"({energies[count - 1]:.9f} vs {energies[count]:.9f}); "
                "perturb t or change the filling"
            )
    index = ((1 << p.n_up) - 1) | (((1 << p.n_down) - 1) << s)
    state = basis_state_from_index(n, index)
    rotations = _adjacent_givens_decomposition(orbitals)
    for offset, count in ((0, p.n_up), (s, p.n_down)):
        if count in (0, s):
            continue  # empty or full sector: rotations act trivially
        for pq, angle in reversed(rotations):
            apply_param_gate(state, givens_gate(n, offset + pq), angle)
    return state


def slice_circuit(circuit: AnsatzCircuit, slices_per_layer: int) -> list[AnsatzBlock]:
    """Cut every layer into contiguous blocks of near-equal gate count.

    Earlier blocks absorb the remainder; blocks tile the circuit exactly.
    """
    per_layer = circuit.gates_per_layer
    if not 1 <= slices_per_layer <= per_layer:
        raise ValueError(
            f"slices_per_layer must be in 1..{per_layer}, got {slices_per_layer}"
        )
    base, rem = divmod(per_layer, slices_per_layer)
    sizes = [base + 1 if i < rem else base for i in range(slices_per_layer)]
    blocks = []
    for start_layer in circuit.layer_boundaries:
        cursor = start_layer
        for size in sizes:
            blocks.append(AnsatzBlock(cursor, cursor + size))
            cursor += size
    return blocks
