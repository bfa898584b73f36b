import numpy as np
import pytest

from slicevqe.errors import DegenerateFermiLevelError
from slicevqe.ansatz import (
    AnsatzBlock,
    build_heisenberg_ansatz,
    build_hva,
    hopping_matrix,
    neel_state,
    noninteracting_ground_state,
    slice_circuit,
)
from slicevqe.models import (
    HeisenbergParams,
    HubbardParams,
    LatticeSpec,
    build_heisenberg,
    build_hubbard,
    group_hubbard_terms,
)
from slicevqe.paulis import to_dense
from slicevqe.states import apply_circuit, expectation


def hubbard_groups(lat, t=1.0, u=4.0):
    return group_hubbard_terms(build_hubbard(lat, HubbardParams(t=t, U=u)), lat)


def random_state(rng, n):
    from slicevqe.states import StateVector

    amps = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    amps /= np.linalg.norm(amps)
    return StateVector(n, amps)


def test_build_hva_counts():
    groups = hubbard_groups(LatticeSpec("chain", 1, 6))
    circ = build_hva(groups, n_layers=2)
    assert circ.n_params == 6
    assert len(circ.gates) == 6
    assert circ.layer_boundaries == (0, 3)

    groups23 = hubbard_groups(LatticeSpec("rectangle", 2, 3))
    circ23 = build_hva(groups23, n_layers=4)
    assert circ23.n_params == 20  # 5 groups x 4 layers


def test_build_hva_interaction_acts_first():
    groups = hubbard_groups(LatticeSpec("chain", 1, 4))
    circ = build_hva(groups, n_layers=2)
    per_layer = circ.gates_per_layer
    for k in range(circ.n_layers):
        labels = [g.label for g in circ.gates[k * per_layer : (k + 1) * per_layer]]
        assert labels[0] == "interaction"
        assert labels[1:] == ["even-bond", "odd-bond"]


def test_hva_identity_at_zero():
    rng = np.random.default_rng(3)
    groups = hubbard_groups(LatticeSpec("chain", 1, 3))
    circ = build_hva(groups, n_layers=2)
    state = random_state(rng, 6)
    ref = state.amplitudes.copy()
    apply_circuit(state, list(circ.gates), np.zeros(circ.n_params))
    assert np.allclose(state.amplitudes, ref, atol=1e-12)


def test_heisenberg_ansatz_three_sites_structure():
    circ = build_heisenberg_ansatz(3, 1)
    assert circ.n_params == 6
    gens = [list(g.generator.terms())[0][1].letters for g in circ.gates]
    # pairs (2,3), (1,3), (1,2); sigma^z on qubit 3 only for the (1,2) pair
    assert gens == ["IYX", "IXY", "YIX", "XIY", "YXZ", "XYZ"]
    assert all(g.sign == -1 for g in circ.gates)


def test_heisenberg_ansatz_param_count():
    circ = build_heisenberg_ansatz(8, 1)
    assert circ.n_params == 56  # 8 * 7
    circ2 = build_heisenberg_ansatz(4, 3)
    assert circ2.n_params == 36
    assert circ2.layer_boundaries == (0, 12, 24)


def test_heisenberg_ansatz_identity_at_zero():
    rng = np.random.default_rng(5)
    circ = build_heisenberg_ansatz(4, 2)
    state = random_state(rng, 4)
    ref = state.amplitudes.copy()
    apply_circuit(state, list(circ.gates), np.zeros(circ.n_params))
    assert np.allclose(state.amplitudes, ref, atol=1e-12)


def test_layer_homogeneity():
    groups = hubbard_groups(LatticeSpec("rectangle", 2, 2))
    circ = build_hva(groups, n_layers=3)
    per = circ.gates_per_layer
    first = [g.generator for g in circ.gates[:per]]
    for k in range(1, circ.n_layers):
        layer = [g.generator for g in circ.gates[k * per : (k + 1) * per]]
        assert layer == first

    hcirc = build_heisenberg_ansatz(5, 3)
    per = hcirc.gates_per_layer
    first = [g.generator for g in hcirc.gates[:per]]
    for k in range(1, 3):
        layer = [g.generator for g in hcirc.gates[k * per : (k + 1) * per]]
        assert layer == first


def test_neel_state_examples():
    s2 = neel_state(2)
    assert s2.amplitudes[2] == 1.0  # |01> with site 1 set
    s4 = neel_state(4)
    assert s4.amplitudes[10] == 1.0  # sites 1 and 3 set -> index 10

    h = build_heisenberg(LatticeSpec("chain", 1, 6), HeisenbergParams(J=1.0))
    assert expectation(neel_state(6), h) == pytest.approx(-5.0)  # -J per bond


def test_noninteracting_ground_state_two_site():
    lat = LatticeSpec("chain", 1, 2)
    p = HubbardParams(t=1.0, U=4.0, n_up=1, n_down=1)
    state = noninteracting_ground_state(lat, p)
    # (|01> + |10>)/sqrt(2) in each sector
    expected = np.zeros(16)
    for up_bit in (1, 2):
        for down_bit in (4, 8):
            expected[up_bit | down_bit] = 0.5
    assert np.allclose(np.abs(state.amplitudes), expected, atol=1e-12)
    h0 = build_hubbard(lat, HubbardParams(t=1.0, U=0.0))
    assert expectation(state, h0) == pytest.approx(-2.0, abs=1e-12)


@pytest.mark.parametrize(
    "lat,nu,nd",
    [
        (LatticeSpec("chain", 1, 3), 1, 1),
        (LatticeSpec("chain", 1, 4), 2, 2),
        (LatticeSpec("chain", 1, 5), 2, 2),
        (LatticeSpec("rectangle", 2, 3), 3, 3),
    ],
)
def test_noninteracting_state_reaches_orbital_energy(lat, nu, nd):
    p = HubbardParams(t=1.0, U=4.0, n_up=nu, n_down=nd)
    state = noninteracting_ground_state(lat, p)
    w = np.linalg.eigvalsh(hopping_matrix(lat, 1.0))
    target = w[:nu].sum() + w[:nd].sum()
    h0 = build_hubbard(lat, HubbardParams(t=1.0, U=0.0))
    assert expectation(state, h0) == pytest.approx(target, abs=1e-9)
    # and it is the sector ground: compare against dense diagonalization
    # restricted to the particle sector
    dense = to_dense(h0)
    n = 2 * lat.n_sites
    up_mask = (1 << lat.n_sites) - 1
    idx = [
        i
        for i in range(1 << n)
        if bin(i & up_mask).count("1") == nu
        and bin((i >> lat.n_sites) & up_mask).count("1") == nd
    ]
    sector_min = np.linalg.eigvalsh(dense[np.ix_(idx, idx)])[0]
    assert expectation(state, h0) == pytest.approx(sector_min, abs=1e-9)


def test_noninteracting_state_particle_numbers():
    from slicevqe.models import number_operator

    lat = LatticeSpec("chain", 1, 4)
    p = HubbardParams(t=1.0, U=4.0, n_up=2, n_down=1)
    state = noninteracting_ground_state(lat, p)
    n_up = number_operator(8, [0, 1, 2, 3])
    n_dn = number_operator(8, [4, 5, 6, 7])
    assert expectation(state, n_up) == pytest.approx(2.0, abs=1e-10)
    assert expectation(state, n_dn) == pytest.approx(1.0, abs=1e-10)


def test_degenerate_fermi_level_raises():
    # 2x2 half filling: single-particle levels {-2, 0, 0, 2}; filling 2 cuts
    # through the doubly degenerate zero level
    lat = LatticeSpec("rectangle", 2, 2)
    p = HubbardParams(t=1.0, U=4.0, n_up=2, n_down=2)
    with pytest.raises(DegenerateFermiLevelError):
        noninteracting_ground_state(lat, p)


def test_slice_circuit_even_split():
    circ = build_heisenberg_ansatz(8, 1)  # 56 gates
    blocks = slice_circuit(circ, 2)
    assert [b.param_count for b in blocks] == [28, 28]
    assert blocks[0].start == 0 and blocks[-1].stop == 56


def test_slice_circuit_remainder_first():
    groups = hubbard_groups(LatticeSpec("chain", 1, 6))
    circ = build_hva(groups, n_layers=2)  # 3 gates per layer
    blocks = slice_circuit(circ, 2)
    assert [b.param_count for b in blocks] == [2, 1, 2, 1]

    circ6 = build_heisenberg_ansatz(3, 1)  # 6 gates per layer
    blocks4 = slice_circuit(circ6, 4)
    assert [b.param_count for b in blocks4] == [2, 2, 1, 1]


def test_slice_circuit_tiles_exactly():
    circ = build_heisenberg_ansatz(5, 2)
    for s in (1, 2, 3, 5, 7):
        blocks = slice_circuit(circ, s)
        cursor = 0
        for b in blocks:
            assert b.start == cursor
            cursor = b.stop
        assert cursor == circ.n_params
        assert len(blocks) == 2 * s


def test_slice_circuit_single_slice_is_one_block_per_layer():
    groups = hubbard_groups(LatticeSpec("chain", 1, 4))
    circ = build_hva(groups, n_layers=1)
    blocks = slice_circuit(circ, 1)
    assert blocks == [AnsatzBlock(0, circ.n_params)]


def test_slice_circuit_range_validation():
    groups = hubbard_groups(LatticeSpec("chain", 1, 4))
    circ = build_hva(groups, n_layers=1)
    with pytest.raises(ValueError):
        slice_circuit(circ, 0)
    with pytest.raises(ValueError):
        slice_circuit(circ, circ.gates_per_layer + 1)


def test_circuit_summary_export():
    import json

    groups = hubbard_groups(LatticeSpec("chain", 1, 2))
    circ = build_hva(groups, n_layers=2)
    rows = circ.summary()
    assert len(rows) == circ.n_params
    assert rows[0]["layer"] == 0 and rows[-1]["layer"] == 1
    assert rows[0]["label"] == "interaction"
    # block indices appear when a slicing is supplied, and the export is JSON-able
    blocks = slice_circuit(circ, 2)  # two gates per layer -> singleton blocks
    rows = circ.summary(blocks)
    assert [r["block"] for r in rows] == [0, 1, 2, 3]
    json.dumps(rows)
