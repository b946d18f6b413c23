"""Codes, measurement-free gadgets, ideal decoding."""

import itertools

import numpy as np
import pytest

from _gadgets import apply_pauli_gates, data_fidelity, ec_frame, encoded, prepared_tableau, run_teleport
from holoft.clifford.pauli import PauliString
from holoft.clifford.propagate import conjugate_through_gates
from holoft.clifford.tableau import Tableau
from holoft.codes.codes import (bs_index, code_bs9, code_qr3, correction_table, encoded_state,
                                gf2_rank, ideal_encoder, syndrome)
from holoft.codes.decode import FAIL, ideal_decode, logical_frame
from holoft.codes.execute import collapse_is_safe, run_dense, run_tableau
from holoft.codes.gadgets import (bs_ec, encode_arbitrary, ft_swap_routine, lift_gates, m_gate,
                                  prepare_logical, prepare_qr, toffoli_decomposition, vn_routine,
                                  vote_syndromes, zhalf_circuit, zquarter_circuit)
from holoft.dense import StateVector, apply_pauli, unitary
from holoft.errors import BadLevel, BadRoles, BadSites, LengthMismatch
from holoft.ir.model import GateKind

G = GateKind
SINGLE = [PauliString.on(9, {q: s}) for q in range(9) for s in "XYZ"]


# ---------------------------------------------------------------------------
# code data

@pytest.mark.parametrize("spec", [code_qr3("bitflip"), code_qr3("phaseflip"), code_bs9("standard"),
                                  code_bs9("rotated")], ids=lambda s: s.name)
def test_code_invariants(spec):
    for a, b in itertools.combinations(spec.stabilizers, 2):
        assert a.commutes(b)
    assert not spec.logical_x.commutes(spec.logical_z)
    for s in spec.stabilizers:
        assert s.commutes(spec.logical_x) and s.commutes(spec.logical_z)
        for g in spec.gauge:
            assert g.commutes(s)
    for g in spec.gauge:
        assert g.commutes(spec.logical_x) and g.commutes(spec.logical_z)


def test_bs9_counts_and_gauge_rank():
    spec = code_bs9()
    assert len(spec.stabilizers) == 4
    assert len(spec.gauge) == 12
    assert gf2_rank(list(spec.gauge) + list(spec.stabilizers)) - gf2_rank(list(spec.stabilizers)) == 8


def test_bs9_logicals_on_column_and_row():
    spec = code_bs9()
    assert spec.logical_x.support() == (0, 3, 6)
    assert spec.logical_z.support() == (0, 1, 2)
    rot = code_bs9("rotated")
    assert rot.logical_x.support() == (0, 1, 2)
    assert bs_index(1, 2, "rotated") == bs_index(2, 1)


def test_qr3_corrects_single_x():
    spec = code_qr3("bitflip")
    for q in range(3):
        assert logical_frame(spec, PauliString.on(3, {q: "X"})) == "I"


def test_correction_table_is_complete_for_bs9_singles():
    spec = code_bs9()
    for e in SINGLE:
        corr = correction_table(spec)[syndrome(spec, e)]
        assert logical_frame(spec, e) == "I"
        assert syndrome(spec, e * corr) == (0, 0, 0, 0)


# ---------------------------------------------------------------------------
# M gate

def _m_input(basis, err_block):
    """Tableau with a repetition codeword (0 or + type) and an error on one qubit."""
    gad = m_gate(basis, 1)
    t = Tableau(gad.n_qubits)
    if basis == "Z":
        for q in range(3):
            t.apply_clifford(G.H, [q])
    if err_block is not None:
        t.apply_clifford(G.X if basis == "X" else G.Z, [err_block])
    return gad, t


@pytest.mark.parametrize("basis", ["X", "Z"])
@pytest.mark.parametrize("err", [None, 0, 1, 2])
def test_m_gate_level1_exhaustive(basis, err):
    gad, t = _m_input(basis, err)
    run_tableau(gad, t, np.random.default_rng(0), collapse="none")
    sym = "Z" if basis == "X" else "X"
    for q in range(3):
        assert t.expectation(PauliString.on(gad.n_qubits, {q: sym})) == 1


def test_m_gate_input_010_gives_000():
    gad = m_gate("X", 1)
    t = Tableau(gad.n_qubits)
    t.apply_clifford(G.X, [1])
    run_tableau(gad, t, collapse="none")
    assert [t.peek_z(q) for q in range(3)] == [0, 0, 0]


@pytest.mark.parametrize("basis", ["X", "Z"])
@pytest.mark.parametrize("ab", [(1, 0), (0.6, 0.8), (1, 1j), (0.28, -0.96j)])
def test_m_gate_superposition_codewords(basis, ab):
    spec = code_qr3("bitflip" if basis == "X" else "phaseflip")
    gad = m_gate(basis, 1)
    a, b = ab
    target = encoded_state(spec, a, b)
    for err in (None, 0, 1, 2):
        sv = StateVector(3, target)
        if err is not None:
            apply_pauli(sv, PauliString.on(3, {err: "X" if basis == "X" else "Z"}))
        branches = run_dense(gad, sv)
        assert data_fidelity(branches, [0, 1, 2], target) >= 1 - 1e-8


def test_m_gate_level2_lifts_level1():
    l1, l2 = m_gate("X", 1), m_gate("X", 2)
    block_of = {q: list(range(3 * q, 3 * q + 3)) for q in range(3)}
    block_of.update({3 + j: list(range(9 + 3 * j, 12 + 3 * j)) for j in range(3)})
    lifted = lift_gates(l1.gate_list(), 3, block_of)
    key = lambda g: (g[0].token, g[1])
    assert sorted(lifted, key=key) == sorted(l2.gate_list(), key=key)


@pytest.mark.parametrize("block", range(3))
@pytest.mark.parametrize("pattern", range(1, 8))
def test_m_gate_level2_corrects_one_bad_block(block, pattern):
    gad = m_gate("X", 2)
    t = Tableau(gad.n_qubits)
    for s in range(3):
        if pattern >> s & 1:
            t.apply_clifford(G.X, [3 * block + s])
    run_tableau(gad, t, collapse="none")
    assert [t.peek_z(q) for q in range(9)] == [0] * 9


def test_m_gate_bad_level():
    with pytest.raises(BadLevel):
        m_gate("X", 0)


# ---------------------------------------------------------------------------
# voting

def test_vote_examples():
    assert vote_syndromes("101", "000", "000") == "101"
    for s in map("".join, itertools.product("01", repeat=3)):
        assert vote_syndromes(s, s, "000") == "000"
        assert vote_syndromes(s, "000", "000") == s
    with pytest.raises(LengthMismatch):
        vote_syndromes("1", "00", "11")


def test_vn_routine_matches_pure_function():
    gad = vn_routine(1)
    regs = gad.registers
    for bits in itertools.product((0, 1), repeat=9):
        t = Tableau(gad.n_qubits)
        for name, chunk in zip(("s1", "s2", "s3"), (bits[0:3], bits[3:6], bits[6:9])):
            for q, b in zip(regs[name], chunk):
                if b:
                    t.apply_clifford(G.X, [q])
        run_tableau(gad, t, collapse="none")
        strs = ["".join(map(str, bits[i:i + 3])) for i in (0, 3, 6)]
        s4 = vote_syndromes(*strs)
        assert "".join(str(t.peek_z(q)) for q in regs["s4"]) == s4
        d = [int(s4[i]) ^ int(s4[(i + 1) % 3]) for i in range(3)]
        assert [t.peek_z(q) for q in regs["d"]] == d


# ---------------------------------------------------------------------------
# Bacon-Shor EC

@pytest.mark.parametrize("orientation", ["standard", "rotated"])
@pytest.mark.parametrize("basis", ["zero", "plus"])
def test_bs_ec_corrects_single_paulis(orientation, basis):
    spec, gad = code_bs9(orientation), bs_ec(1, orientation)
    perm = [bs_index(i, j, orientation) for i in range(3) for j in range(3)]
    for e in SINGLE:
        e = PauliString(e.x[perm], e.z[perm])
        frame, t = ec_frame(gad, spec, basis, e)
        assert frame == "I", e.label()
        for s in spec.stabilizers:
            assert t.expectation(s.embed(gad.n_qubits, gad.data_sites)) == 1


def test_bs_ec_gauge_operator_is_no_error():
    spec, gad = code_bs9(), bs_ec(1)
    xx = PauliString.on(9, {0: "X", 1: "X"})
    frame, _ = ec_frame(gad, spec, "plus", xx)
    assert frame == "I"


def test_bs_ec_zx_order_also_corrects():
    spec, gad = code_bs9(), bs_ec(1, order="ZX")
    for e in SINGLE[::4]:
        for basis in ("zero", "plus"):
            assert ec_frame(gad, spec, basis, e)[0] == "I"


def test_bs_ec_level_checks():
    with pytest.raises(BadLevel):
        bs_ec(2)


def test_gadgets_are_collapse_safe():
    for gad in (bs_ec(1), bs_ec(1, "rotated"), m_gate("X", 1), m_gate("Z", 2), prepare_logical("plus"),
                prepare_logical("zero"), encode_arbitrary(1), prepare_qr("bitflip", 2)):
        assert collapse_is_safe(gad), gad.label


def test_bs_ec_under_pauli_noise_needs_no_dense_fallback():
    from holoft.noise import NoiseModel, execute_plan, inject
    spec, gad = code_bs9(), bs_ec(1)
    noise = NoiseModel().at(0.05)
    rng = np.random.default_rng(4)
    for basis in ("zero", "plus"):
        for _ in range(100):
            t = prepared_tableau(gad.n_qubits, spec, basis)
            # raises DetControlRequired if a non-collapsible control is undetermined
            execute_plan(inject(gad.circuit, noise, rng), t, rng, collapsible=gad.collapsible)


# ---------------------------------------------------------------------------
# preparation

@pytest.mark.parametrize("state,key", [("zero", "Z"), ("plus", "X")])
@pytest.mark.parametrize("orientation", ["standard", "rotated"])
def test_prepare_logical(state, key, orientation):
    spec, gad = code_bs9(orientation), prepare_logical(state, 1, orientation)
    t = Tableau(gad.n_qubits)
    run_tableau(gad, t, np.random.default_rng(1))
    emb = lambda p: p.embed(gad.n_qubits, gad.data_sites)
    for s in spec.stabilizers:
        assert t.expectation(emb(s)) == 1
    assert t.expectation(emb(spec.logical(key))) == 1


@pytest.mark.parametrize("level", [1, 2])
def test_prepare_qr(level):
    n = 3 ** level
    gad = prepare_qr("bitflip", level)
    t = Tableau(gad.n_qubits)
    run_tableau(gad, t, np.random.default_rng(0))
    assert [t.peek_z(q) for q in range(n)] == [0] * n
    gad = prepare_qr("phaseflip", level)
    t = Tableau(gad.n_qubits)
    run_tableau(gad, t, np.random.default_rng(0))
    for q in range(n):
        assert t.expectation(PauliString.on(gad.n_qubits, {q: "X"})) == 1


# ---------------------------------------------------------------------------
# arbitrary-state encoder

def test_encoder_fanout_schedule():
    gad = encode_arbitrary(1)
    assert gad.meta["fanout_depth"] == 4
    cnots = [g for g in gad.circuit.gates if g.kind is G.CNOT and set(g.sites) <= set(range(9))]
    assert len(cnots) >= 8
    # PhysicalCircuit already forbids a qubit in two gates per step; check the fanout reaches all
    reached = {0}
    for g in sorted(cnots, key=lambda g: g.timestep)[:8]:
        assert g.sites[0] in reached
        reached.add(g.sites[1])
    assert reached == set(range(9))


@pytest.mark.parametrize("label", ["0", "1", "+", "-", "+i", "H"])
def test_encoder_output_fidelity(label):
    spec, gad = code_bs9(), encode_arbitrary(1)
    from _gadgets import bloch
    a, b = bloch(label)
    data = np.zeros(2 ** 9, complex)
    data[0], data[1] = a, b
    branches = run_dense(gad, StateVector(9, data))
    assert data_fidelity(branches, list(range(9)), encoded_state(spec, a, b)) == pytest.approx(1, abs=1e-10)


# ---------------------------------------------------------------------------
# teleported diagonal gates

PHASE = {"zhalf": 1j, "zquarter": np.exp(1j * np.pi / 4)}
BUILD = {"zhalf": zhalf_circuit, "zquarter": zquarter_circuit}


@pytest.mark.parametrize("which", ["zhalf", "zquarter"])
@pytest.mark.parametrize("label", ["0", "1", "+", "-", "+i", "H"])
def test_teleport_level0(which, label):
    f, branches = run_teleport(BUILD[which](0), None, label, PHASE[which])
    assert f >= 1 - 1e-8
    assert sum(b.probability for b in branches) == pytest.approx(1, abs=1e-9)


@pytest.mark.parametrize("which", ["zhalf", "zquarter"])
def test_teleport_level1_qr3(which):
    spec = code_qr3("bitflip")
    for label in ("0", "+", "H"):
        f, _ = run_teleport(BUILD[which](1, "qr3"), spec, label, PHASE[which])
        assert f >= 1 - 1e-8


def test_zero_input_is_fixed_on_every_branch():
    _, branches = run_teleport(zquarter_circuit(0), None, "0", PHASE["zquarter"])
    for br in branches:
        assert abs(br.state.amps[0]) == pytest.approx(1)


def test_zhalf_twice_is_z():
    from holoft.codes.execute import supply_state
    for label in ("+", "H", "1"):
        from _gadgets import bloch
        a, b = bloch(label)
        sv = StateVector(1, [a, b])
        for _ in range(2):
            outs = run_dense(zhalf_circuit(0), sv, {"+i": supply_state("+i")})
            sv = outs[0].state
        assert abs(np.vdot([a, -b], sv.amps)) ** 2 == pytest.approx(1)


def test_missing_ancilla_supply():
    from holoft.errors import MissingAncilla
    with pytest.raises(MissingAncilla):
        run_dense(zhalf_circuit(0), StateVector(1))


# ---------------------------------------------------------------------------
# fault-tolerant SWAP

def test_ft_swap_exchanges_payloads():
    gad = ft_swap_routine(1, 2, 3, "ipip")
    rho, eta, rhobar = [0.6, 0.8j], [1, 0], [0.28, -0.96]
    vec = np.kron(np.kron(np.kron(eta, rhobar), eta), rho)
    out = unitary(gad.gate_list(), 4) @ vec
    want = np.kron(np.kron(np.kron(eta, rho), eta), rhobar)
    assert np.allclose(out, want)
    assert [g.timestep for g in gad.circuit.gates] == [0, 1, 2]


def test_ft_swap_roles_checked():
    with pytest.raises(BadRoles):
        ft_swap_routine(1, 3, 5)
    with pytest.raises(BadRoles):
        ft_swap_routine(2, 3, 4, "ipip")


def test_ft_swap_single_fault_corrupts_one_payload():
    gad = ft_swap_routine(1, 2, 3, "ipi")
    gates = gad.gate_list()
    for k in range(3):
        a, b = gates[k][1]
        for u in range(1, 16):
            p = PauliString.identity(3)
            for j, q in enumerate((a, b)):
                p.x[q], p.z[q] = bool(u >> (2 * j) & 1), bool(u >> (2 * j + 1) & 1)
            out = conjugate_through_gates(gates[k + 1:], 3, p)
            assert sum(1 for q in (0, 2) if q in out.support()) <= 1


# ---------------------------------------------------------------------------
# Toffoli decomposition

def test_toffoli_full_variant_exact():
    u = unitary(toffoli_decomposition().gate_list(), 3)
    assert np.allclose(u, unitary([(G.TOFFOLI, (0, 1, 2))], 3), atol=1e-12)


def test_toffoli_discard_variant():
    gad = toffoli_decomposition(discard_controls=True)
    assert gad.circuit.depth == 3
    first = [g for g in gad.circuit.gates if g.timestep == 0]
    assert {g.kind for g in first} == {G.CXHALF} and len(first) == 2
    u = unitary(gad.gate_list(), 3)
    fix = unitary([(G.CNOT, (0, 1))], 3)
    assert np.allclose(fix @ u, unitary([(G.TOFFOLI, (0, 1, 2))], 3), atol=1e-12)
    vec = np.zeros(8, complex)
    vec[0b011] = 1
    assert abs((u @ vec)[0b111]) == pytest.approx(1) or abs((u @ vec)[0b101]) == pytest.approx(1)
    out = u @ vec
    assert sum(abs(out[i]) ** 2 for i in range(8) if i >> 2 & 1) == pytest.approx(1)


# ---------------------------------------------------------------------------
# ideal decoding

def test_ideal_decode_cases():
    spec = code_bs9()
    t = prepared_tableau(9, spec, "zero")
    assert ideal_decode(spec, t, range(9)) == "I"
    x = t.copy()
    apply_pauli_gates(x, spec.logical_x)
    assert ideal_decode(spec, x, range(9)) == "X"
    one = t.copy()
    apply_pauli_gates(one, PauliString.on(9, {4: "X"}))
    assert ideal_decode(spec, one, range(9)) == "I"
    two_rows = t.copy()
    apply_pauli_gates(two_rows, PauliString.on(9, {0: "X", 3: "X"}))
    assert ideal_decode(spec, two_rows, range(9)) == "X"
    with pytest.raises(BadSites):
        ideal_decode(spec, t, range(8))


def test_ideal_decode_dense_agrees():
    spec = code_bs9()
    zero = StateVector(9, encoded_state(spec, 1, 0))
    assert ideal_decode(spec, zero, range(9)) == "I"
    flipped = apply_pauli(zero.copy(), spec.logical_x)
    assert ideal_decode(spec, flipped, range(9)) == "X"
    plus = StateVector(9, encoded_state(spec, 1, 1))
    apply_pauli(plus, PauliString.on(9, {4: "Z"}))
    assert ideal_decode(spec, plus, range(9), {"X": 1}) == "I"
    # a superposition of logicals is not an eigenstate of Z_L
    assert ideal_decode(spec, StateVector(9, encoded_state(spec, 1, 1)), range(9)) == FAIL


def test_logical_frame_of_gauge_is_identity():
    spec = code_bs9()
    for g in spec.gauge:
        assert logical_frame(spec, g) == "I"
    assert logical_frame(spec, spec.logical_x * spec.logical_z) == "Y"
