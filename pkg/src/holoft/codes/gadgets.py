"""Measurement-free gadget circuits.

Every builder returns a :class:`GadgetCircuit`. Circuits start by resetting
their fresh ancillas, so "fresh, correctly prepared" ancillas are part of the
gadget and noise at those resets is a preparation location.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from ..errors import BadLevel, BadRoles, LengthMismatch
from ..ir.model import GateKind, PhysGate, PhysicalCircuit
from .codes import CodeSpec, bs_index, code_bs9, code_qr3

G = GateKind


@dataclass(frozen=True)
class FeedForward:
    """Measure ``register`` in Z, decode one logical bit, act if it is 1.

    ``action`` is either a tuple of ``(kind, sites)`` gates or a nested
    gadget whose data sites are mapped onto ours by ``data_map``; a nested
    gadget consumes a fresh ancilla ``load`` (register name of the nested
    gadget) loaded into the freshly measured register.
    """

    register: tuple
    code: Optional[str]
    action: object
    data_map: tuple = ()


@dataclass(frozen=True)
class GadgetCircuit:
    circuit: PhysicalCircuit
    data_sites: tuple
    ancilla_sites: tuple
    level: int
    label: str
    registers: Mapping = field(default_factory=dict)
    ancilla_init: Mapping = field(default_factory=dict)
    collapsible: frozenset = frozenset()
    discard: frozenset = frozenset()
    feedforward: tuple = ()
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        d, a = set(self.data_sites), set(self.ancilla_sites)
        if d & a:
            raise ValueError("data and ancilla sites overlap")
        if d | a != set(range(self.circuit.n_qubits)):
            raise ValueError("data and ancilla sites must cover the circuit")

    @property
    def n_qubits(self) -> int:
        return self.circuit.n_qubits

    def gate_list(self) -> list:
        return [(g.kind, g.sites) for g in self.circuit.gates]


class _Builder:
    """ASAP scheduler; every gate is its own error location."""

    def __init__(self):
        self.n = 0
        self.ops: list[tuple] = []
        self.free_at: dict[int, int] = defaultdict(int)
        self.registers: dict[str, tuple] = {}
        self.collapsible: set = set()

    def alloc(self, k: int, name: Optional[str] = None) -> list[int]:
        qs = list(range(self.n, self.n + k))
        self.n += k
        if name:
            self.registers[name] = tuple(qs)
        return qs

    def gate(self, kind: GateKind, *sites: int, at: Optional[int] = None) -> None:
        t = max(self.free_at[q] for q in sites) if at is None else at
        self.ops.append((t, len(self.ops), kind, tuple(sites)))
        for q in sites:
            self.free_at[q] = max(self.free_at[q], t + 1)

    def reset(self, qs: Sequence[int]) -> None:
        for q in qs:
            self.gate(G.RESET, q)

    def layer(self, kind: GateKind, qs: Sequence[int]) -> None:
        for q in qs:
            self.gate(kind, q)

    def circuit(self) -> PhysicalCircuit:
        ordered = sorted(self.ops, key=lambda o: (o[0], o[1]))
        gates = tuple(PhysGate(k, s, t, i) for i, (t, _, k, s) in enumerate(ordered))
        return PhysicalCircuit(self.n, gates)

    def finish(self, data: Sequence[int], level: int, label: str, **kw) -> GadgetCircuit:
        data = tuple(data)
        anc = tuple(q for q in range(self.n) if q not in set(data))
        return GadgetCircuit(self.circuit(), data, anc, level, label, dict(self.registers),
                             {q: "0" for q in anc}, frozenset(self.collapsible), **kw)


def _check_level(k: int) -> None:
    if not isinstance(k, int) or k < 1:
        raise BadLevel(f"level must be a positive integer, got {k!r}")


# ---------------------------------------------------------------------------
# M gate

def _emit_m(b: _Builder, basis: str, data: Sequence[int], level: int, reset_anc: bool = True,
            collapsible: bool = True) -> list[int]:
    """Append a level-``level`` majority-vote correction on ``data``.

    Level k acts on three blocks of 3**(k-1) qubits; each level-1 gate is
    lifted bitwise, slice s of every block together, with the cyclic pairing
    of blocks (j-1, j) steering the correction of block j.
    """
    size = 3 ** (level - 1)
    if len(data) != 3 * size:
        raise LengthMismatch(f"M gate level {level} needs {3 * size} data qubits")
    blocks = [list(data[j * size:(j + 1) * size]) for j in range(3)]
    anc = [b.alloc(size) for _ in range(3)]
    if reset_anc:
        b.reset([q for blk in anc for q in blk])
    if basis == "Z":
        b.layer(G.H, data)
    for i in range(3):
        for s in range(size):
            b.gate(G.CNOT, blocks[i][s], anc[i][s])
    for i in range(3):
        for s in range(size):
            b.gate(G.CNOT, blocks[(i + 1) % 3][s], anc[i][s])
    for j in range(3):
        for s in range(size):
            b.gate(G.TOFFOLI, anc[(j - 1) % 3][s], anc[j][s], blocks[j][s])
    if basis == "Z":
        b.layer(G.H, data)
    if collapsible:
        b.collapsible.update(q for blk in anc for q in blk)
    return [q for blk in anc for q in blk]


def m_gate(basis: str = "X", level: int = 1) -> GadgetCircuit:
    """Majority vote on a level-k repetition codeword.

    ``basis="X"`` repairs one bad block of a Z-basis codeword (X errors);
    ``basis="Z"`` is its Hadamard conjugate for |+...+>-type codewords.
    Ancilla controls hold syndromes that are deterministic on every input
    with at most one bad block.
    """
    _check_level(level)
    if basis not in ("X", "Z"):
        raise ValueError(f"basis must be X or Z, got {basis!r}")
    b = _Builder()
    data = b.alloc(3 ** level, "data")
    anc = _emit_m(b, basis, data, level, collapsible=False)
    b.registers["syndrome"] = tuple(anc)
    return b.finish(data, level, f"M{basis}_k{level}", discard=frozenset(anc))


def lift_gates(level1: Sequence[tuple], size: int, block_of: Mapping[int, Sequence[int]]) -> list[tuple]:
    """Bitwise lifting map: each level-1 gate acts on slice s of its blocks."""
    out = []
    for kind, sites in level1:
        for s in range(size):
            out.append((kind, tuple(block_of[q][s] for q in sites)))
    return out


# ---------------------------------------------------------------------------
# syndrome voting

def vote_syndromes(s1: str, s2: str, s3: str) -> str:
    """s4 = s1 xor s2 xor s3 for equal-length bit strings."""
    if not (len(s1) == len(s2) == len(s3)):
        raise LengthMismatch("syndrome strings differ in length")
    return "".join(str(int(a) ^ int(b) ^ int(c)) for a, b, c in zip(s1, s2, s3))


def _emit_vn(b: _Builder, strings: Sequence[Sequence[int]], size: int, tag: str = "") -> tuple[list, list]:
    """XOR three syndrome registers into s4, then write rotated pair
    parities d_i = s4_i xor s4_{i+1}; returns (s4, d) qubit lists (bitwise
    over ``size``-qubit blocks)."""
    s4 = b.alloc(3 * size, f"s4{tag}")
    d = b.alloc(3 * size, f"d{tag}")
    b.reset(s4 + d)
    for reg in strings:
        for i in range(3):
            for s in range(size):
                b.gate(G.CNOT, reg[i * size + s], s4[i * size + s])
    for shift in (0, 1):
        for i in range(3):
            for s in range(size):
                b.gate(G.CNOT, s4[((i + shift) % 3) * size + s], d[i * size + s])
    return s4, d


def vn_routine(level: int = 1) -> GadgetCircuit:
    """Vote three syndrome strings into s4 and its rotated copy d.

    The rotated copy drives the bitwise correction: row i is hit iff
    d_{i-1} and d_i are both set. Input strings are discarded.
    """
    _check_level(level)
    size = 3 ** (level - 1)
    b = _Builder()
    strings = [b.alloc(3 * size, f"s{j + 1}") for j in range(3)]
    s4, d = _emit_vn(b, strings, size)
    data = [q for reg in strings for q in reg]
    return b.finish(data, level, f"VN_k{level}",
                    discard=frozenset(data + s4))


# ---------------------------------------------------------------------------
# Bacon-Shor gadgets (level 1)

def _bs_grid(block: Sequence[int], orientation: str) -> list[list[int]]:
    return [[block[bs_index(i, j, orientation)] for j in range(3)] for i in range(3)]


def _emit_prepare_bs(b: _Builder, block: Sequence[int], state: str, orientation: str) -> None:
    g = _bs_grid(block, orientation)
    b.reset(block)
    if state == "plus":
        b.layer(G.H, block)
        for j in range(3):
            _emit_m(b, "X", [g[i][j] for i in range(3)], 1)
    elif state == "zero":
        for i in range(3):
            _emit_m(b, "Z", g[i], 1)
    else:
        raise ValueError(f"state must be zero or plus, got {state!r}")


def prepare_logical(state: str = "zero", level: int = 1, orientation: str = "standard") -> GadgetCircuit:
    """|0_L> (M^(Z) per row of |0>^9) or |+_L> (M^(X) per column of |+>^9)."""
    _check_level(level)
    if level != 1:
        raise BadLevel("Bacon-Shor gadgets are built at level 1 only")
    b = _Builder()
    data = b.alloc(9, "data")
    _emit_prepare_bs(b, data, state, orientation)
    return b.finish(data, level, f"prep_{state}_k{level}", meta={"orientation": orientation})


def prepare_qr(basis: str = "bitflip", level: int = 1) -> GadgetCircuit:
    """|0...0> (bitflip) or |+...+> (phaseflip) on 3**k qubits, built by
    resetting and recursing M gates block by block."""
    _check_level(level)
    if basis not in ("bitflip", "phaseflip"):
        raise ValueError(basis)
    b = _Builder()
    data = b.alloc(3 ** level, "data")
    b.reset(data)
    mb = "X"
    if basis == "phaseflip":
        b.layer(G.H, data)
        mb = "Z"

    def rec(qs, k):
        if k > 1:
            size = 3 ** (k - 1)
            for j in range(3):
                rec(qs[j * size:(j + 1) * size], k - 1)
        _emit_m(b, mb, qs, k)

    rec(data, level)
    return b.finish(data, level, f"prep_qr_{basis}_k{level}")


def bs_ec(level: int = 1, orientation: str = "standard", order: str = "XZ") -> GadgetCircuit:
    """Bacon-Shor error correction without measurements.

    X stage: a |+_L> block absorbs the data by transversal CNOT, its row
    parities are voted into s4 and turned into the rotated pair parities d,
    and Toffolis fix one qubit of one row (column 0). The Z stage is the
    Hadamard-dual: a |0_L> block (Hadamard-rotated) sends CNOTs into the
    data, column parities are voted and Z-Toffolis fix one qubit of row 0.
    """
    _check_level(level)
    if level != 1:
        raise BadLevel("Bacon-Shor gadgets are built at level 1 only")
    if order not in ("XZ", "ZX"):
        raise ValueError(order)
    b = _Builder()
    data = b.alloc(9, "data")
    D = _bs_grid(data, orientation)

    def x_stage():
        a = b.alloc(9, "A")
        A = _bs_grid(a, orientation)
        _emit_prepare_bs(b, a, "plus", orientation)
        for i in range(3):
            for j in range(3):
                b.gate(G.CNOT, D[i][j], A[i][j])
        strings = [[A[i][j] for i in range(3)] for j in range(3)]
        _, d = _emit_vn(b, strings, 1, "_x")
        for i in range(3):
            b.gate(G.TOFFOLI, d[(i - 1) % 3], d[i], D[i][0])

    def z_stage():
        bb = b.alloc(9, "B")
        B = _bs_grid(bb, orientation)
        _emit_prepare_bs(b, bb, "zero", orientation)
        for i in range(3):
            for j in range(3):
                b.gate(G.CNOT, B[i][j], D[i][j])
        b.layer(G.H, bb)
        strings = [[B[i][j] for j in range(3)] for i in range(3)]
        _, d = _emit_vn(b, strings, 1, "_z")
        for j in range(3):
            b.gate(G.Z_TOFFOLI, d[(j - 1) % 3], d[j], D[0][j])

    for stage in order:
        x_stage() if stage == "X" else z_stage()
    data_set = set(data)
    discard = frozenset(q for q in range(b.n) if q not in data_set)
    return b.finish(data, level, f"bs_ec_k{level}_{orientation}", discard=discard,
                    meta={"orientation": orientation, "order": order})


def encode_arbitrary(level: int = 1, orientation: str = "standard") -> GadgetCircuit:
    """Encode the state of data qubit 0 into the Bacon-Shor code.

    A CNOT fan-out (one partner per qubit per step, depth 4) writes
    a|0>^9 + b|1>^9, then each row gets M^(Z). The vote leaves a
    syndrome-dependent sign on the |1> branch, so after closing the
    Hadamard frame each row applies Z^[syndrome != 0] to all three of its
    qubits (a row is a logical Z). With a0^a1^a2 = 0 the predicate is
    a2 ^ a0.a1.
    """
    _check_level(level)
    if level != 1:
        raise BadLevel("Bacon-Shor gadgets are built at level 1 only")
    b = _Builder()
    data = b.alloc(9, "data")
    b.reset(data[1:])
    fan = [[(0, 1)], [(0, 2), (1, 3)], [(0, 4), (1, 5), (2, 6), (3, 7)], [(0, 8)]]
    base = max(b.free_at[q] for q in data)
    for step, pairs in enumerate(fan):
        for c, t in pairs:
            b.gate(G.CNOT, data[c], data[t], at=base + step)
    g = _bs_grid(data, orientation)
    for i in range(3):
        row = g[i]
        b.layer(G.H, row)
        anc = _emit_m(b, "X", row, 1)
        b.layer(G.H, row)
        for q in row:
            b.gate(G.CZ, anc[2], q)
            b.gate(G.Z_TOFFOLI, anc[0], anc[1], q)
    return b.finish(data, level, f"encode_k{level}", meta={"fanout_depth": len(fan),
                                                         "orientation": orientation,
                                                         "input": data[0]})


# ---------------------------------------------------------------------------
# boundary non-Clifford gadgets

def _logical_z_sites(code_name: Optional[str]) -> tuple:
    if code_name is None:
        return (0,)
    if code_name == "qr3":
        return (0,)
    return tuple(bs_index(0, j) for j in range(3))


def zhalf_circuit(level: int = 0, code: str = "bs9") -> GadgetCircuit:
    """S by teleportation through a |+i> ancilla.

    Transversal CNOT data -> ancilla, measure the ancilla, decode one bit and
    apply Z_L when it is 1. Level 0 is a single physical qubit.
    """
    return _teleport_gadget("zhalf", level, code)


def zquarter_circuit(level: int = 0, code: str = "bs9") -> GadgetCircuit:
    """Z^(1/4) through an |H> ancilla; outcome 1 is repaired by a nested
    :func:`zhalf_circuit` that reuses the measured register."""
    return _teleport_gadget("zquarter", level, code)


def _teleport_gadget(which: str, level: int, code: str) -> GadgetCircuit:
    if level not in (0, 1):
        raise BadLevel("teleported gates are built at level 0 and 1")
    if level == 1 and code not in ("qr3", "bs9"):
        raise ValueError(f"code must be qr3 or bs9, got {code!r}")
    code_name = None if level == 0 else code
    n = 1 if level == 0 else (3 if code == "qr3" else 9)
    b = _Builder()
    data = b.alloc(n, "data")
    anc = b.alloc(n, "anc")
    for d, a in zip(data, anc):
        b.gate(G.CNOT, d, a)
    if which == "zhalf":
        action = tuple((G.Z, (q,)) for q in _logical_z_sites(code_name))
        init = "+i"
    else:
        action = _teleport_gadget("zhalf", level, code)
        init = "H"
    ff = FeedForward(tuple(anc), code_name, action, tuple(data))
    gad = b.finish(data, level, f"{which}_k{level}{'_' + code if level else ''}", feedforward=(ff,),
                   meta={"code": code_name})
    return GadgetCircuit(gad.circuit, gad.data_sites, gad.ancilla_sites, gad.level, gad.label,
                         gad.registers, {q: init for q in anc}, gad.collapsible, frozenset(anc),
                         gad.feedforward, gad.meta)


# ---------------------------------------------------------------------------
# routing and decomposition

def ft_swap_routine(p1: int, p2: int, p3: int, roles: Optional[str] = None,
                    length: Optional[int] = None) -> GadgetCircuit:
    """Exchange the info at line positions p1 and p3 via placeholder p2.

    Positions are 1-based; ``roles`` is a string of ``i``/``p`` per position
    (default: odd positions hold info).
    """
    length = length or (len(roles) if roles else p3)
    if roles is None:
        roles = "".join("i" if p % 2 else "p" for p in range(1, length + 1))
    if not (1 <= p1 < p2 < p3 <= len(roles)):
        raise BadRoles(f"positions must satisfy 1 <= p1 < p2 < p3 <= {len(roles)}")
    if roles[p1 - 1] != "i" or roles[p2 - 1] != "p" or roles[p3 - 1] != "i":
        raise BadRoles(f"need info/placeholder/info at {p1},{p2},{p3}, roles {roles!r}")
    b = _Builder()
    qs = b.alloc(len(roles), "line")
    for a, c in ((p1, p2), (p1, p3), (p2, p3)):
        b.gate(G.SWAP, qs[a - 1], qs[c - 1])
    info = [q for q, r in zip(qs, roles) if r == "i"]
    return b.finish(info, 0, f"ft_swap_{p1}_{p2}_{p3}", meta={"roles": roles})


def toffoli_decomposition(discard_controls: bool = False) -> GadgetCircuit:
    """Toffoli from controlled-sqrt(X) gates on (c1, c2, t) = (0, 1, 2).

    Step 1 runs CV(c1,t) and CV(c2,t) together, then CNOT(c1,c2) and
    CV^dagger(c2,t). The trailing CNOT(c1,c2) restores c2 and is omitted
    when the controls are discarded afterwards.
    """
    b = _Builder()
    c1, c2, t = b.alloc(3, "q")
    b.gate(G.CXHALF, c1, t, at=0)
    b.gate(G.CXHALF, c2, t, at=0)
    b.gate(G.CNOT, c1, c2, at=1)
    b.gate(G.CXHALF_DG, c2, t, at=2)
    if not discard_controls:
        b.gate(G.CNOT, c1, c2, at=3)
    return b.finish((c1, c2, t), 0, "toffoli_discard" if discard_controls else "toffoli",
                    discard=frozenset((c1, c2)) if discard_controls else frozenset())
