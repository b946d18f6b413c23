"""Running gadgets on the stabilizer and dense engines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from ..clifford.tableau import Tableau
from ..dense import Branch, StateVector, apply_gate, apply_pauli, measure_enumerate, measure_remove
from ..errors import DetControlRequired, MissingAncilla
from ..ir.model import GateKind, PhysicalCircuit
from .codes import bs_index, code_bs9, code_qr3, encoded_state
from .gadgets import FeedForward, GadgetCircuit

G = GateKind


@dataclass
class TableauRun:
    outcomes: dict = field(default_factory=dict)   # gate index -> measured bit
    controls: dict = field(default_factory=dict)   # gate index -> (c1, c2) values
    collapsed: list = field(default_factory=list)  # qubits measured to resolve controls


def _gates(obj) -> tuple:
    pc = obj.circuit if isinstance(obj, GadgetCircuit) else obj
    return pc.gates


def run_tableau(obj: Union[GadgetCircuit, PhysicalCircuit], t: Tableau,
                rng: Optional[np.random.Generator] = None, collapse: Union[str, set] = "declared",
                offset: int = 0) -> TableauRun:
    """Execute on a tableau whose qubits ``offset..`` host the circuit.

    Toffoli controls that are not Z eigenstates are measured first when
    ``collapse`` allows it (``"declared"`` uses the gadget's collapsible set,
    ``"all"`` allows any control, ``"none"`` never collapses). This is the
    deferred-measurement reading of a control that is never disturbed again.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    if collapse == "declared":
        allowed = obj.collapsible if isinstance(obj, GadgetCircuit) else frozenset()
    elif collapse == "all":
        allowed = None
    elif collapse == "none":
        allowed = frozenset()
    else:
        allowed = frozenset(collapse)
    run = TableauRun()
    for i, g in enumerate(_gates(obj)):
        sites = tuple(s + offset for s in g.sites)
        if g.kind in (G.TOFFOLI, G.Z_TOFFOLI):
            vals = []
            for c in sites[:2]:
                v = t.peek_z(c)
                if v is None:
                    if allowed is not None and (c - offset) not in allowed:
                        raise DetControlRequired(f"gate {i}: control {c - offset} is not deterministic",
                                                 gate=i)
                    v = t.measure_z(c, rng).bit
                    run.collapsed.append(c - offset)
                vals.append(v)
            run.controls[i] = tuple(vals)
            if vals[0] and vals[1]:
                t.apply_clifford(G.X if g.kind is G.TOFFOLI else G.Z, [sites[2]])
        else:
            out = t.apply(g.kind, sites, rng)
            if out is not None:
                run.outcomes[i] = out.bit
    return run


def collapse_is_safe(gadget: GadgetCircuit) -> bool:
    """Structural check behind collapsing: once a collapsible qubit has served
    as a Toffoli control it only meets gates diagonal in Z on it (controls,
    CZ, Z-type) or is reset."""
    diag_ok = {G.Z, G.S, G.SDG, G.ZQUARTER, G.CZ, G.Z_TOFFOLI, G.WAIT, G.MEASURE_Z}
    used = set()
    for g in gadget.circuit.gates:
        for pos, q in enumerate(g.sites):
            if q not in used:
                continue
            if g.kind is G.RESET:
                used.discard(q)
                continue
            ok = (g.kind in diag_ok or (g.kind in (G.TOFFOLI,) and pos < 2)
                  or (g.kind in (G.CNOT, G.CXHALF, G.CXHALF_DG) and pos == 0))
            if not ok:
                return False
        if g.kind in (G.TOFFOLI, G.Z_TOFFOLI):
            used.update(q for q in g.sites[:2] if q in gadget.collapsible)
    return True


# ---------------------------------------------------------------------------
# dense execution

def supply_state(label: str, level: int = 0, code: str = "bs9") -> StateVector:
    """Ancilla input: |+i>, |H>, |0>, |+> at level 0 or encoded at level 1."""
    amp = {"0": (1, 0), "1": (0, 1), "+": (1, 1), "-": (1, -1), "+i": (1, 1j), "-i": (1, -1j),
           "H": (1, np.exp(1j * np.pi / 4))}[label]
    if level == 0:
        return StateVector.from_product([label])
    spec = code_qr3("bitflip") if code == "qr3" else code_bs9("standard")
    return StateVector(spec.n, encoded_state(spec, *amp))


def _register_blocks(gadget: GadgetCircuit) -> list[tuple[int, tuple]]:
    blocks = {}
    for name, qs in gadget.registers.items():
        blocks[qs[0]] = qs
    return sorted(blocks.items())


def initial_dense_state(gadget: GadgetCircuit, data_state: StateVector,
                        supplies: Optional[Mapping[str, StateVector]] = None) -> StateVector:
    """Data state on the leading qubits, then every ancilla register."""
    supplies = supplies or {}
    k = len(gadget.data_sites)
    if tuple(gadget.data_sites) != tuple(range(k)):
        raise ValueError("dense execution expects data on the leading qubits")
    if data_state.n != k:
        raise ValueError(f"data state has {data_state.n} qubits, gadget expects {k}")
    sv = data_state.copy()
    q = k
    while q < gadget.n_qubits:
        label = gadget.ancilla_init.get(q, "0")
        if label == "0":
            sv = sv.tensor_with(StateVector(1))
            q += 1
            continue
        reg = next(qs for start, qs in _register_blocks(gadget) if start == q)
        if label not in supplies:
            raise MissingAncilla(f"register at qubit {q} needs a supplied {label!r} state")
        anc = supplies[label]
        if anc.n != len(reg):
            raise MissingAncilla(f"supplied {label!r} state has {anc.n} qubits, register has {len(reg)}")
        sv = sv.tensor_with(anc)
        q += len(reg)
    return sv


def project_out(sv: StateVector, sites: Sequence[int], bits: Sequence[int]) -> StateVector:
    """Drop qubits known to sit in the basis state ``bits``."""
    t = sv.tensor()
    index = [slice(None)] * sv.n
    for q, b in zip(sites, bits):
        index[sv.axis(q)] = b
    rest = t[tuple(index)]
    keep = [q for q in range(sv.n) if q not in set(sites)]
    amps = np.ascontiguousarray(rest).reshape(-1)
    out = StateVector(len(keep), amps, sv.cap)
    out.amps /= np.sqrt(out.norm())
    return out


def decode_bit(bits: Sequence[int], code: Optional[str]) -> int:
    if code is None:
        return int(bits[0])
    if code == "qr3":
        return int(sum(bits) >= 2)
    rows = [sum(bits[bs_index(i, j)] for j in range(3)) % 2 for i in range(3)]
    return int(sum(rows) >= 2)


def run_dense(gadget: GadgetCircuit, data_state: StateVector,
              supplies: Optional[Mapping[str, StateVector]] = None) -> list[Branch]:
    """All branches of a noiseless run.

    Resets split the mixture into branches. Feed-forward registers are
    measured, decoded to one bit, removed from the state, and the
    conditional action is applied, so the returned states of teleport
    gadgets live on the data qubits only.
    """
    sv = initial_dense_state(gadget, data_state, supplies)
    branches = [Branch((), 1.0, sv)]
    for g in gadget.circuit.gates:
        if g.kind is G.RESET:
            nxt = []
            for br in branches:
                for sub in measure_enumerate(br.state, g.sites):
                    st = sub.state
                    if sub.bits[0]:
                        apply_gate(st, G.X, g.sites)
                    nxt.append(Branch(br.bits, br.probability * sub.probability, st))
            branches = nxt
        elif g.kind.is_measurement:
            nxt = []
            for br in branches:
                for sub in measure_enumerate(br.state, g.sites, "Z" if g.kind is G.MEASURE_Z else "X"):
                    nxt.append(Branch(br.bits + sub.bits, br.probability * sub.probability, sub.state))
            branches = nxt
        elif g.kind is not G.WAIT:
            for br in branches:
                apply_gate(br.state, g.kind, g.sites)
    for ff in gadget.feedforward:
        nxt = []
        memo: list = []
        for br in branches:
            for sub in measure_remove(br.state, ff.register):
                v = decode_bit(sub.bits, ff.code)
                st = sub.state
                bits = br.bits + (v,)
                prob = br.probability * sub.probability
                if not v:
                    nxt.append(Branch(bits, prob, st))
                elif isinstance(ff.action, GadgetCircuit):
                    for inner in _run_nested(ff.action, st, supplies, memo):
                        nxt.append(Branch(bits + inner.bits, prob * inner.probability, inner.state))
                else:
                    for kind, sites in ff.action:
                        apply_gate(st, kind, sites)
                    nxt.append(Branch(bits, prob, st))
        branches = nxt
    return branches


def _run_nested(gadget: GadgetCircuit, st: StateVector, supplies, memo: list) -> list[Branch]:
    # The nested run is linear in its input, so an input equal to a cached
    # one up to a global phase reuses the cached branches with that phase.
    for ref, result in memo:
        ov = np.vdot(ref.amps, st.amps)
        if abs(abs(ov) - 1.0) < 1e-12:
            return [Branch(b.bits, b.probability, StateVector(b.state.n, b.state.amps * ov, b.state.cap))
                    for b in result]
    result = run_dense(gadget, st, supplies)
    memo.append((st.copy(), result))
    return result
