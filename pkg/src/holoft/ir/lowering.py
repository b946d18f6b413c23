"""Lowering of flat circuits onto a line-per-plane layout with placeholders."""

from __future__ import annotations

from collections import OrderedDict
from typing import Optional

from ..errors import Unroutable
from .model import GateKind, Layout2D, PhysGate, PhysicalCircuit

# op_index tag of SWAPs inserted by routing (program gates carry >= -1)
ROUTING = -2


def ft_swap_positions(p1: int, p2: int, p3: int) -> list[tuple[int, int]]:
    """SWAP schedule exchanging info at p1 and p3 through placeholder p2."""
    return [(p1, p2), (p1, p3), (p2, p3)]


def route_positions(lo: int, hi: int) -> list[tuple[int, int]]:
    """SWAPs carrying the info at ``hi`` down to ``lo + 2`` by placeholder hops."""
    swaps = []
    cur = hi
    while cur > lo + 2:
        swaps += ft_swap_positions(cur - 2, cur - 1, cur)
        cur -= 2
    return swaps


def lower_to_2d(pc: PhysicalCircuit, per_plane: Layout2D) -> PhysicalCircuit:
    """Map each plane onto a line with interleaved placeholders.

    In-plane gates between info sites further apart than one placeholder are
    wrapped in fault-tolerant SWAP hops and their inverse. A circuit that is
    already lowered is returned as is.
    """
    if pc.layout is not None:
        if pc.layout != per_plane:
            raise Unroutable("circuit already lowered with a different layout")
        return pc
    m = per_plane.n_info
    if pc.n_qubits % m:
        raise Unroutable(f"{pc.n_qubits} qubits do not tile planes of {m} sites")
    planes = pc.n_qubits // m
    length = per_plane.line_length

    def place(q: int) -> tuple[int, int]:
        return q // m, per_plane.position(q % m)

    def flat(plane: int, pos: int) -> int:
        return (pos - 1) + length * plane

    out: list[PhysGate] = []
    src_map: dict[int, int] = {}
    next_src = [0]

    def new_src() -> int:
        s = next_src[0]
        next_src[0] += 1
        return s

    def mapped_src(s: int) -> int:
        if s not in src_map:
            src_map[s] = new_src()
        return src_map[s]

    t = 0
    by_step: "OrderedDict[int, list[PhysGate]]" = OrderedDict()
    for g in pc.gates:
        by_step.setdefault(g.timestep, []).append(g)

    for step_gates in by_step.values():
        direct = []
        routed: "OrderedDict[tuple, list]" = OrderedDict()
        for g in step_gates:
            locs = [place(q) for q in g.sites]
            plane_set = {pl for pl, _ in locs}
            if len(g.sites) == 1:
                direct.append((g, locs))
            elif len(plane_set) > 1:
                pos_set = {pos for _, pos in locs}
                pls = sorted(plane_set)
                if len(g.sites) != 2 or len(pos_set) != 1 or pls[1] - pls[0] != 1:
                    raise Unroutable(f"inter-plane gate {g.kind.token} on {g.sites} is not vertical-adjacent")
                direct.append((g, locs))
            elif len(g.sites) == 2:
                (pl, a), (_, b) = locs
                if abs(a - b) == 2:
                    direct.append((g, locs))
                else:
                    routed.setdefault((g.source, min(a, b), max(a, b)), []).append((g, locs))
            else:
                raise Unroutable(f"in-plane {g.kind.token} spans more than one placeholder")
        if direct:
            for g, locs in direct:
                out.append(PhysGate(g.kind, tuple(flat(pl, pos) for pl, pos in locs), t,
                                    mapped_src(g.source), g.op_index))
            t += 1
        for (src, lo, hi), items in routed.items():
            swaps = route_positions(lo, hi)
            pls = [locs[0][0] for _, locs in items]
            for a, b in swaps:
                s = new_src()
                out += [PhysGate(GateKind.SWAP, (flat(pl, a), flat(pl, b)), t, s, ROUTING) for pl in pls]
                t += 1
            for g, locs in items:
                pl = locs[0][0]
                new = tuple(flat(pl, lo + 2) if pos == hi else flat(pl, pos) for _, pos in locs)
                out.append(PhysGate(g.kind, new, t, mapped_src(g.source), g.op_index))
            t += 1
            for a, b in reversed(swaps):
                s = new_src()
                out += [PhysGate(GateKind.SWAP, (flat(pl, a), flat(pl, b)), t, s, ROUTING) for pl in pls]
                t += 1
    return PhysicalCircuit(length * planes, tuple(out), per_plane, planes)


def embed_in_layout(pc: PhysicalCircuit, per_plane: Layout2D) -> PhysicalCircuit:
    """Relabel qubits onto the line layout without any routing (test oracle)."""
    m = per_plane.n_info
    planes = pc.n_qubits // m
    length = per_plane.line_length
    gates = [PhysGate(g.kind, tuple((per_plane.position(q % m) - 1) + length * (q // m) for q in g.sites),
                      g.timestep, g.source, g.op_index) for g in pc.gates]
    return PhysicalCircuit(length * planes, tuple(gates), None, 0)


def info_occupancy_ok(pc: PhysicalCircuit) -> bool:
    """Check that every routing SWAP touches at most one info-holding qubit.

    Tracks where payloads sit as SWAPs move them; initially the odd line
    positions of every plane hold info. Program SWAPs between two info
    qubits are logical gates and only move the payloads.
    """
    if pc.layout is None:
        return True
    length = pc.layout.line_length
    holds = [((q % length) + 1) % 2 == 1 for q in range(pc.n_qubits)]
    for g in pc.gates:
        if g.kind is GateKind.SWAP:
            a, b = g.sites
            if g.op_index == ROUTING and holds[a] and holds[b]:
                return False
            holds[a], holds[b] = holds[b], holds[a]
    return True
