"""Expansion of semi-global programs into flat physical circuits."""

from __future__ import annotations

from .model import (Annotation, BoundaryOp, Circuit, ColumnGate, ColumnReset, GateKind,
                    GlobalHLayer, PhysGate, PhysicalCircuit, TwoColumnGate, VerticalCZLayer)
from .validate import validate
from ..errors import InvalidCircuit


def expand(circuit: Circuit) -> PhysicalCircuit:
    """Flatten ``circuit``; one timestep per gate-bearing op.

    Every column pulse owns one source id (error location). Parity layers and
    the global H layer get one source per column.
    """
    report = validate(circuit)
    if not report.ok:
        raise InvalidCircuit(str(report.violations[0]))
    dims = circuit.dims
    idx = dims.index
    zs = range(1, dims.nz + 1)
    gates: list[PhysGate] = []
    t = 0
    src = 0
    for i, op in enumerate(circuit.ops):
        if isinstance(op, Annotation):
            continue
        if isinstance(op, ColumnGate):
            gates += [PhysGate(op.kind, (idx(op.col.x, op.col.y, z),), t, src, i) for z in zs]
            src += 1
        elif isinstance(op, ColumnReset):
            gates += [PhysGate(GateKind.RESET, (idx(op.col.x, op.col.y, z),), t, src, i) for z in zs]
            src += 1
        elif isinstance(op, TwoColumnGate):
            a, b = op.col_a, op.col_b
            gates += [PhysGate(op.kind, (idx(a.x, a.y, z), idx(b.x, b.y, z)), t, src, i) for z in zs]
            src += 1
        elif isinstance(op, GlobalHLayer):
            for col in dims.columns():
                gates += [PhysGate(GateKind.H, (idx(col.x, col.y, z),), t, src, i) for z in zs]
                src += 1
        elif isinstance(op, VerticalCZLayer):
            pairs = op.pairs(dims.nz)
            if not pairs:
                continue
            for col in dims.columns():
                gates += [PhysGate(GateKind.CZ, (idx(col.x, col.y, z1), idx(col.x, col.y, z2)), t, src, i)
                          for z1, z2 in pairs]
                src += 1
        elif isinstance(op, BoundaryOp):
            gates.append(PhysGate(op.kind, tuple(idx(s.x, s.y, s.z) for s in op.sites), t, src, i))
            src += 1
        t += 1
    return PhysicalCircuit(dims.n_qubits, tuple(gates))
