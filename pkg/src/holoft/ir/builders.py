"""Program builders for the transport pulses and readout."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..errors import BadDims, BadPlane
from .model import (Annotation, BoundaryOp, Circuit, Column, ColumnGate, ColumnReset, GateKind,
                    GlobalHLayer, LatticeDims, Site, VerticalCZLayer)


def _pulse_ops(dims: LatticeDims) -> list:
    ops = [GlobalHLayer()]
    for parity in ("oe", "eo"):
        layer = VerticalCZLayer(parity)
        if layer.pairs(dims.nz):
            ops.append(layer)
    return ops


def _single_column(dims: LatticeDims) -> None:
    if dims.nx != 1 or dims.ny != 1:
        raise BadDims(f"single-column builder needs nx=ny=1, got {dims}")


def build_T_tilde(dims: LatticeDims) -> Circuit:
    """One chain step on a single column: H everywhere, then the CZ chain.

    Empty parity layers are omitted, so nz=1 gives the H layer alone.
    """
    _single_column(dims)
    return Circuit(dims, tuple(_pulse_ops(dims)), "T_tilde")


def build_T_pulse(dims: LatticeDims) -> Circuit:
    return Circuit(dims, tuple(_pulse_ops(dims)), "T_pulse")


def build_mirror_sequence(dims: LatticeDims, reps: int) -> Circuit:
    _single_column(dims)
    if reps < 0:
        raise ValueError("reps must be non-negative")
    return Circuit(dims, tuple(_pulse_ops(dims)) * reps, f"mirror_x{reps}")


@dataclass(frozen=True)
class ReadoutPlan:
    """How an interior plane is brought to a boundary.

    ``m`` spare qubits in the boundary plane ``side`` extend each data
    column's chain; ``pulses`` extended steps then reflect the longer chain so
    that ``plane`` lands on ``side``.
    """

    plane: int
    side: int
    m: int
    pulses: int


def readout_plan(nz: int, plane: int) -> ReadoutPlan:
    if not 1 <= plane <= nz:
        raise BadPlane(f"plane {plane} outside 1..{nz}")
    below, above = plane - 1, nz - plane
    if below == 0 or above == 0:
        return ReadoutPlan(plane, plane, 0, 0)
    if above <= below:
        m = above
        return ReadoutPlan(plane, 1, m, nz + m + 1)
    m = below
    return ReadoutPlan(plane, nz, m, nz + m + 1)


def build_readout_sequence(dims: LatticeDims, plane: int,
                           data_columns: Optional[Sequence[Column]] = None) -> Circuit:
    """Bring ``plane`` of each data column to a boundary and measure it there.

    The mirror of a bare column never lands an interior plane on a boundary
    when it sits at the chain centre. Instead the chain is extended inside the
    boundary plane by ``m`` spare qubits taken from otherwise unused columns
    (their bulk is reset to |0>, which makes the global parity layers act
    trivially on them). The reflection of the extended chain carries ``plane``
    onto the boundary site of the data column.
    """
    plan = readout_plan(dims.nz, plane)
    cols = list(data_columns) if data_columns is not None else [Column(1, 1)]
    for c in cols:
        if not dims.contains_column(c):
            raise BadDims(f"data column {c} out of range")
    spare = [c for c in dims.columns() if c not in cols]
    need = plan.m * len(cols)
    if len(spare) < need:
        raise BadDims(f"readout of plane {plane} needs {need} spare columns, have {len(spare)}")
    storage = {c: spare[k * plan.m:(k + 1) * plan.m] for k, c in enumerate(cols)}
    zb = plan.side
    ops: list = [Annotation(f"pulses={plan.pulses}"), Annotation(f"landing={zb}")]
    if plan.pulses:
        ops += [ColumnReset(s) for c in cols for s in storage[c]]
        step: list = [ColumnGate(GateKind.H, c) for c in cols]
        step += [BoundaryOp(GateKind.H, (Site(s.x, s.y, zb),)) for c in cols for s in storage[c]]
        step += [op for op in _pulse_ops(dims) if isinstance(op, VerticalCZLayer)]
        for c in cols:
            chain = [c] + list(storage[c])
            for a, b in zip(chain, chain[1:]):
                step.append(BoundaryOp(GateKind.CZ, (Site(a.x, a.y, zb), Site(b.x, b.y, zb))))
        ops += step * plan.pulses
    ops += [BoundaryOp(GateKind.MEASURE_Z, (Site(c.x, c.y, zb),)) for c in cols]
    return Circuit(dims, tuple(ops), f"readout_z{plane}")
