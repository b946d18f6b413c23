"""Addressability checks for semi-global programs.

Rule ids:

* ``R0``: malformed operand (out of range, wrong arity, layer needs nz >= 2)
* ``R1``: measurement or per-site gate outside a boundary operation
* ``R2``: vertical (inter-plane) coupling not expressed as a parity layer
* ``R3``: boundary operation with mixed or non-boundary z
* ``R4``: two-column gate on identical columns
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (Annotation, BoundaryOp, Circuit, ColumnGate, ColumnReset, GateKind,
                    GlobalHLayer, TwoColumnGate, VerticalCZLayer)


@dataclass(frozen=True)
class Violation:
    op_index: int
    rule: str
    message: str

    def __str__(self) -> str:
        return f"op {self.op_index}: {self.rule}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(circuit: Circuit) -> ValidationReport:
    dims = circuit.dims
    out: list[Violation] = []

    def flag(i, rule, msg):
        out.append(Violation(i, rule, msg))

    for i, op in enumerate(circuit.ops):
        if isinstance(op, ColumnGate):
            if not dims.contains_column(op.col):
                flag(i, "R0", f"column {op.col} out of range")
            if op.kind.is_measurement:
                flag(i, "R1", "measurement addressed to a full column reaches bulk sites")
            elif op.kind.arity != 1:
                flag(i, "R0", f"{op.kind.token} is not a single-qubit kind")
        elif isinstance(op, TwoColumnGate):
            for c in (op.col_a, op.col_b):
                if not dims.contains_column(c):
                    flag(i, "R0", f"column {c} out of range")
            if op.kind.arity != 2:
                flag(i, "R0", f"{op.kind.token} is not a two-qubit kind")
            if op.col_a == op.col_b:
                flag(i, "R4", "two-column gate needs distinct columns")
        elif isinstance(op, VerticalCZLayer):
            if dims.nz < 2:
                flag(i, "R0", "parity layer needs nz >= 2")
        elif isinstance(op, ColumnReset):
            if not dims.contains_column(op.col):
                flag(i, "R0", f"column {op.col} out of range")
        elif isinstance(op, BoundaryOp):
            sites = op.sites
            if not 1 <= len(sites) <= 3 or len(sites) != op.kind.arity:
                flag(i, "R0", f"{op.kind.token} takes {op.kind.arity} site(s), got {len(sites)}")
            if len(set(sites)) != len(sites):
                flag(i, "R0", "repeated site")
            if any(not dims.contains_site(s) for s in sites):
                flag(i, "R0", "site out of range")
            zs = {s.z for s in sites}
            if len(zs) > 1 or any(not dims.is_boundary(z) for z in zs):
                flag(i, "R3", f"boundary op on z={sorted(zs)} with nz={dims.nz}")
            if len(zs) > 1 and len(sites) > 1:
                flag(i, "R2", "inter-plane coupling must use a parity layer")
        elif isinstance(op, (GlobalHLayer, Annotation)):
            pass
        else:
            flag(i, "R0", f"unknown op {type(op).__name__}")
    return ValidationReport(tuple(out))
