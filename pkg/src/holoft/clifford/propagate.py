"""Heisenberg propagation of Pauli operators through physical circuits."""

from __future__ import annotations

import numpy as np

from ..errors import NonPauliPropagation
from ..ir.model import GateKind, PhysicalCircuit
from .pauli import PauliString
from .tableau import CLIFFORD_KINDS, conjugate_rows


def _check_nonclifford(kind: GateKind, sites, x, z, where: int) -> None:
    if kind is GateKind.TOFFOLI:
        c1, c2, t = sites
        bad = x[c1] or x[c2] or z[t]
    elif kind is GateKind.Z_TOFFOLI:
        bad = any(x[s] for s in sites)
    elif kind in (GateKind.CXHALF, GateKind.CXHALF_DG):
        c, t = sites
        bad = x[c] or z[t]
    elif kind is GateKind.ZQUARTER:
        bad = bool(x[sites[0]])
    else:
        raise ValueError(kind)
    if bad:
        raise NonPauliPropagation(f"gate {where} ({kind.token}) maps the Pauli outside the Pauli group",
                                  gate=where)


def conjugate_pauli(pc: PhysicalCircuit, p: PauliString, start: int = 0) -> PauliString:
    """Return U p U^dagger for the gates of ``pc`` from index ``start`` on.

    Non-Clifford gates are allowed only where they commute with ``p``'s
    current support (Z on controls, X on an X-Toffoli target, Z on a
    Z-Toffoli). Resets absorb whatever sits on their qubit; measurements
    leave the operator in place.
    """
    if p.n != pc.n_qubits:
        raise ValueError("Pauli length differs from circuit width")
    x = p.x[None, :].copy()
    z = p.z[None, :].copy()
    r = np.array([p.phase], dtype=np.int64)
    for i, g in enumerate(pc.gates[start:], start):
        k = g.kind
        if k in CLIFFORD_KINDS:
            conjugate_rows(x, z, r, k, g.sites)
        elif k is GateKind.RESET:
            x[0, g.sites[0]] = False
            z[0, g.sites[0]] = False
        elif k.is_measurement:
            continue
        else:
            _check_nonclifford(k, g.sites, x[0], z[0], i)
    return PauliString(x[0], z[0], int(r[0]))


def conjugate_through_gates(gates, n: int, p: PauliString) -> PauliString:
    """Same as :func:`conjugate_pauli` for a bare ``(kind, sites)`` list."""
    x = p.x[None, :].copy()
    z = p.z[None, :].copy()
    r = np.array([p.phase], dtype=np.int64)
    for i, (k, sites) in enumerate(gates):
        if k in CLIFFORD_KINDS:
            conjugate_rows(x, z, r, k, sites)
        elif k is GateKind.RESET:
            x[0, sites[0]] = z[0, sites[0]] = False
        elif k.is_measurement:
            continue
        else:
            _check_nonclifford(k, sites, x[0], z[0], i)
    return PauliString(x[0], z[0], int(r[0]))
