"""Batched Pauli frames: one column per Monte Carlo trial."""

from __future__ import annotations

import numpy as np

from ..ir.model import GateKind


class PauliFrames:
    """Phase-free Pauli frames for ``batch`` trials on ``n`` qubits.

    Stored qubit-major, ``x[q]`` is the X bit of qubit q across trials.
    """

    def __init__(self, n: int, batch: int):
        self.n = n
        self.batch = batch
        self.x = np.zeros((n, batch), dtype=bool)
        self.z = np.zeros((n, batch), dtype=bool)

    def clifford(self, kind: GateKind, sites) -> None:
        x, z = self.x, self.z
        if kind is GateKind.H:
            (a,) = sites
            tmp = x[a].copy()
            x[a] = z[a]
            z[a] = tmp
        elif kind in (GateKind.S, GateKind.SDG):
            (a,) = sites
            z[a] ^= x[a]
        elif kind is GateKind.CNOT:
            c, t = sites
            x[t] ^= x[c]
            z[c] ^= z[t]
        elif kind is GateKind.CZ:
            a, b = sites
            z[a] ^= x[b]
            z[b] ^= x[a]
        elif kind is GateKind.SWAP:
            a, b = sites
            x[[a, b]] = x[[b, a]]
            z[[a, b]] = z[[b, a]]
        elif kind in (GateKind.X, GateKind.Y, GateKind.Z, GateKind.WAIT):
            pass
        else:
            raise ValueError(f"{kind.token} is not a frame Clifford")

    def apply_pauli(self, q: int, xbits: np.ndarray, zbits: np.ndarray) -> None:
        self.x[q] ^= xbits
        self.z[q] ^= zbits
