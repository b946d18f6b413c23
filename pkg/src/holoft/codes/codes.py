"""Repetition and Bacon-Shor code data."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..clifford.pauli import PauliString


@dataclass(frozen=True)
class CodeSpec:
    name: str
    n: int
    stabilizers: tuple
    gauge: tuple
    logical_x: PauliString
    logical_z: PauliString
    distance: int
    orientation: str = "standard"

    @property
    def logical_y(self) -> PauliString:
        # Y = i X Z
        p = self.logical_x * self.logical_z
        return PauliString(p.x, p.z, p.phase + 1)

    def logical(self, which: str) -> PauliString:
        return {"X": self.logical_x, "Y": self.logical_y, "Z": self.logical_z}[which.upper()]

    def z_type(self, paulis) -> list[PauliString]:
        return [p for p in paulis if not p.x.any()]

    def x_type(self, paulis) -> list[PauliString]:
        return [p for p in paulis if not p.z.any()]


def _p(n: int, sites, sym: str) -> PauliString:
    return PauliString.on(n, {q: sym for q in sites})


def code_qr3(basis: str = "bitflip") -> CodeSpec:
    if basis == "bitflip":
        return CodeSpec("qr3-bitflip", 3, (_p(3, (0, 1), "Z"), _p(3, (1, 2), "Z")), (),
                        _p(3, (0, 1, 2), "X"), _p(3, (0,), "Z"), 3, "bitflip")
    if basis == "phaseflip":
        return CodeSpec("qr3-phaseflip", 3, (_p(3, (0, 1), "X"), _p(3, (1, 2), "X")), (),
                        _p(3, (0,), "X"), _p(3, (0, 1, 2), "Z"), 3, "phaseflip")
    raise ValueError(f"unknown basis {basis!r}")


def bs_index(i: int, j: int, orientation: str = "standard") -> int:
    """Qubit of grid cell (row i, column j), zero-based, row-major.

    The rotated code is the transpose, so its cell (i, j) lives where the
    standard code keeps (j, i).
    """
    return 3 * i + j if orientation == "standard" else 3 * j + i


def code_bs9(orientation: str = "standard") -> CodeSpec:
    """Bacon-Shor [[9,1,3]].

    Standard orientation: X stabilizers on column pairs (0,1) and (1,2),
    Z stabilizers on row pairs, X_L on column 0, Z_L on row 0. Gauge
    generators are X pairs along rows and Z pairs along columns.
    """
    if orientation not in ("standard", "rotated"):
        raise ValueError(f"unknown orientation {orientation!r}")
    q = lambda i, j: bs_index(i, j, orientation)
    stabs = (
        _p(9, [q(i, j) for i in range(3) for j in (0, 1)], "X"),
        _p(9, [q(i, j) for i in range(3) for j in (1, 2)], "X"),
        _p(9, [q(i, j) for i in (0, 1) for j in range(3)], "Z"),
        _p(9, [q(i, j) for i in (1, 2) for j in range(3)], "Z"),
    )
    gauge = tuple(_p(9, (q(i, j), q(i, j + 1)), "X") for i in range(3) for j in range(2)) + \
        tuple(_p(9, (q(i, j), q(i + 1, j)), "Z") for i in range(2) for j in range(3))
    return CodeSpec(f"bs9-{orientation}", 9, stabs, gauge,
                    _p(9, [q(i, 0) for i in range(3)], "X"),
                    _p(9, [q(0, j) for j in range(3)], "Z"), 3, orientation)


def gf2_rank(paulis) -> int:
    """Rank of Pauli strings as binary symplectic vectors."""
    if not paulis:
        return 0
    m = np.array([np.concatenate([p.x, p.z]) for p in paulis], dtype=np.uint8)
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        piv = np.flatnonzero(m[rank:, c])
        if piv.size == 0:
            continue
        p = rank + piv[0]
        m[[rank, p]] = m[[p, rank]]
        others = np.flatnonzero(m[:, c])
        others = others[others != rank]
        m[others] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def syndrome(code: CodeSpec, error: PauliString) -> tuple[int, ...]:
    return tuple(0 if s.commutes(error) else 1 for s in code.stabilizers)


def correction_table(code: CodeSpec) -> dict:
    """Lowest-weight (<= 1) Pauli for every syndrome reachable that way."""
    table = {syndrome(code, PauliString.identity(code.n)): PauliString.identity(code.n)}
    for q in range(code.n):
        for sym in "XZY":
            e = PauliString.on(code.n, {q: sym})
            table.setdefault(syndrome(code, e), e)
    return table


def row_parities(bits, orientation: str = "standard") -> np.ndarray:
    """Parities of the three rows of a 9-bit (or 9 x batch) array."""
    b = np.asarray(bits, dtype=bool)
    idx = np.array([[bs_index(i, j, orientation) for j in range(3)] for i in range(3)])
    return b[idx].sum(axis=1) % 2 == 1


def col_parities(bits, orientation: str = "standard") -> np.ndarray:
    b = np.asarray(bits, dtype=bool)
    idx = np.array([[bs_index(i, j, orientation) for i in range(3)] for j in range(3)])
    return b[idx].sum(axis=1) % 2 == 1


def ideal_encoder(code: CodeSpec, state: str = "zero") -> list:
    """Noiseless Clifford gate list preparing |0_L> or |+_L> from |0...0>."""
    from ..ir.model import GateKind as G
    if code.name == "qr3-bitflip":
        return [] if state == "zero" else [(G.H, (0,)), (G.CNOT, (0, 1)), (G.CNOT, (0, 2))]
    if code.name == "qr3-phaseflip":
        base = [(G.H, (0,)), (G.CNOT, (0, 1)), (G.CNOT, (0, 2))]
        return base + [(G.H, (q,)) for q in range(3)] if state == "zero" else [(G.H, (q,)) for q in range(3)]
    if code.name.startswith("bs9"):
        gates = []
        if state == "zero":
            # each row: (|+++> + |--->)/sqrt2
            for i in range(3):
                q = [bs_index(i, j, code.orientation) for j in range(3)]
                gates += [(G.H, (q[0],)), (G.CNOT, (q[0], q[1])), (G.CNOT, (q[0], q[2]))]
                gates += [(G.H, (x,)) for x in q]
        else:
            # each column: (|000> + |111>)/sqrt2
            for j in range(3):
                q = [bs_index(i, j, code.orientation) for i in range(3)]
                gates += [(G.H, (q[0],)), (G.CNOT, (q[0], q[1])), (G.CNOT, (q[0], q[2]))]
        return gates
    raise ValueError(code.name)


def logical_basis_vectors(code: CodeSpec) -> tuple[np.ndarray, np.ndarray]:
    """Dense |0_L>, |1_L> in the gauge fixed by :func:`ideal_encoder`."""
    from ..dense import StateVector, apply_pauli, run_unitary
    zero = run_unitary(ideal_encoder(code, "zero"), StateVector(code.n))
    one = apply_pauli(zero.copy(), code.logical_x)
    return zero.amps, one.amps


def encoded_state(code: CodeSpec, a: complex, b: complex) -> np.ndarray:
    zero, one = logical_basis_vectors(code)
    v = a * zero + b * one
    return v / np.linalg.norm(v)
