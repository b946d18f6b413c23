"""Pauli strings in Hermitian form: ``i**phase * prod sigma(x_j, z_j)`` with
sigma(1, 1) = Y."""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

_SYMBOL = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {"I": (0, 0), "_": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_PHASE_PREFIX = {"+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}


def g_exponent(x1, z1, x2, z2) -> np.ndarray:
    """Power of i picked up by sigma(x1,z1) * sigma(x2,z2), elementwise.

    Inputs may broadcast; returns int arrays in {-1, 0, 1}.
    """
    x1 = np.asarray(x1, dtype=np.int8)
    z1 = np.asarray(z1, dtype=np.int8)
    x2 = np.asarray(x2, dtype=np.int8)
    z2 = np.asarray(z2, dtype=np.int8)
    both = x1 & z1
    only_x = x1 & (1 - z1)
    only_z = (1 - x1) & z1
    return both * (z2 - x2) + only_x * z2 * (2 * x2 - 1) + only_z * x2 * (1 - 2 * z2)


class PauliString:
    """An n-qubit Pauli operator with a phase in {1, i, -1, -i}."""

    __slots__ = ("x", "z", "phase")

    def __init__(self, x, z, phase: int = 0):
        self.x = np.array(x, dtype=bool)
        self.z = np.array(z, dtype=bool)
        if self.x.shape != self.z.shape or self.x.ndim != 1:
            raise ValueError("x and z must be equal-length bit vectors")
        self.phase = int(phase) % 4

    @property
    def n(self) -> int:
        return self.x.size

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(np.zeros(n, bool), np.zeros(n, bool))

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse labels such as ``"XIZ"``, ``"-YY"`` or ``"+iZ"``."""
        phase = 0
        body = label.strip()
        for pre in ("+i", "-i", "+", "-", "i"):
            if body.startswith(pre) and (len(body) > len(pre)):
                phase = _PHASE_PREFIX[pre]
                body = body[len(pre):]
                break
        bits = [_BITS[c.upper()] for c in body]
        return cls([b[0] for b in bits], [b[1] for b in bits], phase)

    @classmethod
    def on(cls, n: int, ops: Mapping[int, str], phase: int = 0) -> "PauliString":
        """Build from a sparse map ``{qubit: 'X'|'Y'|'Z'}``."""
        p = cls.identity(n)
        for q, s in ops.items():
            bx, bz = _BITS[s.upper()]
            p.x[q], p.z[q] = bx, bz
        p.phase = phase % 4
        return p

    def copy(self) -> "PauliString":
        return PauliString(self.x.copy(), self.z.copy(), self.phase)

    def label(self) -> str:
        pre = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase]
        return pre + "".join(_SYMBOL[(int(a), int(b))] for a, b in zip(self.x, self.z))

    __str__ = label

    def __repr__(self) -> str:
        return f"PauliString({self.label()!r})"

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.x | self.z))

    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())

    def symbol(self, q: int) -> str:
        return _SYMBOL[(int(self.x[q]), int(self.z[q]))]

    def commutes(self, other: "PauliString") -> bool:
        return not (np.count_nonzero(self.x & other.z) + np.count_nonzero(self.z & other.x)) % 2

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError("length mismatch")
        extra = int(g_exponent(self.x, self.z, other.x, other.z).sum())
        return PauliString(self.x ^ other.x, self.z ^ other.z, self.phase + other.phase + extra)

    def __neg__(self) -> "PauliString":
        return PauliString(self.x, self.z, self.phase + 2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (self.phase == other.phase and np.array_equal(self.x, other.x)
                and np.array_equal(self.z, other.z))

    def __hash__(self) -> int:
        return hash((self.phase, self.x.tobytes(), self.z.tobytes()))

    def restrict(self, sites: Iterable[int]) -> "PauliString":
        """Sub-string on ``sites`` (phase kept)."""
        s = list(sites)
        return PauliString(self.x[s], self.z[s], self.phase)

    def embed(self, n: int, sites: Iterable[int]) -> "PauliString":
        """Place this string on ``sites`` of an n-qubit register."""
        s = list(sites)
        p = PauliString.identity(n)
        p.x[s] = self.x
        p.z[s] = self.z
        p.phase = self.phase
        return p

    def matrix(self) -> np.ndarray:
        """Dense matrix, qubit 0 as the least significant bit."""
        mats = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]),
                "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1])}
        out = np.array([[1.0 + 0j]])
        for q in range(self.n):
            out = np.kron(mats[self.symbol(q)], out)
        return (1j ** self.phase) * out
