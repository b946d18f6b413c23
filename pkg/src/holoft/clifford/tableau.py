"""Aaronson-Gottesman stabilizer tableau with classical-control Toffolis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import BadSites, DetControlRequired
from ..ir.model import GateKind
from .pauli import PauliString, g_exponent

CLIFFORD_KINDS = frozenset({GateKind.H, GateKind.S, GateKind.SDG, GateKind.X, GateKind.Y,
                            GateKind.Z, GateKind.CZ, GateKind.CNOT, GateKind.SWAP, GateKind.WAIT})


@dataclass(frozen=True)
class MeasureOutcome:
    bit: int
    deterministic: bool


def conjugate_rows(x: np.ndarray, z: np.ndarray, r: np.ndarray, kind: GateKind,
                   sites: Sequence[int]) -> None:
    """Conjugate Pauli rows in place by a Clifford gate.

    ``x`` and ``z`` are (rows, n) bool arrays, ``r`` holds phases as powers
    of i. Shared by the tableau and the Pauli conjugation utilities.
    """
    if kind is GateKind.H:
        (a,) = sites
        r += 2 * (x[:, a] & z[:, a])
        xa = x[:, a].copy()
        x[:, a] = z[:, a]
        z[:, a] = xa
    elif kind is GateKind.S:
        (a,) = sites
        r += 2 * (x[:, a] & z[:, a])
        z[:, a] ^= x[:, a]
    elif kind is GateKind.SDG:
        (a,) = sites
        r += 2 * (x[:, a] & ~z[:, a])
        z[:, a] ^= x[:, a]
    elif kind is GateKind.X:
        (a,) = sites
        r += 2 * z[:, a]
    elif kind is GateKind.Z:
        (a,) = sites
        r += 2 * x[:, a]
    elif kind is GateKind.Y:
        (a,) = sites
        r += 2 * (x[:, a] ^ z[:, a])
    elif kind is GateKind.CNOT:
        c, t = sites
        r += 2 * (x[:, c] & z[:, t] & ~(x[:, t] ^ z[:, c]))
        x[:, t] ^= x[:, c]
        z[:, c] ^= z[:, t]
    elif kind is GateKind.CZ:
        a, b = sites
        r += 2 * (x[:, a] & x[:, b] & (z[:, a] ^ z[:, b]))
        z[:, a] ^= x[:, b]
        z[:, b] ^= x[:, a]
    elif kind is GateKind.SWAP:
        a, b = sites
        x[:, [a, b]] = x[:, [b, a]]
        z[:, [a, b]] = z[:, [b, a]]
    elif kind is GateKind.WAIT:
        pass
    else:
        raise ValueError(f"{kind.token} is not a Clifford kind")
    r %= 4


class Tableau:
    """Stabilizer state on n qubits.

    Rows ``0..n-1`` are destabilizers and rows ``n..2n-1`` stabilizers. Phases
    are stored as powers of i, so destabilizer rows keep their full phase.
    """

    def __init__(self, n: int, debug: bool = False):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.x = np.zeros((2 * n, n), dtype=bool)
        self.z = np.zeros((2 * n, n), dtype=bool)
        self.r = np.zeros(2 * n, dtype=np.int64)
        idx = np.arange(n)
        self.x[idx, idx] = True
        self.z[n + idx, idx] = True
        self.debug = debug

    # construction helpers -------------------------------------------------
    def copy(self) -> "Tableau":
        t = Tableau.__new__(Tableau)
        t.n, t.debug = self.n, self.debug
        t.x, t.z, t.r = self.x.copy(), self.z.copy(), self.r.copy()
        return t

    def row(self, i: int) -> PauliString:
        return PauliString(self.x[i], self.z[i], int(self.r[i]))

    def stabilizers(self) -> list[PauliString]:
        return [self.row(self.n + i) for i in range(self.n)]

    def destabilizers(self) -> list[PauliString]:
        return [self.row(i) for i in range(self.n)]

    # invariants -------------------------------------------------------------
    def check_invariants(self) -> None:
        """Raise AssertionError if the rows are not a symplectic basis."""
        xi = self.x.astype(np.int64)
        zi = self.z.astype(np.int64)
        comm = (xi @ zi.T + zi @ xi.T) % 2
        n = self.n
        expected = np.zeros((2 * n, 2 * n), dtype=np.int64)
        expected[np.arange(n), n + np.arange(n)] = 1
        expected[n + np.arange(n), np.arange(n)] = 1
        if not np.array_equal(comm, expected):
            raise AssertionError("tableau rows lost the symplectic pairing")
        if np.any(self.r[n:] % 2):
            raise AssertionError("stabilizer row with imaginary phase")

    # gates ------------------------------------------------------------------
    def _check_sites(self, sites: Sequence[int], arity: Optional[int] = None) -> None:
        if arity is not None and len(sites) != arity:
            raise BadSites(f"expected {arity} sites, got {len(sites)}")
        if len(set(sites)) != len(sites) or any(not 0 <= s < self.n for s in sites):
            raise BadSites(f"bad sites {tuple(sites)} for n={self.n}")

    def apply_clifford(self, kind: GateKind, sites: Sequence[int]) -> None:
        if kind not in CLIFFORD_KINDS:
            raise ValueError(f"{kind.token} is not a Clifford kind")
        self._check_sites(sites, kind.arity)
        conjugate_rows(self.x, self.z, self.r, kind, sites)
        if self.debug:
            self.check_invariants()

    def _rowmul_into(self, targets: np.ndarray, src: int) -> None:
        """rows[targets] <- rows[src] * rows[targets]."""
        if targets.size == 0:
            return
        extra = g_exponent(self.x[src], self.z[src], self.x[targets], self.z[targets]).sum(axis=1)
        self.r[targets] = (self.r[targets] + self.r[src] + extra) % 4
        self.x[targets] ^= self.x[src]
        self.z[targets] ^= self.z[src]

    def _product_of_stabilizers(self, mask: np.ndarray) -> PauliString:
        acc = PauliString.identity(self.n)
        for i in np.flatnonzero(mask):
            acc = acc * self.row(self.n + int(i))
        return acc

    def is_deterministic_z(self, q: int) -> bool:
        return not self.x[self.n:, q].any()

    def peek_z(self, q: int) -> Optional[int]:
        """Deterministic Z value of qubit q, or None. Leaves the state untouched."""
        if not self.is_deterministic_z(q):
            return None
        prod = self._product_of_stabilizers(self.x[:self.n, q])
        return 1 if prod.phase == 2 else 0

    def measure_pauli(self, p: PauliString, rng: Optional[np.random.Generator] = None,
                      forced: Optional[int] = None) -> MeasureOutcome:
        """Projective measurement of a Hermitian Pauli; bit 1 means eigenvalue -1."""
        if p.n != self.n or not p.is_hermitian:
            raise BadSites("measured Pauli must be Hermitian on n qubits")
        n = self.n
        anti = (np.count_nonzero(self.x & p.z, axis=1) + np.count_nonzero(self.z & p.x, axis=1)) % 2 == 1
        stab_anti = np.flatnonzero(anti[n:])
        if stab_anti.size == 0:
            prod = self._product_of_stabilizers(anti[:n])
            bit = 0 if prod.phase == p.phase else 1
            return MeasureOutcome(bit, True)
        pidx = n + int(stab_anti[0])
        others = np.flatnonzero(anti)
        others = others[others != pidx]
        self._rowmul_into(others, pidx)
        d = pidx - n
        self.x[d], self.z[d], self.r[d] = self.x[pidx], self.z[pidx], self.r[pidx]
        if forced is not None:
            bit = int(forced)
        else:
            if rng is None:
                raise ValueError("random outcome needs an rng")
            bit = int(rng.integers(2))
        self.x[pidx], self.z[pidx] = p.x, p.z
        self.r[pidx] = (p.phase + 2 * bit) % 4
        if self.debug:
            self.check_invariants()
        return MeasureOutcome(bit, False)

    def measure_z(self, q: int, rng: Optional[np.random.Generator] = None,
                  forced: Optional[int] = None) -> MeasureOutcome:
        self._check_sites([q], 1)
        return self.measure_pauli(PauliString.on(self.n, {q: "Z"}), rng, forced)

    def measure_x(self, q: int, rng: Optional[np.random.Generator] = None,
                  forced: Optional[int] = None) -> MeasureOutcome:
        self._check_sites([q], 1)
        return self.measure_pauli(PauliString.on(self.n, {q: "X"}), rng, forced)

    def reset_z(self, q: int, rng: Optional[np.random.Generator] = None) -> None:
        out = self.measure_z(q, rng if rng is not None else np.random.default_rng(0))
        if out.bit:
            conjugate_rows(self.x, self.z, self.r, GateKind.X, [q])

    def expectation(self, p: PauliString) -> int:
        """<p> for this stabilizer state: +1, -1 or 0."""
        n = self.n
        stab_anti = (np.count_nonzero(self.x[n:] & p.z, axis=1)
                     + np.count_nonzero(self.z[n:] & p.x, axis=1)) % 2
        if stab_anti.any():
            return 0
        anti = (np.count_nonzero(self.x[:n] & p.z, axis=1) + np.count_nonzero(self.z[:n] & p.x, axis=1)) % 2 == 1
        prod = self._product_of_stabilizers(anti)
        diff = (p.phase - prod.phase) % 4
        if diff == 0:
            return 1
        if diff == 2:
            return -1
        return 0

    def apply_toffoli_classical(self, c1: int, c2: int, target: int,
                                polarity: GateKind = GateKind.TOFFOLI) -> None:
        """Toffoli whose controls must be deterministic Z eigenstates."""
        self._check_sites([c1, c2, target], 3)
        v1, v2 = self.peek_z(c1), self.peek_z(c2)
        if v1 is None or v2 is None:
            raise DetControlRequired(f"control {c1 if v1 is None else c2} is not a Z eigenstate",
                                     controls=(c1, c2))
        if v1 and v2:
            kind = GateKind.X if polarity is GateKind.TOFFOLI else GateKind.Z
            conjugate_rows(self.x, self.z, self.r, kind, [target])

    def apply(self, kind: GateKind, sites: Sequence[int],
              rng: Optional[np.random.Generator] = None) -> Optional[MeasureOutcome]:
        """Dispatch any supported kind; returns the outcome for measurements."""
        if kind in CLIFFORD_KINDS:
            self.apply_clifford(kind, sites)
        elif kind in (GateKind.TOFFOLI, GateKind.Z_TOFFOLI):
            self.apply_toffoli_classical(*sites, polarity=kind)
        elif kind is GateKind.RESET:
            self.reset_z(sites[0], rng)
        elif kind is GateKind.MEASURE_Z:
            return self.measure_z(sites[0], rng)
        elif kind is GateKind.MEASURE_X:
            return self.measure_x(sites[0], rng)
        else:
            raise ValueError(f"{kind.token} cannot run on the stabilizer engine")
        return None

    # canonical form ---------------------------------------------------------
    def canonical_form(self) -> "Tableau":
        """Copy with stabilizers in reduced row echelon form (X block first).

        Destabilizers receive the inverse-transpose row operations, keeping the
        symplectic pairing intact.
        """
        t = self.copy()
        n = t.n
        row = 0
        for col in range(2 * n):
            bits = t.x[n:, col] if col < n else t.z[n:, col - n]
            cand = np.flatnonzero(bits[row:])
            if cand.size == 0:
                continue
            piv = row + int(cand[0])
            if piv != row:
                t._swap_pair(row, piv)
            bits = t.x[n:, col] if col < n else t.z[n:, col - n]
            targets = np.flatnonzero(bits)
            targets = targets[targets != row]
            for h in targets:
                t._stab_rowop(int(h), row)
            row += 1
            if row == n:
                break
        return t

    def _swap_pair(self, a: int, b: int) -> None:
        n = self.n
        for off in (0, n):
            i, j = a + off, b + off
            self.x[[i, j]] = self.x[[j, i]]
            self.z[[i, j]] = self.z[[j, i]]
            self.r[[i, j]] = self.r[[j, i]]

    def _stab_rowop(self, h: int, i: int) -> None:
        """stab_h <- stab_i * stab_h and destab_i <- destab_h * destab_i."""
        n = self.n
        self._rowmul_into(np.array([n + h]), n + i)
        self._rowmul_into(np.array([i]), h)

    def stabilizer_key(self) -> tuple:
        c = self.canonical_form()
        n = self.n
        return (c.x[n:].tobytes(), c.z[n:].tobytes(), tuple(int(v) for v in c.r[n:]))


def new_state(n: int, debug: bool = False) -> Tableau:
    return Tableau(n, debug=debug)


def states_equal(a: Tableau, b: Tableau) -> bool:
    """True iff both tableaux stabilize the same state (signs included)."""
    if a.n != b.n:
        return False
    return a.stabilizer_key() == b.stabilizer_key()


def canonical_form(t: Tableau) -> Tableau:
    return t.canonical_form()
