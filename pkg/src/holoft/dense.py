"""Small exact state-vector simulator.

Qubit 0 is the least significant bit of the amplitude index. In gate
matrices the first operand is the most significant bit, so ``CNOT`` has the
textbook matrix with the control listed first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import BadSites, CapExceeded, DimMismatch
from .ir.model import GateKind, PhysicalCircuit

DEFAULT_CAP = 22
_S2 = 1 / np.sqrt(2)
_SQX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])


def _controlled(u: np.ndarray, controls: int = 1) -> np.ndarray:
    dim = 2 ** (controls + 1)
    out = np.eye(dim, dtype=complex)
    out[dim - 2:, dim - 2:] = u
    return out


_MATRICES = {
    GateKind.H: _S2 * np.array([[1, 1], [1, -1]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.diag([1, -1]).astype(complex),
    GateKind.S: np.diag([1, 1j]),
    GateKind.SDG: np.diag([1, -1j]),
    GateKind.ZQUARTER: np.diag([1, np.exp(1j * np.pi / 4)]),
    GateKind.WAIT: np.eye(2, dtype=complex),
    GateKind.CNOT: _controlled(np.array([[0, 1], [1, 0]], dtype=complex)),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
    GateKind.SWAP: np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
    GateKind.CXHALF: _controlled(_SQX),
    GateKind.CXHALF_DG: _controlled(_SQX.conj().T),
    GateKind.TOFFOLI: _controlled(np.array([[0, 1], [1, 0]], dtype=complex), 2),
    GateKind.Z_TOFFOLI: np.diag([1] * 7 + [-1]).astype(complex),
}

_GENERATORS = {"X": _MATRICES[GateKind.X], "Y": _MATRICES[GateKind.Y], "Z": _MATRICES[GateKind.Z]}


def gate_matrix(kind: Union[GateKind, str], theta: Optional[float] = None) -> np.ndarray:
    """Unitary for a gate kind, or ``exp(i*theta*G)`` for ``"RX"|"RY"|"RZ"``."""
    if isinstance(kind, str):
        name = kind.upper()
        if name in ("RX", "RY", "RZ"):
            if theta is None:
                raise ValueError("rotation needs theta")
            g = _GENERATORS[name[1]]
            return np.cos(theta) * np.eye(2) + 1j * np.sin(theta) * g
        kind = GateKind.parse(kind)
    if theta is not None:
        raise ValueError(f"{kind.token} takes no parameter")
    try:
        return _MATRICES[kind]
    except KeyError:
        raise ValueError(f"{kind.token} is not unitary") from None


class StateVector:
    """Pure state on n qubits with a size cap."""

    def __init__(self, n: int, amplitudes: Optional[np.ndarray] = None, cap: int = DEFAULT_CAP):
        if n > cap:
            raise CapExceeded(f"{n} qubits exceeds the dense cap of {cap}")
        if n < 1:
            raise BadSites("need at least one qubit")
        self.n = n
        self.cap = cap
        if amplitudes is None:
            self.amps = np.zeros(2 ** n, dtype=complex)
            self.amps[0] = 1.0
        else:
            a = np.asarray(amplitudes, dtype=complex).reshape(-1)
            if a.size != 2 ** n:
                raise DimMismatch(f"expected {2 ** n} amplitudes, got {a.size}")
            self.amps = a.copy()

    @classmethod
    def from_product(cls, labels: Sequence[str], cap: int = DEFAULT_CAP) -> "StateVector":
        """Product state from per-qubit labels in {0, 1, +, -, +i, -i, H}."""
        single = {"0": [1, 0], "1": [0, 1], "+": [_S2, _S2], "-": [_S2, -_S2],
                  "+i": [_S2, 1j * _S2], "-i": [_S2, -1j * _S2],
                  "H": [_S2, np.exp(1j * np.pi / 4) * _S2]}
        vec = np.array([1.0 + 0j])
        for lab in labels:
            vec = np.kron(np.array(single[lab], dtype=complex), vec)
        return cls(len(labels), vec, cap)

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps, self.cap)

    def norm(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def tensor(self) -> np.ndarray:
        return self.amps.reshape((2,) * self.n)

    def axis(self, q: int) -> int:
        return self.n - 1 - q

    def _check(self, sites: Sequence[int]) -> None:
        if len(set(sites)) != len(sites) or any(not 0 <= s < self.n for s in sites):
            raise BadSites(f"bad sites {tuple(sites)} for n={self.n}")

    def apply_matrix(self, u: np.ndarray, sites: Sequence[int]) -> None:
        self._check(sites)
        k = len(sites)
        axes = [self.axis(q) for q in sites]
        t = np.moveaxis(self.tensor(), axes, range(k))
        shape = t.shape
        t = (u @ t.reshape(2 ** k, -1)).reshape(shape)
        self.amps = np.moveaxis(t, range(k), axes).reshape(-1)

    def tensor_with(self, other: "StateVector") -> "StateVector":
        """``other`` appended as the higher-indexed qubits."""
        return StateVector(self.n + other.n, np.kron(other.amps, self.amps), self.cap)


def apply_gate(sv: StateVector, kind: Union[GateKind, str], sites: Sequence[int],
               theta: Optional[float] = None) -> StateVector:
    u = gate_matrix(kind, theta)
    if u.shape[0] != 2 ** len(sites):
        raise BadSites(f"gate needs {int(np.log2(u.shape[0]))} sites, got {len(sites)}")
    sv.apply_matrix(u, sites)
    return sv


def apply_pauli(sv: StateVector, pauli) -> StateVector:
    """Apply a :class:`PauliString` (any phase)."""
    n = sv.n
    idx = np.arange(2 ** n)
    xm = sum(1 << q for q in range(n) if pauli.x[q])
    zm = sum(1 << q for q in range(n) if pauli.z[q])
    ny = int(np.count_nonzero(pauli.x & pauli.z))
    parity = np.zeros(2 ** n, dtype=np.int64)
    zz = idx & zm
    while zz.any():
        parity ^= zz & 1
        zz = zz >> 1
    out = np.empty_like(sv.amps)
    out[idx ^ xm] = (1j ** (pauli.phase + ny)) * np.where(parity, -1, 1) * sv.amps
    sv.amps = out
    return sv


def expectation(sv: StateVector, pauli) -> complex:
    tmp = apply_pauli(sv.copy(), pauli)
    return complex(np.vdot(sv.amps, tmp.amps))


@dataclass(frozen=True)
class Branch:
    bits: tuple
    probability: float
    state: StateVector


@dataclass(frozen=True)
class BranchSet:
    branches: tuple

    def __iter__(self):
        return iter(self.branches)

    def __len__(self):
        return len(self.branches)

    def total(self) -> float:
        return float(sum(b.probability for b in self.branches))


def measure_enumerate(sv: StateVector, sites: Sequence[int], basis: str = "Z",
                      tol: float = 1e-14) -> BranchSet:
    """All outcome branches of measuring ``sites`` in the Z or X basis.

    ``bits`` lists outcomes in the order of ``sites``.
    """
    sites = list(sites)
    sv._check(sites)
    if len(sites) > 20:
        raise BadSites("at most 20 measured sites")
    basis = basis.upper()
    work = sv.copy()
    if basis == "X":
        for q in sites:
            apply_gate(work, GateKind.H, [q])
    elif basis != "Z":
        raise ValueError(f"basis {basis!r}")
    k = len(sites)
    axes = [work.axis(q) for q in sites]
    t = np.moveaxis(work.tensor(), axes, range(k))
    shape = t.shape
    flat = t.reshape(2 ** k, -1)
    probs = np.einsum("ij,ij->i", flat, flat.conj()).real
    out = []
    for outcome in np.flatnonzero(probs > tol):
        pr = float(probs[outcome])
        proj = np.zeros_like(flat)
        proj[outcome] = flat[outcome] / np.sqrt(pr)
        amps = np.moveaxis(proj.reshape(shape), range(k), axes).reshape(-1)
        st = StateVector(sv.n, amps, sv.cap)
        if basis == "X":
            for q in sites:
                apply_gate(st, GateKind.H, [q])
        bits = tuple((int(outcome) >> (k - 1 - j)) & 1 for j in range(k))
        out.append(Branch(bits, pr, st))
    return BranchSet(tuple(out))


def measure_remove(sv: StateVector, sites: Sequence[int], tol: float = 1e-14) -> BranchSet:
    """Z-basis outcome branches with the measured qubits traced out.

    Each branch state is a normalized slice on the remaining qubits, in
    increasing qubit order, so no full-size copy is made per outcome.
    """
    sites = list(sites)
    sv._check(sites)
    k = len(sites)
    axes = [sv.axis(q) for q in sites]
    flat = np.moveaxis(sv.tensor(), axes, range(k)).reshape(2 ** k, -1)
    probs = np.einsum("ij,ij->i", flat, flat.conj()).real
    out = []
    for outcome in np.flatnonzero(probs > tol):
        pr = float(probs[outcome])
        st = StateVector(sv.n - k, flat[outcome] / np.sqrt(pr), sv.cap)
        bits = tuple((int(outcome) >> (k - 1 - j)) & 1 for j in range(k))
        out.append(Branch(bits, pr, st))
    return BranchSet(tuple(out))


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.n != b.n:
        raise DimMismatch(f"{a.n} vs {b.n} qubits")
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)


def reduced_density(sv: StateVector, subset: Sequence[int]) -> np.ndarray:
    subset = list(subset)
    sv._check(subset)
    k = len(subset)
    axes = [sv.axis(q) for q in subset]
    m = np.moveaxis(sv.tensor(), axes, range(k)).reshape(2 ** k, -1)
    return m @ m.conj().T


def reduced_state_match(sv: StateVector, subset_a: Sequence[int], ref: StateVector,
                        subset_b: Sequence[int], tol: float = 1e-8) -> bool:
    if len(subset_a) != len(subset_b) or len(subset_a) > 10:
        raise BadSites("subsets must have equal size <= 10")
    diff = reduced_density(sv, subset_a) - reduced_density(ref, subset_b)
    return 0.5 * float(np.abs(np.linalg.eigvalsh(diff)).sum()) <= tol


GateList = Union[PhysicalCircuit, Iterable]


def _gate_iter(circuit: GateList):
    if isinstance(circuit, PhysicalCircuit):
        return [(g.kind, g.sites) for g in circuit.gates]
    return list(circuit)


def run_unitary(circuit: GateList, sv: StateVector) -> StateVector:
    for kind, sites in _gate_iter(circuit):
        if kind is GateKind.WAIT:
            continue
        apply_gate(sv, kind, sites)
    return sv


def unitary(circuit: GateList, n: int) -> np.ndarray:
    gates = _gate_iter(circuit)
    cols = []
    for b in range(2 ** n):
        v = np.zeros(2 ** n, dtype=complex)
        v[b] = 1
        cols.append(run_unitary(gates, StateVector(n, v)).amps)
    return np.array(cols).T


def channel_distance(circuit_a: GateList, circuit_b: GateList, n: int) -> float:
    """Max over product inputs in {0,1,+,+i}^n of 1 - output fidelity."""
    ga, gb = _gate_iter(circuit_a), _gate_iter(circuit_b)
    worst = 0.0
    for labels in product(("0", "1", "+", "+i"), repeat=n):
        a = run_unitary(ga, StateVector.from_product(labels))
        b = run_unitary(gb, StateVector.from_product(labels))
        worst = max(worst, 1.0 - fidelity(a, b))
    return worst


def from_stabilizers(stabilizers, n: int, seed: int = 12345) -> StateVector:
    """State vector stabilized by the given commuting Pauli generators."""
    rng = np.random.default_rng(seed)
    psi = StateVector(n, rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n))
    for s in stabilizers:
        img = apply_pauli(psi.copy(), s)
        psi.amps = 0.5 * (psi.amps + img.amps)
    nrm = np.sqrt(psi.norm())
    if nrm < 1e-9:
        raise ValueError("projection vanished")
    psi.amps /= nrm
    return psi


def from_tableau(t) -> StateVector:
    return from_stabilizers(t.stabilizers(), t.n)
