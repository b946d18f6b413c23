"""Columnar stochastic noise and coherent pulse inhomogeneity."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from ..clifford.pauli import PauliString
from ..clifford.tableau import Tableau
from ..ir.model import GateKind, PhysicalCircuit

G = GateKind

RESET_STATES = ("mixed", "random_pure", "one")


@dataclass(frozen=True)
class NoiseModel:
    """Error probabilities per location.

    Attributes:
        p_gate: probability that a gate location fires.
        p_prep: probability that a reset location outputs ``reset_state``
            instead of |0>.
        p_meas: probability that a boundary measurement record flips.
        columnar: a firing location draws one uniform nontrivial Pauli on its
            whole support; otherwise every touched qubit gets an independent
            uniform X, Y or Z.
        reset_state: the failed-reset output: "mixed", "random_pure" or "one".
    """

    p_gate: float = 0.0
    p_prep: float = 0.0
    p_meas: float = 0.0
    columnar: bool = True
    reset_state: str = "mixed"

    def __post_init__(self):
        for name in ("p_gate", "p_prep", "p_meas"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.reset_state not in RESET_STATES:
            raise ValueError(f"reset_state must be one of {RESET_STATES}")

    def at(self, p: float) -> "NoiseModel":
        """Same model with every rate set to ``p`` (a sweep point)."""
        return replace(self, p_gate=p, p_prep=p, p_meas=p)


@dataclass(frozen=True)
class InhomogeneityModel:
    """Per-plane over-rotation exp(i theta_z G) following an ideal pulse.

    ``dist`` is "constant" (theta_z = theta0), "uniform" (iid in
    [-theta0, theta0]) or "linear" (theta_z = theta0 (z+1)/nz).
    """

    generator: str = "X"
    dist: str = "constant"

    def __post_init__(self):
        if self.generator not in ("X", "Y", "Z"):
            raise ValueError("generator must be X, Y or Z")
        if self.dist not in ("constant", "uniform", "linear"):
            raise ValueError("dist must be constant, uniform or linear")

    def thetas(self, theta0: float, nz: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
        if not np.isfinite(theta0):
            raise ValueError("theta0 must be finite")
        if self.dist == "constant":
            return np.full(nz, float(theta0))
        if self.dist == "linear":
            return theta0 * (np.arange(nz) + 1) / nz
        rng = rng if rng is not None else np.random.default_rng(0)
        return rng.uniform(-theta0, theta0, nz)


@dataclass(frozen=True)
class Location:
    """One error location: a source op of the circuit.

    ``after`` is the index of the last gate the source owns; noise is applied
    right after it.
    """

    source: int
    kind: str           # "gate", "prep" or "meas"
    sites: tuple
    after: int
    gates: tuple


def error_locations(pc: PhysicalCircuit) -> list[Location]:
    out = []
    for src, idx in sorted(pc.locations().items(), key=lambda kv: kv[1][-1]):
        kinds = {pc.gates[i].kind for i in idx}
        if kinds == {G.WAIT}:
            kind = "gate"
        elif kinds <= {G.RESET}:
            kind = "prep"
        elif all(k.is_measurement for k in kinds):
            kind = "meas"
        else:
            kind = "gate"
        sites = tuple(sorted({q for i in idx for q in pc.gates[i].sites}))
        out.append(Location(src, kind, sites, idx[-1], tuple(idx)))
    return out


def sample_pauli_bits(k: int, batch: int, columnar: bool, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """(k, batch) boolean x and z bits of nontrivial Paulis on k qubits."""
    if columnar:
        u = rng.integers(1, 4 ** k, size=batch, dtype=np.int64)
        shifts = 2 * np.arange(k, dtype=np.int64)[:, None]
        x = ((u[None, :] >> shifts) & 1).astype(bool)
        z = ((u[None, :] >> (shifts + 1)) & 1).astype(bool)
        return x, z
    u = rng.integers(1, 4, size=(k, batch))
    return (u & 1).astype(bool), (u & 2).astype(bool)


@dataclass(frozen=True)
class PlanStep:
    """``op`` is "gate" (run ``gate``), "pauli" (apply ``pauli`` on ``sites``),
    "reset_fail" (replace qubit ``sites[0]`` by ``state``) or "flip" (invert
    the record of gate ``gate``)."""

    op: str
    gate: Optional[int] = None
    sites: tuple = ()
    pauli: Optional[PauliString] = None
    state: str = ""


@dataclass(frozen=True)
class NoisyPlan:
    circuit: PhysicalCircuit
    steps: tuple

    @property
    def faults(self) -> list[PlanStep]:
        return [s for s in self.steps if s.op != "gate"]


def inject(pc: PhysicalCircuit, noise: NoiseModel, rng: np.random.Generator) -> NoisyPlan:
    """Sample one noisy trajectory of ``pc``.

    Every location fires independently with its probability. Gate locations
    append a Pauli on their support, preparation locations replace the reset
    output, measurement locations flip the record.
    """
    by_after = {loc.after: loc for loc in error_locations(pc)}
    steps = []
    for i, g in enumerate(pc.gates):
        steps.append(PlanStep("gate", gate=i))
        loc = by_after.get(i)
        if loc is None:
            continue
        if loc.kind == "prep":
            for gi in loc.gates:
                if rng.random() < noise.p_prep:
                    steps.append(PlanStep("reset_fail", sites=pc.gates[gi].sites, state=noise.reset_state))
        elif loc.kind == "meas":
            for gi in loc.gates:
                if rng.random() < noise.p_meas:
                    steps.append(PlanStep("flip", gate=gi))
        elif rng.random() < noise.p_gate:
            x, z = sample_pauli_bits(len(loc.sites), 1, noise.columnar, rng)
            p = PauliString(x[:, 0], z[:, 0])
            steps.append(PlanStep("pauli", sites=loc.sites, pauli=p))
    return NoisyPlan(pc, tuple(steps))


_STAB_PREP = {"0": [], "1": [G.X], "+": [G.H], "-": [G.X, G.H], "+i": [G.H, G.S], "-i": [G.X, G.H, G.S]}


def execute_plan(plan: NoisyPlan, t: Tableau, rng: np.random.Generator, offset: int = 0,
                 collapsible: frozenset = frozenset(), forced: Optional[dict] = None) -> dict:
    """Run a plan on a tableau.

    Toffoli controls must be Z eigenstates unless they are listed in
    ``collapsible`` (circuit indices), in which case they are measured first.
    ``forced`` maps a Toffoli's gate index to the two control values to
    collapse onto, which replays one trajectory of the frame simulator.
    Returns the measurement record (gate index -> bit). A "random_pure"
    failed reset draws one of the six single-qubit stabilizer states.
    """
    record = {}
    for step in plan.steps:
        if step.op == "gate":
            g = plan.circuit.gates[step.gate]
            sites = tuple(q + offset for q in g.sites)
            if g.kind in (G.TOFFOLI, G.Z_TOFFOLI):
                for j, c in enumerate(g.sites[:2]):
                    if c in collapsible and t.peek_z(c + offset) is None:
                        want = forced[step.gate][j] if forced and step.gate in forced else None
                        t.measure_z(c + offset, rng, forced=want)
                t.apply_toffoli_classical(*sites, polarity=g.kind)
                continue
            out = t.apply(g.kind, sites, rng)
            if out is not None:
                record[step.gate] = out.bit
        elif step.op == "pauli":
            for j, q in enumerate(step.sites):
                sym = step.pauli.symbol(j)
                if sym != "I":
                    t.apply_clifford({"X": G.X, "Y": G.Y, "Z": G.Z}[sym], [q + offset])
        elif step.op == "reset_fail":
            q = step.sites[0] + offset
            if step.state == "one":
                label = "1"
            elif step.state == "mixed":
                label = "1" if rng.random() < 0.5 else "0"
            else:
                label = list(_STAB_PREP)[rng.integers(6)]
            t.reset_z(q, rng)
            for k in _STAB_PREP[label]:
                t.apply_clifford(k, [q])
        elif step.op == "flip":
            record[step.gate] ^= 1
    return record
