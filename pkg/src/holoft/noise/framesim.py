"""Batched Pauli-frame simulation of noisy gadget runs.

A noiseless reference run on the tableau fixes one value for every Toffoli
control (collapsing the declared ones) and every measurement. Each trial then
tracks only its Pauli difference from the reference. A Toffoli whose controls
actually read ``a = ref ^ x`` differs from the reference by
``(a1 & a2) ^ (r1 & r2)`` on its target, which is exact because the controls
are Z eigenstates at that point. After resets, measurements and Toffoli uses
the Z bit of the qubit is randomized, the usual trick that turns a single
reference sample into the right outcome distribution.

Random outcomes in the reference (collapsed controls, for instance gauge
values) are resampled per trial by starting every frame at a random element
of the input state's stabilizer group: a physically trivial Pauli that flips
a random control whenever the control anticommutes with it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..clifford.frames import PauliFrames
from ..clifford.tableau import Tableau
from ..codes.execute import run_tableau
from ..codes.gadgets import GadgetCircuit
from ..ir.model import GateKind, PhysicalCircuit
from .model import NoiseModel, error_locations, sample_pauli_bits

G = GateKind


@dataclass
class Reference:
    controls: dict      # gate index -> (r1, r2)
    outcomes: dict      # gate index -> bit
    tableau: Tableau
    prep: tuple = ()    # Clifford gates that made the input state from |0...0>


def randomize_stabilizers(frames: PauliFrames, prep: Sequence[tuple], rng: np.random.Generator) -> None:
    """Multiply every frame by a uniformly random stabilizer of prep|0...0>."""
    frames.z ^= rng.random(frames.z.shape) < 0.5
    for kind, sites in prep:
        frames.clifford(kind, sites)


def reference_run(gadget: GadgetCircuit, prep: Sequence[tuple], rng: np.random.Generator,
                  collapse="declared") -> Reference:
    """Noiseless run after the Clifford gate list ``prep`` (on circuit indices)."""
    t = Tableau(gadget.n_qubits)
    for kind, sites in prep:
        t.apply(kind, sites, rng)
    run = run_tableau(gadget, t, rng, collapse=collapse)
    return Reference(run.controls, run.outcomes, t, tuple(prep))


class FrameSimulator:
    """Noisy frame runs of one physical circuit against a fixed reference."""

    def __init__(self, pc: PhysicalCircuit, ref: Reference):
        self.pc = pc
        self.ref = ref
        self.locs = {loc.after: loc for loc in error_locations(pc)}

    def run(self, frames: PauliFrames, noise: Optional[NoiseModel], rng: np.random.Generator,
            inject_after: Optional[dict] = None, randomize: bool = True,
            trace: Optional[dict] = None) -> dict:
        """Advance ``frames`` through the circuit.

        ``inject_after`` maps a gate index to ``(sites, x, z)`` frame bits added
        after that gate (deliberate faults). ``randomize`` first multiplies the
        frames by random input stabilizers. If ``trace`` is a dict it receives
        the control values ``(a1, a2)`` read by every Toffoli. Returns
        measurement flips (gate index -> boolean array).
        """
        if randomize:
            randomize_stabilizers(frames, self.ref.prep, rng)
        B = frames.batch
        x, z = frames.x, frames.z
        flips = {}
        for i, g in enumerate(self.pc.gates):
            k = g.kind
            if k is G.RESET:
                (q,) = g.sites
                x[q] = False
                z[q] = rng.random(B) < 0.5
            elif k in (G.TOFFOLI, G.Z_TOFFOLI):
                c1, c2, tq = g.sites
                r1, r2 = self.ref.controls[i]
                a1, a2 = x[c1] ^ bool(r1), x[c2] ^ bool(r2)
                diff = (a1 & a2) ^ bool(r1 and r2)
                if trace is not None:
                    trace[i] = (a1.copy(), a2.copy())
                if k is G.TOFFOLI:
                    x[tq] ^= diff
                else:
                    z[tq] ^= diff
                z[c1] ^= rng.random(B) < 0.5
                z[c2] ^= rng.random(B) < 0.5
            elif k is G.MEASURE_Z:
                (q,) = g.sites
                flips[i] = x[q].copy()
                z[q] = rng.random(B) < 0.5
            elif k is G.MEASURE_X:
                (q,) = g.sites
                flips[i] = z[q].copy()
                x[q] = rng.random(B) < 0.5
            else:
                frames.clifford(k, g.sites)
            if inject_after and i in inject_after:
                sites, fx, fz = inject_after[i]
                for j, q in enumerate(sites):
                    x[q] ^= fx[j]
                    z[q] ^= fz[j]
            loc = self.locs.get(i)
            if loc is not None and noise is not None:
                self._noise(loc, frames, noise, rng, flips)
        return flips

    def _noise(self, loc, frames, noise, rng, flips) -> None:
        B = frames.batch
        x, z = frames.x, frames.z
        if loc.kind == "prep":
            if noise.p_prep <= 0:
                return
            for gi in loc.gates:
                (q,) = self.pc.gates[gi].sites
                fire = rng.random(B) < noise.p_prep
                if noise.reset_state == "one":
                    x[q] |= fire
                else:
                    # both the mixed state and a uniformly random pure state
                    # average to I/2, and failure rates are linear in the state
                    x[q] ^= fire & (rng.random(B) < 0.5)
                    z[q] ^= fire & (rng.random(B) < 0.5)
        elif loc.kind == "meas":
            for gi in loc.gates:
                flips[gi] ^= rng.random(B) < noise.p_meas
        else:
            if noise.p_gate <= 0:
                return
            fire = rng.random(B) < noise.p_gate
            cnt = int(fire.sum())
            if cnt == 0:
                return
            px, pz = sample_pauli_bits(len(loc.sites), cnt, noise.columnar, rng)
            for j, q in enumerate(loc.sites):
                x[q, fire] ^= px[j]
                z[q, fire] ^= pz[j]
