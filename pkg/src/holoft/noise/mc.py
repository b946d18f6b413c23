"""Monte Carlo and exhaustive fault-injection experiments."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..clifford.frames import PauliFrames
from ..clifford.pauli import PauliString
from ..clifford.propagate import conjugate_pauli
from ..clifford.tableau import Tableau
from ..codes.codes import code_bs9, code_qr3, col_parities, ideal_encoder, row_parities
from ..codes.decode import ideal_decode
from ..codes.execute import run_dense, run_tableau
from ..codes.gadgets import bs_ec, m_gate
from ..dense import StateVector, apply_gate, fidelity
from ..errors import BadLevel, CapExceeded
from ..ir.builders import build_T_pulse
from ..ir.expand import expand
from ..ir.model import GateKind, LatticeDims, PhysGate, PhysicalCircuit
from .fit import McEstimate
from .framesim import FrameSimulator, Reference, reference_run
from .model import InhomogeneityModel, NoiseModel, error_locations, sample_pauli_bits

G = GateKind
BLOCK = 10_000
_PAULI = {"X": G.X, "Y": G.Y, "Z": G.Z}


def _other(orientation: str) -> str:
    return "rotated" if orientation == "standard" else "standard"


def _stream(seed: int, *key: int) -> np.random.Generator:
    """RNG for one block of trials; the key fixes it independently of how
    blocks are spread over workers."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2 ** 63 - 1), *key]))


def _blocks(trials: int, block: int) -> list[tuple[int, int]]:
    return [(b, min(block, trials - b * block)) for b in range((trials + block - 1) // block)]


def _map(fn, tasks, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, *zip(*tasks)))


# ---------------------------------------------------------------------------
# memory

def _memory_setup(code: str, orientation: str = "standard"):
    if code == "bs9":
        spec, gad = code_bs9(orientation), bs_ec(1, orientation)
        bases = ("zero", "plus")
    elif code == "qr3":
        spec, gad = code_qr3("bitflip"), m_gate("X", 1)
        bases = ("zero",)
    else:
        raise ValueError(f"unknown code {code!r}")
    return spec, gad, bases


def block_failures(code: str, spec, x: np.ndarray, z: np.ndarray, basis: str) -> np.ndarray:
    """Logical failure per trial from residual data frames (9 or 3 rows).

    A |0_L> run fails on an X-type residual, a |+_L> run on a Z-type one.
    Bacon-Shor: two or more odd rows of X bits (odd columns of Z bits) survive
    the lookup correction as a logical; QR3: majority of X bits.
    """
    if code == "qr3":
        return x.sum(axis=0) >= 2 if basis == "zero" else z.sum(axis=0) % 2 == 1
    if basis == "zero":
        return row_parities(x, spec.orientation).sum(axis=0) >= 2
    return col_parities(z, spec.orientation).sum(axis=0) >= 2


def _memory_block(code: str, noise: NoiseModel, seed: int, point: int, block: int, size: int) -> int:
    spec, gad, bases = _memory_setup(code)
    fail = np.zeros(size, dtype=bool)
    for bi, basis in enumerate(bases):
        rng = _stream(seed, point, block, bi)
        ref = reference_run(gad, ideal_encoder(spec, basis), rng)
        frames = PauliFrames(gad.n_qubits, size)
        FrameSimulator(gad.circuit, ref).run(frames, noise, rng)
        d = list(gad.data_sites)
        fail |= block_failures(code, spec, frames.x[d], frames.z[d], basis)
    return int(fail.sum())


def run_memory_exrec(code: str = "bs9", level: int = 1, noise: Optional[NoiseModel] = None,
                     p_sweep: Sequence[float] = (1e-3,), trials: int = 10_000, seed: int = 0,
                     jobs: int = 1, block: int = BLOCK) -> list[McEstimate]:
    """Noisy level-1 EC gadget on ideal codewords, then ideal decoding.

    Each trial runs a |0_L> and a |+_L> input (|0_L> only for QR3, which
    protects one basis) and fails if either comes back with a logical
    residual. Every rate of ``noise`` is set to the sweep value.
    """
    if level != 1:
        raise BadLevel("memory experiments run at level 1")
    noise = noise or NoiseModel()
    out = []
    for pi, p in enumerate(p_sweep):
        model = noise.at(float(p))
        tasks = [(code, model, seed, pi, b, n) for b, n in _blocks(trials, block)]
        failures = sum(_map(_memory_block, tasks, jobs))
        out.append(McEstimate(float(p), trials, failures, seed, "memory", code, level))
    return out


def single_fault_scan(code: str = "bs9", orientation: str = "standard") -> dict:
    """Every single fault of the EC gadget (each location, each nontrivial
    Pauli on it, each failed reset) on both inputs; counts logical failures.
    A fault-tolerant gadget gives zero."""
    spec, gad, bases = _memory_setup(code, orientation)
    faults = []
    for loc in error_locations(gad.circuit):
        k = len(loc.sites)
        if loc.kind == "prep":
            paulis = [(np.array([True]), np.array([False]))]
        else:
            paulis = []
            for u in range(1, 4 ** k):
                paulis.append((np.array([(u >> (2 * j)) & 1 for j in range(k)], bool),
                               np.array([(u >> (2 * j + 1)) & 1 for j in range(k)], bool)))
        for fx, fz in paulis:
            faults.append((loc, fx, fz))
    B = len(faults)
    failures = 0
    bad = []
    for bi, basis in enumerate(bases):
        rng = np.random.default_rng(bi)
        ref = reference_run(gad, ideal_encoder(spec, basis), rng)
        inj = {}
        for col, (loc, fx, fz) in enumerate(faults):
            sites, ax, az = inj.setdefault(loc.after, (loc.sites, np.zeros((len(loc.sites), B), bool),
                                                       np.zeros((len(loc.sites), B), bool)))
            ax[:, col] = fx
            az[:, col] = fz
        frames = PauliFrames(gad.n_qubits, B)
        FrameSimulator(gad.circuit, ref).run(frames, None, rng, inject_after=inj)
        d = list(gad.data_sites)
        fail = block_failures(code, spec, frames.x[d], frames.z[d], basis)
        failures += int(fail.sum())
        bad.extend((basis, faults[c][0].after) for c in np.flatnonzero(fail))
    return {"faults": B, "runs": B * len(bases), "failures": failures, "bad": bad}


# ---------------------------------------------------------------------------
# column containment

@dataclass
class StackCircuit:
    """P Bacon-Shor planes: data of plane z on 9z..9z+8, then each plane's EC
    ancillas. Planes alternate orientation; one T pulse flips them all."""

    planes: int
    n: int
    orient_in: list
    orient_out: list
    t_pulse: list                 # Clifford gates of the T pulse on data
    ec: PhysicalCircuit           # parallel per-plane EC
    collapsible: frozenset
    data: list = field(default_factory=list)


def build_stack(planes: int) -> StackCircuit:
    if not (2 <= planes <= 6):
        raise ValueError("planes must be in [2, 6]")
    orient_in = ["standard" if z % 2 == 0 else "rotated" for z in range(planes)]
    orient_out = [_other(o) for o in orient_in]
    gads = [bs_ec(1, o) for o in orient_out]
    na = gads[0].n_qubits - 9
    n = 9 * planes + na * planes
    data = [[9 * z + c for c in range(9)] for z in range(planes)]
    tp = [(G.H, (q,)) for z in range(planes) for q in data[z]]
    for start in (0, 1):
        for z in range(start, planes - 1, 2):
            tp += [(G.CZ, (data[z][c], data[z + 1][c])) for c in range(9)]
    gates, coll = [], set()
    for z, gad in enumerate(gads):
        remap = {q: data[z][q] for q in range(9)}
        remap.update({9 + a: 9 * planes + na * z + a for a in range(na)})
        for g in gad.circuit.gates:
            gates.append(PhysGate(g.kind, tuple(remap[s] for s in g.sites), g.timestep,
                                  len(gates)))
        coll.update(remap[q] for q in gad.collapsible)
    gates.sort(key=lambda g: g.timestep)
    gates = [PhysGate(g.kind, g.sites, g.timestep, i) for i, g in enumerate(gates)]
    ec = PhysicalCircuit(n, tuple(gates))
    return StackCircuit(planes, n, orient_in, orient_out, tp, ec, frozenset(coll), data)


def _stack_prep(st: StackCircuit, basis: str) -> list:
    prep = []
    for z in range(st.planes):
        for k, s in ideal_encoder(code_bs9(st.orient_in[z]), basis):
            prep.append((k, tuple(st.data[z][q] for q in s)))
    return prep + list(st.t_pulse)


def _column_pauli(planes: int, u: int) -> list[str]:
    return ["IXZY"[(u >> (2 * z)) & 3] for z in range(planes)]


def containment_exhaustive(planes: int = 2) -> dict:
    """Tableau route: every column and every nontrivial column Pauli, both
    input bases. After EC the T pulse is undone and each plane decoded
    against its input."""
    st = build_stack(planes)
    failures, runs = np.zeros(planes, int), 0
    rng = np.random.default_rng(0)
    for basis in ("zero", "plus"):
        for col in range(9):
            for u in range(1, 4 ** planes):
                t = Tableau(st.n)
                for k, s in _stack_prep(st, basis):
                    t.apply(k, s)
                for z, sym in enumerate(_column_pauli(planes, u)):
                    if sym != "I":
                        t.apply_clifford(_PAULI[sym], [st.data[z][col]])
                run_tableau(st.ec, t, rng, collapse=st.collapsible)
                for k, s in reversed(st.t_pulse):
                    t.apply(k, s)
                for z in range(planes):
                    ref = {"Z": 1} if basis == "zero" else {"X": 1}
                    if ideal_decode(code_bs9(st.orient_in[z]), t, st.data[z], ref) != "I":
                        failures[z] += 1
                runs += 1
    return {"planes": planes, "runs": runs, "failures": failures.tolist()}


def _containment_block(planes: int, noise: Optional[NoiseModel], seed: int, block: int, size: int,
                       basis: str) -> np.ndarray:
    st = build_stack(planes)
    rng = _stream(seed, block, 0 if basis == "zero" else 1)
    prep = _stack_prep(st, basis)
    t = Tableau(st.n)
    for k, s in prep:
        t.apply(k, s, rng)
    run = run_tableau(st.ec, t.copy(), rng, collapse=st.collapsible)
    ref = Reference(run.controls, run.outcomes, t, tuple(prep))
    frames = PauliFrames(st.n, size)
    cols = rng.integers(0, 9, size)
    px, pz = sample_pauli_bits(planes, size, True, rng)
    for z in range(planes):
        for c in range(9):
            m = cols == c
            frames.x[st.data[z][c], m] ^= px[z, m]
            frames.z[st.data[z][c], m] ^= pz[z, m]
    FrameSimulator(st.ec, ref).run(frames, noise, rng)
    # residual logical Pauli of every plane after ideal correction
    logical = PauliFrames(planes, size)
    for z in range(planes):
        spec = code_bs9(st.orient_out[z])
        d = st.data[z]
        logical.x[z] = block_failures("bs9", spec, frames.x[d], frames.z[d], "zero")
        logical.z[z] = block_failures("bs9", spec, frames.x[d], frames.z[d], "plus")
    # pull it back through the logical pulse and test it on the input planes
    for k, s in reversed(_logical_pulse(planes)):
        logical.clifford(k, s)
    bad = logical.x if basis == "zero" else logical.z
    return bad.sum(axis=1).astype(int)


def _logical_pulse(planes: int) -> list:
    """Logical action of the T pulse on a stack of Bacon-Shor planes."""
    gates = [(G.H, (z,)) for z in range(planes)]
    for start in (0, 1):
        gates += [(G.CZ, (z, z + 1)) for z in range(start, planes - 1, 2)]
    return gates


def run_column_containment(planes: int = 2, code: str = "bs9", noise: Optional[NoiseModel] = None,
                           trials: int = 10_000, seed: int = 0, exhaustive: bool = False,
                           jobs: int = 1) -> dict:
    """One T pulse over a stack of P planes, an arbitrary Pauli on one full
    column, then parallel per-plane EC.

    ``exhaustive`` runs every column Pauli on the tableau; otherwise random
    column Paulis are pushed through the frame simulator, half of the
    trials on |0_L> inputs and half on |+_L>. The residual logical Pauli of
    the stack is pulled back through the logical pulse; a plane fails when it
    then flips that plane's input eigenvalue.
    """
    if code != "bs9":
        raise ValueError("column containment is defined for bs9")
    if exhaustive:
        return containment_exhaustive(planes)
    tasks = []
    half = (trials + 1) // 2
    for basis, total in (("zero", half), ("plus", trials - half)):
        tasks += [(planes, noise, seed, b, n, basis) for b, n in _blocks(total, BLOCK)]
    per = sum(_map(_containment_block, tasks, jobs))
    return {"planes": planes, "runs": trials, "failures": [int(v) for v in per]}


# ---------------------------------------------------------------------------
# T-pulse fault paths

def run_t_fault_paths(dims: LatticeDims = LatticeDims(1, 1, 6), max_support: int = 8) -> dict:
    """Every fault location of the expanded T pulse, every nontrivial Pauli
    on its support, propagated to the end of the pulse.

    Reports the largest per-plane weight; anything above 1 is a violation.
    Locations wider than ``max_support`` qubits are rejected rather than
    sampled.
    """
    pc = expand(build_T_pulse(dims))
    n = pc.n_qubits
    plane = np.array([dims.site_of(q).z for q in range(n)])
    violations, count, worst, worst_total = [], 0, 0, 0
    per_loc = []
    for loc in error_locations(pc):
        k = len(loc.sites)
        if k > max_support:
            raise ValueError(f"location {loc.source} touches {k} qubits")
        loc_worst = 0
        for u in range(1, 4 ** k):
            ops = {q: "IXZY"[(u >> (2 * j)) & 3] for j, q in enumerate(loc.sites)}
            p = PauliString.on(n, {q: s for q, s in ops.items() if s != "I"})
            out = conjugate_pauli(pc, p, start=loc.after + 1)
            supp = np.array(out.support(), dtype=int)
            w = np.bincount(plane[supp], minlength=dims.nz + 1) if supp.size else np.zeros(1, int)
            m = int(w.max())
            count += 1
            loc_worst = max(loc_worst, m)
            worst_total = max(worst_total, int(supp.size))
            if m > 1:
                violations.append((loc.source, out.label()))
        per_loc.append((loc.source, k, loc_worst))
        worst = max(worst, loc_worst)
    return {"dims": (dims.nx, dims.ny, dims.nz), "locations": len(per_loc), "faults": count,
            "max_per_plane": worst, "max_total": worst_total, "violations": violations,
            "per_location": per_loc}


# ---------------------------------------------------------------------------
# coherent inhomogeneity

def _plane_sites(dims: LatticeDims, z: int) -> list[int]:
    return [dims.index(x, 1, z) for x in range(1, dims.nx + 1)]


def run_inhomogeneity(dims: LatticeDims = LatticeDims(3, 1, 3),
                      model: InhomogeneityModel = InhomogeneityModel(),
                      theta_sweep: Sequence[float] = (0.01, 0.02, 0.04), seed: int = 0,
                      cap: int = 22) -> list[dict]:
    """Transversal X column pulses with per-plane over-rotation on a stack
    of QR3 (bit-flip) planes, each starting in |0_L>.

    The whole stack is simulated densely for the pre-EC infidelity. The
    planes stay in a product state, so the post-EC infidelity is taken
    plane by plane with the M gate and its three ancillas (traced out).
    """
    if dims.nx != 3 or dims.ny != 1:
        raise ValueError("inhomogeneity runs use dims (3, 1, nz)")
    if dims.n_qubits > cap:
        raise CapExceeded(f"{dims.n_qubits} qubits exceeds the dense cap of {cap}")
    gad = m_gate("X", 1)
    rows = []
    for theta0 in theta_sweep:
        thetas = model.thetas(theta0, dims.nz, np.random.default_rng(seed))
        sv = StateVector(dims.n_qubits, cap=cap)
        ideal = StateVector(dims.n_qubits, cap=cap)
        for x in range(1, 4):
            for z in range(1, dims.nz + 1):
                q = dims.index(x, 1, z)
                apply_gate(sv, G.X, [q])
                apply_gate(ideal, G.X, [q])
                apply_gate(sv, "R" + model.generator, [q], thetas[z - 1])
        pre = 1.0 - fidelity(sv, ideal)
        post_f = 1.0
        for z in range(1, dims.nz + 1):
            plane = StateVector(3)
            target = StateVector(3)
            for q in range(3):
                apply_gate(plane, G.X, [q])
                apply_gate(target, G.X, [q])
                apply_gate(plane, "R" + model.generator, [q], thetas[z - 1])
            f = 0.0
            for br in run_dense(gad, plane):
                # qubit 0 is the lowest bit: rows index the ancillas, columns the data
                amp = br.state.amps.reshape(-1, 8)
                f += br.probability * float(np.sum(np.abs(amp @ target.amps.conj()) ** 2))
            post_f *= f
        rows.append({"theta0": float(theta0), "pre_infidelity": float(max(pre, 0.0)),
                     "post_infidelity": float(max(1.0 - post_f, 0.0))})
    return rows
