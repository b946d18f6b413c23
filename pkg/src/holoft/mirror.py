"""Mirror check for a single column: T~^(nz+1) reflects the chain."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford.tableau import Tableau
from .dense import StateVector, fidelity, run_unitary
from .ir.builders import build_mirror_sequence
from .ir.expand import expand
from .ir.model import LatticeDims


@dataclass(frozen=True)
class MirrorResult:
    nz: int
    rows: tuple          # (z, image of X_z, image of Z_z), 1-based z
    ok: bool
    dense_fidelity: float = float("nan")

    def byproducts(self) -> list[str]:
        """Sign or operator left over per plane; "I" means a clean reflection."""
        out = []
        for z, xi, zi in self.rows:
            m = self.nz + 1 - z
            good = xi == f"+X{m}" and zi == f"+Z{m}"
            out.append("I" if good else f"{xi}|{zi}")
        return out


def _sparse_label(p) -> str:
    sign = {0: "+", 1: "+i", 2: "-", 3: "-i"}[p.phase % 4]
    body = "".join(f"{p.symbol(q)}{q + 1}" for q in p.support())
    return sign + body


def mirror_table(nz: int, dense: bool = False, seed: int = 0) -> MirrorResult:
    """Images of X_z and Z_z under T~^(nz+1).

    One tableau pass conjugates every generator at once: destabilizer row z
    starts as X_z, stabilizer row z as Z_z. With ``dense`` (nz <= 12) a random
    product state is also pushed through the dense engine and compared with
    its reflection.
    """
    dims = LatticeDims(1, 1, nz)
    pc = expand(build_mirror_sequence(dims, nz + 1))
    t = Tableau(nz)
    for g in pc.gates:
        t.apply_clifford(g.kind, g.sites)
    rows, ok = [], True
    for z in range(nz):
        xi = _sparse_label(t.row(z))
        zi = _sparse_label(t.row(nz + z))
        rows.append((z + 1, xi, zi))
        m = nz - z
        ok &= xi == f"+X{m}" and zi == f"+Z{m}"
    fid = float("nan")
    if dense:
        rng = np.random.default_rng(seed)
        singles = [v / np.linalg.norm(v) for v in rng.normal(size=(nz, 2)) + 1j * rng.normal(size=(nz, 2))]
        sv = _product(singles)
        out = run_unitary([(g.kind, g.sites) for g in pc.gates], sv)
        fid = fidelity(out, _product(singles[::-1]))
        ok &= fid >= 1 - 1e-10
    return MirrorResult(nz, tuple(rows), bool(ok), fid)


def _product(singles) -> StateVector:
    # qubit 0 is the lowest bit, so it is the last kron factor
    amps = np.array([1.0 + 0j])
    for v in singles:
        amps = np.kron(v, amps)
    return StateVector(len(singles), amps)
