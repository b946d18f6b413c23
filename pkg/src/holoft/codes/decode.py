"""Ideal decoding: the failure-counting oracle for Monte Carlo runs."""

from __future__ import annotations

from typing import Mapping, Optional, Sequence, Union

import numpy as np

from ..clifford.pauli import PauliString
from ..clifford.tableau import Tableau
from ..dense import StateVector, apply_pauli, expectation
from ..errors import BadSites
from ..ir.model import GateKind as G
from .codes import CodeSpec, correction_table, syndrome

FAIL = "FAIL"

# logical frame from (Z flipped, X flipped)
_FRAME = {(False, False): "I", (True, False): "X", (False, True): "Z", (True, True): "Y"}


def _check_sites(code: CodeSpec, n: int, data_sites: Sequence[int]) -> list[int]:
    sites = [int(q) for q in data_sites]
    if len(sites) != code.n or len(set(sites)) != code.n or any(q < 0 or q >= n for q in sites):
        raise BadSites(f"{code.name} needs {code.n} distinct sites inside 0..{n - 1}, got {sites}")
    return sites


def ideal_decode(code: CodeSpec, state: Union[Tableau, StateVector], data_sites: Sequence[int],
                 reference: Optional[Mapping[str, int]] = None,
                 rng: Optional[np.random.Generator] = None) -> str:
    """Residual logical Pauli after noiseless error correction.

    Error correction here is the ideal version of the code's gadget: the
    stabilizers are measured without error, the lowest-weight correction is
    applied, then logical Z and X are compared against ``reference`` (a map
    such as ``{"Z": 1}`` for |0_L>). Returns "I", "X", "Y", "Z" or "FAIL";
    FAIL means a referenced logical is not determined after correction, i.e.
    the block is entangled with something else or left the codespace.

    The input state is not modified.
    """
    reference = dict(reference or {"Z": 1})
    if isinstance(state, Tableau):
        return _decode_tableau(code, state, data_sites, reference, rng)
    return _decode_dense(code, state, data_sites, reference)


def _decode_tableau(code, t: Tableau, data_sites, reference, rng) -> str:
    sites = _check_sites(code, t.n, data_sites)
    work = t.copy()
    rng = rng if rng is not None else np.random.default_rng(0)
    synd = tuple(work.measure_pauli(s.embed(t.n, sites), rng).bit for s in code.stabilizers)
    corr = correction_table(code).get(synd)
    if corr is None:
        return FAIL
    for q in corr.support():
        sym = corr.symbol(q)
        work.apply_clifford({"X": G.X, "Y": G.Y, "Z": G.Z}[sym], [sites[q]])
    flips = {}
    for name, want in reference.items():
        ev = work.expectation(code.logical(name).embed(t.n, sites))
        if ev == 0:
            return FAIL
        flips[name.upper()] = ev != want
    return _FRAME[(flips.get("Z", False), flips.get("X", False))]


def _decode_dense(code, sv: StateVector, data_sites, reference, tol: float = 1e-9) -> str:
    sites = _check_sites(code, sv.n, data_sites)
    frames = set()
    # split into syndrome sectors with projectors (1 + s S)/2
    sectors = [(sv.copy(), ())]
    for stab in code.stabilizers:
        full = stab.embed(sv.n, sites)
        nxt = []
        for st, synd in sectors:
            img = st.copy()
            apply_pauli(img, full)
            for bit, sign in ((0, 1), (1, -1)):
                amps = (st.amps + sign * img.amps) / 2
                if np.vdot(amps, amps).real > tol:
                    nxt.append((StateVector(sv.n, amps, sv.cap), synd + (bit,)))
        sectors = nxt
    table = correction_table(code)
    for st, synd in sectors:
        corr = table.get(synd)
        if corr is None:
            return FAIL
        apply_pauli(st, corr.embed(sv.n, sites))
        norm = np.vdot(st.amps, st.amps).real
        flips = {}
        for name, want in reference.items():
            ev = expectation(st, code.logical(name).embed(sv.n, sites)).real / norm
            if abs(abs(ev) - 1) > 1e-6:
                return FAIL
            flips[name.upper()] = (ev > 0) != (want > 0)
        frames.add(_FRAME[(flips.get("Z", False), flips.get("X", False))])
    if len(frames) != 1:
        return FAIL
    return frames.pop()


def logical_frame(code: CodeSpec, error: PauliString) -> str:
    """Logical class of a data-qubit Pauli after the lookup correction.

    Pure Pauli-algebra version of :func:`ideal_decode` for frame simulation:
    the error must commute with both logicals after correction.
    """
    corr = correction_table(code).get(syndrome(code, error))
    if corr is None:
        return FAIL
    res = error * corr
    zf = not res.commutes(code.logical_z)
    xf = not res.commutes(code.logical_x)
    return _FRAME[(zf, xf)]
