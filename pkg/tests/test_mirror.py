"""Mirror property of the T~ pulse on a single column."""

import numpy as np
import pytest

from holoft.clifford.pauli import PauliString
from holoft.clifford.propagate import conjugate_pauli
from holoft.dense import unitary
from holoft.errors import BadDims
from holoft.ir.builders import build_mirror_sequence
from holoft.ir.expand import expand
from holoft.ir.model import LatticeDims
from holoft.mirror import mirror_table


def mirror_unitary(nz, reps=None):
    pc = expand(build_mirror_sequence(LatticeDims(1, 1, nz), nz + 1 if reps is None else reps))
    return unitary([(g.kind, g.sites) for g in pc.gates], nz)


@pytest.mark.parametrize("nz", [2, 3, 4, 5])
def test_dense_brute_force_reflection(nz):
    u = mirror_unitary(nz)
    for q in range(nz):
        for s in "XYZ":
            img = u @ PauliString.on(nz, {q: s}).matrix() @ u.conj().T
            want = PauliString.on(nz, {nz - 1 - q: s}).matrix()
            assert np.allclose(img, want, atol=1e-10), (nz, q, s)


@pytest.mark.parametrize("nz", [1, 2, 3, 7, 16, 33, 64])
def test_tableau_table_is_clean_reflection(nz):
    r = mirror_table(nz)
    assert r.ok
    assert r.byproducts() == ["I"] * nz
    assert r.rows[0] == (1, f"+X{nz}", f"+Z{nz}")


@pytest.mark.parametrize("nz", [2, 5, 9])
def test_dense_product_state_is_reversed(nz):
    r = mirror_table(nz, dense=True, seed=nz)
    assert r.ok and r.dense_fidelity >= 1 - 1e-10


def test_tableau_and_propagation_agree():
    nz = 6
    pc = expand(build_mirror_sequence(LatticeDims(1, 1, nz), nz + 1))
    for q in range(nz):
        out = conjugate_pauli(pc, PauliString.on(nz, {q: "Y"}))
        assert out.label() == PauliString.on(nz, {nz - 1 - q: "Y"}).label()


@pytest.mark.parametrize("nz", [3, 4, 5])
def test_one_pulse_short_is_not_a_mirror(nz):
    u = mirror_unitary(nz, nz)
    img = u @ PauliString.on(nz, {0: "Z"}).matrix() @ u.conj().T
    assert not np.allclose(img, PauliString.on(nz, {nz - 1: "Z"}).matrix())


def test_mirror_sequence_checks():
    with pytest.raises(ValueError):
        build_mirror_sequence(LatticeDims(1, 1, 3), -1)
    with pytest.raises(BadDims):
        build_mirror_sequence(LatticeDims(2, 1, 3), 4)
