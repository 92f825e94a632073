import math
import os

import numpy as np
import pytest

import psiec

CONFIGS = os.path.join(os.path.dirname(__file__), "..", "..", "configs")


def test_windows_and_configs():
    w = psiec.Windows()
    assert w.calderon_residual(6) < 1e-10
    assert all(w.admissible()[k] for k in ("plane", "space"))
    broken = psiec.Windows(os.path.join(CONFIGS, "broken.json"))
    report = broken.admissible()
    assert not report["plane"] and "not diagonal" in report["plane_message"]
    assert psiec.Windows(os.path.join(CONFIGS, "directional.json")).hash != broken.hash


def test_basis_table():
    assert psiec.ft_basis(2, 0b01) == (1, 0b10)
    assert psiec.ft_basis(3, 0b000) == (-1, 0b111)
    assert len(psiec.atom_types(2)) == 4
    assert len(psiec.atom_types(3)) == 8


def test_atom_is_real_and_shaped():
    arr, imag = psiec.sample_atom(2, 1, "d", j=1, t=2, N=64, extent=16.0, windows=psiec.Windows())
    assert arr.shape == (2, 64, 64)
    assert imag < 1e-9
    assert np.abs(arr).max() > 0


@pytest.mark.parametrize("degree", [0, 1, 2])
def test_roundtrip(degree):
    w = psiec.Windows()
    f = psiec.random_field(2, degree, N=64, extent=16.0, lo=0.5 * math.pi, hi=2 * math.pi, seed=3)
    out = psiec.roundtrip(f, degree, 16.0, 3, w)
    assert np.linalg.norm(out["field"] - f) < 1e-5 * np.linalg.norm(f)
    assert out["parseval_error"] < 1e-5


def test_chain_complex():
    f = psiec.random_field(3, 1, N=16, extent=8.0, hi=2.0, seed=5)
    d1 = psiec.exterior_derivative(f, 1, 8.0)
    assert d1.shape == (3, 16, 16, 16)
    assert np.abs(psiec.exterior_derivative(d1, 2, 8.0)).max() < 1e-10 * np.abs(d1).max()


def test_rejects_bad_shapes():
    with pytest.raises(ValueError):
        psiec.roundtrip(np.zeros((3, 8, 8)), 1, 8.0, 2)


def test_circulation_and_cavity():
    ref, levels = psiec.circulation(J=4, N=256)
    assert ref > 0
    assert levels[-1]["residual"] < levels[1]["residual"]
    assert psiec.cavity_reference() == [1, 1, 2, 4, 4, 5]
