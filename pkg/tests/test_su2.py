import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from su3coh.su2 import (PAULI, Su2CohParams, align_phase, euler_angles, su2_coherent_euler,
                        su2_coherent_schwinger, su2_equivalence_check, su2_generators,
                        su2_lowering_check, su2_modulus_check, su2_roi_check)

su2_params = st.builds(Su2CohParams, st.floats(0.01, math.pi / 2 - 0.01),
                       st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))


def test_generators_examples():
    assert np.allclose(su2_generators(1).J, PAULI / 2)
    assert np.allclose(su2_generators(0).J, np.zeros((3, 1, 1)))
    assert np.allclose(su2_generators(2).casimir(), 2 * np.eye(3))


@pytest.mark.parametrize("N", range(9))
def test_algebra_and_casimir(N):
    rep = su2_generators(N)
    J3, Jp, Jm = rep.J[2], rep.raising, rep.lowering
    assert np.abs(J3 @ Jp - Jp @ J3 - Jp).max() < 1e-12
    assert np.abs(J3 @ Jm - Jm @ J3 + Jm).max() < 1e-12
    assert np.abs(Jp @ Jm - Jm @ Jp - 2 * J3).max() < 1e-12
    assert np.abs(rep.casimir() - N * (N + 2) / 4 * np.eye(N + 1)).max() < 1e-12
    assert np.allclose(rep.J, rep.J.conj().transpose(0, 2, 1))
    # basis runs m = j .. -j
    assert np.allclose(np.diag(J3), np.arange(N, -N - 1, -2) / 2)


def test_schwinger_examples():
    assert np.allclose(su2_coherent_schwinger(Su2CohParams(0.0), 2), [1, 0, 0])
    amps = su2_coherent_schwinger(Su2CohParams(math.pi / 4), 2)
    assert amps[1] == pytest.approx(1 / math.sqrt(2))


@given(su2_params, st.integers(0, 8))
def test_schwinger_unit_norm(p, N):
    assert np.linalg.norm(su2_coherent_schwinger(p, N)) == pytest.approx(1)


def test_euler_examples():
    th, ph = 0.7, 1.3
    c = su2_coherent_euler(th, ph, 1)
    assert c[0] == pytest.approx(np.exp(-0.5j * ph) * math.cos(th / 2))
    assert c[1] == pytest.approx(np.exp(0.5j * ph) * math.sin(th / 2))
    assert np.allclose(su2_coherent_euler(0, 0.4, 3), [np.exp(-0.6j), 0, 0, 0])
    assert np.allclose(su2_coherent_euler(math.pi / 2, 0, 2), [0.5, 1 / math.sqrt(2), 0.5])
    with pytest.raises(ValueError):
        su2_coherent_euler(4.0, 0, 1)


@pytest.mark.parametrize("N", [0, 1, 3, 8])
def test_roi(N):
    assert np.abs(su2_roi_check(N) - np.eye(N + 1) / (N + 1)).max() < 1e-12


def test_roi_degree_guard():
    with pytest.raises(ValueError):
        su2_roi_check(3, degree=4)


@given(su2_params, st.integers(0, 8))
def test_equivalences(p, N):
    assert su2_equivalence_check(p, N) < 1e-12
    assert su2_modulus_check(p, N) < 1e-12
    assert su2_lowering_check(p, N) < 1e-12


def test_equivalence_trivial():
    p = Su2CohParams(0.0, 0.7, 0.2)
    assert su2_equivalence_check(p, 3) < 1e-15


@given(su2_params, st.integers(1, 6))
def test_exact_phase_relation(p, N):
    # |z1, z2> = (z1 / cos(theta/2))^{2j} e^{i j phi} |n(theta, phi)>
    th, ph = euler_angles(p)
    F = su2_coherent_schwinger(p, N)
    C = su2_coherent_euler(th, ph, N)
    pref = (p.z[0] / math.cos(th / 2)) ** N * np.exp(0.5j * N * ph)
    assert np.abs(F - pref * C).max() < 1e-12


def test_equivalence_rejects_z1_zero():
    with pytest.raises(ValueError):
        su2_equivalence_check(Su2CohParams(math.pi / 2), 2)
    with pytest.raises(ValueError):
        su2_lowering_check(Su2CohParams(math.pi / 2), 2)


def test_from_z_and_validation():
    p = Su2CohParams.from_z(0.6j, 0.8)
    assert np.allclose(p.z, [0.6j, 0.8])
    with pytest.raises(ValueError):
        Su2CohParams.from_z(1, 1)
    with pytest.raises(ValueError):
        Su2CohParams(2.0)


def test_align_phase():
    v = np.array([0.1j, -2.0, 0.3])
    out = align_phase(v)
    assert out[1] == pytest.approx(2.0)
    assert np.allclose(np.abs(out), np.abs(v))
