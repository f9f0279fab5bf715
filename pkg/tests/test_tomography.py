import numpy as np
import pytest

from qbell.qstate import ContractViolation, StateParams, build_state_phi, build_state_phi_a
from qbell.tomography import ZERO_FRAME, MeasurementFrame, Tomogram, pair_rotation, tomogram, wigner_d

from conftest import random_density, random_frame


def test_wigner_d_identity_and_flip():
    np.testing.assert_allclose(wigner_d(ZERO_FRAME), np.eye(3), atol=1e-15)
    flip = np.array([[0, 0, 1], [0, -1, 0], [1, 0, 0]])
    np.testing.assert_allclose(wigner_d(MeasurementFrame(np.pi, 0, 0)), flip, atol=1e-15)


def test_wigner_d_unitary(rng):
    for _ in range(1000):
        d = wigner_d(random_frame(rng))
        assert np.abs(d.conj().T @ d - np.eye(3)).max() < 1e-12


def test_wigner_d_is_spin_rotation(rng):
    # columns are S.n eigenvectors with eigenvalues +1, 0, -1 for the direction (theta, phi)
    from qbell.qstate import spin1_operators
    ops = spin1_operators()
    sx = (ops.s_plus + ops.s_minus) / 2
    sy = (ops.s_plus - ops.s_minus) / 2j
    for _ in range(20):
        f = random_frame(rng, chi=0.0)
        n = (np.sin(f.theta) * np.cos(f.phi), np.sin(f.theta) * np.sin(f.phi), np.cos(f.theta))
        sn = n[0] * sx + n[1] * sy + n[2] * ops.sz
        d = wigner_d(f)
        for k, m in enumerate((1, 0, -1)):
            v = d[:, k]
            assert np.linalg.norm(sn @ v - m * v) < 1e-12


def test_pair_rotation(rng):
    np.testing.assert_allclose(pair_rotation(ZERO_FRAME, ZERO_FRAME), np.eye(9), atol=1e-15)
    f1, f2 = random_frame(rng), random_frame(rng)
    np.testing.assert_allclose(pair_rotation(f1, ZERO_FRAME), np.kron(wigner_d(f1), np.eye(3)))
    u = pair_rotation(f1, f2)
    assert np.abs(u.conj().T @ u - np.eye(9)).max() < 1e-12


def test_frame_ranges():
    with pytest.raises(ValueError):
        MeasurementFrame(4.0, 0.0)
    with pytest.raises(ValueError):
        MeasurementFrame(1.0, -1.0)
    assert MeasurementFrame(1.0, 2.0).chi == 0.0


def test_tomogram_zero_frames():
    w = tomogram(build_state_phi(0.7)).w
    np.testing.assert_allclose(w, [1 / 3, 0, 0, 0, 1 / 3, 0, 0, 0, 1 / 3], atol=1e-15)


def test_tomogram_flipped_first_qutrit():
    # conjugating by D(pi,0,0) (x) I by hand sends |1,-1> -> |-1,-1>, |0,0> -> -|0,0>, |-1,1> -> |1,1>
    w = tomogram(build_state_phi(2.0), MeasurementFrame(np.pi, 0, 0), ZERO_FRAME).w
    np.testing.assert_allclose(w, [0, 0, 1 / 3, 0, 1 / 3, 0, 1 / 3, 0, 0], atol=1e-15)


def test_tomogram_chi_independent(rng):
    for _ in range(100):
        rho = build_state_phi_a(StateParams(rng.uniform(0, 2 * np.pi), rng.uniform(0, 1)))
        f1, f2 = random_frame(rng, chi=0.0), random_frame(rng, chi=0.0)
        g1 = MeasurementFrame(f1.theta, f1.phi, rng.uniform(0, 2 * np.pi))
        g2 = MeasurementFrame(f2.theta, f2.phi, rng.uniform(0, 2 * np.pi))
        np.testing.assert_allclose(tomogram(rho, f1, f2).w, tomogram(rho, g1, g2).w, atol=1e-12)


def test_tomogram_normalized_nonnegative(rng):
    for _ in range(300):
        rho = random_density(rng, rank=int(rng.integers(1, 10)))
        w = tomogram(rho, random_frame(rng), random_frame(rng)).w
        assert abs(w.sum() - 1) < 1e-10
        assert w.min() >= -1e-10


def test_tomogram_composition(rng):
    rho = random_density(rng)
    f1, f2 = random_frame(rng), random_frame(rng)
    u = pair_rotation(f1, f2)
    rotated = u.conj().T @ rho.matrix @ u
    np.testing.assert_allclose(tomogram(rho, f1, f2).w, tomogram(rotated).w, atol=1e-12)


def test_tomogram_rejects_invalid():
    with pytest.raises(ContractViolation):
        Tomogram(np.array([0.5, 0.6, 0, 0, 0, 0, 0, 0, 0]), (ZERO_FRAME, ZERO_FRAME))
    with pytest.raises(ContractViolation):
        Tomogram(np.array([1.1, -0.1, 0, 0, 0, 0, 0, 0, 0]), (ZERO_FRAME, ZERO_FRAME))
