import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbell import OptimizerConfig
from qbell.correlations import (
    LOG2_3,
    CorrelationReport,
    LocalBasis,
    classical_mutual_information,
    measured_distribution,
    phi_spread,
    q_projective,
    quantum_mutual_information,
    shannon_entropy,
    sweep_qp,
    von_neumann_entropy,
)
from qbell.qstate import ContractViolation, DensityMatrix, StateParams, build_state_phi_a, partial_trace
from qbell.tomography import tomogram

from conftest import random_density, random_frame, random_unitary


def entanglement_entropy_family(a):
    """Oracle: for the pure family, S(A) = H(1, a^2, 1)/(2 + a^2) and I^p_max = S(A)."""
    p = np.array([1.0, a * a, 1.0]) / (2 + a * a)
    return shannon_entropy(p)


def test_entropy_examples(rng):
    assert von_neumann_entropy(np.eye(3) / 3) == pytest.approx(LOG2_3, abs=1e-12)
    assert von_neumann_entropy(np.diag([0.5, 0.0, 0.5])) == pytest.approx(1.0, abs=1e-12)
    assert von_neumann_entropy(random_density(rng, rank=1)) == pytest.approx(0.0, abs=1e-10)
    with pytest.raises(ContractViolation):
        von_neumann_entropy(np.array([[0.5, 1.0], [0.0, 0.5]]))


def test_entropy_unitary_invariance(rng):
    for _ in range(50):
        rho = random_density(rng).matrix
        u = np.kron(random_unitary(rng), random_unitary(rng)) if rng.random() < 0.5 else random_unitary(rng, 9)
        assert von_neumann_entropy(u @ rho @ u.conj().T) == pytest.approx(von_neumann_entropy(rho), abs=1e-10)


def test_qmi_examples(rng):
    s, t = random_density(rng, 3).matrix, random_density(rng, 3).matrix
    assert quantum_mutual_information(DensityMatrix(np.kron(s, t))) == pytest.approx(0.0, abs=1e-10)
    # reduced spectra (1,1,1)/3 each, joint state pure
    assert quantum_mutual_information(build_state_phi_a(StateParams(0.4, 1.0))) == pytest.approx(2 * LOG2_3, abs=1e-10)
    assert quantum_mutual_information(build_state_phi_a(StateParams(0.4, 0.0))) == pytest.approx(2.0, abs=1e-10)


def test_classical_mi_examples(rng):
    assert classical_mutual_information(np.full(9, 1 / 9)) == pytest.approx(0.0, abs=1e-14)
    diag = np.zeros(9)
    diag[[0, 4, 8]] = 1 / 3
    assert classical_mutual_information(diag) == pytest.approx(LOG2_3, abs=1e-14)
    s, t = random_density(rng, 3).matrix, random_density(rng, 3).matrix
    prod = DensityMatrix(np.kron(s, t))
    assert classical_mutual_information(tomogram(prod, random_frame(rng), random_frame(rng))) == pytest.approx(0.0, abs=1e-10)
    with pytest.raises(ValueError):
        classical_mutual_information(np.full(9, 0.2))
    with pytest.raises(ValueError):
        classical_mutual_information(np.full(4, 0.25))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0.0, 1.0), min_size=9, max_size=9).filter(lambda v: sum(v) > 1e-3))
def test_classical_mi_bounds(values):
    p = np.array(values) / sum(values)
    mi = classical_mutual_information(p)
    q = p.reshape(3, 3)
    assert mi >= 0
    assert mi <= min(shannon_entropy(q.sum(1)), shannon_entropy(q.sum(0))) + 1e-10


def test_local_basis_unitary(rng):
    for mode, n in (("full", 6), ("rotation", 2)):
        u = LocalBasis(tuple(rng.uniform(0, 3, n)), mode).unitary()
        assert np.abs(u.conj().T @ u - np.eye(3)).max() < 1e-12


def test_q_projective_product_state(rng, fast_cfg):
    s, t = random_density(rng, 3).matrix, random_density(rng, 3).matrix
    r = q_projective(DensityMatrix(np.kron(s, t)), fast_cfg)
    assert r.q_p == pytest.approx(0.0, abs=1e-6)


def test_q_projective_endpoints():
    r1 = q_projective(build_state_phi_a(StateParams(1.3, 1.0)))
    assert r1.q_p == pytest.approx(LOG2_3, abs=5e-3)
    assert r1.i_p_max <= LOG2_3 + 1e-10
    r0 = q_projective(build_state_phi_a(StateParams(1.3, 0.0)))
    assert r0.q_p == pytest.approx(1.0, abs=5e-3)
    # the reported optimum reproduces I^p_max
    p = measured_distribution(build_state_phi_a(StateParams(1.3, 0.0)), *r0.best_measurement)
    assert classical_mutual_information(p) == pytest.approx(r0.i_p_max, abs=1e-12)


def test_random_basis_search_never_beats_computational_basis(rng):
    # oracle for the a = 1 endpoint: 1e5 Haar-random local bases
    psi = np.zeros((3, 3), complex)
    psi[0, 0] = psi[1, 1] = psi[2, 2] = 1 / np.sqrt(3)
    n = 100_000
    z = rng.normal(size=(2, n, 3, 3)) + 1j * rng.normal(size=(2, n, 3, 3))
    q, r = np.linalg.qr(z)
    u = q * (np.diagonal(r, axis1=-2, axis2=-1) / np.abs(np.diagonal(r, axis1=-2, axis2=-1)))[..., None, :]
    amp = np.einsum("nik,ij,njl->nkl", u[0].conj(), psi, u[1].conj())
    p = np.abs(amp) ** 2
    outer = p.sum(2)[:, :, None] * p.sum(1)[:, None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        mi = np.where(p > 0, p * np.log2(p / outer), 0.0).sum(axis=(1, 2))
    assert mi.max() <= LOG2_3 + 1e-12


@pytest.mark.parametrize("a", [0.25, 0.6, 0.9])
def test_q_projective_matches_entanglement_entropy(a):
    r = q_projective(build_state_phi_a(StateParams(11 * np.pi / 6, a)))
    assert r.q_p == pytest.approx(entanglement_entropy_family(a), abs=1e-6)


def test_full_mode_at_least_rotation_mode(rng, fast_cfg):
    for _ in range(5):
        rho = random_density(rng, rank=int(rng.integers(1, 4)))
        full = q_projective(rho, fast_cfg, "full")
        rot = q_projective(rho, fast_cfg, "rotation")
        assert full.q_p <= rot.q_p + 1e-8


def test_i_p_max_monotone_in_starts(rng):
    rho = random_density(rng, rank=2)
    for k in (1, 2, 4):
        small = q_projective(rho, OptimizerConfig(starts=k, seed=5))
        large = q_projective(rho, OptimizerConfig(starts=2 * k, seed=5))
        assert large.i_p_max >= small.i_p_max - 1e-12


def test_report_contract():
    b = (LocalBasis((0.0,) * 6), LocalBasis((0.0,) * 6))
    with pytest.raises(ContractViolation):
        CorrelationReport(1.0, 1.5, -0.5, b)
    with pytest.raises(ValueError):
        q_projective(np.eye(9) / 9, mode="povm")


def test_sweep_qp_small(fast_cfg):
    rows = sweep_qp(grid=3, cfg=fast_cfg)
    assert [r.a for r in rows] == [0.0, 0.5, 1.0]
    assert rows[0].q_p == pytest.approx(1.0, abs=5e-3)
    assert rows[-1].q_p == pytest.approx(LOG2_3, abs=5e-3)
    assert all(r.q_p > 0.5 for r in rows)
    assert phi_spread(0.5, fast_cfg) < 1e-4
    with pytest.raises(ValueError):
        sweep_qp(grid=1)


def test_partial_trace_consistency_for_entropy(rng):
    rho = random_density(rng, rank=1)
    # pure joint state: equal reduced entropies
    assert von_neumann_entropy(partial_trace(rho, 1)) == pytest.approx(von_neumann_entropy(partial_trace(rho, 2)), abs=1e-10)
