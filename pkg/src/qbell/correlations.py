"""Entropies, mutual informations and the projective-measurement deficit Q^p.

All quantities are in bits.  ``Q^p = S(A,B) - I^p_max(A,B)`` where ``S(A,B)``
is the quantum mutual information and ``I^p_max`` the classical mutual
information of local projective-measurement outcomes, maximized over the
measurement bases.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .optimize import OptimizerConfig, maximize
from .qstate import (
    HERMITIAN_TOL,
    TWO_PI,
    ContractViolation,
    StateParams,
    as_matrix,
    build_state_phi_a,
    partial_trace,
)

EIG_FLOOR = 1e-12
LOG2_3 = float(np.log2(3.0))

MODES = ("full", "rotation")
_MODE_IDS = {"full": kernels.MODE_FULL, "rotation": kernels.MODE_ROTATION}


def von_neumann_entropy(rho) -> float:
    """``-sum(l * log2(l))`` over eigenvalues, dropping ``l < 1e-12``."""
    m = as_matrix(rho)
    if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
        raise ContractViolation("entropy requires a Hermitian matrix")
    lam = np.linalg.eigvalsh(m)
    lam = lam[lam >= EIG_FLOOR]
    return float(-np.sum(lam * np.log2(lam)))


def quantum_mutual_information(rho) -> float:
    return (von_neumann_entropy(partial_trace(rho, 1))
            + von_neumann_entropy(partial_trace(rho, 2))
            - von_neumann_entropy(rho))


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def classical_mutual_information(p) -> float:
    """Mutual information of a 3x3 joint distribution given as 9 numbers."""
    p = np.asarray(getattr(p, "w", p), dtype=float).ravel()
    if p.shape != (9,):
        raise ValueError(f"expected 9 joint probabilities, got shape {p.shape}")
    if p.min() < -1e-12:
        raise ValueError(f"negative probability {p.min()}")
    if abs(p.sum() - 1.0) > 1e-10:
        raise ValueError(f"probabilities sum to {p.sum()!r}")
    return max(kernels.mutual_information_np(p), 0.0)


@dataclass(frozen=True)
class LocalBasis:
    """Projective measurement basis on one qutrit.

    ``mode='full'``: 6 numbers, three (angle, phase) complex plane rotations.
    ``mode='rotation'``: 2 numbers, the spin direction (theta, phi).
    """

    params: tuple[float, ...]
    mode: str = "full"

    def unitary(self) -> np.ndarray:
        p = np.asarray(self.params, dtype=float)
        if self.mode == "rotation":
            return kernels.wigner_d_np(p[0], p[1])
        return kernels.givens_unitary_np(p)


@dataclass(frozen=True)
class CorrelationReport:
    s_ab: float
    i_p_max: float
    q_p: float
    best_measurement: tuple[LocalBasis, LocalBasis]
    converged: bool = True
    mode: str = "full"

    def __post_init__(self):
        if self.q_p < -1e-8:
            raise ContractViolation(f"Q^p = {self.q_p} is negative")
        if not (-1e-10 <= self.i_p_max <= LOG2_3 + 1e-10):
            raise ContractViolation(f"I^p_max = {self.i_p_max} out of range")


def measured_distribution(rho, basis_a: LocalBasis, basis_b: LocalBasis) -> np.ndarray:
    """Outcome probabilities ``diag((Ua (x) Ub)^dagger rho (Ua (x) Ub))``."""
    return kernels.pair_tomogram_np(as_matrix(rho), basis_a.unitary(), basis_b.unitary())


def q_projective(rho, cfg: OptimizerConfig | None = None, mode: str = "full") -> CorrelationReport:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    cfg = cfg or OptimizerConfig()
    m = as_matrix(rho)
    if mode == "full":
        upper = np.full(12, TWO_PI)
        pairs = np.zeros((0, 2))
    else:
        upper = np.array([np.pi, TWO_PI, np.pi, TWO_PI])
        pairs = np.array([[0, 1], [2, 3]])
    res = maximize("neg_mi", m, [_MODE_IDS[mode]], upper, pairs, cfg)
    half = res.x.size // 2
    bases = (LocalBasis(tuple(res.x[:half]), mode), LocalBasis(tuple(res.x[half:]), mode))
    s_ab = quantum_mutual_information(m)
    i_max = max(res.value, 0.0)
    return CorrelationReport(s_ab, i_max, s_ab - i_max, bases, res.converged, mode)


@dataclass(frozen=True)
class QpRow:
    a: float
    s_ab: float
    i_p_max: float
    q_p: float
    converged: bool


PHI_CHECK_VALUES = (0.0, 2.0, 11 * np.pi / 6)
PHI_SPREAD_TOL = 1e-4


def _qp_point(task) -> QpRow:
    phi, a, cfg, mode = task
    r = q_projective(build_state_phi_a(StateParams(phi, a)), cfg, mode)
    return QpRow(a, r.s_ab, r.i_p_max, r.q_p, r.converged)


def phi_spread(a: float, cfg: OptimizerConfig, mode: str = "full", phis=PHI_CHECK_VALUES) -> float:
    vals = [_qp_point((p, a, cfg, mode)).q_p for p in phis]
    return float(max(vals) - min(vals))


def sweep_qp(grid: int = 64, phi: float = 11 * np.pi / 6, cfg: OptimizerConfig | None = None,
             mode: str = "full", jobs: int = 1, check_phi: bool = True) -> list[QpRow]:
    """Q^p over ``a`` in [0, 1] at fixed ``phi``.

    With ``check_phi`` the result is also required to be phi-independent:
    three phases at an interior ``a`` must agree to 1e-4, otherwise
    :class:`ContractViolation` is raised.
    """
    if grid < 2:
        raise ValueError("grid needs at least 2 points")
    cfg = cfg or OptimizerConfig()
    tasks = [(phi, float(a), cfg, mode) for a in np.linspace(0.0, 1.0, grid)]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_qp_point, tasks))
    else:
        rows = [_qp_point(t) for t in tasks]
    if check_phi:
        spread = phi_spread(0.5, cfg, mode)
        if spread >= PHI_SPREAD_TOL:
            raise ContractViolation(f"Q^p varies with phi by {spread:.3e} at a = 0.5")
    return rows
