"""Driven two-qutrit dynamics that sweeps the amplitude family at a fixed phase.

The trajectory ``(|1,-1> + cos(wt)|0,0> + e^{-i phase}|-1,1>) / sqrt(2 + cos^2 wt)``
is generated by ``H(t) = Omega0 (S1z + S2z) + lambda(t) G`` with
``lambda(t) = -w sin(wt) / (5 + cos 2wt)``.  The propagator is built from the
two (commuting) exponentials, and an RK4 integrator provides an independent
check.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .qstate import basis_index, site_operator, spin1_operators

DEFAULT_PHASE = 11 * np.pi / 6
CHECKPOINTS_PER_PERIOD = 64
AGREEMENT_TOL = 1e-6


@dataclass(frozen=True)
class DynamicsParams:
    omega0: float = 1.0
    omega: float = 1.0
    phase: float = DEFAULT_PHASE

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")

    @property
    def period(self) -> float:
        return 2 * np.pi / self.omega


def coupling_lambda(t, omega):
    return -omega * np.sin(omega * t) / (5.0 + np.cos(2.0 * omega * t))


def coupling_integral(t, omega):
    """Closed-form integral of :func:`coupling_lambda` from 0 to ``t``."""
    r2 = np.sqrt(2.0)
    return (np.arctan(np.cos(omega * t) / r2) - np.arctan(1.0 / r2)) / (2.0 * r2)


def total_sz() -> np.ndarray:
    sz = spin1_operators().sz
    return site_operator(sz, 1) + site_operator(sz, 2)


def coupling_generator(phase: float = DEFAULT_PHASE) -> np.ndarray:
    """G = i Z (S1+ S2- + e^{-i phase} S1- S2+) - i (e^{i phase} S1+ S2- + S1- S2+) Z, Z = S1z S2z."""
    ops = spin1_operators()
    s1p, s1m = site_operator(ops.s_plus, 1), site_operator(ops.s_minus, 1)
    s2p, s2m = site_operator(ops.s_plus, 2), site_operator(ops.s_minus, 2)
    zz = site_operator(ops.sz, 1) @ site_operator(ops.sz, 2)
    pm, mp = s1p @ s2m, s1m @ s2p
    return (1j * zz @ (pm + np.exp(-1j * phase) * mp)
            - 1j * (np.exp(1j * phase) * pm + mp) @ zz)


def hamiltonian(t: float, params: DynamicsParams) -> np.ndarray:
    return (params.omega0 * total_sz()
            + coupling_lambda(t, params.omega) * coupling_generator(params.phase))


def expm_hermitian(h: np.ndarray, s: complex) -> np.ndarray:
    """``exp(s * h)`` for Hermitian ``h`` via its eigendecomposition."""
    lam, v = np.linalg.eigh(h)
    return (v * np.exp(s * lam)) @ v.conj().T


def evolution_operator(t: float, params: DynamicsParams, generator_sign: int = -1) -> np.ndarray:
    """``exp(-i Omega0 Sz_tot t) exp(sign * i Lambda(t) G)``.

    ``generator_sign=-1`` is the propagator of :func:`hamiltonian`.  The value
    ``+1`` is kept for comparison only; it does not solve the Schrodinger
    equation for this ``H``.
    """
    if generator_sign not in (-1, 1):
        raise ValueError("generator_sign must be -1 or +1")
    lam_int = coupling_integral(t, params.omega)
    return (expm_hermitian(total_sz(), -1j * params.omega0 * t)
            @ expm_hermitian(coupling_generator(params.phase), generator_sign * 1j * lam_int))


def state_t(t: float, omega: float, phase: float = DEFAULT_PHASE) -> np.ndarray:
    c = np.cos(omega * t)
    psi = np.zeros(9, dtype=complex)
    psi[basis_index(1, -1)] = 1.0
    psi[basis_index(0, 0)] = c
    psi[basis_index(-1, 1)] = np.exp(-1j * phase)
    return psi / np.sqrt(2.0 + c * c)


def rk4_step(psi, t, h, params: DynamicsParams, sz_tot, gen):
    def f(tau, y):
        return -1j * ((params.omega0 * sz_tot + coupling_lambda(tau, params.omega) * gen) @ y)

    k1 = f(t, psi)
    k2 = f(t + 0.5 * h, psi + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, psi + 0.5 * h * k2)
    k4 = f(t + h, psi + h * k3)
    return psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


@dataclass(frozen=True)
class DynamicsReport:
    max_deviation: float          # RK4 vs closed-form trajectory
    unitarity_drift: float        # max | ||psi_RK4|| - 1 |
    propagator_deviation: float   # U(t) psi0 vs closed-form trajectory
    rk4_propagator_deviation: float
    propagator_unitarity: float   # max |U^dagger U - I|
    steps: int
    t_max: float
    omega: float
    omega0: float
    checkpoints: int
    agreement: bool

    def to_dict(self) -> dict:
        return asdict(self)


def verify_schrodinger(params: DynamicsParams, t_max: float, steps: int) -> DynamicsReport:
    """Integrate from the t = 0 state and compare at evenly spaced checkpoints."""
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    periods = t_max / params.period
    if steps < 1000 * max(periods, 1e-12):
        raise ValueError(f"need at least 1000 steps per period, got {steps} for {periods:g} periods")
    n_check = max(1, int(round(CHECKPOINTS_PER_PERIOD * periods)))
    check_idx = {int(round(j * steps / n_check)) for j in range(1, n_check + 1)}

    h = t_max / steps
    sz_tot = total_sz()
    gen = coupling_generator(params.phase)
    psi0 = state_t(0.0, params.omega, params.phase)
    psi = psi0.copy()
    dev = drift = prop_dev = cross = unit = 0.0
    eye = np.eye(9)
    for n in range(1, steps + 1):
        psi = rk4_step(psi, (n - 1) * h, h, params, sz_tot, gen)
        if n in check_idx:
            t = n * h
            exact = state_t(t, params.omega, params.phase)
            u = evolution_operator(t, params)
            via_u = u @ psi0
            dev = max(dev, np.linalg.norm(psi - exact))
            prop_dev = max(prop_dev, np.linalg.norm(via_u - exact))
            cross = max(cross, np.linalg.norm(psi - via_u))
            drift = max(drift, abs(np.linalg.norm(psi) - 1.0))
            unit = max(unit, np.abs(u.conj().T @ u - eye).max())
    agree = max(dev, prop_dev, cross) <= AGREEMENT_TOL
    return DynamicsReport(float(dev), float(drift), float(prop_dev), float(cross), float(unit),
                          steps, float(t_max), params.omega, params.omega0, len(check_idx), bool(agree))


def rk4_convergence_ratio(params: DynamicsParams, t_max: float, steps: int) -> float:
    """Error ratio when the step count doubles; about 16 for a 4th-order method."""
    coarse = verify_schrodinger(params, t_max, steps).max_deviation
    fine = verify_schrodinger(params, t_max, 2 * steps).max_deviation
    return coarse / fine
