"""Spin-1 rotation matrices and two-qutrit tomograms."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import TWO_PI, ContractViolation, as_matrix

NEG_TOL = 1e-10
SUM_TOL = 1e-10
_ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class MeasurementFrame:
    """Euler angles (radians) orienting one local apparatus."""

    theta: float
    phi: float
    chi: float = 0.0

    def __post_init__(self):
        if not (-_ANGLE_SLACK <= self.theta <= np.pi + _ANGLE_SLACK):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        for name in ("phi", "chi"):
            v = getattr(self, name)
            if not (-_ANGLE_SLACK <= v <= TWO_PI + _ANGLE_SLACK):
                raise ValueError(f"{name} must lie in [0, 2pi], got {v}")


ZERO_FRAME = MeasurementFrame(0.0, 0.0, 0.0)


def wigner_d(frame: MeasurementFrame) -> np.ndarray:
    """3x3 spin-1 rotation for ``frame``, rows/columns ordered m = +1, 0, -1."""
    th, ph, ch = frame.theta, frame.phi, frame.chi
    c, s = np.cos(th), np.sin(th)
    r2 = np.sqrt(2.0)
    e = np.exp
    return np.array([
        [0.5 * e(-1j * (ph + ch)) * (1 + c), -e(-1j * ph) * s / r2, 0.5 * e(-1j * (ph - ch)) * (1 - c)],
        [e(-1j * ch) * s / r2, c, -e(1j * ch) * s / r2],
        [0.5 * e(1j * (ph - ch)) * (1 - c), e(1j * ph) * s / r2, 0.5 * e(1j * (ph + ch)) * (1 + c)],
    ])


def pair_rotation(f1: MeasurementFrame, f2: MeasurementFrame) -> np.ndarray:
    return np.kron(wigner_d(f1), wigner_d(f2))


@dataclass(frozen=True)
class Tomogram:
    w: np.ndarray
    frames: tuple[MeasurementFrame, MeasurementFrame]

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.shape != (9,):
            raise ValueError(f"tomogram needs 9 components, got shape {w.shape}")
        if w.min() < -NEG_TOL:
            raise ContractViolation(f"negative tomogram entry {w.min():.3e}")
        if abs(w.sum() - 1.0) > SUM_TOL:
            raise ContractViolation(f"tomogram sums to {w.sum()!r}")
        w = np.clip(w, 0.0, 1.0)
        w.setflags(write=False)
        object.__setattr__(self, "w", w)


def tomogram(rho, f1: MeasurementFrame = ZERO_FRAME, f2: MeasurementFrame = ZERO_FRAME) -> Tomogram:
    """Diagonal of ``D_pair^dagger rho D_pair`` for ``D_pair = D(f1) (x) D(f2)``."""
    m = as_matrix(rho)
    u = pair_rotation(f1, f2)
    diag = np.diag(u.conj().T @ m @ u)
    if np.abs(diag.imag).max() > 1e-12:
        raise ContractViolation(f"rotated diagonal not real: {np.abs(diag.imag).max():.3e}")
    return Tomogram(diag.real, (f1, f2))
