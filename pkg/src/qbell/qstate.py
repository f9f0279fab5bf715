"""Two-qutrit states, spin-1 operators and small dense matrix helpers.

Basis convention
----------------
Two-qutrit vectors are indexed ``3 * i1 + i2``.  Qutrit 1 uses the local
ordering ``m1 = (+1, 0, -1)``; qutrit 2 uses ``m2 = (-1, 0, +1)``.  The
resulting product basis is::

    |1,-1>, |1,0>, |1,1>, |0,-1>, |0,0>, |0,1>, |-1,-1>, |-1,0>, |-1,1>

Single-qutrit operators written in the ``(+1, 0, -1)`` basis must be
conjugated by the exchange matrix before acting on qutrit 2; use
:func:`site_operator` for that.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi

M1 = (1, 0, -1)
M2 = (-1, 0, 1)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10

_EXCHANGE = np.eye(3)[::-1].copy()


class ContractViolation(RuntimeError):
    """A numerical invariant (Hermiticity, trace, positivity, ...) failed."""


def basis_index(m1: int, m2: int) -> int:
    """Position of ``|m1, m2>`` in the two-qutrit basis."""
    if m1 not in M1 or m2 not in M2:
        raise ValueError(f"spin projections must be in {{-1, 0, 1}}, got ({m1}, {m2})")
    return 3 * M1.index(m1) + M2.index(m2)


def basis_labels() -> list[tuple[int, int]]:
    return [(m1, m2) for m1 in M1 for m2 in M2]


@dataclass(frozen=True)
class SpinOperators:
    sz: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray
    identity: np.ndarray


def spin1_operators() -> SpinOperators:
    """Spin-1 matrices (hbar = 1) in the basis ``(|1>, |0>, |-1>)``."""
    sz = np.diag([1.0, 0.0, -1.0]).astype(complex)
    sp = np.zeros((3, 3), dtype=complex)
    sp[0, 1] = sp[1, 2] = np.sqrt(2.0)
    ops = SpinOperators(sz=sz, s_plus=sp, s_minus=sp.conj().T.copy(), identity=np.eye(3, dtype=complex))
    for m in (ops.sz, ops.s_plus, ops.s_minus, ops.identity):
        m.setflags(write=False)
    return ops


def kron(a, b) -> np.ndarray:
    """Kronecker product, first factor major."""
    return np.kron(np.asarray(a), np.asarray(b))


def site_operator(op, site: int) -> np.ndarray:
    """Embed a single-qutrit operator (``(+1, 0, -1)`` basis) on ``site`` 1 or 2."""
    op = np.asarray(op, dtype=complex)
    if site == 1:
        return np.kron(op, np.eye(3))
    if site == 2:
        return np.kron(np.eye(3), _EXCHANGE @ op @ _EXCHANGE)
    raise ValueError(f"site must be 1 or 2, got {site}")


def dagger(m) -> np.ndarray:
    return np.asarray(m).conj().T


@dataclass(frozen=True)
class StateParams:
    phi: float = 0.0
    a: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.phi <= TWO_PI):
            raise ValueError(f"phi must lie in [0, 2pi], got {self.phi}")
        if not (0.0 <= self.a <= 1.0):
            raise ValueError(f"a must lie in [0, 1], got {self.a}")


def check_density_matrix(m: np.ndarray) -> None:
    """Raise :class:`ContractViolation` unless ``m`` is a valid density matrix."""
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (3, 9):
        raise ContractViolation(f"density matrix must be 3x3 or 9x9, got shape {m.shape}")
    herm = np.abs(m - m.conj().T).max()
    if herm > HERMITIAN_TOL:
        raise ContractViolation(f"not Hermitian: max |rho - rho^dagger| = {herm:.3e}")
    tr = np.trace(m)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ContractViolation(f"trace is {tr}, expected 1")
    lo = np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min()
    if lo < PSD_FLOOR:
        raise ContractViolation(f"not positive semidefinite: min eigenvalue {lo:.3e}")


@dataclass(frozen=True)
class DensityMatrix:
    """Validated, read-only density matrix of one (3x3) or two (9x9) qutrits."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        check_density_matrix(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.matrix
        return self.matrix.astype(dtype)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    @classmethod
    def from_vector(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))


def as_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def state_vector_phi_a(phi: float, a: float) -> np.ndarray:
    """Normalized ``(|1,-1> + a|0,0> + e^{-i phi}|-1,1>) / sqrt(2 + a^2)``."""
    StateParams(phi, a)
    psi = np.zeros(9, dtype=complex)
    psi[basis_index(1, -1)] = 1.0
    psi[basis_index(0, 0)] = a
    psi[basis_index(-1, 1)] = np.exp(-1j * phi)
    return psi / np.sqrt(2.0 + a * a)


def build_state_phi_a(params: StateParams) -> DensityMatrix:
    psi = state_vector_phi_a(params.phi, params.a)
    return DensityMatrix(np.outer(psi, psi.conj()))


def build_state_phi(params: StateParams | float) -> DensityMatrix:
    """The equal-weight family; ``params.a`` is ignored."""
    phi = params.phi if isinstance(params, StateParams) else float(params)
    return build_state_phi_a(StateParams(phi, 1.0))


def build_max_entangled() -> DensityMatrix:
    psi = np.zeros(9, dtype=complex)
    for m in M1:
        psi[basis_index(m, m)] = 1.0
    return DensityMatrix.from_vector(psi)


def partial_trace(rho, keep: int) -> DensityMatrix:
    """Reduced state of qutrit ``keep``.

    The qutrit-2 result is expressed in that qutrit's local ``(-1, 0, +1)``
    ordering.
    """
    m = as_matrix(rho)
    if m.shape != (9, 9):
        raise ValueError(f"partial_trace expects a 9x9 matrix, got {m.shape}")
    t = m.reshape(3, 3, 3, 3)
    if keep == 1:
        red = np.einsum("ijkj->ik", t)
    elif keep == 2:
        red = np.einsum("ijil->jl", t)
    else:
        raise ValueError(f"keep must be 1 or 2, got {keep}")
    return DensityMatrix(red)


def format_matrix(m) -> str:
    """Plain-text dump: one row per line, ``re+imi`` entries separated by tabs."""
    m = as_matrix(m)
    rows = []
    for row in m:
        rows.append("\t".join(f"{z.real:.15g}{z.imag:+.15g}i" for z in row))
    return "\n".join(rows) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    rows = []
    for line in text.strip().splitlines():
        rows.append([complex(tok.replace("i", "j")) for tok in line.split("\t")])
    return np.array(rows, dtype=complex)
