"""Qubit portraits of two-qutrit tomograms and the CHSH-type Bell number.

A portrait scheme singles out one spin projection on each qutrit; outcome
pairs are then binned by whether each side hit its singled-out value::

    omega1: (hit, hit)   omega2: (hit, miss)   omega3: (miss, hit)   omega4: (miss, miss)

The default scheme singles out m1 = +1 and m2 = -1, i.e. with the tomogram
index ``W[3 * i1 + i2]``: omega1 = W1, omega2 = W2 + W3, omega3 = W4 + W7 and
omega4 = W5 + W6 + W8 + W9 (1-based).
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .optimize import OptimizerConfig, maximize
from .qstate import M1, M2, TWO_PI, ContractViolation, StateParams, as_matrix, build_state_phi_a
from .tomography import MeasurementFrame, Tomogram, tomogram

CIRELSON = 2.0 * np.sqrt(2.0)
CIRELSON_SLACK = 1e-8

# CHSH signs: Tr(I T) = E(a,c) + E(a,d) + E(b,c) - E(b,d) with E = w1 - w2 - w3 + w4
POLARIZATION = np.array([
    [1, -1, -1, 1],
    [1, -1, -1, 1],
    [1, -1, -1, 1],
    [-1, 1, 1, -1],
], dtype=float)

_BELL_UPPER = np.array([np.pi] * 4 + [TWO_PI] * 4)
_BELL_PAIRS = np.array([[0, 4], [1, 5], [2, 6], [3, 7]])


@dataclass(frozen=True)
class PortraitScheme:
    """Singled-out spin projection on qutrit 1 (``group1``) and qutrit 2 (``group2``)."""

    group1: int = 1
    group2: int = -1

    def __post_init__(self):
        if self.group1 not in M1 or self.group2 not in M2:
            raise ValueError(f"invalid portrait scheme ({self.group1}, {self.group2})")

    @property
    def indices(self) -> tuple[int, int]:
        return M1.index(self.group1), M2.index(self.group2)

    def kernel_ints(self) -> np.ndarray:
        return np.array(self.indices, dtype=np.int64)


DEFAULT_SCHEME = PortraitScheme(1, -1)


def portrait_schemes() -> list[PortraitScheme]:
    """All 9 product coarse-grainings, the default one first."""
    schemes = [DEFAULT_SCHEME]
    for g1 in M1:
        for g2 in M2:
            s = PortraitScheme(g1, g2)
            if s != DEFAULT_SCHEME:
                schemes.append(s)
    return schemes


@dataclass(frozen=True)
class Portrait:
    omega: np.ndarray
    scheme: PortraitScheme = DEFAULT_SCHEME

    @property
    def correlator(self) -> float:
        o = self.omega
        return float(o[0] - o[1] - o[2] + o[3])


def portrait(w: Tomogram | np.ndarray, scheme: PortraitScheme = DEFAULT_SCHEME) -> Portrait:
    """Coarse-grain a 9-component tomogram to the 4-component portrait."""
    p = np.asarray(w.w if isinstance(w, Tomogram) else w, dtype=float).reshape(3, 3)
    k, l = scheme.indices
    rest1 = [i for i in range(3) if i != k]
    rest2 = [j for j in range(3) if j != l]
    omega = np.array([
        p[k, l],
        p[k, rest2].sum(),
        p[rest1, l].sum(),
        p[np.ix_(rest1, rest2)].sum(),
    ])
    omega = np.where(np.abs(omega) < 1e-12, 0.0, omega)
    return Portrait(np.clip(omega, 0.0, 1.0), scheme)


def t_matrix(rho, frames, scheme: PortraitScheme = DEFAULT_SCHEME) -> np.ndarray:
    """4x4 matrix whose columns are the portraits at (a,c), (a,d), (b,c), (b,d)."""
    a, b, c, d = frames
    cols = [portrait(tomogram(rho, x, y), scheme).omega for x, y in ((a, c), (a, d), (b, c), (b, d))]
    return np.column_stack(cols)


def bell_number(rho, frames, scheme: PortraitScheme = DEFAULT_SCHEME) -> float:
    """``|Tr(I T)|``; frames ``a, b`` act on qutrit 1 and ``c, d`` on qutrit 2."""
    b = abs(float(np.trace(POLARIZATION @ t_matrix(rho, frames, scheme))))
    if b > CIRELSON + CIRELSON_SLACK:
        raise ContractViolation(f"Bell number {b} exceeds 2*sqrt(2)")
    return b


def frames_to_vector(frames) -> np.ndarray:
    return np.array([f.theta for f in frames] + [f.phi for f in frames])


def vector_to_frames(x) -> tuple[MeasurementFrame, ...]:
    x = np.asarray(x, dtype=float)
    return tuple(
        MeasurementFrame(float(np.clip(x[i], 0.0, np.pi)), float(np.clip(x[i + 4], 0.0, TWO_PI)))
        for i in range(4)
    )


@dataclass(frozen=True)
class BellResult:
    b_max: float
    frames: tuple[MeasurementFrame, ...]
    scheme: PortraitScheme
    starts_used: int
    converged: bool
    best_start: int = 0
    evals: int = 0

    def __post_init__(self):
        if not (0.0 <= self.b_max <= CIRELSON + CIRELSON_SLACK):
            raise ContractViolation(f"Bell number {self.b_max} outside [0, 2*sqrt(2)]")


def maximize_bell(rho, scheme: PortraitScheme = DEFAULT_SCHEME, cfg: OptimizerConfig | None = None) -> BellResult:
    """Multi-start simplex maximization of B over the 8 apparatus angles (chi = 0)."""
    cfg = cfg or OptimizerConfig()
    res = maximize("neg_bell", as_matrix(rho), scheme.kernel_ints(), _BELL_UPPER, _BELL_PAIRS, cfg)
    return BellResult(
        b_max=res.value,
        frames=vector_to_frames(res.x),
        scheme=scheme,
        starts_used=res.starts_used,
        converged=res.converged,
        best_start=res.best_start,
        evals=res.evals,
    )


def maximize_bell_all_schemes(rho, cfg: OptimizerConfig | None = None) -> BellResult:
    """Best result over the 9 schemes; ties keep the earlier scheme."""
    best = None
    for s in portrait_schemes():
        r = maximize_bell(rho, s, cfg)
        if best is None or r.b_max > best.b_max:
            best = r
    return best


# --------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class SweepRow:
    phi: float
    a: float
    b_max: float
    converged: bool
    scheme: PortraitScheme = DEFAULT_SCHEME


def phi_grid(n: int) -> np.ndarray:
    if n < 2:
        raise ValueError("grid needs at least 2 points")
    return np.linspace(0.0, TWO_PI, n)


def a_grid(n: int) -> np.ndarray:
    if n < 2:
        raise ValueError("grid needs at least 2 points")
    return np.linspace(0.0, 1.0, n)


def _sweep_point(task) -> SweepRow:
    phi, a, scheme, cfg, all_schemes = task
    rho = build_state_phi_a(StateParams(phi, a))
    r = maximize_bell_all_schemes(rho, cfg) if all_schemes else maximize_bell(rho, scheme, cfg)
    return SweepRow(phi, a, r.b_max, r.converged, r.scheme)


def _run(points, scheme, cfg, all_schemes, jobs) -> list[SweepRow]:
    tasks = [(float(p), float(a), scheme, cfg, all_schemes) for p, a in points]
    if jobs is None or jobs <= 1 or len(tasks) < 2:
        return [_sweep_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map() yields in submission order, whatever the completion order
        return list(pool.map(_sweep_point, tasks))


def sweep(family: str, *, grid: int = 64, grid_a: int | None = None, phi: float = 11 * np.pi / 6,
          scheme: PortraitScheme = DEFAULT_SCHEME, cfg: OptimizerConfig | None = None,
          all_schemes: bool = False, jobs: int = 1) -> list[SweepRow]:
    """Maximize B over a parameter grid.

    ``family`` is ``'phi'`` (a = 1, phi over [0, 2pi]), ``'surface'``
    (phi-major grid of ``grid`` x ``grid_a`` points) or ``'slice'``
    (a over [0, 1] at fixed ``phi``).  Rows come back in grid order.
    """
    cfg = cfg or OptimizerConfig()
    if family == "phi":
        points = [(p, 1.0) for p in phi_grid(grid)]
    elif family == "surface":
        points = [(p, a) for p in phi_grid(grid) for a in a_grid(grid_a or grid)]
    elif family == "slice":
        points = [(phi, a) for a in a_grid(grid)]
    else:
        raise ValueError(f"unknown sweep family {family!r}")
    return _run(points, scheme, cfg, all_schemes, jobs)
