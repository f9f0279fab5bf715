"""Multi-start simplex search shared by the Bell and mutual-information maximizers."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from . import kernels


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 32
    max_evals: int = 2000
    tol: float = 1e-10
    seed: int = 0
    backend: str | None = None

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError(f"starts must be >= 1, got {self.starts}")
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.max_evals < 1:
            raise ValueError(f"max_evals must be >= 1, got {self.max_evals}")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class MultiStartResult:
    x: np.ndarray
    value: float
    best_start: int
    starts_used: int
    n_converged: int
    evals: int

    @property
    def converged(self) -> bool:
        return self.n_converged > 0


def start_points(upper, n: int, seed: int) -> np.ndarray:
    """First ``n`` points of a scrambled Sobol sequence scaled to ``[0, upper]``.

    A larger ``n`` with the same seed extends the same sequence.
    """
    upper = np.asarray(upper, dtype=float)
    sampler = qmc.Sobol(d=upper.size, scramble=True, seed=seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # balance warning for n != 2^k
        u = sampler.random(n)
    return u * upper


def maximize(objective: str, rho, ints, upper, pairs, cfg: OptimizerConfig) -> MultiStartResult:
    """Maximize a kernel objective (``'neg_bell'`` or ``'neg_mi'``) over angles.

    Starts are drawn from ``[0, upper]``; ``pairs`` lists (polar, azimuth)
    coordinate indices for folding.  Ties keep the lowest start index.
    """
    table = kernels.get_kernels(cfg.backend)
    fun = table[objective]
    nm = table["nelder_mead"]
    rho = np.ascontiguousarray(np.asarray(rho, dtype=np.complex128))
    ints = np.asarray(ints, dtype=np.int64)
    upper = np.asarray(upper, dtype=float)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    step = 0.1 * upper

    best_x, best_f, best_i = None, np.inf, -1
    n_conv = 0
    evals = 0
    for i, x0 in enumerate(start_points(upper, cfg.starts, cfg.seed)):
        x, f, nev, conv = nm(fun, x0, step, pairs, cfg.tol, cfg.max_evals, rho, ints)
        evals += int(nev)
        n_conv += bool(conv)
        if f < best_f:
            best_x, best_f, best_i = np.array(x), float(f), i
    return MultiStartResult(best_x, -best_f, best_i, cfg.starts, n_conv, evals)
