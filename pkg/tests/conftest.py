import numpy as np
import pytest

from qbell import OptimizerConfig
from qbell.qstate import DensityMatrix
from qbell.tomography import MeasurementFrame


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fast_cfg():
    return OptimizerConfig(starts=8, max_evals=2000, tol=1e-10, seed=0)


def random_frame(rng, chi=None):
    return MeasurementFrame(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi),
                            rng.uniform(0, 2 * np.pi) if chi is None else chi)


def random_density(rng, dim=9, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_unitary(rng, dim=3):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


ACCEPTANCE_LINES = []


def record_criterion(number, ok, detail):
    ACCEPTANCE_LINES.append((number, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
