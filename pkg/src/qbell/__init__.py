"""Tomographic Bell tests for two-qutrit states via qubit portraits."""
__version__ = "0.1.0"

from .bell import (
    DEFAULT_SCHEME,
    BellResult,
    Portrait,
    PortraitScheme,
    bell_number,
    maximize_bell,
    portrait,
    portrait_schemes,
    sweep,
)
from .correlations import (
    classical_mutual_information,
    q_projective,
    quantum_mutual_information,
    sweep_qp,
    von_neumann_entropy,
)
from .dynamics import DynamicsParams, evolution_operator, hamiltonian, state_t, verify_schrodinger
from .optimize import OptimizerConfig
from .qstate import (
    ContractViolation,
    DensityMatrix,
    StateParams,
    build_max_entangled,
    build_state_phi,
    build_state_phi_a,
    partial_trace,
)
from .tomography import MeasurementFrame, Tomogram, pair_rotation, tomogram, wigner_d
