"""Minimum-time synthesis and verification of phase-shifted qubit NOT gates."""
from .limits import (
    DomainError,
    EnergyBudget,
    GatePhase,
    SpeedLimitReport,
    eigenvalue_pair,
    gate_min_time,
    orthogonality_time,
    physical_gate_time,
    resonant_gap_from_wavelength,
    rotation_min_time,
)
from .linalg import (
    HBAR,
    PLANCK,
    PSI1,
    PSI2,
    HermitianOperator2,
    QubitState,
    UnitaryOperator2,
    apply,
    eig_hermitian,
    expm_hermitian,
    inner,
)
from .search import (
    RotationTarget,
    SearchConfig,
    SearchResult,
    search_min_gate_time,
    search_min_rotation_time,
    sweep_sawtooth,
)
from .synthesis import (
    GateSpec,
    RotationSpec,
    UnitaryFamilyParams,
    family_hamiltonian,
    general_unitary,
    synthesize_gate,
    synthesize_rotation,
)
from .verification import GateCheckResult, build_report, check_gate, check_rotation

__version__ = "0.1.0"
