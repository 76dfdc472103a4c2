"""Exact solution toolkit for the non-Hermitian Aharonov-Bohm interferometer."""
from .errors import (
    AbringError,
    DegenerateDivision,
    DivisionByZero,
    InvalidCriticalPoint,
    InvalidParameter,
    SingularConstruction,
    SingularSystem,
    SingularTransmission,
)
from .kernels import BACKEND
from .params import (
    CriticalPoint,
    DerivedQuantities,
    Kind,
    ModelParams,
    SingularityClass,
    classify,
    critical_point,
    derived_quantities,
    dispersion,
    singularity_locus,
)
from .scattering import (
    ApproxAmplitude,
    PhaseProfile,
    ScatteringAmplitudes,
    TransferMatrix,
    approx_amplitude,
    det_transfer,
    max_phase_shift,
    oracle_amplitudes,
    phase_profile,
    scattering_amplitudes,
    transfer_matrix,
)
from .eigensystem import (
    Branch,
    EigenPairCoefficients,
    HamiltonianMatrix,
    LatticeState,
    bethe_state,
    biorthogonality_report,
    build_hamiltonian,
    eigen_coefficients,
    residual,
    singular_state,
)
from .equivalence import (
    build_dimer,
    build_split,
    transform_u1,
    transform_u2,
    verify_equivalence,
)

__version__ = "0.1.0"
