"""Plasmon modes of concentric layered spheres and disks.

The main entry points: ``solve_modes_3d`` and ``solve_modes_2d`` for mode
spectra, ``charpoly_3d`` for the characteristic polynomial, ``field_coeffs``
for the layered potential and ``sweep`` for Drude frequency sweeps.
"""

from .charpoly import (
    CharPoly,
    Method,
    charpoly_3d,
    det_recursive,
    eval_charpoly,
    extreme_coeffs,
    fq_dp,
    fq_enum,
    fq_fit,
    g_coeff,
)
from .drude import DrudeParams, SweepResult, drude_eps, peak_match, polarization_tensor, sweep
from .errors import (
    ConvergenceError,
    DegenerateContrastError,
    EnumerationSizeError,
    NumericalDiagnostic,
    PlasmodeError,
    PoleError,
    SingularSystemError,
    TheoremViolation,
    ValidationError,
)
from .field import (
    FieldCoefficients,
    alternating_amplitude,
    eval_potential,
    field_coeffs,
    perturbation_amplitude,
    transmission_residual,
)
from .linalg import SystemMatrices, assemble_2d, assemble_3d, eig_dense, k_matrix, lin_solve, lu_det
from .modes import Band, ModeSet, PlasmonMode, band_scan, find_q_roots, solve_modes_2d, solve_modes_3d
from .structure import (
    ContrastVector,
    LayeredStructure,
    MaterialProfile,
    RadiusRatioTable,
    alternating_profile,
    contrasts,
    epsilon_from_lambda,
    equidistant,
    explicit,
    extreme,
    geometric,
    make_structure,
    ratio_table,
)

__version__ = "0.1.0"
