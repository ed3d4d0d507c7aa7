"""Five-point WENO reconstruction, embedded-scheme design and 1D solvers."""

__version__ = "0.1.0"

from .core import (
    SmoothnessTriple,
    nonlinear_weights,
    reconstruct_left_interface,
    smoothness_indicators,
    substencil_reconstruct,
    weights_embedded,
    weights_js,
    weights_z,
    weno_derivative,
)
from .design import (
    EmbeddingSpec,
    VerificationReport,
    design_form1,
    design_form2,
    embedded_js_tableau,
    embedded_z_tableau,
    emit_tableau,
    inner_weights_from_proportions,
    proportions_from_inner,
    verify_embedding,
)
from .laws import ConservationLaw, EulerEquations, LinearAdvection, PositivityError
from .riemann import RiemannSolution, VacuumError, WaveKind, sample, solve_star
from .solver import (
    BCKind,
    BoundaryCondition,
    FieldSnapshot,
    Grid1D,
    RunStats,
    godunov_reference,
    lax_friedrichs_split,
    run_simulation,
    spatial_operator,
    ssprk3_step,
)
from .spectral import (
    LinearScheme,
    SpectralCurve,
    inner_scheme_weights,
    linear_symbol,
    rk3_transfer,
    spectral_curves,
    uw3_scheme,
    uw5_scheme,
)
from .tableau import (
    INNER_FOURTH_ORDER,
    INNER_THIRD_ORDER,
    LINEAR_WEIGHTS,
    RECONSTRUCTION_MATRIX,
    InnerWeights,
    ReconstructionTableau,
    WenoForm,
    js_tableau,
    linear_tableau,
    z_tableau,
)
