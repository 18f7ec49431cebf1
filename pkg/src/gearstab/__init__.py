"""Stability-region analysis and stiff integration with BDF and Adams-Moulton methods."""

from .methods import (
    MAX_AM_Q,
    MAX_BDF_ORDER,
    Family,
    LinearMultistepMethod,
    adams_moulton_coefficients,
    bdf_coefficients,
    rho_sigma_polynomials,
)
from .stability import (
    StabilityLocus,
    StiffStabilityReport,
    boundary_locus,
    characteristic_polynomial,
    find_self_intersections,
    is_absolutely_stable,
    is_stiffly_stable,
    stiff_stability_abscissa,
    stiffness_ratio,
)
from .linalg import eigendecompose, eigenvalues, lu_solve, polynomial_roots
from .integrate import (
    IntegrationTrace,
    OdeProblem,
    SolverConfig,
    Status,
    decouple_linear_system,
    integrate_adaptive,
    integrate_fixed,
    problem_library,
    step_explicit_euler,
    step_lmm_implicit,
    step_rk4,
)
from .svg import PlotSpec, default_plot_spec, locus_svg

__version__ = "0.1.0"

__all__ = [
    "MAX_AM_Q",
    "MAX_BDF_ORDER",
    "Family",
    "LinearMultistepMethod",
    "adams_moulton_coefficients",
    "bdf_coefficients",
    "rho_sigma_polynomials",
    "StabilityLocus",
    "StiffStabilityReport",
    "boundary_locus",
    "characteristic_polynomial",
    "find_self_intersections",
    "is_absolutely_stable",
    "is_stiffly_stable",
    "stiff_stability_abscissa",
    "stiffness_ratio",
    "eigendecompose",
    "eigenvalues",
    "lu_solve",
    "polynomial_roots",
    "IntegrationTrace",
    "OdeProblem",
    "SolverConfig",
    "Status",
    "decouple_linear_system",
    "integrate_adaptive",
    "integrate_fixed",
    "problem_library",
    "step_explicit_euler",
    "step_lmm_implicit",
    "step_rk4",
    "PlotSpec",
    "default_plot_spec",
    "locus_svg",
]
