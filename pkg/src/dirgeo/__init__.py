"""Riemannian geometry of Dirichlet parameter space.

The positive orthant carries the Fisher information metric of the
Dirichlet family.  This package implements that geometry, and the wider
class of metrics built the same way from any convexly-behaved gauge
function: tensors, connection coefficients, geodesics (initial-value
and two-point), a flat Lorentzian embedding, curvature, and Fréchet
means, plus a command line frontend.

Set ``DIRGEO_DISABLE_NUMBA=1`` to force the pure-numpy code paths.
"""

from ._accel import NUMBA_ENABLED
from .curvature import (
    asymptotic_limits,
    curvature_grid,
    gaussian_2d,
    principal_curvatures,
    sectional,
    sectional_axes,
)
from .embedding import (
    ShapeOperator,
    embed,
    eta,
    minkowski_inner,
    normal,
    pushforward,
    shape_operator,
    tangent_basis,
    unembed,
    xi,
)
from .errors import (
    ConsistencyError,
    ConvergenceError,
    IntegrationError,
    NumericalError,
    ShootingError,
)
from .families import (
    AssumptionViolation,
    MetricFunction,
    family,
    rational_approx,
    trigamma_reciprocal,
    verify_assumptions,
)
from .frechet import MeanResult, frechet_mean, frechet_objective
from .geodesics import (
    GeodesicPath,
    ShootingResult,
    diagonal_geodesic,
    diagonal_q,
    distance,
    exp_map,
    geodesic_ivp,
    log_map,
)
from .geometry import (
    Tangent,
    as_point,
    christoffel,
    dirichlet_pdf,
    inner,
    metric,
    metric_inverse,
    norm,
)
from .polygamma import polygamma

__version__ = "0.1.0"

__all__ = [
    "AssumptionViolation",
    "ConsistencyError",
    "ConvergenceError",
    "GeodesicPath",
    "IntegrationError",
    "MeanResult",
    "MetricFunction",
    "NUMBA_ENABLED",
    "NumericalError",
    "ShapeOperator",
    "ShootingError",
    "ShootingResult",
    "Tangent",
    "as_point",
    "asymptotic_limits",
    "christoffel",
    "curvature_grid",
    "diagonal_geodesic",
    "diagonal_q",
    "dirichlet_pdf",
    "distance",
    "embed",
    "eta",
    "exp_map",
    "family",
    "frechet_mean",
    "frechet_objective",
    "gaussian_2d",
    "geodesic_ivp",
    "inner",
    "log_map",
    "metric",
    "metric_inverse",
    "minkowski_inner",
    "norm",
    "normal",
    "polygamma",
    "principal_curvatures",
    "pushforward",
    "rational_approx",
    "sectional",
    "sectional_axes",
    "shape_operator",
    "tangent_basis",
    "trigamma_reciprocal",
    "unembed",
    "verify_assumptions",
    "xi",
    "__version__",
]
