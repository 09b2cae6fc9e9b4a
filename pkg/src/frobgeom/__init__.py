"""Hessian-potential information geometry and the statistical product.

From a convex potential in flat coordinates: the Hessian metric, the
Amari-Chentsov tensor, the alpha/Dubrovin connection pencil and its curvature,
the tangent-space product, WDVV residuals and the Yukawa scalar, with the
classical and Bose ideal gases as worked models.
"""

from .analysis import (
    ScanGrid,
    ScanResult,
    bec_asymptote,
    bose_yukawa_closed_form,
    positivity_series,
    scan,
    wdvv_residual,
)
from .errors import DomainError, TransportError
from .geometry import (
    ac_tensor_at,
    alpha_connection,
    contravariant_connection,
    dual_connection,
    geometry_at,
    levi_civita_at,
    metric_at,
    pairing_drift,
    riemann_curvature,
    statistical_product,
    straight_line,
    yukawa_term,
)
from .models import (
    REDUCED,
    Units,
    bose_ideal_gas,
    classical_ideal_gas,
    partials,
    synthetic_potential,
)
from .special_functions import polylog, polylog_asymptotic, polylog_derivative, polylog_exp, zeta

__version__ = "0.1.0"
