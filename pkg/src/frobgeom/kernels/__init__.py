"""Hot numeric kernels.

Two interchangeable backends share one signature per kernel: explicit index
loops compiled by numba (``loops``) and numpy/einsum (``vectorized``). The
module-level names resolve to the backend picked by ``FROBGEOM_DISABLE_NUMBA``.
"""

from .._accel import USE_NUMBA
from . import _loops as loops
from . import _vectorized as vectorized

KERNEL_NAMES = (
    "polylog_series",
    "raise_last",
    "inverse_metric_derivative",
    "raise_last_derivative",
    "christoffel_first_kind",
    "riemann",
    "yukawa_parts",
    "wdvv_defect",
    "transport_rhs",
)

BACKEND = "numba" if USE_NUMBA else "numpy"
_active = loops if USE_NUMBA else vectorized

polylog_series = _active.polylog_series
raise_last = _active.raise_last
inverse_metric_derivative = _active.inverse_metric_derivative
raise_last_derivative = _active.raise_last_derivative
christoffel_first_kind = _active.christoffel_first_kind
riemann = _active.riemann
yukawa_parts = _active.yukawa_parts
wdvv_defect = _active.wdvv_defect
transport_rhs = _active.transport_rhs

__all__ = ["BACKEND", "KERNEL_NAMES", "loops", "vectorized", *KERNEL_NAMES]
