"""U_p characteristic series and unit root L-functions from the class-number trace formula."""

__version__ = "0.1.0"

from .errors import ConfigError, InvariantError, PrecisionError, RouteDisagreement
from .exact import MultiQuadElement, QuadElement, mq_field_degree, mq_is_zero, quad_pow, squarefree_decompose
from .orders import OrderElement, OrderSpec, bn_count, class_number, fundamental_discriminant
from .padic import PadicScalar, hensel_sqrt, hensel_unit_root, padic_div
from .series import (
    NewtonPolygon,
    PadicSeries,
    exp_weighted,
    log_series,
    newton_polygon,
    scale_argument,
    series_divide,
)
from .trace import (
    LSeriesResult,
    TraceTerm,
    build_D,
    build_L,
    compute_A,
    compute_C_exact,
    embed,
    enumerate_terms,
)
from .analysis import (
    FieldGenerationReport,
    PoleCertificate,
    check_continuity,
    check_identity,
    field_generation_report,
    independence_check,
    pole_certificate,
)
