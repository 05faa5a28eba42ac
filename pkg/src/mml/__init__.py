"""Numerical lab for mollified second moments of the Riemann zeta function."""

__version__ = "0.1.0"

from .arith import MobiusTable, coefficient_table, mobius_sieve  # noqa: E402
from .kernels import ContourConfig, KernelContext  # noqa: E402
from .mollifier import MollifierSpec, make_mollifier, mollifier_value  # noqa: E402
from .moments import MomentResult, QuadratureConfig, mollified_moment  # noqa: E402
from .zeta import ZeroHypothesis, ZetaEvalConfig, hardy_z, zeta_em  # noqa: E402

__all__ = [
    "__version__",
    "MobiusTable",
    "mobius_sieve",
    "coefficient_table",
    "MollifierSpec",
    "make_mollifier",
    "mollifier_value",
    "ZetaEvalConfig",
    "ZeroHypothesis",
    "zeta_em",
    "hardy_z",
    "QuadratureConfig",
    "MomentResult",
    "mollified_moment",
    "ContourConfig",
    "KernelContext",
]
