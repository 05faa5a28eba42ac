"""Mollified and unmollified second moments on the critical line.

|zeta(1/2 + it)| is always taken as |Z(t)|, so every integrand here is a
product of real squares and is evaluated without phase cancellation.
"""

from __future__ import annotations

import math

import numpy as np

from .arith import MobiusTable, cached_mobius
from .errors import DomainError
from .mollifier import MollifierSpec, _unit_intervals, mollifier_value, partial_sums
from .quadrature import (
    MomentResult,
    QuadratureConfig,
    gauss_legendre,
    integrate_panels,
    oscillation_period,
    panel_edges,
)
from .zeta import ZetaEvalConfig, hardy_z

__all__ = [
    "MomentResult",
    "QuadratureConfig",
    "moment_integrand",
    "mollified_moment",
    "length_weights",
    "moment_length_average",
    "second_moment_zeta",
]

_CHUNK = 2_000_000


def _check_window(T1: float, T2: float) -> None:
    if not 0 <= T1 < T2:
        raise DomainError(f"need 0 <= T1 < T2, got T1={T1}, T2={T2}")


def moment_integrand(spec: MollifierSpec, t, zcfg: ZetaEvalConfig | None = None):
    """|M_x(1/2 + it)|^2 Z(t)^2."""
    t = np.asarray(t, dtype=np.float64)
    if spec.is_zero:
        return np.zeros(t.shape)[()] if t.ndim == 0 else np.zeros(t.shape)
    m = mollifier_value(spec, t)
    z = hardy_z(t, zcfg)
    return np.abs(m) ** 2 * z * z


def mollified_moment(spec: MollifierSpec, T1: float, T2: float, cfg: QuadratureConfig | None = None,
                     zcfg: ZetaEvalConfig | None = None) -> MomentResult:
    """I_x(T1, T2) = int_{T1}^{T2} |M_x(1/2 + it) zeta(1/2 + it)|^2 dt."""
    cfg = cfg or QuadratureConfig()
    _check_window(T1, T2)
    if spec.is_zero:
        return MomentResult(0.0, 0.0, 0, 0, True)
    edges = panel_edges(T1, T2, oscillation_period(spec.log_x), cfg.periods_per_panel)
    return integrate_panels(lambda t: moment_integrand(spec, t, zcfg), edges, cfg)


def length_weights(x: float, nodes: int = 32) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(L0, L1, L2)[m-1] = int over [m, min(m+1, x)] of 1, 1/log y, 1/log^2 y.

    The m = 1 entries of L1, L2 are set to 0: they multiply B_1 = 0, and the
    integrals themselves diverge there.
    """
    left, right = _unit_intervals(x)
    g, w = gauss_legendre(nodes)
    half = 0.5 * (right - left)
    y = (left + half)[:, None] + half[:, None] * g
    with np.errstate(divide="ignore"):
        inv = 1.0 / np.log(y)
    L1 = half * (inv @ w)
    L2 = half * ((inv * inv) @ w)
    L1[0] = L2[0] = 0.0
    return right - left, L1, L2


def _length_profile(mobius: MobiusTable, x: float, weights, t: np.ndarray) -> np.ndarray:
    """W_x(t) = int_1^x |M_y(1/2 + it)|^2 dy, exact in y up to the L1/L2 quadrature."""
    L0, L1, L2 = weights
    top = L0.size
    out = np.empty(t.shape)
    step = max(1, _CHUNK // top)
    for lo in range(0, t.size, step):
        sl = slice(lo, lo + step)
        A, B = partial_sums(mobius, top, t[sl])
        out[sl] = (A.real**2 + A.imag**2) @ L0 - 2 * (A * np.conj(B)).real @ L1 + (B.real**2 + B.imag**2) @ L2
    return out


def moment_length_average(x: float, T1: float, T2: float, cfg: QuadratureConfig | None = None,
                          mobius: MobiusTable | None = None,
                          zcfg: ZetaEvalConfig | None = None) -> MomentResult:
    """int_1^x I_y(T1, T2) dy.

    The y-integral is taken inside the t-integral: between consecutive
    integers M_y log y is affine in log y (see :mod:`mml.mollifier`), so
    int_1^x |M_y|^2 dy is a fixed combination of the partial sums A_m, B_m.
    """
    cfg = cfg or QuadratureConfig()
    _check_window(T1, T2)
    if not x >= 2:
        raise DomainError(f"moment_length_average needs x >= 2, got {x}")
    if mobius is None:
        mobius = cached_mobius(math.ceil(x))
    weights = length_weights(x)
    edges = panel_edges(T1, T2, oscillation_period(math.log(x)), cfg.periods_per_panel)

    def integrand(t):
        z = hardy_z(t, zcfg)
        return z * z * _length_profile(mobius, x, weights, np.asarray(t))

    return integrate_panels(integrand, edges, cfg)


def second_moment_zeta(T1: float, T2: float, cfg: QuadratureConfig | None = None,
                       zcfg: ZetaEvalConfig | None = None) -> MomentResult:
    """int_{T1}^{T2} |zeta(1/2 + it)|^2 dt = int Z(t)^2 dt."""
    cfg = cfg or QuadratureConfig()
    _check_window(T1, T2)
    edges = panel_edges(T1, T2, oscillation_period(0.0), cfg.periods_per_panel)

    def integrand(t):
        z = hardy_z(t, zcfg)
        return z * z

    return integrate_panels(integrand, edges, cfg)
