"""Mellin-side kernels H_t, G_t, g_t and three routes to J_t(x).

With s = w - 1/2 + it and a designated zero rho0 of zeta,

    H_t(w) = 1 / ((w - 1)^2 zeta(s))
    G_t(w) = (w - 1)^2 (w - 3/2 + it) zeta(s) / ((w + 1)^2 (s - rho0) (w + it + 1)^4)
    g_t(u) = (1 / 2 pi i) int_(3) G_t(w) u^-w dw
    J_t(x) = (1 / 2 pi i) int_(3) G_t(w) H_t(w) x^w dw.

G_t H_t is the rational function
    R_J(w) = (w - 3/2 + it) / ((w + 1)^2 (s - rho0) (w + it + 1)^4),
so J_t can be computed

* on Re w = 3 directly (``J_via_mellin``),
* on Re w = 0 plus the residue at w = rho0 + 1/2 - it (``J_via_residue``),
* as the Mellin convolution int_1^x M_y(1/2 + it) log y g_t(y/x) dy
  (``J_via_convolution``).

Vertical-line integrals use the trapezoid rule on |Im w + t| <= Y with an
a-posteriori tail bound C Y^(1-a) / (pi (a - 1)), where a is the algebraic
decay exponent of the integrand on that line and C is 8 times the largest
sampled |f| |v + t|^a over the top half of the window.

g_t also has an exact expansion: on Re w = 3, zeta(s) = sum n^(1/2-it) n^-w,
so g_t(u) = sum_n n^(1/2-it) r(nu), where r is the inverse Mellin transform
of the rational part of G_t.  r vanishes on v >= 1 and is a finite residue
sum on 0 < v < 1, computed by trapezoid rules on small circles around each
pole cluster (robust when poles merge, e.g. at t = 0).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .arith import MobiusTable, cached_mobius
from .errors import ConfigurationError, DomainError, PoleError
from .mollifier import length_integral_sq_log2, partial_sums
from .quadrature import gauss_legendre
from .zeta import ZeroHypothesis, zeta_em

log = logging.getLogger(__name__)

__all__ = [
    "ContourConfig",
    "KernelContext",
    "H",
    "G",
    "g_kernel",
    "g_series",
    "g_line_bound",
    "g_sup_bound",
    "g_tail_bound",
    "shifted_line_bound",
    "left_residues",
    "mellin_of_mollifier",
    "J_via_mellin",
    "J_via_residue",
    "J_via_convolution",
    "J_closed_form",
    "shifted_line_integral",
    "residue_term",
    "lower_bound_terms",
    "LowerBoundTerms",
    "jt_check",
]

NEAR_ZERO = 1e-6
EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class ContourConfig:
    """A truncated vertical line Re w = sigma, |Im w + t| <= height_Y.

    ``sigma=None`` lets each operation use its own line (3, or 0 after the
    shift).
    """

    sigma: float | None = None
    height_Y: float = 2000.0
    spacing: float = 0.05
    tail_tol: float = 1e-10

    def __post_init__(self):
        if not 0 < self.spacing <= 0.25:
            raise ValueError("spacing must lie in (0, 0.25]")
        if not self.height_Y > 0 or not self.tail_tol > 0:
            raise ValueError("height_Y and tail_tol must be positive")

    def refined(self) -> "ContourConfig":
        """Doubled height, halved spacing."""
        return ContourConfig(self.sigma, 2 * self.height_Y, self.spacing / 2, self.tail_tol)


@dataclass(frozen=True)
class KernelContext:
    t: float = 0.0
    rho0: ZeroHypothesis = field(default_factory=ZeroHypothesis)

    @property
    def zero_pole(self) -> complex:
        """w at which s = rho0."""
        return self.rho0.rho0 + 0.5 - 1j * self.t


# ---------------------------------------------------------------- H and G

def _zeta_times_pole(s: np.ndarray) -> np.ndarray:
    """(s - 1) zeta(s), continued through s = 1."""
    out = np.empty(s.shape, dtype=np.complex128)
    near = np.abs(s - 1) < 1e-6
    if np.any(near):
        out[near] = 1 + EULER_GAMMA * (s[near] - 1)
    if np.any(~near):
        out[~near] = (s[~near] - 1) * zeta_em(s[~near])
    return out


def H(w, ctx: KernelContext):
    """1 / ((w - 1)^2 zeta(w - 1/2 + it))."""
    scalar = np.ndim(w) == 0
    w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    if np.any(w == 1):
        raise PoleError("H_t has a double pole at w = 1")
    z = zeta_em(w - 0.5 + 1j * ctx.t)
    if np.any(np.abs(z) < 1e-14):
        raise PoleError("H_t evaluated at a zero of zeta")
    out = 1.0 / ((w - 1) ** 2 * z)
    return complex(out[0]) if scalar else out


def _G_raw(w: np.ndarray, ctx: KernelContext) -> np.ndarray:
    t = ctx.t
    s = w - 0.5 + 1j * t
    # (w - 3/2 + it) zeta(s) = (s - 1) zeta(s) is regular at the zeta pole
    num = (w - 1) ** 2 * _zeta_times_pole(s)
    den = (w + 1) ** 2 * (s - ctx.rho0.rho0) * (w + 1j * t + 1) ** 4
    return num / den


def G(w, ctx: KernelContext):
    """G_t(w) on Re w >= 0.

    Within 1e-6 of w = rho0 + 1/2 - it, where zeta's zero cancels the
    denominator, the value is the mean of two points 1e-6 to either side.
    """
    scalar = np.ndim(w) == 0
    w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    if np.any(w.real < 0):
        raise DomainError("G_t is only defined here on Re w >= 0")
    out = np.empty(w.shape, dtype=np.complex128)
    near = np.abs(w - ctx.zero_pole) < NEAR_ZERO
    if np.any(near):
        log.debug("G_t: %d node(s) within %g of the cancelled zero; detouring", near.sum(), NEAR_ZERO)
        c = ctx.zero_pole
        out[near] = 0.5 * (_G_raw(np.full(near.sum(), c + NEAR_ZERO), ctx)
                           + _G_raw(np.full(near.sum(), c - NEAR_ZERO), ctx))
    if np.any(~near):
        out[~near] = _G_raw(w[~near], ctx)
    return complex(out[0]) if scalar else out


def _rational_J(w: np.ndarray, ctx: KernelContext) -> np.ndarray:
    """G_t(w) H_t(w) with the (w-1)^2 and zeta factors cancelled."""
    t = ctx.t
    s = w - 0.5 + 1j * t
    return (w - 1.5 + 1j * t) / ((w + 1) ** 2 * (s - ctx.rho0.rho0) * (w + 1j * t + 1) ** 4)


def _rational_g(w: np.ndarray, ctx: KernelContext) -> np.ndarray:
    """G_t(w) / zeta(w - 1/2 + it)."""
    t = ctx.t
    s = w - 0.5 + 1j * t
    return (w - 1) ** 2 * (w - 1.5 + 1j * t) / ((w + 1) ** 2 * (s - ctx.rho0.rho0) * (w + 1j * t + 1) ** 4)


# ---------------------------------------------------------------- vertical lines

def _line_nodes(ctx: KernelContext, contour: ContourConfig) -> np.ndarray:
    K = int(round(contour.height_Y / contour.spacing))
    return -ctx.t + contour.spacing * np.arange(-K, K + 1)


def _tail_bound(absf: np.ndarray, v: np.ndarray, ctx: KernelContext, contour: ContourConfig,
                decay: float) -> float:
    r = np.abs(v + ctx.t)
    top = r >= 0.5 * contour.height_Y
    C = 8.0 * float(np.max(absf[top] * r[top] ** decay))
    return C * contour.height_Y ** (1 - decay) / (math.pi * (decay - 1))


def _g_line_decay(sigma: float) -> float:
    # zeta(sigma - 1/2 + iT) << T^mu (convexity), rational part ~ |w|^-4
    s = sigma - 0.5
    mu = 0.5 - s if s <= 0 else ((1 - s) / 2 if s < 1 else 0.0)
    return 4.0 - mu


@lru_cache(maxsize=32)
def _G_on_line(ctx: KernelContext, sigma: float, height_Y: float, spacing: float):
    contour = ContourConfig(sigma, height_Y, spacing)
    v = _line_nodes(ctx, contour)
    vals = G(sigma + 1j * v, ctx)
    vals.flags.writeable = False
    tail = _tail_bound(np.abs(vals), v, ctx, contour, _g_line_decay(sigma))
    return v, vals, tail


def g_line_bound(ctx: KernelContext, contour: ContourConfig | None = None, sigma: float = 0.0) -> float:
    """(1/2 pi) int |G_t(sigma + iv)| dv plus the tail bound: a bound on
    u^sigma |g_t(u)| valid for every u > 0."""
    contour = contour or ContourConfig(height_Y=600.0, tail_tol=1e-5)
    v, vals, tail = _G_on_line(ctx, sigma, contour.height_Y, contour.spacing)
    return float(np.sum(np.abs(vals)) * contour.spacing / (2 * math.pi) + tail)


def g_sup_bound(ctx: KernelContext, contour: ContourConfig | None = None, sigma: float = 0.0) -> float:
    """max |G_t| over the trapezoid nodes on Re w = sigma: the per-t constant
    B recorded for |g_t| on (0, 1]."""
    contour = contour or ContourConfig(height_Y=600.0, tail_tol=1e-5)
    return float(np.max(np.abs(_G_on_line(ctx, sigma, contour.height_Y, contour.spacing)[1])))


def g_tail_bound(ctx: KernelContext, contour: ContourConfig | None = None, sigma: float = 0.0) -> float:
    """Truncation tail bound of the g_t contour on Re w = sigma, before the
    u^-sigma factor."""
    contour = contour or ContourConfig(height_Y=600.0, tail_tol=1e-5)
    return float(_G_on_line(ctx, sigma, contour.height_Y, contour.spacing)[2])


def g_kernel(u, ctx: KernelContext, contour: ContourConfig | None = None, *, method: str = "contour"):
    """g_t(u) for u > 0.

    ``method='contour'`` integrates on Re w = 3 when u > 1 and on Re w = 0
    when u <= 1 (or on ``contour.sigma`` if set); a ConfigurationError is
    raised if the truncation tail may exceed ``contour.tail_tol``.
    ``method='series'`` uses the exact residue expansion.
    """
    scalar = np.ndim(u) == 0
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    if np.any(u <= 0):
        raise DomainError("g_t(u) needs u > 0")
    if method == "series":
        out = g_series(u, ctx)
        return complex(out[0]) if scalar else out
    if method != "contour":
        raise ValueError(f"unknown method {method!r}")
    contour = contour or ContourConfig(height_Y=600.0, tail_tol=1e-8)
    out = np.empty(u.shape, dtype=np.complex128)
    for big in (True, False):
        sel = (u > 1) if big else (u <= 1)
        if not np.any(sel):
            continue
        sigma = contour.sigma if contour.sigma is not None else (3.0 if big else 0.0)
        v, vals, tail = _G_on_line(ctx, float(sigma), contour.height_Y, contour.spacing)
        us = u[sel]
        worst = tail * float(np.max(us ** -sigma))
        if worst > contour.tail_tol:
            raise ConfigurationError(
                f"g_t tail bound {worst:.2e} on Re w = {sigma} exceeds tail_tol {contour.tail_tol:.2e}; "
                "raise height_Y"
            )
        logu = np.log(us)
        res = np.empty(us.shape, dtype=np.complex128)
        for i, lu in enumerate(logu):
            res[i] = np.sum(vals * np.exp(-1j * v * lu))
        out[sel] = res * np.exp(-sigma * logu) * contour.spacing / (2 * math.pi)
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------- residue sums

def _pole_list(ctx: KernelContext) -> list[complex]:
    return [-1.0 + 0j, ctx.zero_pole, -1.0 - 1j * ctx.t]


def _circles(poles: list[complex]):
    """(center, radius, nodes) circles, one per cluster of nearby poles."""
    clusters: list[list[complex]] = []
    for p in poles:
        hit = [c for c in clusters if any(abs(p - q) < 1.0 for q in c)]
        merged = [p] + [q for c in hit for q in c]
        clusters = [c for c in clusters if c not in hit] + [merged]
    out = []
    for c in clusters:
        center = complex(np.mean(c))
        inner = max(max(abs(p - center) for p in c), 0.05)
        others = [abs(p - center) for p in poles if p not in c]
        outer = min(others) if others else 4 * inner + 2
        radius = math.sqrt(inner * outer) if others else 2 * inner + 1
        ratio = max(inner / radius, radius / outer if others else 0.5)
        nodes = min(4096, max(32, int(math.ceil(-40.0 / math.log(ratio)))))
        out.append((center, radius, nodes))
    return out


@lru_cache(maxsize=64)
def _residue_nodes(ctx: KernelContext, which: str, poles: tuple[int, ...]):
    """Nodes w_j and weights c_j with sum_j c_j e^(-w_j L) equal to the sum
    of residues of R(w) e^(-w L) at the selected poles."""
    fn = _rational_J if which == "J" else _rational_g
    all_poles = _pole_list(ctx)
    chosen = [all_poles[i] for i in poles]
    ws, cs = [], []
    for center, radius, n in _circles(all_poles):
        if not any(abs(center - p) < radius for p in chosen):
            continue
        phi = 2 * math.pi * np.arange(n) / n
        z = radius * np.exp(1j * phi)
        w = center + z
        # (1/2 pi i) oint f dw  with dw = i z dphi
        ws.append(w)
        cs.append(fn(w, ctx) * z / n)
    return np.concatenate(ws), np.concatenate(cs)


def _residue_sum(ctx: KernelContext, which: str, poles: tuple[int, ...], L: np.ndarray) -> np.ndarray:
    w, c = _residue_nodes(ctx, which, poles)
    return np.exp(-np.multiply.outer(L, w)) @ c


def residue_term(x: float, ctx: KernelContext) -> complex:
    """x^(rho0 + 1/2 - it) (rho0 - 1) / ((3/2 + rho0 - it)^2 (rho0 + 3/2)^4)."""
    if x < 2:
        raise DomainError("residue_term needs x >= 2")
    rho, t = ctx.rho0.rho0, ctx.t
    return complex(np.exp((rho + 0.5 - 1j * t) * math.log(x)) * (rho - 1)
                   / ((1.5 + rho - 1j * t) ** 2 * (rho + 1.5) ** 4))


def J_closed_form(x: float, ctx: KernelContext) -> complex:
    """J_t(x) as the sum of all residues of R_J(w) x^w (x > 1)."""
    return complex(_residue_sum(ctx, "J", (0, 1, 2), np.array([-math.log(x)]))[0])


def g_series(u, ctx: KernelContext) -> np.ndarray:
    """g_t(u) = sum_{n < 1/u} n^(1/2 - it) r(nu), exactly."""
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    out = np.zeros(u.shape, dtype=np.complex128)
    live = u < 1
    if not np.any(live):
        return out
    w, c = _residue_nodes(ctx, "g", (0, 1, 2))
    nmax = int(math.ceil(1.0 / u[live].min()))
    n = np.arange(1, nmax + 1, dtype=np.float64)
    logn = np.log(n)
    # S[k, j] = sum_{n <= k+1} n^(1/2 - it - w_j)
    S = np.cumsum(np.exp(np.multiply.outer(logn, 0.5 - 1j * ctx.t - w)), axis=0)
    ul = u[live]
    K = np.ceil(1.0 / ul).astype(np.int64) - 1  # number of n with n u < 1
    vals = np.zeros(ul.shape, dtype=np.complex128)
    has = K >= 1
    if np.any(has):
        Uw = np.exp(-np.multiply.outer(np.log(ul[has]), w))
        vals[has] = np.sum(Uw * S[K[has] - 1] * c, axis=1)
    out[live] = vals
    return out


# ---------------------------------------------------------------- J_t

def _vertical(fn, sigma: float, x: float, ctx: KernelContext, contour: ContourConfig,
              return_error: bool):
    """Trapezoid sum on Re w = sigma.  The error estimate is the tail bound
    plus a rounding allowance of 64 ulps of the absolute sum."""
    v = _line_nodes(ctx, contour)
    w = sigma + 1j * v
    f = fn(w, ctx) * np.exp(w * math.log(x))
    absf = np.abs(f)
    tail = _tail_bound(absf, v, ctx, contour, 6.0)
    if tail > contour.tail_tol:
        raise ConfigurationError(
            f"tail bound {tail:.2e} on Re w = {sigma} exceeds tail_tol {contour.tail_tol:.2e}; raise height_Y"
        )
    scale = contour.spacing / (2 * math.pi)
    value = complex(np.sum(f) * scale)
    if not return_error:
        return value
    return value, tail + 64 * np.finfo(float).eps * float(np.sum(absf)) * scale


def J_via_mellin(x: float, ctx: KernelContext, contour: ContourConfig | None = None, *,
                 return_error: bool = False):
    """J_t(x) on Re w = 3 (or ``contour.sigma``), trapezoid rule."""
    if x < 2:
        raise DomainError("J_t(x) needs x >= 2")
    contour = contour or ContourConfig()
    sigma = 3.0 if contour.sigma is None else float(contour.sigma)
    if sigma <= ctx.zero_pole.real:
        raise DomainError("the Mellin line must lie right of w = rho0 + 1/2 - it")
    return _vertical(_rational_J, sigma, x, ctx, contour, return_error)


def shifted_line_integral(x: float, ctx: KernelContext, contour: ContourConfig | None = None, *,
                          return_error: bool = False):
    """(1 / 2 pi i) int_(0) G_t H_t x^w dw."""
    if x < 2:
        raise DomainError("J_t(x) needs x >= 2")
    return _vertical(_rational_J, 0.0, x, ctx, contour or ContourConfig(), return_error)


def shifted_line_bound(ctx: KernelContext, contour: ContourConfig | None = None) -> float:
    """(1/2 pi) int |G_t H_t (iv)| dv plus tail: bounds the shifted-line
    integral for every x, since |x^(iv)| = 1."""
    contour = contour or ContourConfig()
    v = _line_nodes(ctx, contour)
    a = np.abs(_rational_J(1j * v, ctx))
    return float(np.sum(a) * contour.spacing / (2 * math.pi) + _tail_bound(a, v, ctx, contour, 6.0))


def left_residues(x: float, ctx: KernelContext) -> complex:
    """Sum of the residues of G_t H_t x^w at w = -1 and w = -1 - it."""
    return complex(_residue_sum(ctx, "J", (0, 2), np.array([-math.log(x)]))[0])


def J_via_residue(x: float, ctx: KernelContext, contour: ContourConfig | None = None, *,
                  return_error: bool = False):
    """Shifted-line integral on Re w = 0 plus the residue at the zero's pole."""
    out = shifted_line_integral(x, ctx, contour, return_error=return_error)
    if return_error:
        return out[0] + residue_term(x, ctx), out[1]
    return out + residue_term(x, ctx)


def J_via_convolution(x: float, ctx: KernelContext, mobius: MobiusTable | None = None,
                      nodes: int = 24) -> complex:
    """int_1^x M_y(1/2 + it) log y g_t(y/x) dy.

    The integrand is analytic between the integers (where the mollifier
    gains a term) and the points x/k (where g_t(y/x) gains one), so
    Gauss-Legendre is applied piece by piece between those breakpoints.
    """
    if x < 2:
        raise DomainError("J_t(x) needs x >= 2")
    if mobius is None:
        mobius = cached_mobius(math.ceil(x))
    top = math.floor(x)
    brk = np.concatenate([
        np.arange(1, top + 1, dtype=np.float64),
        x / np.arange(1, top + 1, dtype=np.float64),
        [x],
    ])
    brk = np.unique(brk[(brk >= 1) & (brk <= x)])
    lo, hi = brk[:-1], brk[1:]
    keep = hi - lo > 1e-13 * x
    lo, hi = lo[keep], hi[keep]
    g, wts = gauss_legendre(nodes)
    half = 0.5 * (hi - lo)
    y = ((lo + half)[:, None] + half[:, None] * g).ravel()
    A, B = partial_sums(mobius, top, ctx.t)
    m = np.floor(y).astype(np.int64) - 1
    mlog = A[m] * np.log(y) - B[m]
    vals = (mlog * g_series(y / x, ctx)).reshape(-1, nodes)
    return complex(np.sum(half * (vals @ wts)))


def mellin_of_mollifier(w: complex, ctx: KernelContext, X: float, mobius: MobiusTable | None = None) -> complex:
    """int_1^X M_x(1/2 + it) log x x^-w dx, exactly, piece by piece.

    On [m, m+1) the integrand is (A_m log x - B_m) x^-w, whose antiderivative
    is elementary.
    """
    if X <= 1:
        return 0j
    if mobius is None:
        mobius = cached_mobius(math.ceil(X))
    count = math.ceil(X) - 1
    left = np.arange(1, count + 1, dtype=np.float64)
    right = np.minimum(left + 1, X)
    A, B = partial_sums(mobius, count, ctx.t)
    a = 1 - w

    def prims(y):
        ly = np.log(y)
        p = np.exp(a * ly)
        return p / a, p * (ly / a - 1 / a**2)

    p0r, p1r = prims(right)
    p0l, p1l = prims(left)
    terms = A * (p1r - p1l) - B * (p0r - p0l)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


# ---------------------------------------------------------------- lower bound

@dataclass(frozen=True)
class LowerBoundTerms:
    lhs_pointwise: float
    rhs_pointwise: float

    @property
    def ratio(self) -> float:
        return self.lhs_pointwise / self.rhs_pointwise


def lower_bound_terms(x: float, t: float, ctx: KernelContext, mobius: MobiusTable | None = None) -> LowerBoundTerms:
    """x^(2 beta0) / (1 + |t|)^4 + 1/x against int_1^x |M_y(1/2 + it)|^2 log^2 y dy."""
    if x < 2:
        raise DomainError("lower_bound_terms needs x >= 2")
    if mobius is None:
        mobius = cached_mobius(math.ceil(x))
    lhs = x ** (2 * ctx.rho0.beta0) / (1 + abs(t)) ** 4 + 1 / x
    return LowerBoundTerms(lhs, length_integral_sq_log2(mobius, x, t))


# ---------------------------------------------------------------- report

def _rel(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def jt_check(x: float, ctx: KernelContext, contour: ContourConfig | None = None,
             mobius: MobiusTable | None = None) -> dict:
    """All three J_t(x) routes with their pairwise relative deviations."""
    jm = J_via_mellin(x, ctx, contour)
    jc = J_via_convolution(x, ctx, mobius)
    jr = J_via_residue(x, ctx, contour)
    dev_mr, dev_mc, dev_cr = _rel(jm, jr), _rel(jm, jc), _rel(jc, jr)
    rho = ctx.rho0.rho0
    return {
        "x": float(x),
        "t": float(ctx.t),
        "rho0": [rho.real, rho.imag],
        "j_mellin": [jm.real, jm.imag],
        "j_convolution": [jc.real, jc.imag],
        "j_residue": [jr.real, jr.imag],
        "residue_term": [residue_term(x, ctx).real, residue_term(x, ctx).imag],
        "dev_mellin_residue": dev_mr,
        "dev_mellin_convolution": dev_mc,
        "dev_convolution_residue": dev_cr,
        "max_rel_dev": max(dev_mr, dev_mc, dev_cr),
    }
