"""zeta(s), the Hardy Z-function and critical-line zeros in binary64.

Two independent evaluation paths are provided:

* Euler-Maclaurin summation, valid for Re s > -1, used for small heights
  and as the reference path;
* the Riemann-Siegel formula for Z(t), t >= 30, with correction terms of
  arbitrary order.  The correction polynomials C_k(p) are assembled once, in
  50-digit arithmetic, from the Taylor coefficients of Riemann's kernel

      F(z) = (exp(pi i (z^2/2 + 3/8)) - i sqrt(2) cos(pi z / 2)) / (2 cos(pi z))

  and the Gabcke/Arias de Reyna recurrence for the derivative weights.  They
  are then evaluated as plain complex polynomials in p = 1 - 2 frac(a),
  a = sqrt(t / 2 pi), which is well conditioned on [-1, 1].
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli, loggamma

from .errors import BracketError, DomainError, PoleError

__all__ = [
    "ZetaEvalConfig",
    "ZeroHypothesis",
    "PrecisionWarning",
    "zeta_em",
    "riemann_siegel_theta",
    "siegel_theta",
    "hardy_z",
    "hardy_z_rs",
    "zeta_critical_rs",
    "find_zero_on_line",
    "first_zeros",
    "FIRST_ZERO",
    "RS_SWITCHOVER",
]

RS_SWITCHOVER = 30.0
RS_MAX_CORRECTIONS = 16
FIRST_ZERO = 14.134725141734694
TWO_PI = 2.0 * math.pi


class PrecisionWarning(RuntimeWarning):
    """The configured truncation cannot meet the stated accuracy target."""


@dataclass(frozen=True)
class ZetaEvalConfig:
    """How zeta and Z are evaluated.

    ``em_terms=None`` picks N = max(50, ceil(2 |Im s|)) per call.
    ``rs_corrections`` is the index of the last Riemann-Siegel correction
    term kept; 12 gives |error| < 1e-11 for t >= 30.
    """

    method: str = "auto"
    em_terms: int | None = None
    em_bernoulli_order: int = 24
    rs_corrections: int = 12

    def __post_init__(self):
        if self.method not in ("auto", "euler_maclaurin", "riemann_siegel"):
            raise ValueError(f"unknown zeta method {self.method!r}")
        if self.em_terms is not None and self.em_terms < 1:
            raise ValueError("em_terms must be positive")
        if self.em_bernoulli_order < 2 or self.em_bernoulli_order % 2:
            raise ValueError("em_bernoulli_order must be a positive even integer")
        if not 0 <= self.rs_corrections <= RS_MAX_CORRECTIONS:
            raise ValueError(f"rs_corrections must lie in 0..{RS_MAX_CORRECTIONS}")


DEFAULT_CONFIG = ZetaEvalConfig()


# ---------------------------------------------------------------- Euler-Maclaurin

def _em_block(s: np.ndarray, N: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(1, N, dtype=np.float64)
    logn = np.log(n)
    # (len(s), N-1) matrix of n^-s; numpy's pairwise sum keeps rounding ~log N
    head = np.exp(-np.outer(s, logn)).sum(axis=1)
    logN = math.log(N)
    NmS = np.exp(-s * logN)
    total = head + N * NmS / (s - 1.0) + 0.5 * NmS
    B = bernoulli(2 * m)
    poch = s.copy()  # s (s+1) ... (s+2k-2)
    power = NmS / N  # N^(-s-1)
    fact = 2.0
    last = np.zeros_like(s)
    for k in range(1, m + 1):
        term = B[2 * k] / fact * poch * power
        total = total + term
        last = term
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        power = power / (N * N)
        fact *= (2 * k + 1) * (2 * k + 2)
    return total, np.abs(last)


def zeta_em(s, cfg: ZetaEvalConfig | None = None, *, return_error: bool = False):
    """zeta(s) by Euler-Maclaurin summation, for Re s > -1, s != 1.

    Accepts a scalar or an array of complex points.  With the default
    configuration the absolute error is below 1e-10 for |Im s| <= 1e3.
    With ``return_error`` the size of the last Bernoulli term kept is also
    returned as an error estimate.
    """
    cfg = cfg or DEFAULT_CONFIG
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=np.complex128))
    if not np.all(np.isfinite(s)):
        raise DomainError("zeta_em: non-finite argument")
    if np.any(s == 1):
        raise PoleError("zeta has a pole at s = 1")
    if np.any(s.real <= -1):
        raise DomainError("zeta_em supports Re s > -1 only")
    m = cfg.em_bernoulli_order // 2
    out = np.empty_like(s)
    err = np.empty(s.shape)
    if cfg.em_terms is None:
        Ns = np.maximum(50, np.ceil(2 * np.abs(s.imag))).astype(int)
        # bucket by N so that each block shares one n-range
        Ns = (np.ceil(Ns / 50) * 50).astype(int)
    else:
        Ns = np.full(s.shape, cfg.em_terms)
    for N in np.unique(Ns):
        idx = np.nonzero(Ns == N)[0]
        step = max(1, 4_000_000 // int(N))
        for lo in range(0, idx.size, step):
            part = idx[lo : lo + step]
            out[part], err[part] = _em_block(s[part], int(N), m)
    bad = err > 1e-10 * np.maximum(1.0, np.abs(out))
    if np.any(bad):
        warnings.warn(
            f"zeta_em: truncation error up to {err.max():.2e} exceeds target",
            PrecisionWarning,
            stacklevel=2,
        )
    if scalar:
        out, err = complex(out[0]), float(err[0])
    return (out, err) if return_error else out


# ---------------------------------------------------------------- theta

def riemann_siegel_theta(t):
    """Riemann-Siegel theta from its asymptotic series; requires t >= 10."""
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 10):
        raise DomainError("riemann_siegel_theta: asymptotic series needs t >= 10")
    B = bernoulli(20)
    out = 0.5 * t * np.log(t / TWO_PI) - 0.5 * t - math.pi / 8
    for k in range(1, 11):
        c = (1 - 2.0 ** (1 - 2 * k)) * abs(B[2 * k]) / (4 * k * (2 * k - 1))
        out = out + c / t ** (2 * k - 1)
    return out[()] if out.ndim == 0 else out


def siegel_theta(t):
    """theta(t) for any real t: log-Gamma below t = 10, series above."""
    t = np.asarray(t, dtype=np.float64)
    out = np.empty(t.shape)
    small = np.abs(t) < 10
    if np.any(small):
        ts = t[small]
        out[small] = loggamma(0.25 + 0.5j * ts).imag - 0.5 * ts * math.log(math.pi)
    big = ~small
    if np.any(big):
        tb = t[big]
        out[big] = np.sign(tb) * riemann_siegel_theta(np.abs(tb))
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------- Riemann-Siegel

@lru_cache(maxsize=None)
def _rs_correction_polys(K: int) -> np.ndarray:
    """Taylor coefficients (in p) of the correction functions C_0..C_K.

    Row k holds C_k(p) = sum_l d[k,l] F^(3k-2l)(p) / (pi^(2k-l) (2i)^l).
    """
    import mpmath as mp

    with mp.workdps(50):
        pi = mp.pi
        R = mp.mpf("1.25")
        M, J = 256, 130

        def F(z):
            num = mp.expjpi(z * z / 2 + mp.mpf(3) / 8) - 1j * mp.sqrt(2) * mp.cos(pi * z / 2)
            return num / (2 * mp.cos(pi * z))

        # F is entire (cos(pi z) zeros are removable); Cauchy formula on |z| = R
        vals = [F(R * mp.expjpi(2 * mp.mpf(j) / M)) for j in range(M)]
        roots = [mp.expjpi(-2 * mp.mpf(j) / M) for j in range(M)]
        c = [mp.fsum(vals[j] * roots[(j * q) % M] for j in range(M)) / (M * R**q) for q in range(J)]

        d = {(0, 0): mp.mpf(1)}
        get = lambda n, k: d.get((n, k), 0)  # noqa: E731
        for n in range(1, K + 1):
            for k in range(0, 3 * n // 2 + 1):
                m = 3 * n - 2 * k
                if m:
                    d[n, k] = -(m + 1) * get(n - 1, k - 2) + get(n - 1, k) / (4 * m)
                else:
                    d[n, k] = -mp.fsum(
                        (-1) ** (k - r) * get(n, r) * mp.factorial(2 * k - 2 * r) / mp.factorial(k - r)
                        for r in range(k)
                    )
        E = np.zeros((K + 1, J), dtype=np.complex128)
        for k in range(K + 1):
            row = [mp.mpc(0)] * J
            for l in range(3 * k // 2 + 1):
                m = 3 * k - 2 * l
                f = d[k, l] / pi ** (2 * k - l) / (2j) ** l
                for q in range(J - m):
                    row[q] += f * c[q + m] * mp.factorial(q + m) / mp.factorial(q)
            E[k] = [complex(v) for v in row]
    E.flags.writeable = False
    return E


def _horner(coeffs: np.ndarray, p: np.ndarray) -> np.ndarray:
    acc = np.zeros(p.shape, dtype=np.complex128)
    for c in coeffs[::-1]:
        acc = acc * p + c
    return acc


def hardy_z_rs(t, corrections: int = 12):
    """Z(t) by the Riemann-Siegel formula (t >= 10; accurate from t ~ 30)."""
    t = np.asarray(t, dtype=np.float64)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    if np.any(t < 10):
        raise DomainError("Riemann-Siegel evaluation needs t >= 10")
    if not 0 <= corrections <= RS_MAX_CORRECTIONS:
        raise ValueError(f"corrections must lie in 0..{RS_MAX_CORRECTIONS}")
    theta = riemann_siegel_theta(t)
    a = np.sqrt(t / TWO_PI)
    N = np.floor(a).astype(np.int64)
    p = 1.0 - 2.0 * (a - N)
    out = np.empty(t.shape)
    nmax = int(N.max())
    step = max(1, 2_000_000 // nmax)
    n = np.arange(1, nmax + 1, dtype=np.float64)
    logn, rsqrt = np.log(n), 1.0 / np.sqrt(n)
    for lo in range(0, t.size, step):
        sl = slice(lo, lo + step)
        ph = theta[sl, None] - np.outer(t[sl], logn)
        terms = np.cos(ph) * rsqrt
        terms[n[None, :] > N[sl, None]] = 0.0
        out[sl] = 2.0 * terms.sum(axis=1)
    E = _rs_correction_polys(max(corrections, 1))
    ainv = 1.0 / a
    corr = np.zeros(t.shape, dtype=np.complex128)
    for k in range(corrections, -1, -1):
        corr = corr * ainv + _horner(E[k], p)
    offset = theta - (0.5 * t * np.log(t / TWO_PI) - 0.5 * t - math.pi / 8)
    sign = np.where(N % 2 == 1, 1.0, -1.0)
    out += 2.0 * (sign / np.sqrt(a) * np.exp(1j * offset) * corr).real
    return float(out[0]) if scalar else out


def zeta_critical_rs(t, corrections: int = 12):
    """zeta(1/2 + it) reconstructed as exp(-i theta(t)) Z(t), Z by Riemann-Siegel."""
    t = np.asarray(t, dtype=np.float64)
    return np.exp(-1j * riemann_siegel_theta(t)) * hardy_z_rs(t, corrections)


def _hardy_z_em(t: np.ndarray, cfg: ZetaEvalConfig) -> np.ndarray:
    z = zeta_em(0.5 + 1j * t, cfg)
    return (np.exp(1j * siegel_theta(t)) * z).real


def hardy_z(t, cfg: ZetaEvalConfig | None = None):
    """Hardy's Z(t) = exp(i theta(t)) zeta(1/2 + it), real for real t >= 0.

    ``method='auto'`` uses Riemann-Siegel for t >= 30 and Euler-Maclaurin
    below.
    """
    cfg = cfg or DEFAULT_CONFIG
    t = np.asarray(t, dtype=np.float64)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise DomainError("hardy_z needs finite t >= 0")
    if cfg.method == "euler_maclaurin":
        use_rs = np.zeros(t.shape, dtype=bool)
    elif cfg.method == "riemann_siegel":
        use_rs = np.ones(t.shape, dtype=bool)
    else:
        use_rs = t >= RS_SWITCHOVER
    out = np.empty(t.shape)
    if np.any(use_rs):
        out[use_rs] = hardy_z_rs(t[use_rs], cfg.rs_corrections)
    if np.any(~use_rs):
        out[~use_rs] = _hardy_z_em(t[~use_rs], cfg)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------- zeros

def find_zero_on_line(bracket_lo: float, bracket_hi: float, cfg: ZetaEvalConfig | None = None,
                      *, width: float = 1e-11) -> float:
    """Ordinate of a sign change of Z in [lo, hi].

    Bisection narrows the bracket to 1e-4, then Illinois-modified secant steps
    shrink it below ``width``; the final secant point is returned.
    """
    lo, hi = float(bracket_lo), float(bracket_hi)
    if not lo < hi:
        raise BracketError(f"empty bracket [{lo}, {hi}]")
    z = lambda u: hardy_z(u, cfg)  # noqa: E731
    flo, fhi = z(lo), z(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BracketError(f"Z(t) has no sign change on [{lo}, {hi}]")
    while hi - lo > 1e-4:
        mid = 0.5 * (lo + hi)
        fm = z(mid)
        if fm == 0.0:
            return mid
        if fm * flo < 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    side = 0
    guess = 0.5 * (lo + hi)
    for _ in range(200):
        if hi - lo <= width:
            break
        guess = (lo * fhi - hi * flo) / (fhi - flo)
        if not lo < guess < hi:
            guess = 0.5 * (lo + hi)
        fg = z(guess)
        if fg == 0.0:
            return guess
        if fg * flo < 0:
            hi, fhi = guess, fg
            if side == -1:
                flo *= 0.5
            side = -1
        else:
            lo, flo = guess, fg
            if side == 1:
                fhi *= 0.5
            side = 1
        if abs(fg) < 1e-13:
            # |Z| is at the evaluation noise floor: close the bracket by hand
            eps = 0.5 * width
            a, b = z(guess - eps), z(guess + eps)
            if a * b <= 0:
                return guess
    return (lo * fhi - hi * flo) / (fhi - flo) if fhi != flo else 0.5 * (lo + hi)


def first_zeros(count: int, cfg: ZetaEvalConfig | None = None, *, step: float = 0.05) -> list[float]:
    """The first ``count`` critical-line zero ordinates, by sign scanning of Z."""
    zeros: list[float] = []
    t0 = 10.0
    while len(zeros) < count:
        grid = t0 + step * np.arange(401)
        zs = hardy_z(grid, cfg)
        flips = np.nonzero(np.sign(zs[:-1]) * np.sign(zs[1:]) < 0)[0]
        for i in flips:
            zeros.append(find_zero_on_line(grid[i], grid[i + 1], cfg))
            if len(zeros) == count:
                break
        t0 = grid[-1]
    return zeros


@dataclass(frozen=True)
class ZeroHypothesis:
    """A designated zero rho0 = beta0 + i gamma0 of zeta.

    Only beta0 = 1/2 can be backed by data; such hypotheses are checked
    against |zeta(rho0)| < ``tol`` at construction.  beta0 in (1/2, 1) is
    accepted unchecked, for closed-form scaling demonstrations.
    """

    beta0: float = 0.5
    gamma0: float = FIRST_ZERO
    tol: float = 1e-8

    def __post_init__(self):
        if not 0.5 <= self.beta0 < 1:
            raise DomainError(f"beta0 must lie in [1/2, 1), got {self.beta0}")
        if not self.gamma0 > 0:
            raise DomainError(f"gamma0 must be positive, got {self.gamma0}")
        if self.beta0 == 0.5:
            resid = abs(hardy_z(self.gamma0))
            if resid >= self.tol:
                raise DomainError(f"|zeta(1/2 + {self.gamma0}i)| = {resid:.3e} is not a zero")

    @property
    def rho0(self) -> complex:
        return complex(self.beta0, self.gamma0)

    @property
    def on_line(self) -> bool:
        return self.beta0 == 0.5
