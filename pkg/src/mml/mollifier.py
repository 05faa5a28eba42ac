"""The smoothed Möbius mollifier on the critical line.

    M_x(1/2 + it) = (1 / log x) * sum_{n <= x} mu(n) n^(-1/2 - it) log(x / n),

with M_x = 0 for 0 < x <= 1.  All public values are M_x itself; callers that
need the un-normalised sum multiply by ``log_x``.

For integrals over the length x it is convenient to note that, on each
interval m <= y < m + 1,

    M_y(1/2 + it) log y = A_m(t) log y - B_m(t),
    A_m = sum_{n <= m} mu(n) n^(-1/2-it),   B_m = sum_{n <= m} mu(n) log(n) n^(-1/2-it),

so y-integrals reduce to elementary integrals of 1, log y, 1/log y, ...
weighted by the partial sums A_m, B_m (see :func:`partial_sums`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import CoefficientTable, MobiusTable, cached_mobius, coefficient_table

__all__ = [
    "MollifierSpec",
    "TGrid",
    "make_mollifier",
    "mollifier_value",
    "mollifier_grid",
    "partial_sums",
    "mollifier_times_log",
    "length_integral_sq_log2",
    "length_integral_abs_log",
    "REANCHOR",
    "BLOCK",
]

REANCHOR = 512
BLOCK = 4096
_CHUNK = 2_000_000


@dataclass(frozen=True)
class MollifierSpec:
    x: float
    coeffs: CoefficientTable
    log_x: float

    @property
    def is_zero(self) -> bool:
        return self.x <= 1

    @property
    def amplitudes(self) -> np.ndarray:
        """mu(n) n^(-1/2) log(x/n) / log x for each stored n."""
        c = self.coeffs
        if self.is_zero:
            return np.zeros(0)
        return c.mu * c.weight / np.sqrt(c.n) / self.log_x

    @property
    def frequencies(self) -> np.ndarray:
        return np.log(self.coeffs.n.astype(np.float64))


@dataclass(frozen=True)
class TGrid:
    t0: float
    dt: float
    count: int

    def __post_init__(self):
        if self.t0 < 0 or not self.dt > 0 or self.count < 1:
            raise ValueError(f"invalid grid {self}")

    @property
    def points(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.count)


def make_mollifier(x: float, mobius: MobiusTable | None = None, *, cache_dir=None) -> MollifierSpec:
    """Build the mollifier of length x, sieving if no table is supplied."""
    x = float(x)
    if mobius is None:
        mobius = cached_mobius(max(1, math.floor(x)), cache_dir)
    coeffs = coefficient_table(x, mobius)
    return MollifierSpec(x, coeffs, math.log(x))


def mollifier_value(spec: MollifierSpec, t):
    """M_x(1/2 + it) for a scalar or an array of t.

    Scalars are summed with ``math.fsum`` on each component; arrays use
    numpy's pairwise summation.
    """
    scalar = np.ndim(t) == 0
    if spec.is_zero:
        return 0j if scalar else np.zeros(np.shape(t), dtype=np.complex128)
    amp, freq = spec.amplitudes, spec.frequencies
    if scalar:
        terms = amp * np.exp(-1j * float(t) * freq)
        return complex(math.fsum(terms.real), math.fsum(terms.imag))
    t = np.asarray(t, dtype=np.float64)
    flat = t.ravel()
    out = np.empty(flat.shape, dtype=np.complex128)
    step = max(1, _CHUNK // amp.size)
    for lo in range(0, flat.size, step):
        sl = slice(lo, lo + step)
        out[sl] = (np.exp(-1j * np.outer(flat[sl], freq)) * amp).sum(axis=1)
    return out.reshape(t.shape)


def mollifier_grid(spec: MollifierSpec, grid: TGrid, *, reanchor: int = REANCHOR,
                   block: int = BLOCK) -> np.ndarray:
    """M_x(1/2 + it) on a uniform grid via per-n phase recurrences.

    The phase n^(-i t) is advanced by the fixed factor n^(-i dt) and
    recomputed from scratch every ``reanchor`` steps, which keeps the
    accumulated multiplicative drift near ``reanchor`` ulps.
    """
    out = np.zeros(grid.count, dtype=np.complex128)
    if spec.is_zero:
        return out
    amp, freq = spec.amplitudes, spec.frequencies
    partial = []
    for lo in range(0, amp.size, block):
        a, f = amp[lo : lo + block], freq[lo : lo + block]
        step = np.exp(-1j * grid.dt * f)
        acc = np.empty(grid.count, dtype=np.complex128)
        phase = None
        for k in range(grid.count):
            if k % reanchor == 0:
                phase = a * np.exp(-1j * (grid.t0 + k * grid.dt) * f)
            else:
                phase *= step
            acc[k] = phase.sum()
        partial.append(acc)
    # blocks are combined in a fixed order
    return np.sum(np.array(partial), axis=0) if len(partial) > 1 else partial[0]


def partial_sums(mobius: MobiusTable, x: float, t) -> tuple[np.ndarray, np.ndarray]:
    """(A, B) with A[..., m-1] = A_m(t), B[..., m-1] = B_m(t) for 1 <= m <= floor(x)."""
    top = math.floor(x)
    t = np.asarray(t, dtype=np.float64)
    n = np.arange(1, top + 1, dtype=np.float64)
    mu = mobius.values[1 : top + 1].astype(np.float64)
    logn = np.log(n)
    terms = mu / np.sqrt(n) * np.exp(-1j * np.multiply.outer(t, logn))
    return np.cumsum(terms, axis=-1), np.cumsum(terms * logn, axis=-1)


def mollifier_times_log(mobius: MobiusTable, y, t: float) -> np.ndarray:
    """M_y(1/2 + it) log y for an array of lengths y at one height t.

    Values for y <= 1 are 0.
    """
    y = np.asarray(y, dtype=np.float64)
    out = np.zeros(y.shape, dtype=np.complex128)
    live = y > 1
    if not np.any(live):
        return out
    A, B = partial_sums(mobius, float(y.max()), t)
    m = np.floor(y[live]).astype(np.int64) - 1
    out[live] = A[m] * np.log(y[live]) - B[m]
    return out


def _unit_intervals(x: float) -> tuple[np.ndarray, np.ndarray]:
    """Left/right ends of [m, min(m+1, x)] for m = 1 .. ceil(x) - 1."""
    count = max(0, math.ceil(x) - 1)
    left = np.arange(1, count + 1, dtype=np.float64)
    right = np.minimum(left + 1, x)
    return left, right


def length_integral_sq_log2(mobius: MobiusTable, x: float, t: float) -> float:
    """Closed form of int_1^x |M_y(1/2 + it)|^2 log^2 y dy."""
    if x <= 1:
        return 0.0
    left, right = _unit_intervals(x)
    A, B = partial_sums(mobius, left[-1], t)

    def prim(y):
        ly = np.log(y)
        return y * (ly * ly - 2 * ly + 2), y * (ly - 1)

    p2r, p1r = prim(right)
    p2l, p1l = prim(left)
    I2, I1, I0 = p2r - p2l, p1r - p1l, right - left
    terms = np.abs(A) ** 2 * I2 - 2 * (A * np.conj(B)).real * I1 + np.abs(B) ** 2 * I0
    return float(math.fsum(terms))


def length_integral_abs_log(mobius: MobiusTable, x: float, t: float, nodes: int = 32) -> float:
    """int_1^x |M_y(1/2 + it)| log y dy by Gauss-Legendre on each unit interval."""
    if x <= 1:
        return 0.0
    left, right = _unit_intervals(x)
    A, B = partial_sums(mobius, left[-1], t)
    g, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * (right - left)
    y = (left + half)[:, None] + half[:, None] * g
    vals = np.abs(A[:, None] * np.log(y) - B[:, None])
    return float(math.fsum(half * (vals @ w)))
