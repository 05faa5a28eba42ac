"""Möbius sieve and mollifier coefficient tables.

The sieve records the smallest prime factor of every n <= limit and derives
mu(n) from the recurrence

    mu(n) = 0            if p^2 | n   (p = spf(n))
    mu(n) = -mu(n / p)   otherwise.

Since n / spf(n) <= n / 2, the recurrence is evaluated one dyadic block
[2^k, 2^(k+1)) at a time, each block depending only on earlier ones, so the
whole table is built with O(log limit) vectorised passes.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, SizingError

__all__ = [
    "MobiusTable",
    "CoefficientTable",
    "mobius_sieve",
    "smallest_prime_factors",
    "coefficient_table",
    "save_mobius_cache",
    "load_mobius_cache",
    "cached_mobius",
]

# int32 smallest-prime-factor storage bounds the index type.
MAX_LIMIT = 2**31 - 1

CACHE_MAGIC = b"MMLMU\x00\x01\x00"
CACHE_NAME = "mobius.bin"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class MobiusTable:
    """mu(n) for 1 <= n <= limit; ``values[0]`` is an unused 0 pad."""

    limit: int
    values: np.ndarray  # int8, length limit + 1

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self) -> int:
        return self.limit


@dataclass(frozen=True)
class CoefficientTable:
    """Entries (n, mu(n), log(x/n)) of the mollifier sum for a real length x.

    Only squarefree n are stored. ``weight`` is continuous in x: an index n
    enters the table exactly when x reaches n, with weight 0.
    """

    x: float
    n: np.ndarray  # int64
    mu: np.ndarray  # int8
    weight: np.ndarray  # float64, log(x / n)

    def __len__(self) -> int:
        return int(self.n.size)

    def __iter__(self):
        return zip(self.n.tolist(), self.mu.tolist(), self.weight.tolist())


def _check_limit(limit) -> int:
    if isinstance(limit, bool) or int(limit) != limit:
        raise SizingError(f"sieve limit must be an integer, got {limit!r}")
    limit = int(limit)
    if limit < 1:
        raise SizingError(f"sieve limit must be >= 1, got {limit}")
    if limit > MAX_LIMIT:
        raise SizingError(f"sieve limit {limit} overflows the int32 index type")
    return limit


def smallest_prime_factors(limit: int) -> np.ndarray:
    """spf[n] for 0 <= n <= limit (spf[0] = 0, spf[1] = 1)."""
    limit = _check_limit(limit)
    spf = np.zeros(limit + 1, dtype=np.int32)
    spf[1] = 1
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    unmarked = spf == 0
    unmarked[0] = False
    spf[unmarked] = np.nonzero(unmarked)[0]
    return spf


def mobius_sieve(limit: int) -> MobiusTable:
    """Exact mu(n) for every n <= limit."""
    limit = _check_limit(limit)
    spf = smallest_prime_factors(limit)
    mu = np.zeros(limit + 1, dtype=np.int8)
    mu[1] = 1
    lo = 2
    while lo <= limit:
        hi = min(2 * lo, limit + 1)
        n = np.arange(lo, hi, dtype=np.int64)
        p = spf[lo:hi].astype(np.int64)
        m = n // p
        mu[lo:hi] = np.where(m % p == 0, 0, -mu[m])
        lo = hi
    return MobiusTable(limit, _frozen(mu))


def coefficient_table(x: float, mobius: MobiusTable) -> CoefficientTable:
    """Coefficients of ``M_x(s) log x = sum_{n <= x} mu(n) n^-s log(x/n)``.

    The table is empty for 0 < x <= 1, where the sum vanishes identically.
    """
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"mollifier length must be a positive real, got {x}")
    if x <= 1:
        empty = np.zeros(0)
        return CoefficientTable(
            x,
            _frozen(empty.astype(np.int64)),
            _frozen(empty.astype(np.int8)),
            _frozen(empty),
        )
    top = math.floor(x)
    if top > mobius.limit:
        raise SizingError(f"Möbius table limit {mobius.limit} < floor(x) = {top}")
    mu = mobius.values[1 : top + 1]
    n = np.nonzero(mu)[0].astype(np.int64) + 1
    weight = np.log(x / n)
    # log(x/n) can round to a tiny negative value when x == n
    np.maximum(weight, 0.0, out=weight)
    return CoefficientTable(x, _frozen(n), _frozen(mobius.values[n].copy()), _frozen(weight))


def save_mobius_cache(table: MobiusTable, path) -> Path:
    """Write ``magic | limit (u64 LE) | mu(1..limit) as int8``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(np.array([table.limit], dtype="<u8").tobytes())
        fh.write(table.values[1:].astype("<i1").tobytes())
    os.replace(tmp, path)
    return path


def load_mobius_cache(path) -> MobiusTable:
    raw = Path(path).read_bytes()
    if raw[:8] != CACHE_MAGIC:
        raise ValueError(f"{path}: not a Möbius cache file")
    limit = int(np.frombuffer(raw[8:16], dtype="<u8")[0])
    body = np.frombuffer(raw[16:], dtype="<i1")
    if body.size != limit:
        raise ValueError(f"{path}: truncated cache ({body.size} of {limit} values)")
    values = np.zeros(limit + 1, dtype=np.int8)
    values[1:] = body
    return MobiusTable(limit, _frozen(values))


def cached_mobius(limit: int, cache_dir=None) -> MobiusTable:
    """Sieve up to ``limit``, reusing (and refreshing) a cache file if given.

    A cached table with a larger limit is truncated rather than recomputed.
    """
    limit = _check_limit(limit)
    if cache_dir is None:
        return mobius_sieve(limit)
    path = Path(cache_dir) / CACHE_NAME
    if path.exists():
        try:
            table = load_mobius_cache(path)
        except ValueError:
            table = None
        if table is not None and table.limit >= limit:
            if table.limit == limit:
                return table
            return MobiusTable(limit, _frozen(table.values[: limit + 1].copy()))
    table = mobius_sieve(limit)
    save_mobius_cache(table, path)
    return table
