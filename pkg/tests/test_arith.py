import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mml.arith import (
    CACHE_MAGIC,
    MobiusTable,
    cached_mobius,
    coefficient_table,
    load_mobius_cache,
    mobius_sieve,
    save_mobius_cache,
    smallest_prime_factors,
)
from mml.errors import DomainError, SizingError

from oracles import mobius_by_factor_tables, mobius_trial_division


def test_small_values():
    mu = mobius_sieve(30)
    expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0, -1, 0, -1, 0, 1, 1, -1, 0, 0, 1, 0, 0, -1, -1]
    assert list(mu.values[1:]) == expected
    assert mu[30] == -1
    assert len(mu) == 30


def test_sieve_matches_factor_table_oracle():
    limit = 200_000
    assert np.array_equal(mobius_sieve(limit).values, mobius_by_factor_tables(limit))


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=50_000))
def test_sieve_matches_trial_division(n):
    assert mobius_sieve(50_000)[n] == mobius_trial_division(n)


def test_limit_one_and_bad_limits():
    assert list(mobius_sieve(1).values) == [0, 1]
    with pytest.raises(SizingError):
        mobius_sieve(0)
    with pytest.raises(SizingError):
        mobius_sieve(2**31)


def test_smallest_prime_factors():
    spf = smallest_prime_factors(100)
    for n in range(2, 101):
        p = int(spf[n])
        assert n % p == 0
        assert all(n % q for q in range(2, p))


def test_table_is_read_only():
    mu = mobius_sieve(10)
    with pytest.raises(ValueError):
        mu.values[3] = 1


def test_coefficient_table_weights():
    mu = mobius_sieve(100)
    tab = coefficient_table(10.5, mu)
    assert list(tab.n) == [1, 2, 3, 5, 6, 7, 10]
    assert np.allclose(tab.weight, np.log(10.5 / tab.n))
    assert list(tab.mu) == [mobius_trial_division(int(k)) for k in tab.n]
    assert len(tab) == 7


def test_coefficient_table_edges():
    mu = mobius_sieve(10)
    assert len(coefficient_table(1.0, mu)) == 0
    assert len(coefficient_table(0.5, mu)) == 0
    tab = coefficient_table(2.0, mu)
    assert list(tab.n) == [1, 2] and tab.weight[1] == 0.0
    with pytest.raises(DomainError):
        coefficient_table(-1.0, mu)
    with pytest.raises(SizingError):
        coefficient_table(11.0, mu)


def test_cache_round_trip(tmp_path):
    mu = mobius_sieve(1000)
    path = save_mobius_cache(mu, tmp_path / "m.bin")
    raw = path.read_bytes()
    assert raw[:8] == CACHE_MAGIC
    assert int.from_bytes(raw[8:16], "little") == 1000
    assert len(raw) == 16 + 1000
    back = load_mobius_cache(path)
    assert back.limit == 1000 and np.array_equal(back.values, mu.values)


def test_cache_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"nonsense" * 4)
    with pytest.raises(ValueError):
        load_mobius_cache(bad)


def test_cached_mobius_reuses_larger_table(tmp_path):
    big = cached_mobius(5000, tmp_path)
    small = cached_mobius(300, tmp_path)
    assert small.limit == 300
    assert np.array_equal(small.values, big.values[:301])
    assert isinstance(small, MobiusTable)


def test_mertens_values():
    # M(10^k) for k = 1..5
    mu = mobius_sieve(10**5)
    csum = np.cumsum(mu.values.astype(np.int64))
    assert [int(csum[10**k]) for k in range(1, 6)] == [-1, 1, 2, -23, -48]
    assert math.isclose(float(np.sum(mu.values != 0)) / 10**5, 6 / math.pi**2, rel_tol=1e-3)
