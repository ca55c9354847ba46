import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import prime
from sympy.functions.combinatorial.numbers import partition

from etacong.qseries import (
    MAX_PRECISION_EXACT,
    ModSeries,
    PrecisionError,
    TruncatedSeries,
    dilate,
    eta_series,
    euler_power,
    euler_power_mod,
    invert,
    lift,
    mul,
    pentagonal_terms,
    power,
    reduce_mod,
)


def naive_product(r, n):
    """prod_{k<n} (1 - q^k)^r by repeated polynomial multiplication (r may be negative)."""
    c = [0] * n
    c[0] = 1
    for k in range(1, n):
        for _ in range(abs(r)):
            if r > 0:
                for i in range(n - 1, k - 1, -1):
                    c[i] -= c[i - k]
            else:  # divide by (1 - q^k): running sum with stride k
                for i in range(k, n):
                    c[i] += c[i - k]
    return c


series = st.lists(st.integers(-50, 50), min_size=1, max_size=25)


def ts(xs, n=None):
    return TruncatedSeries(xs if n is None else (xs + [0] * n)[:n])


def test_mul_identity_and_zero():
    f = TruncatedSeries([3, -1, 4, 1, -5])
    assert TruncatedSeries.one(5) * f == f
    assert TruncatedSeries.zero(5) * f == TruncatedSeries.zero(5)


def test_geometric_series_times_one_minus_q():
    n = 30
    assert mul(TruncatedSeries([1, -1] + [0] * (n - 2)), TruncatedSeries([1] * n)) == TruncatedSeries.one(n)


def test_pow_small_cases():
    f = TruncatedSeries([1, -1, 0, 0])
    assert power(f, 0) == TruncatedSeries.one(4)
    assert power(f, 2) == TruncatedSeries([1, -2, 1, 0])


def test_invert_examples():
    assert invert(TruncatedSeries.one(6)) == TruncatedSeries.one(6)
    assert invert(TruncatedSeries([1, -1, 0, 0, 0, 0])) == TruncatedSeries([1] * 6)
    with pytest.raises(ValueError):
        invert(TruncatedSeries([2, 1]))


def test_dilate_examples():
    f = TruncatedSeries([1, -1, 0])
    assert dilate(f, 1) == f
    assert dilate(f, 3) == TruncatedSeries([1, 0, 0, -1, 0, 0, 0, 0, 0])
    assert dilate(f, 3, precision=4).precision == 4


def test_reduce_mod_example():
    assert reduce_mod(TruncatedSeries([1, -26, 0]), 13).tolist() == [1, 0, 0]
    assert reduce_mod(TruncatedSeries([-1, 27]), 13).tolist() == [12, 1]
    assert lift(reduce_mod(TruncatedSeries([-1, 27]), 13)) == TruncatedSeries([12, 1])


def test_truncation_is_to_the_shorter_input():
    f = TruncatedSeries([1, 1, 1, 1, 1])
    g = TruncatedSeries([1, 1])
    assert (f * g).precision == 2
    assert (f + g).precision == 2
    a = ModSeries([1, 2, 3], 7)
    assert (a * ModSeries([1, 1], 7)).precision == 2


def test_mixed_rings_rejected():
    with pytest.raises((TypeError, ValueError)):
        ModSeries([1, 2], 7) * ModSeries([1, 2], 11)
    with pytest.raises(TypeError):
        mul(TruncatedSeries([1]), ModSeries([1], 5))


def test_series_are_immutable():
    f = ModSeries([1, 2, 3], 5)
    with pytest.raises(ValueError):
        f.coeffs[0] = 4


def test_pentagonal_terms_match_product():
    n = 300
    c = [0] * n
    for e, s in pentagonal_terms(n):
        c[e] = s
    assert c == naive_product(1, n)
    assert eta_series(n)[0] == 1


@pytest.mark.parametrize("r", [-5, -3, -1, 1, 2, 3, 4, 8, 26])
def test_euler_power_matches_naive_product(r):
    assert list(euler_power(r, 120)) == naive_product(r, 120)


def test_euler_power_negative_equals_inversion():
    # negative exponents mean the multiplicative inverse
    for t in (1, 3, 26, 129):
        assert euler_power(-t, 300) == invert(euler_power(t, 300))


def test_partition_numbers():
    p = euler_power(-1, 200)
    assert [p[n] for n in range(200)] == [int(partition(n)) for n in range(200)]


def test_color_partitions_brute_force():
    # p_{-t}(n) counts t-tuples of partitions with total size n
    def count(t, n):
        return sum(
            np.prod([int(partition(k)) for k in parts])
            for parts in itertools.product(range(n + 1), repeat=t)
            if sum(parts) == n
        )

    for t in (2, 3, 4):
        s = euler_power(-t, 12)
        assert [s[n] for n in range(12)] == [count(t, n) for n in range(12)]


def test_precision_caps():
    with pytest.raises(PrecisionError):
        euler_power(3, MAX_PRECISION_EXACT + 1)
    with pytest.raises(PrecisionError):
        euler_power_mod(3, 10**6, 7)
    with pytest.raises(ValueError):
        euler_power(3, 0)


@given(series, series, series)
def test_ring_laws(a, b, c):
    n = min(len(a), len(b), len(c))
    f, g, h = ts(a, n), ts(b, n), ts(c, n)
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == TruncatedSeries.zero(n)


@given(series, st.integers(0, 6), st.integers(0, 6))
def test_pow_additive(a, e1, e2):
    f = ts(a)
    assert power(f, e1 + e2) == power(f, e1) * power(f, e2)


@given(st.lists(st.integers(-50, 50), min_size=0, max_size=30), st.sampled_from([1, -1]))
def test_invert_is_inverse(tail, c0):
    f = TruncatedSeries([c0] + tail)
    assert f * invert(f) == TruncatedSeries.one(f.precision)


@given(series, series, st.sampled_from([2, 3, 5, 7, 13, 2**31 - 1]))
def test_mod_ops_agree_with_exact(a, b, m):
    n = min(len(a), len(b))
    f, g = ts(a, n), ts(b, n)
    fm, gm = reduce_mod(f, m), reduce_mod(g, m)
    assert fm * gm == reduce_mod(f * g, m)
    assert fm + gm == reduce_mod(f + g, m)
    assert fm - gm == reduce_mod(f - g, m)
    assert power(fm, 3) == reduce_mod(power(f, 3), m)
    if f[0] in (1, -1):
        assert invert(fm) == reduce_mod(invert(f), m)


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_euler_power_additive(r1, r2):
    n = 150
    assert euler_power(r1 + r2, n) == euler_power(r1, n) * euler_power(r2, n)


@settings(max_examples=25, deadline=None)
@given(st.integers(-40, 40), st.integers(1, 2000), st.integers(2, 25).map(prime))
def test_backend_cross_equality(r, n, m):
    assert euler_power_mod(r, n, m) == reduce_mod(euler_power(r, n), m)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([5, 7, 11, 13]), st.integers(1, 4), st.integers(50, 1500))
def test_freshmans_dream(ell, s, n):
    lhs = reduce_mod(euler_power(ell * s, n), ell)
    rhs = reduce_mod(dilate(euler_power(s, -(-n // ell)), ell, precision=n), ell)
    assert lhs == rhs


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 30))
def test_convolution_identity(t):
    # sum_k p_{-t}(k) a_t(n-k) = [n = 0] for n < 500
    assert euler_power(-t, 500) * euler_power(t, 500) == TruncatedSeries.one(500)
