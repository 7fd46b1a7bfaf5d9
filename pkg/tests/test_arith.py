import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobsplit.arith import (
    ZZ,
    Fp,
    Ring,
    binom,
    binom_mod_p,
    check_prime,
    is_prime,
    mahler_scale,
    torus_basis_product,
    vandermonde_shift,
)

PRIMES = [2, 3, 5, 7, 11]


def falling_binom(n, k):
    # independent oracle: the defining product, valid for every integer n
    num = 1
    for i in range(k):
        num *= n - i
    return num // math.factorial(k)


def trial_division(n):
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


@given(st.integers(-60, 60), st.integers(0, 25))
def test_binom_matches_falling_product(n, k):
    assert binom(n, k) == falling_binom(n, k)


@given(st.integers(-200, 200), st.integers(0, 60), st.sampled_from(PRIMES))
def test_lucas_agrees_with_exact(n, k, p):
    assert binom_mod_p(n, k, p) == binom(n, k) % p


@given(st.integers(-30, 30), st.integers(1, 20))
def test_pascal_rule(n, k):
    assert binom(n + 1, k) == binom(n, k) + binom(n, k - 1)


@pytest.mark.parametrize("n", range(0, 200))
def test_is_prime_matches_trial_division(n):
    assert is_prime(n) == trial_division(n)


@pytest.mark.parametrize("p", [0, 1, 4, 9, -3])
def test_check_prime_rejects(p):
    with pytest.raises(ValueError, match="p must be prime"):
        check_prime(p)


def test_negative_k_rejected():
    with pytest.raises(ValueError):
        binom(3, -1)


@given(st.integers(-10, 10), st.integers(0, 12), st.integers(-15, 15))
def test_vandermonde_pointwise(m, r, x):
    coeffs = vandermonde_shift(m, r)
    assert sum(v * binom(x, k) for k, v in coeffs.items()) == binom(x + m, r)


@given(st.integers(-5, 5), st.integers(0, 10), st.integers(-12, 12))
def test_mahler_scale_pointwise(c, j, x):
    coeffs = mahler_scale(c, j)
    assert all(0 <= k <= j for k in coeffs)
    assert sum(v * binom(x, k) for k, v in coeffs.items()) == binom(c * x, j)


@given(st.integers(0, 12), st.integers(0, 12), st.integers(-10, 30))
def test_basis_product_pointwise(r, s, x):
    coeffs = torus_basis_product(r, s)
    assert sum(v * binom(x, k) for k, v in coeffs.items()) == binom(x, r) * binom(x, s)


def test_ring_json_roundtrip():
    for ring in (ZZ, Fp(3)):
        assert Ring.from_json(ring.to_json()) == ring
    assert ZZ.to_json() == "Z"
    assert Fp(5).to_json() == {"Fp": 5}
    assert Fp(5).reduce(-1) == 4
