import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobsplit.arith import ZZ, Ring, binom
from frobsplit.periodic import PeriodicTorus, mahler_inverse, pascal_mod_p
from frobsplit.torus import (
    TorusElement,
    certifying_window,
    coordinate_binom,
    frobenius_torus,
    lincomb_binom,
    mu0,
    phi0,
    verify_torus_identities,
    verify_pointwise,
)

PRIMES = st.sampled_from([2, 3, 5])


def elements(rank, ring, max_index=6):
    idx = st.tuples(*[st.integers(0, max_index)] * rank)
    return st.dictionaries(idx, st.integers(-9, 9), max_size=4).map(lambda t: TorusElement(rank, ring, t))


def grid(rank, n):
    return itertools.product(range(-n, n), repeat=rank)


@given(st.integers(1, 2), st.data())
def test_product_is_pointwise(rank, data):
    x = data.draw(elements(rank, ZZ))
    y = data.draw(elements(rank, ZZ))
    xy = x * y
    for h in grid(rank, 4):
        assert xy.eval(h) == x.eval(h) * y.eval(h)


@given(st.integers(1, 2), st.data())
def test_shift_is_substitution(rank, data):
    x = data.draw(elements(rank, ZZ))
    s = data.draw(st.tuples(*[st.integers(-5, 5)] * rank))
    xs = x.shift(s)
    for h in grid(rank, 3):
        assert xs.eval(h) == x.eval(tuple(a + b for a, b in zip(h, s)))


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=2), st.integers(-5, 5), st.integers(0, 6))
def test_lincomb_binom_pointwise(c, m, r):
    t = lincomb_binom(c, m, r)
    for h in grid(len(c), 3):
        assert t.eval(h) == binom(sum(ci * hi for ci, hi in zip(c, h)) + m, r)


@given(PRIMES, st.integers(1, 2), st.data())
def test_phi0_is_dilation(p, rank, data):
    # phi0 f (h) = f(h/p) on p-divisible h and 0 elsewhere
    ring = Ring(p)
    x = data.draw(elements(rank, ring, max_index=3))
    y = phi0(x)
    for h in itertools.product(range(0, 3 * p), repeat=rank):
        if all(v % p == 0 for v in h):
            assert y.eval(h) % p == x.eval(tuple(v // p for v in h)) % p
        else:
            assert y.eval(h) % p == 0


@given(PRIMES, st.integers(1, 2), st.data())
def test_frobenius_is_pullback(p, rank, data):
    # Lucas: binom(p h, b) = binom(h, b/p) mod p when p | b, else 0
    ring = Ring(p)
    x = data.draw(elements(rank, ring, max_index=2 * p))
    fx = frobenius_torus(x)
    for h in itertools.product(range(-4, 5), repeat=rank):
        assert fx.eval(h) % p == x.eval(tuple(p * v for v in h)) % p


@given(PRIMES, st.integers(1, 2), st.data())
def test_phi0_multiplicative_and_split(p, rank, data):
    ring = Ring(p)
    x = data.draw(elements(rank, ring, max_index=3))
    y = data.draw(elements(rank, ring, max_index=3))
    assert phi0(x * y) == phi0(x) * phi0(y)
    assert frobenius_torus(phi0(x)) == x


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("rank", [1, 2])
def test_mu0_idempotent_indicator(p, rank):
    m = mu0(p, rank)
    assert m * m == m
    assert phi0(TorusElement.one(rank, Ring(p))) == m
    for h in itertools.product(range(-2 * p, 3 * p), repeat=rank):
        assert m.eval(h) % p == int(all(v % p == 0 for v in h))


def test_mu0_sl2_p2_explicit():
    # binom(H - 1, 1) = H - 1 = binom(H,1) - 1
    assert mu0(2, 1).terms == {(0,): 1, (1,): 1}


@pytest.mark.parametrize("p", [2, 3])
def test_torus_identities_small(p):
    rep = verify_torus_identities(p, 1, a_range=range(-3, 4), c_range=range(-3, 4), b_max=p + 1)
    assert rep.passed, rep.failures[:3]
    assert rep.details["certified_b_max"] == max(b for b in range(p + 2) if p * b + 1 <= 7)


def test_third_identity_needs_mu0():
    # without the projector the third identity fails already at b = 1
    p, ring = 3, Ring(3)
    lhs = phi0(coordinate_binom(1, 0, 1, 1, 1, ring))
    assert lhs != coordinate_binom(1, 0, 1, p, p, ring)
    assert lhs == coordinate_binom(1, 0, 1, p, p, ring) * mu0(p, 1)


def test_certifying_window():
    assert certifying_window(3, 4) == 13


def test_pointwise_oracle_small():
    assert verify_pointwise(2, 1, trials=50, seed=3).passed


def test_json_roundtrip():
    x = TorusElement(2, Ring(5), {(1, 0): 3, (0, 2): -1})
    assert TorusElement.from_json(x.to_json()) == x
    y = TorusElement(1, ZZ, {(4,): 10 ** 30})
    assert TorusElement.from_json(y.to_json()) == y


def test_rank_mismatch():
    with pytest.raises(ValueError):
        TorusElement.one(1) * TorusElement.one(2)


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        TorusElement(1, ZZ, {(-1,): 1})


# ---- value-table backend


@pytest.mark.parametrize("p,n", [(2, 8), (3, 9), (5, 25)])
def test_mahler_inverse(p, n):
    prod = (pascal_mod_p(p, n).T @ mahler_inverse(p, n).T) % p
    assert np.array_equal(prod, np.eye(n, dtype=np.int64))


@given(st.sampled_from([2, 3]), st.integers(1, 2), st.data())
def test_grid_matches_basis(p, rank, data):
    period = p ** 2
    ring = Ring(p)
    x = data.draw(elements(rank, ring, max_index=period - 1))
    y = data.draw(elements(rank, ring, max_index=period - 1))
    gx, gy = PeriodicTorus.from_element(x, period), PeriodicTorus.from_element(y, period)
    assert gx.to_element() == x
    s = data.draw(st.tuples(*[st.integers(-4, 4)] * rank))
    assert gx.shift(s).to_element() == x.shift(s).reduce(p)
    assert gx.frobenius().to_element() == frobenius_torus(x)
    prod = x * y
    if not prod.terms or prod.max_index() < period:
        assert (gx * gy).to_element() == prod


def test_grid_phi0_and_mu0():
    p, period = 3, 27
    x = TorusElement(1, Ring(p), {(2,): 1, (5,): 2})
    g = PeriodicTorus.from_element(x, period)
    assert g.phi0().to_element() == phi0(x)
    assert PeriodicTorus.mu0(p, period, 2).to_element() == mu0(p, 2)
    big = PeriodicTorus.from_element(TorusElement(1, Ring(p), {(20,): 1}), period)
    with pytest.raises(ValueError):
        big.phi0()


def test_grid_bad_period():
    with pytest.raises(ValueError):
        PeriodicTorus.check_period(2, 12)
