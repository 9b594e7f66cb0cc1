import math

import numpy as np
import pytest

import oracles
from holobrack.airy import (
    ai_prime_zero,
    ai_squared_tail,
    ai_zero,
    airy,
    airy_eval,
)
from holobrack.errors import DomainError


def test_origin_value():
    assert airy_eval(0.0).ai == pytest.approx(oracles.ai(0.0), rel=1e-14)
    assert airy_eval(0.0).ai == pytest.approx(0.3550280539, abs=1e-10)


def test_growth_decay_split():
    v = airy_eval(8.0)
    assert v.ai < 1e-6 and v.bi > 1e3


def test_bi_increasing_right_of_turning_point():
    u = np.linspace(-1.8955, 10, 4000)
    assert np.all(np.diff(airy(u)[2]) > 0)


@pytest.mark.parametrize("u", [-20.0, -17.3, -12.5, -8.0, -3.7, -1.0, -0.2, 0.4, 1.3, 3.0, 5.5, 7.9, 10.0])
def test_against_series_oracle(u):
    v = airy_eval(u)
    for got, ref in ((v.ai, oracles.ai(u)), (v.ai_prime, oracles.ai_prime(u)),
                     (v.bi, oracles.bi(u)), (v.bi_prime, oracles.bi_prime(u))):
        assert got == pytest.approx(ref, rel=1e-10)


def test_against_scipy_dense_grid():
    from scipy.special import airy as sp_airy

    u = np.linspace(-20, 10, 3001)
    mine = airy(u)
    ref = sp_airy(u)
    for m, r in zip(mine, ref):
        # relative error, measured against the local envelope so zeros do not dominate
        env = np.maximum(np.abs(r), np.abs(np.roll(r, 7)) + np.abs(np.roll(r, -7)))
        assert np.max(np.abs(m - r) / env) < 1e-10


def test_outside_table_asymptotics():
    from scipy.special import airy as sp_airy

    for u in (-40.0, -25.0, 13.0, 20.0):
        mine = airy_eval(u)
        ref = sp_airy(u)
        for m, r in zip((mine.ai, mine.ai_prime, mine.bi, mine.bi_prime), ref):
            assert m == pytest.approx(r, rel=1e-11)


def test_non_finite_rejected():
    with pytest.raises(DomainError):
        airy_eval(float("nan"))
    with pytest.raises(DomainError):
        airy([0.0, float("inf")])


def test_wronskian():
    u = np.linspace(-8, 8, 1601)
    ai, aip, bi, bip = airy(u)
    assert np.max(np.abs(ai * bip - aip * bi - 1 / math.pi)) < 1e-10


GRID = np.linspace(-12, 6, 721)
H_FD = 1e-4


def _fd_residual(f, u=GRID, h=H_FD):
    return (f(u + h) - 2 * f(u) + f(u - h)) / h**2 - u * f(u)


@pytest.mark.parametrize("k", [0, 2], ids=["Ai", "Bi"])
def test_ode_residual(k):
    res = _fd_residual(lambda x: airy(x)[k])
    assert np.max(np.abs(res)) < 1e-8


@pytest.mark.parametrize("k", [0, 2], ids=["Ai", "Bi"])
def test_ode_residual_equals_exact_function_residual(k):
    # the stencil's own truncation error, measured on correctly rounded values
    import mpmath as mp

    exact = mp.airyai if k == 0 else mp.airybi
    ref = lambda x: np.array([float(exact(float(t))) for t in x])
    mine = _fd_residual(lambda x: airy(x)[k])
    want = _fd_residual(ref)
    scale = np.maximum(1.0, np.abs(ref(GRID)))
    assert np.max(np.abs(mine - want) / scale) < 1e-7


def test_first_zeros():
    assert ai_zero(1) == pytest.approx(-2.338107410, abs=1e-9)
    assert ai_zero(2) == pytest.approx(-4.087949444, abs=1e-9)
    assert ai_prime_zero(1) == pytest.approx(-1.018792972, abs=1e-9)
    assert ai_prime_zero(2) == pytest.approx(-3.248197582, abs=1e-9)


def test_zeros_against_bisection_oracle():
    za, zp = oracles.ai_zeros(10), oracles.ai_prime_zeros(10)
    for n in range(1, 11):
        assert ai_zero(n) == pytest.approx(za[n - 1], abs=1e-10)
        assert ai_prime_zero(n) == pytest.approx(zp[n - 1], abs=1e-10)


def test_zero_quality():
    for n in range(1, 11):
        z = ai_zero(n)
        assert abs(airy_eval(z).ai) < 1e-12
        assert airy_eval(z - 1e-10).ai * airy_eval(z + 1e-10).ai < 0
        zp = ai_prime_zero(n)
        assert airy_eval(zp - 1e-10).ai_prime * airy_eval(zp + 1e-10).ai_prime < 0
        assert abs(airy_eval(zp).ai) > 0.1


def test_zeros_monotone_and_interlaced():
    a = [ai_zero(n) for n in range(1, 11)]
    ap = [ai_prime_zero(n) for n in range(1, 11)]
    assert all(x > y for x, y in zip(a, a[1:]))
    assert all(x > y for x, y in zip(ap, ap[1:]))
    for n in range(10):
        assert ap[n] > a[n]
        if n + 1 < 10:
            assert a[n] > ap[n + 1]


def test_zero_index_validation():
    with pytest.raises(DomainError):
        ai_zero(0)
    with pytest.raises(DomainError):
        ai_prime_zero(-1)


def test_tail_at_first_zero():
    a1 = ai_zero(1)
    assert ai_squared_tail(a1) == pytest.approx(airy_eval(a1).ai_prime ** 2, rel=1e-14)
    assert ai_squared_tail(a1) == pytest.approx(0.491697, abs=1e-6)


def test_tail_vanishes():
    assert 0 < ai_squared_tail(10.0) < 1e-8


def test_tail_at_derivative_zero():
    a = ai_prime_zero(1)
    assert ai_squared_tail(a) == pytest.approx(-a * airy_eval(a).ai ** 2, rel=1e-12)


@pytest.mark.parametrize("u0", [ai_zero(n) for n in range(1, 6)] + [ai_prime_zero(n) for n in range(1, 6)] + [0.0, 1.0])
def test_tail_against_quadrature(u0):
    ref = oracles.composite_quad(lambda u: oracles.ai_scipy(u) ** 2, u0, u0 + 12.0 - min(u0, 0.0), 48)
    assert ai_squared_tail(u0) == pytest.approx(ref, abs=1e-8)
