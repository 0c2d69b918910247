import cmath
import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from extlaplace.series import (
    GeneralizedSeries,
    LatticeError,
    compose,
    exp_series,
    fractional_pow,
    log_series,
    reversion,
    series_from_json,
    series_to_json,
)


def test_exp_of_u_is_factorials():
    e = exp_series(GeneralizedSeries([1.0] + [0.0] * 9, 1, 1))
    assert e.horizon == 11
    assert np.allclose(e.coeffs, [1 / math.factorial(n) for n in range(11)], rtol=0, atol=1e-16)


def test_log_of_one_plus_u():
    lg = log_series(GeneralizedSeries([1.0, 1.0] + [0.0] * 8, 0, 1))
    expected = [0] + [(-1) ** (n + 1) / n for n in range(1, 10)]
    assert np.allclose(lg.coeffs, expected, atol=1e-15)


@pytest.mark.parametrize("alpha", [0.5, -1 / 3, 2.5 + 1j])
def test_binomial_series(alpha):
    s = fractional_pow(GeneralizedSeries([1.0, 1.0] + [0.0] * 10, 0, 1), alpha, 0.0)
    ref = [complex(mp.binomial(alpha, n)) for n in range(12)]
    assert np.allclose(s.coeffs, ref, rtol=1e-13, atol=1e-15)


def test_reversion_lambert():
    # w = u e^u  ->  u = W(w) = sum (-n)^(n-1)/n! w^n
    N = 12
    w = GeneralizedSeries([1 / math.factorial(n) for n in range(N)], 1, 1)
    u = reversion(w)
    ref = [(-n) ** (n - 1) / math.factorial(n) for n in range(1, N + 1)]
    assert np.allclose(u.coeffs, ref, rtol=1e-12)


def test_fractional_offset_and_branch():
    # (4 u^2 (1+u))^(1/2) with arg 0 vs arg 2 pi
    a = GeneralizedSeries([4.0, 4.0, 0, 0], 2, 1)
    r0 = fractional_pow(a, Fraction(1, 2), 0.0)
    r1 = fractional_pow(a, Fraction(1, 2), 2 * math.pi)
    assert r0.offset == 1
    assert r0.coeffs[0] == pytest.approx(2)
    assert np.allclose(r1.coeffs, -np.array(r0.coeffs))


def test_mixed_lattice_addition():
    a = GeneralizedSeries([1, 1, 1, 1], 0, Fraction(1, 2))
    b = GeneralizedSeries([1, 1, 1, 1], 0, Fraction(1, 3))
    s = a + b
    assert s.step == Fraction(1, 6)
    assert s.horizon == Fraction(4, 3)
    assert s.coefficient_at(0) == 2
    assert s.coefficient_at(Fraction(1, 2)) == 1
    assert s.coefficient_at(Fraction(2, 3)) == 1


def test_horizon_propagation_in_products():
    a = GeneralizedSeries([1, 2], 1, 1)       # u + 2u^2 + O(u^3)
    b = GeneralizedSeries([1, 1, 1, 1], 0, 1)  # 1 + u + u^2 + u^3 + O(u^4)
    p = a * b
    assert p.horizon == 3
    assert np.allclose(p.coeffs, [1, 3])


def test_opaque_offsets_must_share_lattice():
    a = GeneralizedSeries([1, 1], 0.3 + 0.1j, 1)
    b = GeneralizedSeries([1, 1], 0, 1)
    with pytest.raises(LatticeError):
        a + b
    c = GeneralizedSeries([2, 2], 1.3 + 0.1j, 1)
    assert (a + c).coeffs[1] == 3


def test_beyond_horizon_raises():
    a = GeneralizedSeries([1, 2], 0, 1)
    with pytest.raises(IndexError):
        a.coefficient_at(5)


def test_evaluation_uses_given_arg():
    half = GeneralizedSeries([1.0], Fraction(1, 2), 1)
    assert half(-1, arg_u=math.pi) == pytest.approx(1j)
    assert half(-1, arg_u=-math.pi) == pytest.approx(-1j)


def test_compose_exp_log():
    lg = log_series(GeneralizedSeries([1.0, 1.0] + [0.0] * 8, 0, 1))
    inner = GeneralizedSeries(lg.coeffs[1:], 1, 1)
    out = compose(GeneralizedSeries([1 / math.factorial(n) for n in range(10)], 0, 1), inner)
    assert np.allclose(out.coeffs[:9], [1, 1] + [0] * 7, atol=1e-14)


def test_json_round_trip():
    a = GeneralizedSeries([1 + 2j, -0.5], Fraction(-2, 3), Fraction(1, 3))
    back = series_from_json(series_to_json(a))
    assert (back.coeffs, back.offset, back.step) == (a.coeffs, a.offset, a.step)
    b = GeneralizedSeries([1, 2], 0.25 + 1j, 1)
    assert series_from_json(series_to_json(b)).allclose(b)


coef = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(coef, min_size=2, max_size=10), st.complex_numbers(min_magnitude=0.3, max_magnitude=3))
def test_reversion_is_inverse(tail, lead):
    w = GeneralizedSeries([lead] + tail, 1, 1)
    u = reversion(w)
    back = compose(w, u)
    ident = [1] + [0] * (back.order - 1)
    scale = max(1.0, max(abs(c) for c in u.coeffs) * max(abs(c) for c in w.coeffs)) ** back.order
    assert np.allclose(back.coeffs, ident, atol=1e-9 * scale)


@settings(max_examples=60, deadline=None)
@given(st.lists(coef, min_size=1, max_size=8), st.complex_numbers(min_magnitude=0.5, max_magnitude=2))
def test_exp_log_round_trip(tail, lead):
    a = GeneralizedSeries([lead] + tail, 0, 1)
    lg = log_series(a)
    c0 = cmath.exp(lg.coeffs[0])
    rest = GeneralizedSeries(lg.coeffs[1:], 1, 1) if lg.order > 1 else None
    back = exp_series(rest) * c0 if rest is not None else GeneralizedSeries([c0], 0, 1)
    assert back.allclose(a, rtol=1e-9, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.lists(coef, min_size=1, max_size=8), st.complex_numbers(min_magnitude=0.5, max_magnitude=2),
       st.floats(-2, 2), st.floats(-2, 2))
def test_power_laws(tail, lead, alpha, beta):
    a = GeneralizedSeries([lead] + tail, Fraction(1, 2), 1)
    arg = cmath.phase(lead)
    lhs = fractional_pow(a, alpha, arg) * fractional_pow(a, beta, arg)
    rhs = fractional_pow(a, alpha + beta, arg)
    assert lhs.allclose(rhs, rtol=1e-8, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=1, max_size=6), st.lists(coef, min_size=1, max_size=6),
       st.lists(coef, min_size=1, max_size=6))
def test_product_ring_laws(x, y, z):
    a = GeneralizedSeries(x, 0, Fraction(1, 2))
    b = GeneralizedSeries(y, Fraction(1, 3), Fraction(1, 3))
    c = GeneralizedSeries(z, 1, 1)
    assert (a * b).allclose(b * a)
    assert ((a * b) * c).allclose(a * (b * c), rtol=1e-10, atol=1e-12)
    assert (a * (b + c)).allclose(a * b + a * c, rtol=1e-10, atol=1e-12)
