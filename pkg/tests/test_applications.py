import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from extlaplace.acceptance import C_REF, D_REF, U_REF, V_REF, W_REF
from extlaplace.applications import (
    AngerWeberSpec,
    ConfluentSpec,
    anger_weber_coeff_polys,
    anger_weber_eval,
    anger_weber_faxen_form,
    anger_weber_spec_series,
    anger_weber_w_term,
    clipped_theta,
    confluent_coeff_polys,
    confluent_eval,
    confluent_faxen_form,
    confluent_spec_series,
)
from extlaplace.faxen import scorer_hi


def hyperu_ref(a, tau, b):
    with mp.workdps(30):
        return complex(mp.hyperu(a, b, b + tau * mp.sqrt(b), maxterms=10**6))


def anger_ref(rho, tau):
    # A_nu(z) = (Anger J_nu(z) - J_nu(z)) / sin(nu pi) with nu = -rho
    with mp.workdps(30):
        nu = -mp.mpf(rho)
        z = mp.mpf(rho) + tau * mp.cbrt(rho)
        return complex((mp.angerj(nu, z) - mp.besselj(nu, z)) / mp.sin(nu * mp.pi))


def test_confluent_local_data():
    a = 0.75 + 0.2j
    spec = confluent_spec_series(ConfluentSpec(a, 0.5, 100.0), 8)
    with mp.workdps(30):
        q = mp.taylor(lambda t: (mp.expm1(t) / t) ** (a - 1) * mp.exp(-a * t) if t else 1, 0, 7)
        p = mp.taylor(lambda t: (mp.exp(t) - t - 1) / t**2 if t else mp.mpf(1) / 2, 0, 7)
    assert np.allclose(spec.q_coeffs, [complex(c) for c in q], rtol=1e-12, atol=1e-14)
    assert np.allclose(spec.p_coeffs, [complex(c) for c in p], rtol=1e-12, atol=1e-14)
    assert (spec.mu, spec.nu, spec.lam) == (2, 1, a)


def test_anger_local_data():
    spec = anger_weber_spec_series(AngerWeberSpec(100.0, 0.3), 8)
    assert spec.p_coeffs[:3] == (1 / 6, 0, 1 / 120)
    assert spec.r_coeffs[:3] == (-0.3, 0, -0.3 / 6)
    assert (spec.mu, spec.nu) == (3, 1)


@pytest.mark.parametrize("a,tau", [(0.6 + 0.3j, 0.4 - 0.2j), (2.2, -1.1 + 0.5j)])
def test_confluent_polynomials_at_complex_arguments(a, tau):
    C, D = confluent_coeff_polys([a], [tau], 3)
    for m in range(4):
        assert C[0, m] == pytest.approx(C_REF[m](tau, a), rel=1e-9, abs=1e-12)
    for m in range(3):
        assert D[0, m] == pytest.approx(D_REF[m](tau, a), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("tau", [0.37 - 0.8j, -1.6 + 0.1j])
def test_anger_polynomials_at_complex_arguments(tau):
    U, V, W = anger_weber_coeff_polys([tau], 3)
    for m in range(4):
        assert U[0, m] == pytest.approx(U_REF[m](tau), rel=1e-9, abs=1e-12)
    for m in range(3):
        assert V[0, m] == pytest.approx(V_REF[m](tau), rel=1e-9, abs=1e-12)
        assert W[0, m] == pytest.approx(W_REF[m](tau), rel=1e-9, abs=1e-12)


def test_confluent_polynomial_degrees():
    # deg C_m = 3m - 2 (m >= 1): deg + 1 points must reproduce it exactly
    a = 0.75
    taus = np.linspace(-2, 2, 9)
    C, _ = confluent_coeff_polys([a] * len(taus), list(taus), 3)
    for m, deg in ((1, 1), (2, 4), (3, 7)):
        fit = np.polynomial.polynomial.polyfit(taus, C[:, m].real, deg)
        resid = C[:, m].real - np.polynomial.polynomial.polyval(taus, fit)
        assert np.max(np.abs(resid)) < 1e-10


def test_confluent_against_hyperu():
    a, tau, b = 0.75, 0.5, 200.0
    ref = hyperu_ref(a, tau, b)
    errs = [abs(confluent_eval(ConfluentSpec(a, tau, b), M) / ref - 1) for M in range(3)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-4


def test_confluent_faxen_form_is_the_same_truncation():
    s = ConfluentSpec(0.75, 0.5, 200.0)
    for M in range(3):
        assert confluent_faxen_form(s, M) == pytest.approx(confluent_eval(s, M), rel=1e-10)


def test_anger_against_bessel_formula():
    rho, tau = 1000.5, 0.5
    ref = anger_ref(rho, tau)
    errs = [abs(anger_weber_eval(AngerWeberSpec(rho, tau), M) / ref - 1) for M in range(3)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-7


def test_anger_leading_term_is_scorer():
    s = AngerWeberSpec(500.0, 0.7)
    lead = anger_weber_faxen_form(s, (0, -1, -1))
    assert lead == pytest.approx(2 ** (1 / 3) * 500 ** (-1 / 3) * scorer_hi(-(2 ** (1 / 3)) * 0.7), rel=1e-12)


@pytest.mark.parametrize("M", [1, 2, 3])
def test_anger_faxen_form_plus_w_term(M):
    s = AngerWeberSpec(300 * cmath.exp(0.4j), -0.4)
    lhs = anger_weber_faxen_form(s, (M, M, M - 1)) + anger_weber_w_term(s, M)
    assert lhs == pytest.approx(anger_weber_eval(s, M), rel=1e-11)


def test_warnings_outside_real_axis_range():
    with pytest.warns(UserWarning, match="converges"):
        ConfluentSpec(0.75, 5.0, 4.0)
    with pytest.warns(UserWarning, match="converges"):
        AngerWeberSpec(8.0, 5.0)


@pytest.mark.parametrize("make", [
    lambda: ConfluentSpec(-0.5, 0.5, 100.0),
    lambda: ConfluentSpec(0.5, 0.5, 0.0),
    lambda: ConfluentSpec(0.5, 0.5, 100.0, delta=4.0),
    lambda: ConfluentSpec(0.5, 0.5, -100.0, sheet=1),
    lambda: AngerWeberSpec(0.0, 0.5),
    lambda: AngerWeberSpec(100.0, 0.5, sheet=-1),
])
def test_parameter_validation(make):
    with pytest.raises(ValueError):
        make()


def test_sheet_selection():
    s = AngerWeberSpec(cmath.rect(100, 2.0), 0.5, sheet=-1)
    assert s.theta == pytest.approx(2.0 - 2 * math.pi)


def test_clipped_theta():
    assert clipped_theta(0.3, 0.1) == 0.3
    assert clipped_theta(5.0, 0.1) == pytest.approx(1.5 * math.pi - 0.05)
    assert clipped_theta(-5.0, 0.2) == pytest.approx(-1.5 * math.pi + 0.1)


def test_order_limits():
    with pytest.raises(ValueError):
        confluent_coeff_polys([1.0], [0.5], 5)
    with pytest.raises(ValueError):
        anger_weber_coeff_polys([0.5], 4)
    with pytest.raises(ValueError):
        confluent_coeff_polys([1.0, 2.0], [0.5], 2)
