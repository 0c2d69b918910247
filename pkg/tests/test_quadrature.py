import cmath
import json
import math

import mpmath as mp
import numpy as np
import pytest

from extlaplace._tanhsinh import QuadratureError, segment
from extlaplace.faxen import FaxenQuery, fi
from extlaplace.quadrature import (
    Contour,
    anger_integrand,
    builtin_integrand,
    chu_integrand,
    expm1_minus_t,
    faxen_by_quadrature,
    integrate_contour,
    sinh_minus_t,
    tail_bound_check,
    watson_integrand,
)


def test_segment_endpoint_singularity():
    val, est, _ = segment(lambda t: t ** -0.5, 0.0, 1.0, 1e-12, offset=True)
    assert val == pytest.approx(2.0, rel=1e-12)
    assert est < 1e-10


def test_segment_reports_failure():
    with pytest.raises(QuadratureError) as exc:
        segment(lambda t: np.sin(400 * t), 0.0, 10.0, 1e-14, max_level=2)
    assert exc.value.levels


@pytest.mark.parametrize("lam,z", [(0.5, 3.0), (2.3 + 0.4j, 5 * cmath.exp(0.6j)), (1.0, 20 * cmath.exp(-1.2j))])
def test_watson_on_rotated_ray(lam, z):
    path = Contour.ray(cmath.exp(-1j * cmath.phase(z)), start_singularity=lam - 1)
    got = integrate_contour(watson_integrand(lam, z), path, 1e-12).value
    ref = complex(mp.gamma(lam)) / z ** lam
    assert got == pytest.approx(ref, rel=1e-11)


def test_faxen_quadrature_matches_integral():
    # Fi(1/2, 1; 1) as a plain real integral
    ref = complex(mp.quad(lambda t: mp.exp(-t + mp.sqrt(t)), [0, 1, 10, mp.inf]))
    assert faxen_by_quadrature(FaxenQuery(0.5, 1.0, 1.0)).value == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("alpha", [1 / 3, 0.5])
@pytest.mark.parametrize("beta", [1 / 3, 1.0, 1.5])
@pytest.mark.parametrize("x", [2.0, -1.5 + 0.5j])
def test_path_rotation_invariance(alpha, beta, x):
    q = FaxenQuery(alpha, beta, x)
    ref = fi(q).value
    for phi in (0.0, 0.7, -(math.pi / 2 - 0.1)):
        assert faxen_by_quadrature(q, ray_angle=phi).value == pytest.approx(ref, rel=1e-8)


def test_chu_integrand_against_hyperu():
    a, tau, b = 0.75, 0.5, 20.0
    path = Contour.ray(1.0, start_singularity=a - 1)
    got = integrate_contour(chu_integrand(a, tau, b), path, 1e-12).value
    ref = complex(mp.hyperu(a, b, b + tau * math.sqrt(b)))
    assert got == pytest.approx(ref, rel=1e-10)


def test_anger_integrand_against_bessel_and_anger():
    # A_nu(z) = (Anger J_nu(z) - J_nu(z)) / sin(nu pi), nu = -rho
    rho, tau = 10.5, 0.5
    z = rho + tau * rho ** (1 / 3)
    got = integrate_contour(anger_integrand(tau, rho), Contour.ray(1.0), 1e-12).value
    ref = complex((mp.angerj(-rho, z) - mp.besselj(-rho, z)) / mp.sin(-rho * mp.pi))
    assert got == pytest.approx(ref, rel=1e-10)


def test_small_argument_helpers():
    t = np.array([1e-6, 0.3 + 0.2j, -0.4, 2.0])
    for v, got in zip(t, expm1_minus_t(t)):
        assert got == pytest.approx(complex(mp.expm1(v) - v), rel=1e-13)
    for v, got in zip(t, sinh_minus_t(t)):
        assert got == pytest.approx(complex(mp.sinh(v) - v), rel=1e-13)


def test_tail_bound_against_incomplete_gamma():
    # alpha = 0: the tail is Gamma(beta, zeta) up to the constant exp(x)
    beta, zeta = 0.75, 30 * cmath.exp(0.5j)
    ratio = tail_bound_check(0.0, beta, 1.0, zeta)
    ref = abs(complex(mp.gammainc(beta, zeta)) / (cmath.exp(-zeta) * zeta ** (beta - 1)))
    assert ratio == pytest.approx(ref, rel=1e-9)


def test_tail_bound_argument_checks():
    with pytest.raises(ValueError):
        tail_bound_check(0.5, 1.0, 1.0, 5.0)
    with pytest.raises(ValueError):
        tail_bound_check(0.5, 1.0, 1.0, -30.0)


def test_contour_json_round_trip(tmp_path):
    c = Contour((0j, 1 + 1j, 2 + 1j), 0.5 - 1, 1 + 0j, {"note": "x"})
    path = tmp_path / "c.json"
    path.write_text(json.dumps(c.to_json()))
    back = Contour.load(path)
    assert back.nodes == c.nodes and back.tail == c.tail and back.start_singularity == c.start_singularity
    finite = Contour.from_json({"nodes": [[0, 0], [1, 0]], "tail": {"type": "finite"}})
    assert finite.tail is None


def test_finite_contour_integral():
    c = Contour((0j, 1j, 1 + 1j))
    got = integrate_contour(lambda t: t * t, c, 1e-12).value
    assert got == pytest.approx((1 + 1j) ** 3 / 3, rel=1e-13)


@pytest.mark.parametrize("nodes", [[0j], [0j, 0j], [0j, complex("nan")]])
def test_contour_validation(nodes):
    with pytest.raises(ValueError):
        Contour(tuple(nodes))


def test_builtin_lookup():
    f = builtin_integrand("builtin:watson", {"lam": 1.0, "z": [2.0, 0.0]})
    assert f(np.array([1.0]))[0] == pytest.approx(math.exp(-2))
    with pytest.raises(ValueError, match="unknown"):
        builtin_integrand("nope", {})
    with pytest.raises(ValueError, match="needs parameter"):
        builtin_integrand("chu", {"a": 1})


def test_non_decaying_ray_fails_loudly():
    f = builtin_integrand("faxen", {"alpha": 0.5, "beta": 1, "x": 0})
    with pytest.raises(QuadratureError):
        integrate_contour(f, Contour.ray(1j))
