import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from extlaplace.coeffs import (
    ExpansionSpec,
    InsufficientCoefficientsError,
    bell_partial_ordinary,
    bell_table,
    compute_a,
    compute_b,
    compute_c,
    compute_f,
    g_poly_table,
    rearrange_corollary2,
    select_branch,
)
from extlaplace.faxen import FaxenQuery, fi

rng = np.random.default_rng(1234)


def rand_c(n, scale=1.0):
    return list(scale * (rng.normal(size=n) + 1j * rng.normal(size=n)))


def make_spec(mu=Fraction(3), nu=Fraction(1), n=8, lam=1.3 + 0.4j, p0=1.2 * cmath.exp(0.3j)):
    return ExpansionSpec(mu=mu, nu=nu, lam=lam, p_coeffs=[p0] + rand_c(n - 1, 0.5), q_coeffs=rand_c(n),
                         r_coeffs=rand_c(n), varpi=-cmath.phase(p0) / float(mu), theta_range=(-0.2, 0.2))


def ppow(spec, branch, s):
    return branch.p0_pow(spec.p0, s)


@pytest.mark.parametrize("mu,nu", [(Fraction(2), Fraction(1)), (Fraction(3), Fraction(1)),
                                   (Fraction(5, 2), Fraction(1, 2)), (Fraction(3), Fraction(0))])
def test_low_order_closed_forms(mu, nu):
    spec = make_spec(mu, nu)
    br = select_branch(spec, 0.0)
    m = float(mu)
    p0, p1 = spec.p_coeffs[:2]
    a = compute_a(spec, br, 4).coeffs
    assert a[0] == pytest.approx(ppow(spec, br, -1 / m), rel=1e-13)
    assert a[1] == pytest.approx(-p1 / (m * p0 * ppow(spec, br, 2 / m)), rel=1e-13)
    b = compute_b(spec, br, 4)
    assert b[0] == pytest.approx(spec.q_coeffs[0] / (m * ppow(spec, br, spec.lam / m)), rel=1e-13)
    c = compute_c(spec, br, 4)
    r0, r1 = spec.r_coeffs[:2]
    eps = p1 / (m * p0)
    c1 = (r1 - float(nu) * eps * r0) / ppow(spec, br, (float(nu) + 1) / m)
    assert c[0] == pytest.approx(c1, rel=1e-12)


def test_bell_table_matches_polynomial_powers():
    c = rand_c(7)
    N = 8
    B = bell_table(c, N)
    base = np.array([0] + c)
    for m in range(N):
        powm = P.polypow(base, m)[:N] if m else np.array([1.0])
        powm = np.pad(powm, (0, N - len(powm)))
        for n in range(m, N):
            assert B[n, m] == pytest.approx(powm[n], rel=1e-12, abs=1e-13)
    assert bell_partial_ordinary(c, 5, 2) == pytest.approx(B[5, 2])


def test_f_first_column_is_b():
    spec = make_spec()
    table = compute_f(spec, select_branch(spec, 0.0), 6)
    assert np.allclose(table.f[:, 0], table.b)
    assert np.allclose(np.triu(table.f, 1), 0)


def test_f_without_secondary_exponent_is_diagonal_free():
    spec = ExpansionSpec(mu=2, nu=1, lam=1, p_coeffs=[0.5, 0.2, 0.1], q_coeffs=[1, 2, 3])
    table = compute_f(spec, select_branch(spec, 0.0), 3)
    assert np.allclose(table.f[:, 1:], 0)


@pytest.mark.parametrize("mu", [2, 3, 4])
def test_g_polynomials_reduce_faxen_derivatives(mu):
    lam = 1.3 + 0.2j
    x = 0.7 - 0.3j
    g = g_poly_table(mu, lam, 8)
    base = [fi(FaxenQuery(1 / mu, (lam + n) / mu, x)).value for n in range(mu)]
    for j in range(9):
        lhs = fi(FaxenQuery(1 / mu, (lam + j) / mu, x)).value
        rhs = sum(g(j, n, x) * base[n] for n in range(mu))
        assert rhs == pytest.approx(lhs, rel=1e-11)


def test_regrouped_coefficient_zero_entry_is_leading_f():
    spec = make_spec()
    br = select_branch(spec, 0.0)
    table = compute_f(spec, br, 4)
    x = spec.r0 / br.p0_pow(spec.p0, 1 / 3)
    ft = rearrange_corollary2(table, g_poly_table(3, spec.lam, 6), x, 2)
    assert ft[0, 0] == pytest.approx(table.f[0, 0])
    assert ft.shape == (3, 2)


def test_insufficient_coefficients():
    spec = make_spec(n=3)
    br = select_branch(spec, 0.0)
    assert spec.max_order() == 3
    with pytest.raises(InsufficientCoefficientsError) as exc:
        compute_f(spec, br, 4)
    assert exc.value.required == 4
    with pytest.raises(InsufficientCoefficientsError):
        compute_c(spec, br, 3)


@pytest.mark.parametrize("kwargs,msg", [
    (dict(p_coeffs=[0, 1]), "p_0"),
    (dict(mu=1, nu=1), "mu > nu"),
    (dict(lam=-0.5), "lambda"),
    (dict(theta_range=(1.0, 0.0)), "ordered"),
    (dict(theta_range=(0.0, 3.5)), "shorter"),
    (dict(q_coeffs=[float("nan")]), "finite"),
])
def test_spec_invariants(kwargs, msg):
    base = dict(mu=2, nu=1, lam=1, p_coeffs=[1, 0], q_coeffs=[1])
    base.update(kwargs)
    with pytest.raises(ValueError, match=msg):
        ExpansionSpec(**base)


def test_branch_selection():
    spec = ExpansionSpec(mu=2, nu=0, lam=1, p_coeffs=[cmath.exp(3j)], q_coeffs=[1], varpi=-1.5, theta_range=(0, 0))
    br = select_branch(spec, 0.0)
    # Arg p0 = 3, 3 + 0 + 2(-1.5) = 0 is admissible without a shift
    assert br.varpi0 == pytest.approx(3.0)
    spec2 = ExpansionSpec(mu=2, nu=0, lam=1, p_coeffs=[cmath.exp(3j)], q_coeffs=[1], varpi=1.7, theta_range=(0, 0))
    assert select_branch(spec2, 0.0).varpi0 == pytest.approx(3.0 - 2 * math.pi)
    with pytest.raises(ValueError):
        select_branch(spec, 0.5)  # outside theta_range


def test_branch_inconsistent_over_range():
    spec = ExpansionSpec(mu=2, nu=0, lam=1, p_coeffs=[1], q_coeffs=[1], varpi=0.0, theta_range=(1.0, 2.0))
    with pytest.raises(ValueError, match="branch"):
        select_branch(spec, 1.0)


def test_table_json_shape():
    spec = make_spec()
    t = compute_f(spec, select_branch(spec, 0.0), 3).to_json()
    assert set(t) == {"a", "b", "c", "f"}
    assert [len(r) for r in t["f"]] == [1, 2, 3]
    assert all(len(v) == 2 for v in t["b"])
