"""The two worked applications.

* ``U(a, b, b + tau b^(1/2))`` for large ``b``: after ``s = e^t - 1`` the
  integrand has ``p = e^t - t - 1``, ``q = (e^t - 1)^(a-1) e^(-a t)``,
  ``r = tau (1 - e^t)``, so ``mu = 2``, ``lam = a``, ``nu = 1``.
* ``A_{-rho}(rho + tau rho^(1/3))`` for large ``rho``: ``p = sinh t - t``,
  ``q = 1``, ``r = -tau sinh t``, so ``mu = 3``, ``lam = 1``, ``nu = 1``.

Coefficients come out of the generic pipeline (``compute_f`` and the
regrouping); nothing is tabulated here.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .coeffs import ExpansionSpec, compute_f, g_poly_table, rearrange_corollary2, rearrange_hat, select_branch
from .expansion import faxen_argument, zpow
from .faxen import FaxenQuery, fi, parabolic_cylinder_u, rgamma, scorer_hi
from .series import GeneralizedSeries, exp_series, fractional_pow

__all__ = [
    "ConfluentSpec",
    "AngerWeberSpec",
    "confluent_spec_series",
    "confluent_coeff_polys",
    "confluent_eval",
    "confluent_faxen_form",
    "anger_weber_spec_series",
    "anger_weber_coeff_polys",
    "anger_weber_eval",
    "anger_weber_faxen_form",
    "anger_weber_w_term",
    "clipped_theta",
]

_DEFAULT_TERMS = 16


def clipped_theta(theta: float, delta: float) -> float:
    """Angle of the steepest-descent contour used for ``arg z = theta``.

    Beyond ``|theta| >= 3 pi/2`` the contour of ``theta = +-(3 pi/2 - delta/2)`` is reused.
    """
    lim = 1.5 * math.pi - 0.5 * delta
    return max(-lim, min(lim, theta))


def _sheet_theta(big: complex, sheet: int | None, delta: float) -> float:
    theta = cmath.phase(big) + 2 * math.pi * (sheet or 0)
    if abs(theta) > 2 * math.pi - delta + 1e-12:
        raise ValueError(f"|arg| = {abs(theta):.6g} exceeds 2 pi - delta")
    return theta


@dataclass(frozen=True)
class ConfluentSpec:
    """``U(a, b, b + tau b^(1/2))``; ``sheet`` picks ``arg b`` off the principal range."""

    a: complex
    tau: complex
    b_param: complex
    delta: float = 0.1
    sheet: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "tau", complex(self.tau))
        object.__setattr__(self, "b_param", complex(self.b_param))
        if not self.a.real > 0:
            raise ValueError("Re(a) must be positive")
        if self.b_param == 0:
            raise ValueError("b must be nonzero")
        if not 0 < self.delta < math.pi:
            raise ValueError("delta must lie in (0, pi)")
        theta = self.theta
        if abs(theta) < math.pi / 2 and abs(self.b_param) ** 0.5 * math.cos(theta) <= abs(self.tau):
            warnings.warn("|b|^(1/2) cos(arg b) <= |tau|: outside the range where the real-axis integral converges",
                          stacklevel=2)

    @property
    def theta(self) -> float:
        return _sheet_theta(self.b_param, self.sheet, self.delta)


@dataclass(frozen=True)
class AngerWeberSpec:
    """``A_{-rho}(rho + tau rho^(1/3))``."""

    rho: complex
    tau: complex
    delta: float = 0.1
    sheet: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "rho", complex(self.rho))
        object.__setattr__(self, "tau", complex(self.tau))
        if self.rho == 0:
            raise ValueError("rho must be nonzero")
        if not 0 < self.delta < math.pi:
            raise ValueError("delta must lie in (0, pi)")
        theta = self.theta
        if abs(theta) < math.pi / 2 and abs(self.rho) ** (2 / 3) * math.cos(theta) <= abs(self.tau):
            warnings.warn("|rho|^(2/3) cos(arg rho) <= |tau|: outside the range where the real-axis integral "
                          "converges", stacklevel=2)

    @property
    def theta(self) -> float:
        return _sheet_theta(self.rho, self.sheet, self.delta)


def _spec_angles(theta: float, mu: int, delta: float):
    return -clipped_theta(theta, delta) / mu, (theta, theta)


def confluent_spec_series(s: ConfluentSpec, N: int = _DEFAULT_TERMS, theta: float | None = None) -> ExpansionSpec:
    """Local data of the confluent integrand with ``N`` coefficients each."""
    if not 1 <= N <= 40:
        raise ValueError("N must lie in 1..40")
    a = s.a
    # (e^u - 1)/u and its (a-1)-th power times e^{-a u}
    e_over_u = GeneralizedSeries([1.0 / math.factorial(n + 1) for n in range(N)], 0, 1)
    decay = exp_series(GeneralizedSeries([-a] + [0.0] * (N - 1), 1, 1))
    q = (fractional_pow(e_over_u, a - 1, 0.0) * decay).truncate(N)
    p = [1.0 / math.factorial(n + 2) for n in range(N)]
    r = [-s.tau / math.factorial(n + 1) for n in range(N)]
    th = s.theta if theta is None else theta
    varpi, rng = _spec_angles(th, 2, s.delta)
    return ExpansionSpec(mu=2, nu=1, lam=a, p_coeffs=p, q_coeffs=q.coeffs, r_coeffs=r,
                         varpi=varpi, theta_range=rng)


def anger_weber_spec_series(s: AngerWeberSpec, N: int = _DEFAULT_TERMS, theta: float | None = None) -> ExpansionSpec:
    if not 1 <= N <= 40:
        raise ValueError("N must lie in 1..40")
    p = [1.0 / math.factorial(n + 3) if n % 2 == 0 else 0.0 for n in range(N)]
    r = [-s.tau / math.factorial(n + 1) if n % 2 == 0 else 0.0 for n in range(N)]
    q = [1.0] + [0.0] * (N - 1)
    th = s.theta if theta is None else theta
    varpi, rng = _spec_angles(th, 3, s.delta)
    return ExpansionSpec(mu=3, nu=1, lam=1, p_coeffs=p, q_coeffs=q, r_coeffs=r, varpi=varpi, theta_range=rng)


def _confluent_ft(spec: ExpansionSpec, theta: float, M: int):
    branch = select_branch(spec, theta)
    rows = 1 + M
    table = compute_f(spec, branch, rows)
    x = faxen_argument(spec, branch)
    g = g_poly_table(2, spec.lam, 2 * (rows - 1))
    return rearrange_corollary2(table, g, x, M), x


def _confluent_cd(s: ConfluentSpec, M: int):
    """``C_0..C_M`` and ``D_0..D_M``."""
    spec = confluent_spec_series(s, M + 2)
    ft, x = _confluent_ft(spec, s.theta, M + 1)
    a = s.a
    C = 2 ** (1 - a / 2) * ft[0]
    D = 2 ** (1 - (a + 1) / 2) * a * ft[1]
    return C, D, ft, x, spec


def confluent_coeff_polys(a_samples, tau_samples, M: int):
    """``C[k, m]``, ``D[k, m]`` (``m <= M``) at the sample pairs ``(a_k, tau_k)``."""
    if M > 4:
        raise ValueError("M must be at most 4")
    a_samples = list(a_samples)
    tau_samples = list(tau_samples)
    if len(a_samples) != len(tau_samples):
        raise ValueError("a and tau samples must pair up")
    C = np.zeros((len(a_samples), M + 1), dtype=complex)
    D = np.zeros_like(C)
    for k, (a, tau) in enumerate(zip(a_samples, tau_samples)):
        c, d, *_ = _confluent_cd(ConfluentSpec(a, tau, 1e6), M)
        C[k], D[k] = c, d
    return C, D


def confluent_eval(s: ConfluentSpec, M: int) -> complex:
    """Parabolic-cylinder form with ``C_m``, ``D_m`` for ``m <= M``."""
    C, D, *_ = _confluent_cd(s, M)
    a, tau = s.a, s.tau
    babs, th = abs(s.b_param), s.theta
    e = cmath.exp(tau * tau / 4)
    u1 = parabolic_cylinder_u(a - 0.5, tau)
    u2 = parabolic_cylinder_u(a + 0.5, tau)
    s1 = sum(C[m] / zpow(babs, th, m / 2) for m in range(M + 1))
    s2 = sum(D[m] / zpow(babs, th, m / 2) for m in range(M + 1))
    return e * (u1 * s1 / zpow(babs, th, a / 2) + u2 * s2 / zpow(babs, th, (a + 1) / 2))


def confluent_faxen_form(s: ConfluentSpec, M: int) -> complex:
    """The same truncation written with ``Fi(1/2, a/2; x)`` and ``Fi(1/2, (a+1)/2; x)``."""
    _, _, ft, x, spec = _confluent_cd(s, M)
    a = s.a
    babs, th = abs(s.b_param), s.theta
    f0 = fi(FaxenQuery(0.5, a / 2, x)).value
    f1 = fi(FaxenQuery(0.5, (a + 1) / 2, x)).value
    s0 = sum(ft[0, m] / zpow(babs, th, m / 2) for m in range(M + 1))
    s1 = sum(ft[1, m] / zpow(babs, th, m / 2) for m in range(M + 1))
    return rgamma(a) * (f0 * s0 / zpow(babs, th, a / 2) + f1 * s1 / zpow(babs, th, (a + 1) / 2))


def _anger_fhat(s: AngerWeberSpec, M: int, theta: float | None = None):
    """``fh[n, m]`` for ``n < 3``, ``m <= M`` and the Faxen argument."""
    th = s.theta if theta is None else theta
    rows = 2 * (M + 1) + 1  # highest f row is 2 + 2M
    spec = anger_weber_spec_series(s, rows, theta=th)
    branch = select_branch(spec, th)
    table = compute_f(spec, branch, rows)
    x = faxen_argument(spec, branch)
    g = g_poly_table(3, 1, 2 * (rows - 1))
    return rearrange_hat(table, g, x, M + 1), x


def _uvw(fh: np.ndarray, tau: complex, M: int):
    U = np.array([2 ** (-1 / 3) * 3 ** (2 / 3) * fh[0, m] - (tau * fh[2, m - 1] if m else 0) for m in range(M + 1)])
    V = 2 ** (-2 / 3) * 3 ** (1 / 3) * fh[1, : M + 1]
    W = fh[2, : M + 1].copy()
    return U, V, W


def anger_weber_coeff_polys(tau_samples, M: int):
    """``U[k, m]``, ``V[k, m]``, ``W[k, m]`` (``m <= M``) at each ``tau_k``."""
    if M > 3:
        raise ValueError("M must be at most 3")
    out = [np.zeros((len(tau_samples), M + 1), dtype=complex) for _ in range(3)]
    for k, tau in enumerate(tau_samples):
        fh, _ = _anger_fhat(AngerWeberSpec(1e6, tau), M)
        for arr, row in zip(out, _uvw(fh, complex(tau), M)):
            arr[k] = row
    return tuple(out)


def anger_weber_eval(s: AngerWeberSpec, M: int) -> complex:
    """Scorer-function form with ``U_m``, ``V_m``, ``W_m`` for ``m <= M``.

    ``Hi'`` is obtained from ``Fi(1/3, 2/3; 3^(1/3) y) / (3^(1/3) pi)``.
    """
    fh, _ = _anger_fhat(s, M)
    U, V, W = _uvw(fh, s.tau, M)
    rabs, th = abs(s.rho), s.theta
    y = -(2 ** (1 / 3)) * s.tau
    hi = scorer_hi(y)
    dhi = fi(FaxenQuery(1 / 3, 2 / 3, 3 ** (1 / 3) * y)).value / (3 ** (1 / 3) * math.pi)
    su = sum(U[m] / zpow(rabs, th, 2 * m / 3) for m in range(M + 1))
    sv = sum(V[m] / zpow(rabs, th, 2 * m / 3) for m in range(M + 1))
    sw = sum(W[m] / zpow(rabs, th, 2 * m / 3) for m in range(M + 1))
    return (2 ** (1 / 3) * hi * su / zpow(rabs, th, 1 / 3)
            + 2 ** (2 / 3) * dhi * sv / zpow(rabs, th, 1)
            + sw / (math.pi * zpow(rabs, th, 1)))


def anger_weber_faxen_form(s: AngerWeberSpec, orders) -> complex:
    """``(1/pi) sum_{n<3} rho^{-(2 ceil(n/2)+1)/3} Fi(1/3, (1+n)/3; x) sum_{m<=orders[n]} fh[n,m] rho^{-2m/3}``.

    With ``orders = (M, M, M-1)`` this plus the ``W_M`` term equals
    :func:`anger_weber_eval` at order ``M``: the ``Hi`` part of the ``n = 2``
    series is shifted by one step into ``U``.
    """
    orders = tuple(int(o) for o in orders)
    if len(orders) != 3:
        raise ValueError("need one order per n = 0, 1, 2")
    fh, x = _anger_fhat(s, max(orders))
    rabs, th = abs(s.rho), s.theta
    total = 0j
    for n in range(3):
        lead = (2 * ((n + 1) // 2) + 1) / 3
        f = fi(FaxenQuery(1 / 3, (1 + n) / 3, x)).value
        inner = sum(fh[n, m] / zpow(rabs, th, 2 * m / 3) for m in range(orders[n] + 1))
        total += f * inner / zpow(rabs, th, lead)
    return total / math.pi


def anger_weber_w_term(s: AngerWeberSpec, m: int) -> complex:
    """``W_m rho^{-1-2m/3} / pi``."""
    fh, _ = _anger_fhat(s, m)
    return fh[2, m] / (math.pi * zpow(abs(s.rho), s.theta, 1 + 2 * m / 3))
