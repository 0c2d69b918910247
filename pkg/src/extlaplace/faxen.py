"""Faxen's integral ``Fi(alpha, beta; x) = int_0^inf exp(-t + x t**alpha) t**(beta-1) dt``
and the special functions it reduces to.

``Fi`` is summed from its everywhere-convergent power series when that is
numerically safe and otherwise replaced by the leading large-``|x|``
behaviour.  The parabolic cylinder function ``U(a, x)`` and Scorer's ``Hi``
are computed by their own Maclaurin series (with an integral fallback when
the series cancels badly), so they can serve as independent checks of ``Fi``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._tanhsinh import half_line

__all__ = [
    "FaxenQuery",
    "FaxenResult",
    "gamma",
    "rgamma",
    "loggamma",
    "fi",
    "fi_value",
    "fi_derivative",
    "parabolic_cylinder_u",
    "scorer_hi",
]

EPS = np.finfo(float).eps

# Lanczos approximation, g = 607/128, fifteen terms (Godfrey's coefficient set)
_LANCZOS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_SHIFT = 607 / 128 + 0.5
_SQRT_2PI = math.sqrt(2 * math.pi)


def _is_pole(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def _loggamma_right(z: complex) -> complex:
    # valid for Re z >= 1/2
    ser = _LANCZOS[0]
    for j in range(1, len(_LANCZOS)):
        ser += _LANCZOS[j] / (z + j)
    t = z + _SHIFT
    return (z + 0.5) * cmath.log(t) - t + cmath.log(_SQRT_2PI * ser / z)


def loggamma(z) -> complex:
    """A logarithm of the gamma function; ``exp(loggamma(z)) == gamma(z)``.

    For ``Re z >= 1/2`` this is the principal branch.  Left of that line the
    reflection formula is used and the imaginary part is not normalised.
    """
    z = complex(z)
    if _is_pole(z):
        raise ValueError(f"gamma has a pole at {z.real:g}")
    if z.real >= 0.5:
        return _loggamma_right(z)
    return math.log(math.pi) - cmath.log(cmath.sin(math.pi * z)) - _loggamma_right(1 - z)


def gamma(z) -> complex:
    """Complex gamma function.  Raises ``ValueError`` at the poles."""
    z = complex(z)
    if _is_pole(z):
        raise ValueError(f"gamma has a pole at {z.real:g}")
    if z.real >= 0.5:
        return cmath.exp(_loggamma_right(z))
    return math.pi / (cmath.sin(math.pi * z) * cmath.exp(_loggamma_right(1 - z)))


def rgamma(z) -> complex:
    """``1/gamma(z)``, zero at the poles."""
    z = complex(z)
    if _is_pole(z):
        return 0j
    if z.real >= 0.5:
        return cmath.exp(-_loggamma_right(z))
    return cmath.sin(math.pi * z) * cmath.exp(_loggamma_right(1 - z)) / math.pi


@dataclass(frozen=True)
class FaxenQuery:
    alpha: float
    beta: complex
    x: complex

    def __post_init__(self):
        alpha = float(self.alpha)
        beta = complex(self.beta)
        x = complex(self.x)
        if not 0.0 <= alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
        if not beta.real > 0:
            raise ValueError("Re(beta) must be positive")
        if not (cmath.isfinite(beta) and cmath.isfinite(x)):
            raise ValueError("beta and x must be finite")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "x", x)


@dataclass(frozen=True)
class FaxenResult:
    """``est_error`` is absolute.  ``converged`` tells whether it met the requested tolerance."""

    value: complex
    method: str
    est_error: float
    converged: bool = True

    def to_json(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "method": self.method,
            "est_error": self.est_error,
            "converged": self.converged,
        }


def _series_peak(alpha: float, x: complex) -> float:
    """Index of the largest term of the power series."""
    if alpha == 0 or x == 0:
        return 0.0
    return (abs(x) * alpha ** alpha) ** (1.0 / (1.0 - alpha))


def _fi_series(q: FaxenQuery, max_terms: int = 100000):
    alpha, beta, x = q.alpha, q.beta, q.x
    if x == 0:
        g = gamma(beta)
        return g, EPS * abs(g)
    if alpha == 0:
        g = gamma(beta) * cmath.exp(x)
        return g, 4 * EPS * abs(g)
    logx = cmath.log(x)
    peak = _series_peak(alpha, x)
    re, im, mags = [], [], []
    n = 0
    while True:
        lt = loggamma(alpha * n + beta) + n * logx - math.lgamma(n + 1)
        term = cmath.exp(lt)
        re.append(term.real)
        im.append(term.imag)
        mags.append(abs(term))
        if n > peak + 2:
            # past the peak the term ratio decreases, so the geometric tail bounds the rest
            ratio = mags[-1] / mags[-2] if mags[-2] > 0 else 0.0
            if ratio < 1:
                tail = mags[-1] * ratio / (1 - ratio)
                if tail <= EPS * 1e-2 * math.fsum(mags):
                    break
        n += 1
        if n > max_terms:
            raise ArithmeticError("Faxen series did not terminate")
    value = complex(math.fsum(re), math.fsum(im))
    err = 4 * EPS * math.fsum(mags) + tail
    return value, err


def _fi_positive(q: FaxenQuery):
    alpha, beta, x = q.alpha, q.beta, q.x
    e = 1.0 / (1.0 - alpha)
    Z = (1 - alpha) * (alpha ** alpha * x) ** e
    value = (alpha * x) ** ((2 * beta - 1) / (2 - 2 * alpha)) * cmath.exp(Z) * math.sqrt(2 * math.pi * e)
    return value, abs(value) / abs(Z)


def _fi_negative(q: FaxenQuery):
    alpha, beta, x = q.alpha, q.beta, q.x
    X = -x
    value = gamma(beta / alpha) / (alpha * X ** (beta / alpha))
    nxt = gamma((beta + 1) / alpha) / (alpha * X ** ((beta + 1) / alpha))
    return value, abs(nxt)


def fi(q: FaxenQuery, method: str = "auto", tol: float = 1e-10) -> FaxenResult:
    """Evaluate ``Fi(alpha, beta; x)``.

    ``method`` is ``auto``, ``series`` or ``asymptotic``.  In ``auto`` mode the
    series is used whenever its rounding estimate is within ``tol`` relative;
    otherwise the leading large-``|x|`` form on the appropriate side is tried
    and the smaller estimated error wins.  The asymptotic error estimates are
    heuristic (size of the next correction).
    """
    if method not in ("auto", "series", "asymptotic"):
        raise ValueError(f"unknown method {method!r}")

    def asym():
        if q.alpha == 0 or q.x == 0:
            raise ValueError("no asymptotic form for alpha = 0 or x = 0")
        if abs(cmath.phase(q.x)) <= math.pi / 2:
            v, e = _fi_positive(q)
            return FaxenResult(v, "asymptotic-positive", e, e <= tol * abs(v))
        v, e = _fi_negative(q)
        return FaxenResult(v, "asymptotic-negative", e, e <= tol * abs(v))

    if method == "asymptotic":
        return asym()
    # a huge term peak means the series is either hopeless or very slow
    too_far = _series_peak(q.alpha, q.x) > 20000
    if method == "series" or not too_far:
        if too_far:
            raise ValueError("series would need more than 20000 terms")
        v, e = _fi_series(q)
        ok = e <= tol * abs(v)
        if ok or method == "series" or q.alpha == 0:
            return FaxenResult(v, "series", e, ok)
        other = asym()
        return other if other.est_error < e else FaxenResult(v, "series", e, False)
    return asym()


def fi_value(alpha, beta, x, tol: float = 1e-10) -> complex:
    return fi(FaxenQuery(alpha, beta, x), tol=tol).value


def fi_derivative(q: FaxenQuery, n: int, method: str = "auto", tol: float = 1e-10) -> FaxenResult:
    """``d^n/dx^n Fi(alpha, beta; x) = Fi(alpha, beta + n alpha; x)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return fi(FaxenQuery(q.alpha, q.beta + n * q.alpha, q.x), method=method, tol=tol)


def _check_range(name, *vals, bound=20.0):
    for v in vals:
        if abs(v) > bound:
            raise ValueError(f"{name}: |argument| {abs(v):g} outside the supported range {bound:g}")


def _even_odd_series(a: complex, x: complex):
    """Even and odd solutions of ``w'' = (x^2/4 + a) w`` normalised at the origin.

    Also returns the largest term magnitude, for the cancellation estimate.
    """
    out = []
    mag = 0.0
    for start in (0, 1):
        prev2, prev, k = 0j, 1 + 0j, start  # c_{k-2}, c_k
        re, im = [], []
        small = 0
        while k < 4000:
            term = prev * x ** k
            re.append(term.real)
            im.append(term.imag)
            mag = max(mag, abs(term))
            small = small + 1 if abs(term) <= EPS * 1e-3 * mag else 0
            if small >= 3 and k > 10:
                break
            prev2, prev = prev, (a * prev + 0.25 * prev2) / ((k + 2) * (k + 1))
            k += 2
        out.append(complex(math.fsum(re), math.fsum(im)))
    return out[0], out[1], mag


def _u_integral(a: complex, x: complex) -> complex:
    # U(a,x) = exp(-x^2/4)/Gamma(a+1/2) int_0^inf t^(a-1/2) exp(-t^2/2 - x t) dt, Re a > -1/2
    f = lambda t: np.exp(-0.5 * t * t - x * t) * t ** (a - 0.5)
    v, _, _ = half_line(f, 1e-13, exponent_re=(a - 0.5).real)
    return cmath.exp(-0.25 * x * x) * rgamma(a + 0.5) * v


def parabolic_cylinder_u(a, x) -> complex:
    """Parabolic cylinder function ``U(a, x)`` for ``|a|, |x| <= 20``.

    Maclaurin even/odd series with the standard values at the origin.  When
    the series loses more than about five digits to cancellation (large
    positive ``Re x``) the integral representation is used instead, which
    needs ``Re a > -1/2``.
    """
    a = complex(a)
    x = complex(x)
    _check_range("parabolic_cylinder_u", a, x)
    u0 = math.sqrt(math.pi) * rgamma(0.75 + 0.5 * a) / 2 ** (0.5 * a + 0.25)
    du0 = -math.sqrt(math.pi) * rgamma(0.25 + 0.5 * a) / 2 ** (0.5 * a - 0.25)
    even, odd, mag = _even_odd_series(a, x)
    value = u0 * even + du0 * odd
    scale = mag * max(abs(u0), abs(du0))
    if abs(value) > 1e-5 * scale:
        return value
    if a.real > -0.5:
        return _u_integral(a, x)
    return value


def _hi_taylor(x: complex, deriv: int = 0):
    h0 = 2.0 / (3 ** (7 / 6) * math.gamma(2 / 3))
    h1 = 2.0 / (3 ** (5 / 6) * math.gamma(1 / 3))
    h = [h0, h1, 1.0 / (2 * math.pi)]
    re, im = [], []
    mag = 0.0
    small = 0
    k = 0
    while True:
        if k >= len(h):
            h.append(h[k - 3] / (k * (k - 1)))
        if k >= deriv:
            fall = math.prod(range(k - deriv + 1, k + 1)) if deriv else 1
            p = k - deriv
            term = h[k] * fall * (x ** p if p else 1)
            re.append(term.real)
            im.append(term.imag)
            mag = max(mag, abs(term))
            small = small + 1 if abs(term) <= EPS * 1e-3 * max(mag, 1e-300) else 0
        k += 1
        if (small >= 4 and k > 12) or k > 5000:
            break
    return complex(math.fsum(re), math.fsum(im)), mag


def _hi_integral(x: complex, deriv: int = 0) -> complex:
    f = lambda t: np.exp(-t ** 3 / 3 + x * t) * (t ** deriv if deriv else 1.0)
    v, _, _ = half_line(f, 1e-13)
    return v / math.pi


def scorer_hi(x, deriv: int = 0) -> complex:
    """Scorer's function ``Hi(x)`` (or its ``deriv``-th derivative), ``|x| <= 20``.

    Taylor series about 0; for arguments where the series cancels (large
    negative ``Re x``) the defining integral ``(1/pi) int_0^inf
    exp(-t^3/3 + x t) dt`` is used.
    """
    x = complex(x)
    _check_range("scorer_hi", x)
    if deriv < 0:
        raise ValueError("deriv must be non-negative")
    value, mag = _hi_taylor(x, deriv)
    if abs(value) > 1e-5 * mag:
        return value
    return _hi_integral(x, deriv)
