"""Coefficients of the extended Laplace expansion.

Given the local data at the endpoint ``a``

    p(t) = p(a) + sum_n p_n (t-a)**(n+mu)
    q(t) = sum_n q_n (t-a)**(n+lam-1)
    r(t) = sum_n r_n (t-a)**(n+nu)

this module computes the reversion coefficients ``a_n`` of
``t - a = sum a_n w**n`` (``w**mu = p(t) - p(a)``), the coefficients ``b_n`` of
``q/p'`` in powers of ``v = w**mu``, the coefficients ``c_n`` of the
secondary exponent, and the triangular array ``f[n][m]`` that multiplies the
Faxen integrals.  All residues are evaluated through series reversion and
composition in the uniformising variable ``w``; no contour integration is
involved.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .series import GeneralizedSeries, as_exponent, compose, fractional_pow, reversion

__all__ = [
    "ExpansionSpec",
    "BranchContext",
    "CoefficientTable",
    "GPolyTable",
    "InsufficientCoefficientsError",
    "select_branch",
    "compute_a",
    "compute_b",
    "compute_c",
    "bell_table",
    "bell_partial_ordinary",
    "compute_f",
    "g_poly_table",
    "rearrange_corollary2",
    "rearrange_hat",
]


class InsufficientCoefficientsError(ValueError):
    """Not enough local series coefficients for the requested order."""

    def __init__(self, name: str, required: int, given: int):
        super().__init__(f"{name}: {required} coefficients required, {given} supplied")
        self.name = name
        self.required = required
        self.given = given


def _complex_tuple(xs) -> tuple:
    return tuple(complex(x) for x in xs)


@dataclass(frozen=True)
class ExpansionSpec:
    """A validated problem instance.

    ``mu``, ``nu`` and ``lam`` are the exponents of the local expansions,
    ``varpi`` the slope angle of the contour at ``a`` and ``theta_range`` the
    closed interval of ``arg z`` to be covered.  ``contour_conditions`` records
    the caller's assertion that the global conditions on the contour (the sign
    of ``Re(e^{i theta}(p - p(a)))`` and the growth of ``r``) hold; they are not
    checked here.
    """

    mu: Fraction | float
    nu: Fraction | float
    lam: complex
    p_coeffs: tuple
    q_coeffs: tuple
    r_coeffs: tuple = ()
    p_at_a: complex = 0j
    varpi: float = 0.0
    theta_range: tuple = (0.0, 0.0)
    contour_conditions: bool = True

    def __post_init__(self):
        mu = as_exponent(self.mu)
        nu = as_exponent(self.nu)
        if not isinstance(mu, Fraction):
            mu = float(complex(mu).real)
        if not isinstance(nu, Fraction):
            nu = float(complex(nu).real)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "p_at_a", complex(self.p_at_a))
        object.__setattr__(self, "p_coeffs", _complex_tuple(self.p_coeffs))
        object.__setattr__(self, "q_coeffs", _complex_tuple(self.q_coeffs))
        object.__setattr__(self, "r_coeffs", _complex_tuple(self.r_coeffs))
        object.__setattr__(self, "varpi", float(self.varpi))
        t1, t2 = (float(t) for t in self.theta_range)
        object.__setattr__(self, "theta_range", (t1, t2))

        if not self.p_coeffs or self.p_coeffs[0] == 0:
            raise ValueError("p_0 must be nonzero")
        if not self.q_coeffs:
            raise ValueError("at least one q coefficient is required")
        if not (mu > nu >= 0):
            raise ValueError(f"need mu > nu >= 0, got mu={mu}, nu={nu}")
        if not self.lam.real > 0:
            raise ValueError("Re(lambda) must be positive")
        if not t1 <= t2:
            raise ValueError("theta_range must be ordered")
        if not t2 - t1 < math.pi:
            raise ValueError("theta_range must be shorter than pi")
        for name in ("p_coeffs", "q_coeffs", "r_coeffs"):
            if not all(cmath.isfinite(c) for c in getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def p0(self) -> complex:
        return self.p_coeffs[0]

    @property
    def r0(self) -> complex:
        return self.r_coeffs[0] if self.r_coeffs else 0j

    @property
    def has_r(self) -> bool:
        return any(c != 0 for c in self.r_coeffs)

    @property
    def integer_mu(self) -> int | None:
        if isinstance(self.mu, Fraction) and self.mu.denominator == 1:
            return self.mu.numerator
        return None

    def max_order(self) -> int:
        """Largest ``N`` for which the f table (rows ``n < N``) is computable."""
        n = min(len(self.p_coeffs), len(self.q_coeffs))
        if self.has_r:
            n = min(n, len(self.r_coeffs))
        return n


@dataclass(frozen=True)
class BranchContext:
    """Chosen argument ``varpi0`` of ``p_0`` together with the angles it was chosen for."""

    varpi0: float
    theta: float
    varpi: float

    def p0_pow(self, p0: complex, s) -> complex:
        """``p_0**s`` on the chosen branch."""
        return cmath.exp(complex(s) * complex(math.log(abs(p0)), self.varpi0))


def _branch_candidates(p0: complex, mu, theta: float, varpi: float) -> list[float]:
    base = cmath.phase(p0)
    shift = base + theta + float(mu) * varpi
    k0 = round(-shift / (2 * math.pi))
    out = []
    for k in (k0 - 1, k0, k0 + 1):
        if abs(shift + 2 * math.pi * k) <= math.pi / 2 + 1e-12:
            out.append(base + 2 * math.pi * k)
    return out


def select_branch(spec: ExpansionSpec, theta: float) -> BranchContext:
    """Choose ``varpi0 = Arg(p_0) + 2 pi k`` with ``|varpi0 + theta + mu varpi| <= pi/2``.

    The same ``varpi0`` must be admissible over the whole ``theta_range``; ties
    on the boundary go to the smaller ``|varpi0|``.
    """
    t1, t2 = spec.theta_range
    if not (t1 - 1e-12 <= theta <= t2 + 1e-12):
        raise ValueError(f"theta={theta} outside theta_range {spec.theta_range}")
    cands = _branch_candidates(spec.p0, spec.mu, theta, spec.varpi)
    if not cands:
        raise ValueError("no branch of arg p_0 satisfies the sector condition; "
                         "the contour/angle data are inconsistent")
    varpi0 = min(cands, key=lambda w: (abs(w), w))
    for t in (t1, t2):
        if not any(abs(w - varpi0) < 1e-12 for w in _branch_candidates(spec.p0, spec.mu, t, spec.varpi)):
            raise ValueError("arg p_0 branch depends on theta within theta_range; "
                             "the contour/angle data are inconsistent")
    return BranchContext(varpi0=varpi0, theta=float(theta), varpi=spec.varpi)


def _need(spec_coeffs: Sequence[complex], name: str, n: int) -> tuple:
    if len(spec_coeffs) < n:
        raise InsufficientCoefficientsError(name, n, len(spec_coeffs))
    return tuple(spec_coeffs[:n])


def _w_map(spec: ExpansionSpec, branch: BranchContext, n: int) -> GeneralizedSeries:
    """``w = (p(t) - p(a))**(1/mu)`` as a series in ``u = t - a`` with ``n`` terms."""
    pser = GeneralizedSeries(_need(spec.p_coeffs, "p_coeffs", n), 0, 1)
    w_over_u = fractional_pow(pser, 1 / Fraction(spec.mu) if isinstance(spec.mu, Fraction)
                              else 1.0 / spec.mu, branch.varpi0)
    return w_over_u.shift(1)


def compute_a(spec: ExpansionSpec, branch: BranchContext, N: int) -> GeneralizedSeries:
    """Reversion ``t - a = sum_{n=1}^{N} a_n w**n`` (needs ``p_0..p_{N-1}``)."""
    return reversion(_w_map(spec, branch, N))


def _arg_a1(spec: ExpansionSpec, branch: BranchContext) -> float:
    return -branch.varpi0 / float(spec.mu)


def compute_b(spec: ExpansionSpec, branch: BranchContext, N: int) -> np.ndarray:
    """``b_0..b_{N-1}`` with ``q/p' = sum b_n v**((n+lam)/mu - 1)``.

    Needs ``p_0..p_{N-1}`` and ``q_0..q_{N-1}``.
    """
    if N <= 0:
        return np.zeros(0, dtype=complex)
    qs = GeneralizedSeries(_need(spec.q_coeffs, "q_coeffs", N), 0, 1)
    ps = _need(spec.p_coeffs, "p_coeffs", N)
    mu = complex(spec.mu)
    dp = GeneralizedSeries([(k + mu) * c for k, c in enumerate(ps)], 0, 1)
    u_of_w = compute_a(spec, branch, N)
    a_over_w = u_of_w.shift(-1)
    # q/p' = u**(lam - mu) * Q/P~ ; u = w * A(w) so u**(lam-mu) = w**(lam-mu) A**(lam-mu)
    ratio = compose(qs / dp, u_of_w)
    lead = fractional_pow(a_over_w, spec.lam - mu, _arg_a1(spec, branch))
    b = (lead * ratio).truncate(N)
    return np.asarray(b.coeffs, dtype=complex)


def compute_c(spec: ExpansionSpec, branch: BranchContext, N: int) -> np.ndarray:
    """``c_1..c_N`` (returned at indices ``0..N-1``).

    ``r(t) - r_0 p_0**(-nu/mu) v**(nu/mu) = sum_{n>=1} c_n v**((n+nu)/mu)``;
    needs ``p_0..p_N`` and ``r_0..r_N``.
    """
    if N <= 0:
        return np.zeros(0, dtype=complex)
    if not spec.has_r:
        return np.zeros(N, dtype=complex)
    rs = GeneralizedSeries(_need(spec.r_coeffs, "r_coeffs", N + 1), 0, 1)
    u_of_w = compute_a(spec, branch, N + 1)
    a_over_w = u_of_w.shift(-1)
    comp = compose(rs, u_of_w)
    lead = fractional_pow(a_over_w, spec.nu, _arg_a1(spec, branch))
    c = (lead * comp).truncate(N + 1)
    return np.asarray(c.coeffs[1:], dtype=complex)


def bell_table(c: Sequence[complex], N: int) -> np.ndarray:
    """Partial ordinary Bell polynomials ``B[n, m]`` for ``0 <= m <= n < N``.

    ``c[k-1]`` holds ``c_k``.  Uses ``B[n, m] = sum_k c_k B[n-k, m-1]``.
    """
    B = np.zeros((N, N), dtype=complex)
    if N == 0:
        return B
    B[0, 0] = 1.0
    c = np.asarray(c, dtype=complex)
    for m in range(1, N):
        for n in range(m, N):
            kmax = n - m + 1
            if kmax > len(c):
                raise IndexError(f"B[{n},{m}] needs c_1..c_{kmax}")
            k = np.arange(1, kmax + 1)
            B[n, m] = np.sum(c[k - 1] * B[n - k, m - 1])
    return B


def bell_partial_ordinary(c: Sequence[complex], n: int, m: int) -> complex:
    """``B_{n,m}(c_1, ..., c_{n-m+1})``."""
    if not 0 <= m <= n:
        raise IndexError("need 0 <= m <= n")
    return complex(bell_table(c, n + 1)[n, m])


@dataclass
class CoefficientTable:
    """``a`` (a_1..), ``b`` (b_0..), ``c`` (c_1.. at index 0) and ``f[n, m]``."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    f: np.ndarray
    branch: BranchContext | None = field(default=None, compare=False)

    @property
    def order(self) -> int:
        return self.f.shape[0]

    def to_json(self) -> dict:
        def pairs(xs):
            return [[float(z.real), float(z.imag)] for z in xs]
        return {
            "a": pairs(self.a),
            "b": pairs(self.b),
            "c": pairs(self.c),
            "f": [pairs(self.f[n, : n + 1]) for n in range(self.order)],
        }


def compute_f(spec: ExpansionSpec, branch: BranchContext, N: int) -> CoefficientTable:
    """Rows ``n < N`` of ``f[n, m] = (1/m!) sum_{j=m}^{n} b_{n-j} B_{j,m}(c)``."""
    a = np.asarray(compute_a(spec, branch, N).coeffs, dtype=complex) if N else np.zeros(0, complex)
    b = compute_b(spec, branch, N)
    c = compute_c(spec, branch, max(N - 1, 0))
    B = bell_table(c, N)
    f = np.zeros((N, N), dtype=complex)
    for n in range(N):
        for m in range(n + 1):
            j = np.arange(m, n + 1)
            f[n, m] = np.sum(b[n - j] * B[j, m]) / math.factorial(m)
    return CoefficientTable(a=a, b=b, c=c, f=f, branch=branch)


@dataclass
class GPolyTable:
    """Polynomials ``g[j][n](x)`` with ``w^(j) = sum_{n<mu} g[j][n] w^(n)``.

    Coefficients are stored in increasing powers of ``x``.
    """

    mu: int
    lam: complex
    g: list

    def __call__(self, j: int, n: int, x) -> complex:
        return complex(P.polyval(x, self.g[j][n]))

    @property
    def J(self) -> int:
        return len(self.g) - 1


def g_poly_table(mu: int, lam, J: int) -> GPolyTable:
    """Reduce derivatives of ``w(x) = Fi(1/mu, lam/mu; x)`` using ``mu w^(mu) = x w' + lam w``."""
    if int(mu) != mu or mu < 2:
        raise ValueError("mu must be an integer >= 2")
    mu = int(mu)
    lam = complex(lam)
    zero = np.zeros(1, dtype=complex)
    g: list[list[np.ndarray]] = []
    for j in range(min(J, mu - 1) + 1):
        row = [zero.copy() for _ in range(mu)]
        row[j] = np.ones(1, dtype=complex)
        g.append(row)
    if J >= mu:
        row = [zero.copy() for _ in range(mu)]
        row[0] = np.array([lam / mu], dtype=complex)
        row[1] = np.array([0, 1 / mu], dtype=complex)
        g.append(row)
    x_over_mu = np.array([0, 1 / mu], dtype=complex)
    for j in range(mu, J):
        prev = g[j]
        top = prev[mu - 1]
        row = [None] * mu
        row[0] = P.polyadd(P.polyder(prev[0]), (lam / mu) * top)
        row[1] = P.polyadd(P.polyadd(prev[0], P.polyder(prev[1])), P.polymul(x_over_mu, top))
        for n in range(2, mu):
            row[n] = P.polyadd(prev[n - 1], P.polyder(prev[n]))
        g.append([np.asarray(r, dtype=complex) for r in row])
    return GPolyTable(mu=mu, lam=lam, g=g)


def _collapse(f: np.ndarray, g: GPolyTable, x: complex, k: int, row: int) -> complex:
    """``sum_{j=row}^{2 row} g[j][k](x) f[row, j - row]``."""
    if row >= f.shape[0]:
        raise InsufficientCoefficientsError("f rows", row + 1, f.shape[0])
    if 2 * row > g.J:
        raise ValueError(f"g table needs j up to {2 * row}")
    return sum(g(j, k, x) * f[row, j - row] for j in range(row, 2 * row + 1))


def rearrange_corollary2(table: CoefficientTable, g: GPolyTable, x, M: int) -> np.ndarray:
    """``ft[n, m]`` for ``n < mu``, ``m < M``; uses f rows ``ceil(n/2) + m``."""
    mu = g.mu
    out = np.zeros((mu, M), dtype=complex)
    for n in range(mu):
        h = -(-n // 2)
        for m in range(M):
            out[n, m] = _collapse(table.f, g, complex(x), n, h + m)
    return out


def rearrange_hat(table: CoefficientTable, g: GPolyTable, x, M: int) -> np.ndarray:
    """Even-row variant: ``fh[n, m]`` uses f row ``2 ceil(n/2) + 2m``.

    Appropriate when every odd row of f vanishes, so that only powers
    ``z**(-(2 ceil(n/2) + 2m + lam)/mu)`` survive.
    """
    mu = g.mu
    out = np.zeros((mu, M), dtype=complex)
    for n in range(mu):
        h = -(-n // 2)
        for m in range(M):
            out[n, m] = _collapse(table.f, g, complex(x), n, 2 * h + 2 * m)
    return out
