"""Assembly and evaluation of the extended Laplace expansion.

``evaluate`` sums

    e^{-z p(a)} sum_{n<N} z^{-(n+lam)/mu} sum_{m<=n} f[n,m] Fi(nu/mu, (n+lam+m nu)/mu; x)

with ``x = r_0 p_0^{-nu/mu}``; ``evaluate_corollary2`` sums the regrouped form
that only needs the ``mu`` functions ``Fi(1/mu, (lam+k)/mu; x)``, ``k < mu``.
All powers of ``z`` use ``exp(s (log|z| + i theta))`` for the chosen
``theta``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .coeffs import (
    BranchContext,
    CoefficientTable,
    ExpansionSpec,
    InsufficientCoefficientsError,
    compute_f,
    g_poly_table,
    rearrange_corollary2,
    select_branch,
)
from .faxen import FaxenQuery, fi

__all__ = [
    "ExpansionEvaluation",
    "resolve_theta",
    "zpow",
    "faxen_argument",
    "assemble_term",
    "evaluate",
    "evaluate_corollary2",
    "corollary_coefficients",
]

_TWO_PI = 2 * math.pi


def zpow(z_abs: float, theta: float, s) -> complex:
    """``z**s`` on the sheet ``arg z = theta``."""
    return cmath.exp(complex(s) * complex(math.log(z_abs), theta))


def resolve_theta(spec: ExpansionSpec, z: complex, sheet: int | None = None) -> float:
    """``arg z`` on the requested sheet, or the first sheet that lies in ``theta_range``."""
    z = complex(z)
    if z == 0:
        raise ValueError("z must be nonzero")
    base = cmath.phase(z)
    t1, t2 = spec.theta_range
    if sheet is not None:
        theta = base + _TWO_PI * int(sheet)
        if not (t1 - 1e-12 <= theta <= t2 + 1e-12):
            raise ValueError(f"arg z = {theta:.6g} on sheet {sheet} lies outside theta_range {spec.theta_range}")
        return theta
    k_lo = math.ceil((t1 - base - 1e-12) / _TWO_PI)
    theta = base + _TWO_PI * k_lo
    if theta > t2 + 1e-12:
        raise ValueError(f"no sheet puts arg z = {base:.6g} inside theta_range {spec.theta_range}")
    return theta


def faxen_argument(spec: ExpansionSpec, branch: BranchContext) -> complex:
    """``r_0 / p_0**(nu/mu)`` with the branch-consistent power of ``p_0``."""
    if spec.r0 == 0:
        return 0j
    return spec.r0 / branch.p0_pow(spec.p0, complex(spec.nu) / complex(spec.mu))


@dataclass
class ExpansionEvaluation:
    z: complex
    theta: float
    terms: list
    partial_sums: list
    heuristic_error: float
    prefactor: complex
    exponents: list = field(default_factory=list)
    form: str = "theorem"

    @property
    def value(self) -> complex:
        return self.partial_sums[-1]

    def to_json(self) -> dict:
        def pair(c):
            c = complex(c)
            return [c.real, c.imag]
        return {
            "form": self.form,
            "z": pair(self.z),
            "theta": self.theta,
            "prefactor": pair(self.prefactor),
            "exponents": [pair(e) for e in self.exponents],
            "terms": [pair(t) for t in self.terms],
            "partial_sums": [pair(s) for s in self.partial_sums],
            "heuristic_error": self.heuristic_error,
        }


def _fi(alpha, beta, x) -> complex:
    return fi(FaxenQuery(alpha, beta, x)).value


def assemble_term(table: CoefficientTable, spec: ExpansionSpec, branch: BranchContext, n: int):
    """``(sum_m f[n,m] Fi(nu/mu, (n+lam+m nu)/mu; x), (n+lam)/mu)``."""
    if n >= table.order:
        raise InsufficientCoefficientsError("f rows", n + 1, table.order)
    mu = complex(spec.mu)
    nu = complex(spec.nu)
    alpha = float(spec.nu) / float(spec.mu)
    x = faxen_argument(spec, branch)
    acc = 0j
    for m in range(n + 1):
        c = table.f[n, m]
        if c == 0:
            continue
        beta = (n + spec.lam + m * nu) / mu
        assert beta.real > 0
        acc += c * _fi(alpha, beta, x)
    return acc, (n + spec.lam) / mu


def evaluate(spec: ExpansionSpec, z, N: int, sheet: int | None = None,
             table: CoefficientTable | None = None) -> ExpansionEvaluation:
    """Partial sums of the expansion with terms ``n < N``.

    ``heuristic_error`` is ``|prefactor * term_N|`` (the first omitted term)
    when one more coefficient row is available, otherwise ``inf``.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    z = complex(z)
    theta = resolve_theta(spec, z, sheet)
    branch = select_branch(spec, theta)
    if table is None:
        rows = N + 1 if spec.max_order() > N else N
        table = compute_f(spec, branch, rows)
    elif table.order < N:
        raise InsufficientCoefficientsError("f rows", N, table.order)
    zabs = abs(z)
    prefactor = cmath.exp(-z * spec.p_at_a)
    terms, exps, sums = [], [], []
    acc = 0j
    for n in range(N):
        c, s = assemble_term(table, spec, branch, n)
        t = c / zpow(zabs, theta, s)
        terms.append(t)
        exps.append(s)
        acc += t
        sums.append(prefactor * acc)
    err = math.inf
    if table.order > N:
        c, s = assemble_term(table, spec, branch, N)
        err = abs(prefactor * c / zpow(zabs, theta, s))
    return ExpansionEvaluation(z, theta, terms, sums, err, prefactor, exps)


def _corollary_check(spec: ExpansionSpec) -> int:
    mu = spec.integer_mu
    if mu is None or mu < 2:
        raise ValueError("the regrouped form needs an integer mu >= 2")
    if spec.nu != 1:
        raise ValueError("the regrouped form needs nu = 1")
    return mu


def evaluate_corollary2(spec: ExpansionSpec, z, M: int, sheet: int | None = None,
                        matched: bool = False) -> ExpansionEvaluation:
    """The regrouped expansion with ``m < M`` in each of the ``mu`` inner sums.

    Terms are collected by the power ``z^{-(r+lam)/mu}``, ``r = ceil(k/2) + m``.
    With ``matched=True`` only ``r < M`` is kept; each kept group is then
    algebraically identical to term ``r`` of :func:`evaluate`, so the two
    agree with ``N = M`` up to rounding.
    """
    mu = _corollary_check(spec)
    if M < 1:
        raise ValueError("M must be at least 1")
    z = complex(z)
    theta = resolve_theta(spec, z, sheet)
    branch = select_branch(spec, theta)
    rows = mu // 2 + M  # ceil((mu-1)/2) + M rows of f
    table = compute_f(spec, branch, rows)
    x = faxen_argument(spec, branch)
    g = g_poly_table(mu, spec.lam, 2 * (rows - 1))
    ft = rearrange_corollary2(table, g, x, M)
    alpha = 1.0 / mu
    fis = [_fi(alpha, (spec.lam + k) / mu, x) for k in range(mu)]
    zabs = abs(z)
    prefactor = cmath.exp(-z * spec.p_at_a)
    r_top = M if matched else rows
    groups = [0j] * r_top
    for k in range(mu):
        h = (k + 1) // 2
        for m in range(M):
            r = h + m
            if r < r_top:
                groups[r] += fis[k] * ft[k, m]
    terms, exps, sums = [], [], []
    acc = 0j
    for r in range(r_top):
        s = (r + spec.lam) / mu
        t = groups[r] / zpow(zabs, theta, s)
        terms.append(t)
        exps.append(s)
        acc += t
        sums.append(prefactor * acc)
    # first omitted group: the m = M entries of every inner sum
    err = math.inf
    try:
        table2 = compute_f(spec, branch, rows + 1)
        ft2 = rearrange_corollary2(table2, g_poly_table(mu, spec.lam, 2 * rows), x, M + 1)
        nxt = sum(fis[k] * ft2[k, M] / zpow(zabs, theta, ((k + 1) // 2 + M + spec.lam) / mu)
                  for k in range(mu))
        err = abs(prefactor * nxt)
    except InsufficientCoefficientsError:
        pass
    return ExpansionEvaluation(z, theta, terms, sums, err, prefactor, exps, form="corollary")


def corollary_coefficients(spec: ExpansionSpec, theta: float, M: int) -> np.ndarray:
    """``ft[k, m]`` for ``k < mu``, ``m < M`` at the given ``theta``."""
    mu = _corollary_check(spec)
    branch = select_branch(spec, theta)
    rows = mu // 2 + M
    table = compute_f(spec, branch, rows)
    g = g_poly_table(mu, spec.lam, 2 * (rows - 1))
    return rearrange_corollary2(table, g, faxen_argument(spec, branch), M)
