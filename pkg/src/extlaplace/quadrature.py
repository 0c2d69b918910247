"""Direct quadrature of the integrals the expansions approximate.

Everything here is a reference value: piecewise tanh-sinh along a polygonal
contour, an optional ray tail, and a handful of built-in integrands for the
worked examples and for Faxen's integral.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._tanhsinh import QuadratureError, half_line, segment, tmax_for
from .faxen import FaxenQuery, rgamma

__all__ = [
    "Contour",
    "QuadratureError",
    "QuadratureResult",
    "integrate_contour",
    "faxen_by_quadrature",
    "tail_bound_check",
    "expm1_minus_t",
    "sinh_minus_t",
    "chu_integrand",
    "anger_integrand",
    "watson_integrand",
    "faxen_integrand",
    "BUILTINS",
    "builtin_integrand",
]


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _unpair(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex number must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


@dataclass(frozen=True)
class Contour:
    """Polygonal path ``nodes[0] -> nodes[1] -> ...`` with an optional ray tail.

    ``start_singularity`` is the exponent ``e`` of the algebraic behaviour
    ``(t - nodes[0])**e`` at the start; for a Laplace-type integral it is
    ``lambda - 1``.  ``tail`` is ``None`` for a finite path or the direction of
    the ray leaving the last node.
    """

    nodes: tuple
    start_singularity: complex = 0j
    tail: complex | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        nodes = tuple(complex(z) for z in self.nodes)
        if len(nodes) < 2:
            raise ValueError("a contour needs at least two nodes")
        if not all(cmath.isfinite(z) for z in nodes):
            raise ValueError("contour nodes must be finite")
        for k in range(len(nodes) - 1):
            if nodes[k] == nodes[k + 1]:
                raise ValueError(f"contour nodes {k} and {k + 1} coincide")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "start_singularity", complex(self.start_singularity))
        if self.tail is not None:
            d = complex(self.tail)
            if d == 0 or not cmath.isfinite(d):
                raise ValueError("ray direction must be finite and nonzero")
            object.__setattr__(self, "tail", d / abs(d))

    @classmethod
    def ray(cls, direction: complex = 1.0, start_singularity: complex = 0j, start: complex = 0j,
            first: float = 1.0):
        d = complex(direction) / abs(direction)
        return cls((start, start + first * d), start_singularity, d)

    def to_json(self) -> dict:
        out = {
            "nodes": [_pair(z) for z in self.nodes],
            "start_singularity": _pair(self.start_singularity),
            "tail": {"type": "finite"} if self.tail is None else {"type": "ray", "dir": _pair(self.tail)},
        }
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Contour":
        tail = obj.get("tail", {"type": "finite"})
        kind = tail.get("type")
        if kind == "finite":
            d = None
        elif kind == "ray":
            d = _unpair(tail["dir"])
        else:
            raise ValueError(f"unknown tail type {kind!r}")
        return cls(tuple(_unpair(v) for v in obj["nodes"]),
                   _unpair(obj.get("start_singularity", [0.0, 0.0])), d, dict(obj.get("meta", {})))

    @classmethod
    def load(cls, path) -> "Contour":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    est_error: float
    evaluations: int

    def to_json(self) -> dict:
        return {"value": _pair(self.value), "est_error": float(self.est_error),
                "evaluations": int(self.evaluations)}


def integrate_contour(f: Callable, path: Contour, tol: float = 1e-10,
                      witness: Callable | None = None) -> QuadratureResult:
    """``int f(t) dt`` along ``path``.

    ``f`` must accept a complex numpy array.  The first segment resolves the
    start singularity; each later segment is judged against the running
    total.  A ray tail is cut into geometric pieces and stopped once
    ``witness(t)`` (default ``|f(t)|``) at the end of a piece, times its
    length, is below ``tol * 1e-3`` of the accumulated value.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    nodes = path.nodes
    total = 0j
    err = 0.0
    evals = 0
    a0 = nodes[0]
    for k in range(len(nodes) - 1):
        a, b = nodes[k], nodes[k + 1]
        if k == 0:
            g = (lambda t, _a=a0: f(_a + t)) if a0 != 0 else f
            v, e, n = segment(g, 0j, b - a, tol, offset=True, tmax=tmax_for(path.start_singularity.real))
        else:
            v, e, n = segment(f, a, b, tol, atol=tol * abs(total))
        total += v
        err += e
        evals += n
    if path.tail is not None:
        end = nodes[-1]
        first = max(abs(nodes[-1] - nodes[-2]), 1e-3)
        wit = None
        if witness is not None:
            wit = lambda u: float(witness(end + u))
        v, e, n = half_line(lambda u: f(end + u), tol, direction=path.tail, first=first,
                            witness=wit, scale=abs(total))
        total += v
        err += e
        evals += n
    return QuadratureResult(total, err, evals)


def faxen_integrand(q: FaxenQuery) -> Callable:
    alpha, beta, x = q.alpha, q.beta, q.x

    def f(t):
        t = np.asarray(t, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.exp(-t + x * t ** alpha + (beta - 1) * np.log(t))
    return f


def faxen_by_quadrature(q: FaxenQuery, ray_angle: float = 0.0, tol: float = 1e-12) -> QuadratureResult:
    """Faxen's integral along the ray ``arg t = ray_angle``, ``|ray_angle| < pi/2``."""
    if not abs(ray_angle) < math.pi / 2:
        raise ValueError("ray_angle must satisfy |ray_angle| < pi/2")
    path = Contour.ray(cmath.exp(1j * ray_angle), q.beta - 1)
    return integrate_contour(faxen_integrand(q), path, tol)


def tail_bound_check(alpha: float, beta, x, zeta, tol: float = 1e-10) -> float:
    """Ratio ``|int_zeta^inf exp(-t + x t^alpha) t^(beta-1) dt| / |exp(-zeta + x zeta^alpha) zeta^(beta-1)|``.

    After ``t = zeta (1 + u)`` the ratio is ``|zeta int exp(-zeta u + x zeta^alpha
    ((1+u)^alpha - 1)) (1+u)^(beta-1) du|`` with ``u`` running along
    ``arg u = -arg zeta``, which is what is integrated here.
    """
    alpha = float(alpha)
    beta = complex(beta)
    x = complex(x)
    zeta = complex(zeta)
    if not 0 <= alpha < 1:
        raise ValueError("alpha must lie in [0, 1)")
    if abs(zeta) < 10 or abs(cmath.phase(zeta)) > math.pi / 2 + 1e-12:
        raise ValueError("need |zeta| >= 10 and |arg zeta| <= pi/2")
    za = zeta ** alpha

    def f(u):
        u = np.asarray(u, dtype=complex)
        return np.exp(-zeta * u + x * za * ((1 + u) ** alpha - 1) + (beta - 1) * np.log1p(u))

    d = cmath.exp(-1j * cmath.phase(zeta))
    res = integrate_contour(f, Contour.ray(d, 0j, first=1.0 / abs(zeta)), tol)
    return abs(zeta * res.value)


# ---------------------------------------------------------------------------
# built-in integrands of the worked examples

def _series_tail(t, start: int, step: int, nterms: int):
    """``sum_{k} t**k / k!`` for ``k = start, start+step, ...`` (``nterms`` terms)."""
    term = t ** start / math.factorial(start)
    acc = term.copy()
    k = start
    for _ in range(nterms - 1):
        for j in range(1, step + 1):
            term = term * t / (k + j)
        k += step
        acc = acc + term
    return acc


def expm1_minus_t(t):
    """``exp(t) - 1 - t`` without cancellation near 0."""
    t = np.asarray(t, dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        direct = np.expm1(t) - t
    return np.where(np.abs(t) < 0.5, _series_tail(t, 2, 1, 18), direct)


def sinh_minus_t(t):
    """``sinh(t) - t`` without cancellation near 0."""
    t = np.asarray(t, dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        direct = np.sinh(t) - t
    return np.where(np.abs(t) < 0.5, _series_tail(t, 3, 2, 10), direct)


def _log_expm1(t):
    """``log(exp(t) - 1)``, analytic in the strip ``|Im t| < 2 pi`` cut along ``(-inf, 0]``."""
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        direct = t + np.log(-np.expm1(-t))
        # near 0: t + log t + log((1 - e^-t)/t)
        ratio = -_series_tail(-t, 1, 1, 18) / np.where(t == 0, 1, t)
        near = t + np.log(t) + np.log(ratio)
    return np.where(np.abs(t) < 0.5, near, direct)


def _zpow(z_abs: float, theta: float, power: float) -> complex:
    return cmath.exp(power * complex(math.log(z_abs), theta))


def chu_integrand(a, tau, big_abs: float, theta: float = 0.0, normalised: bool = True) -> Callable:
    """Integrand for ``U(a, b, b + tau b^(1/2))`` after ``s = e^t - 1``; ``b = big_abs e^(i theta)``.

    Includes the ``1/Gamma(a)`` factor when ``normalised``.
    """
    a = complex(a)
    tau = complex(tau)
    b = _zpow(big_abs, theta, 1.0)
    root = _zpow(big_abs, theta, 0.5)
    scale = rgamma(a) if normalised else 1.0

    def f(t):
        t = np.asarray(t, dtype=complex)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
            r = -tau * np.expm1(t)
            expo = -b * expm1_minus_t(t) + root * r + (a - 1) * _log_expm1(t) - a * t
            return scale * np.exp(expo)
    return f


def anger_integrand(tau, rho_abs: float, theta: float = 0.0) -> Callable:
    """Integrand for ``A_{-rho}(rho + tau rho^(1/3))``; ``rho = rho_abs e^(i theta)``; includes ``1/pi``."""
    tau = complex(tau)
    rho = _zpow(rho_abs, theta, 1.0)
    root = _zpow(rho_abs, theta, 1.0 / 3.0)

    def f(t):
        t = np.asarray(t, dtype=complex)
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            return np.exp(-rho * sinh_minus_t(t) - root * tau * np.sinh(t)) / math.pi
    return f


def watson_integrand(lam, z) -> Callable:
    """``exp(-z t) t^(lam-1)``."""
    lam = complex(lam)
    z = complex(z)

    def f(t):
        t = np.asarray(t, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.exp(-z * t + (lam - 1) * np.log(t))
    return f


def _cnum(v):
    return _unpair(v) if isinstance(v, (list, tuple)) else complex(v)


BUILTINS = {
    "chu": lambda p: chu_integrand(_cnum(p["a"]), _cnum(p["tau"]), float(p["big"]), float(p.get("theta", 0.0))),
    "anger": lambda p: anger_integrand(_cnum(p["tau"]), float(p["big"]), float(p.get("theta", 0.0))),
    "watson": lambda p: watson_integrand(_cnum(p["lam"]), _cnum(p["z"])),
    "faxen": lambda p: faxen_integrand(FaxenQuery(float(p["alpha"]), _cnum(p["beta"]), _cnum(p["x"]))),
}


def builtin_integrand(name: str, params: dict) -> Callable:
    if name.startswith("builtin:"):
        name = name[len("builtin:"):]
    if name not in BUILTINS:
        raise ValueError(f"unknown built-in integrand {name!r}; choose from {sorted(BUILTINS)}")
    try:
        return BUILTINS[name](params)
    except KeyError as exc:
        raise ValueError(f"integrand {name!r} needs parameter {exc.args[0]!r}") from None
