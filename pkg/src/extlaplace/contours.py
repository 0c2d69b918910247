"""Steepest-descent contours for the two worked examples.

The path ``P(theta)`` leaves ``t = 0`` and follows ``e^{i theta} p(t) = s`` for
``s`` increasing from 0, so ``Im(e^{i theta} p)`` stays zero and the integrand
decays monotonically.  It is traced once by Newton continuation in ``s``
(``tools/generate_contours.py``) and shipped as JSON under ``data/``.
"""

from __future__ import annotations

import cmath
import json
import math
from importlib import resources

import numpy as np

from .quadrature import Contour, expm1_minus_t, sinh_minus_t

__all__ = [
    "EXAMPLES",
    "SHIPPED_THETAS",
    "trace_level_curve",
    "example_contour",
    "shipped_contour",
]

# name -> (p, p', mu, p0)
EXAMPLES = {
    "chu": (lambda t: complex(expm1_minus_t(np.array([t]))[0]), lambda t: cmath.exp(t) - 1, 2, 0.5),
    "anger": (lambda t: complex(sinh_minus_t(np.array([t]))[0]), lambda t: cmath.cosh(t) - 1, 3, 1 / 6),
}

SHIPPED_THETAS = {"0": 0.0, "pi": math.pi, "-pi": -math.pi,
                  "11pi/8": 11 * math.pi / 8, "-11pi/8": -11 * math.pi / 8}


def _newton(F, dF, t, target, tol=1e-14, maxit=30):
    for _ in range(maxit):
        step = (F(t) - target) / dF(t)
        t -= step
        if abs(step) <= tol * max(1.0, abs(t)):
            return t
    raise ArithmeticError("Newton iteration failed on the level curve")


def trace_level_curve(p, dp, mu: int, p0: complex, theta: float, s_min: float = 1e-4,
                      s_max: float = 60.0, ratio: float = 1.25, max_step: float = 0.25):
    """Nodes ``t_k`` with ``e^{i theta} p(t_k) = s_k``, ``s_k`` geometric from ``s_min`` to ``s_max``.

    The first node after ``0`` starts from ``(s e^{-i theta}/p0)^(1/mu)`` on
    the ray ``arg t = -theta/mu``.
    """
    rot = cmath.exp(1j * theta)
    F = lambda t: rot * p(t)
    dF = lambda t: rot * dp(t)
    s = s_min
    t = cmath.exp(1j * (-theta / mu)) * (s / abs(p0)) ** (1.0 / mu) * cmath.exp(-1j * cmath.phase(p0) / mu)
    t = _newton(F, dF, t, s)
    nodes = [0j, t]
    levels = [0.0, s]
    while s < s_max:
        s_next = min(s * ratio, s_max)
        # Euler predictor, halve until the corrector step is small
        h = s_next - s
        while True:
            guess = t + h / dF(t)
            try:
                tn = _newton(F, dF, guess, s + h)
            except (ArithmeticError, ZeroDivisionError, OverflowError):
                tn = None
            if tn is not None and abs(tn - t) <= max_step:
                break
            h *= 0.5
            if h < 1e-12 * s:
                raise ArithmeticError("level-curve continuation stalled")
        s += h
        t = tn
        nodes.append(t)
        levels.append(s)
    return nodes, levels


def example_contour(name: str, theta: float, **kw) -> Contour:
    """Trace ``P(theta)`` for a built-in example; the ray tail follows the last chord."""
    if name not in EXAMPLES:
        raise ValueError(f"unknown example {name!r}")
    p, dp, mu, p0 = EXAMPLES[name]
    nodes, levels = trace_level_curve(p, dp, mu, p0, theta, **kw)
    tail = nodes[-1] - nodes[-2]
    return Contour(tuple(nodes), 0j, tail, {"example": name, "theta": theta, "levels": levels})


def _data_name(name: str, key: str) -> str:
    return f"{name}_theta_{key.replace('/', 'o').replace('-', 'm')}.json"


def shipped_contour(name: str, theta: float, start_singularity: complex = 0j) -> Contour:
    """Load the shipped contour whose angle is closest to ``theta`` (must match within 1e-9)."""
    key = min(SHIPPED_THETAS, key=lambda k: abs(SHIPPED_THETAS[k] - theta))
    if abs(SHIPPED_THETAS[key] - theta) > 1e-9:
        raise ValueError(f"no shipped contour for theta={theta}; available: {sorted(SHIPPED_THETAS.values())}")
    path = resources.files("extlaplace") / "data" / _data_name(name, key)
    obj = json.loads(path.read_text())
    c = Contour.from_json(obj)
    return Contour(c.nodes, start_singularity, c.tail, c.meta)
