"""Double-exponential (tanh-sinh) rule on a single segment.

Node distances to both endpoints are formed directly from the transform, so
integrands with an algebraic singularity at the start point keep full relative
accuracy as long as the singular point is ``t = start`` and the integrand is
handed ``t - start`` through ``offset=True``.
"""

from __future__ import annotations

import math

import numpy as np

EPS = np.finfo(float).eps


class QuadratureError(RuntimeError):
    """Refinement did not reach the requested tolerance."""

    def __init__(self, msg, levels=None):
        super().__init__(msg)
        self.levels = list(levels or [])


def _abscissae(u: np.ndarray):
    """Distances ``1 + x`` / ``1 - x`` and ``dx/du`` for ``x = tanh(pi/2 sinh u)``."""
    s = 0.5 * math.pi * np.sinh(u)
    e = np.exp(-2.0 * np.abs(s))
    near = 2.0 * e / (1.0 + e)  # distance to the nearer endpoint
    far = 2.0 - near
    lo = np.where(s < 0, near, far)  # 1 + x
    hi = np.where(s < 0, far, near)  # 1 - x
    dx = 0.5 * math.pi * np.cosh(u) * 4.0 * e / (1.0 + e) ** 2
    return lo, hi, dx


def tmax_for(exponent_re: float | None) -> float:
    """Half-width of the ``u`` window.

    A start singularity ``(t-a)**(e)`` with ``Re e`` close to -1 needs the
    window pushed further out, since the neglected end piece scales like
    ``(1+x_min)**(Re e + 1)``.
    """
    if exponent_re is None or exponent_re >= 0:
        return 4.5
    s = 23.0 / max(exponent_re + 1.0, 1e-3)
    return float(min(6.3, max(4.5, math.asinh(2.0 * s / math.pi))))


def segment(f, a: complex, b: complex, tol: float, *, offset: bool = False,
            tmax: float = 4.5, max_level: int = 12, min_level: int = 3, atol: float = 0.0):
    """Integrate ``f`` along the straight segment from ``a`` to ``b``.

    ``f`` is vectorised over a complex array.  With ``offset=True`` it receives
    ``t - a`` instead of ``t``.  Returns ``(value, est_error, evaluations)``.
    """
    half = 0.5 * (b - a)
    levels = []
    nevals = 0

    def block(u):
        nonlocal nevals
        lo, hi, dx = _abscissae(u)
        keep = dx > 0
        lo, hi, dx = lo[keep], hi[keep], dx[keep]
        d = np.where(lo <= hi, half * lo, (b - a) - half * hi)
        t = d if offset else a + d
        fv = np.asarray(f(t), dtype=complex)
        nevals += t.size
        prod = fv * dx
        bad = ~np.isfinite(prod)
        if bad.any():
            raise QuadratureError(f"integrand not finite at t={complex((a + d)[bad][0])}")
        return math.fsum(prod.real) + 1j * math.fsum(prod.imag), math.fsum(np.abs(prod))

    h = 1.0
    n = int(math.ceil(tmax / h))
    u = np.arange(-n, n + 1) * h
    u = u[np.abs(u) <= tmax]
    s, sabs = block(u)
    total = s * h
    absum = sabs
    levels.append(total * half)
    est = math.inf
    for level in range(1, max_level + 1):
        h *= 0.5
        n = int(math.ceil(tmax / h))
        u = (2 * np.arange(-(n // 2) - 1, n // 2 + 1) + 1) * h
        u = u[np.abs(u) <= tmax]
        s, sabs = block(u)
        new = 0.5 * total + s * h
        absum = absum + sabs
        levels.append(new * half)
        est = abs(new - total) * abs(half)
        floor = 64.0 * EPS * absum * h * abs(half)
        total = new
        value = total * half
        if level >= min_level and est <= max(tol * abs(value), floor, atol):
            return value, max(est, floor), nevals
    raise QuadratureError(
        f"tanh-sinh did not converge on [{a}, {b}]: last levels {levels[-2]}, {levels[-1]} "
        f"(difference {est:.3e})", levels[-2:])


def half_line(f, tol: float, *, direction: complex = 1.0, exponent_re: float | None = None,
              first: float = 1.0, max_segments: int = 200, witness=None, scale: float = 0.0):
    """Integrate ``f(t)`` for ``t = s * direction``, ``s`` from 0 to infinity.

    The ray is cut into ``[0, L], [L, 2L], [2L, 4L], ...``; the loop stops once
    the decay witness (default ``|f|`` at the far end times the segment
    length) is negligible against the running total and no longer growing.
    ``f`` receives ``t`` itself, so the start singularity is resolved
    relative to 0.  ``scale`` is a magnitude the tail is judged against in
    addition to the ray's own running total.
    """
    direction = complex(direction) / abs(direction)
    witness = witness or (lambda t: abs(complex(np.asarray(f(np.array([t])))[0])))
    lo = 0.0
    hi = float(first)
    total = 0j
    err = 0.0
    evals = 0
    prev_w = math.inf
    peak = 0.0
    for k in range(max_segments):
        a, b = lo * direction, hi * direction
        v, e, n = segment(f, a, b, tol, offset=(k == 0), tmax=tmax_for(exponent_re if k == 0 else None),
                          atol=tol * max(abs(total), scale))
        total += v
        err += e
        evals += n
        w = witness(b) * (hi - lo)
        peak = max(peak, abs(v))
        if w <= tol * 1e-3 * max(abs(total), peak, scale) and w <= prev_w:
            return total, err, evals
        prev_w = w
        lo, hi = hi, 2.0 * hi
    raise QuadratureError(f"ray integral did not decay within {max_segments} segments")
