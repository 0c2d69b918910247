"""Truncated generalized power series with complex coefficients.

A :class:`GeneralizedSeries` represents

    c_0 u**g + c_1 u**(g + s) + ... + c_{N-1} u**(g + (N-1) s) + O(u**(g + N s))

where the offset ``g`` is an exponent (exact rational, or an opaque complex
number), the step ``s`` is a positive :class:`fractions.Fraction` and ``N`` is
the number of known coefficients.  The O-term is part of the value: every
operation propagates the exponent of the first unknown term (the *horizon*)
and never reports coefficients beyond it.

Exponents that are rational are kept as :class:`~fractions.Fraction` so that
lattice bookkeeping (``mu = 3``, ``nu = 1`` and so on) is exact.  Opaque
complex offsets (for instance ``lambda - 1`` with complex ``lambda``) are
allowed; their lattice differences are checked to within ``1e-12``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Iterable, Sequence, Union

import numpy as np

Exponent = Union[Fraction, complex]

__all__ = [
    "GeneralizedSeries",
    "LatticeError",
    "BranchError",
    "as_exponent",
    "add",
    "mul",
    "fractional_pow",
    "exp_series",
    "log_series",
    "reversion",
    "compose",
    "series_to_json",
    "series_from_json",
]

_MAX_DENOMINATOR = 1 << 12
_LATTICE_TOL = 1e-12


class LatticeError(ValueError):
    """Exponent lattices of two series cannot be reconciled."""


class BranchError(ValueError):
    """A fractional power was requested without a branch for the leading coefficient."""


def as_exponent(x) -> Exponent:
    """Convert ``x`` to an exponent, exact whenever it is a small-denominator rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    z = complex(x)
    if z.imag == 0.0 and math.isfinite(z.real):
        f = Fraction(z.real)
        if f.denominator <= _MAX_DENOMINATOR:
            return f
    return z


def _is_rational(e) -> bool:
    return isinstance(e, Fraction)


def _real(e: Exponent) -> float:
    return float(e) if _is_rational(e) else e.real


def _lattice_index(diff: Exponent, step: Fraction) -> int:
    """Return ``k`` with ``diff == k * step``, or raise :class:`LatticeError`."""
    if _is_rational(diff):
        q = diff / step
        if q.denominator != 1:
            raise LatticeError(f"exponent difference {diff} is not a multiple of step {step}")
        return q.numerator
    q = diff / float(step)
    k = round(q.real)
    if abs(q.imag) > _LATTICE_TOL or abs(q.real - k) > _LATTICE_TOL * max(1.0, abs(q.real)):
        raise LatticeError(f"exponent difference {diff} is not a multiple of step {step}")
    return int(k)


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    a, b = abs(a), abs(b)
    if a == 0:
        return b
    if b == 0:
        return a
    num = math.gcd(a.numerator * b.denominator, b.numerator * a.denominator)
    return Fraction(num, a.denominator * b.denominator)


def _principal_arg(c: complex) -> float:
    return cmath.phase(c)


def _cpow(c: complex, alpha, arg: float | None) -> complex:
    """``c**alpha`` with ``arg`` as the argument of ``c`` (principal if None)."""
    if isinstance(alpha, (int, np.integer)) or (_is_rational(alpha) and alpha.denominator == 1):
        return complex(c) ** int(alpha)
    if arg is None:
        raise BranchError("a branch (argument of the leading coefficient) is required "
                          "for a non-integer power")
    return cmath.exp(complex(alpha) * complex(math.log(abs(c)), arg))


@dataclass(frozen=True, eq=False)
class GeneralizedSeries:
    """Immutable truncated series ``sum_n c_n u**(offset + n*step) + O(u**horizon)``."""

    coeffs: tuple
    offset: Exponent = Fraction(0)
    step: Fraction = Fraction(1)

    def __init__(self, coeffs: Iterable = (), offset=0, step=1):
        step = Fraction(step)
        if step <= 0:
            raise ValueError("step must be positive")
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in coeffs))
        object.__setattr__(self, "offset", as_exponent(offset))
        object.__setattr__(self, "step", step)

    # -- basic properties -------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def horizon(self) -> Exponent:
        """Exponent of the O-term."""
        return self.offset + self.order * self.step

    def exponent(self, n: int) -> Exponent:
        return self.offset + n * self.step

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __repr__(self) -> str:
        return (f"GeneralizedSeries(coeffs={list(self.coeffs)!r}, offset={self.offset!r}, "
                f"step={self.step!r})")

    def coefficient_at(self, exponent) -> complex:
        """Coefficient of ``u**exponent``; raises if the exponent lies beyond the horizon."""
        k = _lattice_index(as_exponent(exponent) - self.offset, self.step)
        if k < 0:
            return 0j
        if k >= self.order:
            raise IndexError(f"u**{exponent} lies beyond the truncation horizon {self.horizon}")
        return self.coeffs[k]

    def allclose(self, other: "GeneralizedSeries", rtol=1e-12, atol=1e-14) -> bool:
        """Coefficientwise comparison on the common lattice up to the smaller horizon."""
        d = sub(self, other)
        scale = max([abs(c) for c in self.coeffs + other.coeffs] + [0.0])
        return all(abs(c) <= atol + rtol * scale for c in d.coeffs)

    # -- lattice manipulation -------------------------------------------
    def refine(self, step) -> "GeneralizedSeries":
        """Re-express on a finer lattice; lossless and idempotent."""
        step = Fraction(step)
        ratio = self.step / step
        if ratio.denominator != 1:
            raise LatticeError(f"step {step} does not divide {self.step}")
        r = ratio.numerator
        if r == 1:
            return self
        coeffs = [0j] * (self.order * r)
        for n, c in enumerate(self.coeffs):
            coeffs[n * r] = c
        return GeneralizedSeries(coeffs, self.offset, step)

    def shift(self, delta) -> "GeneralizedSeries":
        """Multiply by ``u**delta``."""
        return GeneralizedSeries(self.coeffs, self.offset + as_exponent(delta), self.step)

    def truncate(self, order: int) -> "GeneralizedSeries":
        return GeneralizedSeries(self.coeffs[:max(order, 0)], self.offset, self.step)

    def truncate_to_horizon(self, horizon) -> "GeneralizedSeries":
        """Drop coefficients at or beyond ``horizon``, refining the lattice if needed."""
        diff = as_exponent(horizon) - self.offset
        s = self
        if _is_rational(diff) and diff > 0:
            s = self.refine(_frac_gcd(self.step, diff))
        k = _lattice_index(diff, s.step)
        return s.truncate(min(k, s.order))

    def extend_to_horizon(self, horizon) -> "GeneralizedSeries":
        """Treat missing coefficients up to ``horizon`` as exact zeros.

        Only valid for series known to be exact (polynomials); used for constants.
        """
        diff = as_exponent(horizon) - self.offset
        s = self
        if _is_rational(diff) and diff > 0:
            s = self.refine(_frac_gcd(self.step, diff))
        k = _lattice_index(diff, s.step)
        if k <= s.order:
            return s.truncate(k)
        return GeneralizedSeries(list(s.coeffs) + [0j] * (k - s.order), s.offset, s.step)

    def strip(self) -> "GeneralizedSeries":
        """Drop exactly-zero leading coefficients, moving the offset up."""
        k = 0
        while k < self.order and self.coeffs[k] == 0:
            k += 1
        if k == 0:
            return self
        return GeneralizedSeries(self.coeffs[k:], self.exponent(k), self.step)

    def map(self, func) -> "GeneralizedSeries":
        return GeneralizedSeries([func(c) for c in self.coeffs], self.offset, self.step)

    def __call__(self, u, arg_u: float | None = None):
        """Evaluate the known part at ``u``.

        ``arg_u`` fixes the argument of ``u`` used for non-integer exponents.
        """
        u = complex(u)
        lu = complex(math.log(abs(u)), cmath.phase(u) if arg_u is None else arg_u)
        return sum(c * cmath.exp(complex(self.exponent(n)) * lu)
                   for n, c in enumerate(self.coeffs))

    # -- operators ------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GeneralizedSeries):
            return add(self, other)
        if isinstance(other, Number):
            return add_scalar(self, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self.map(lambda c: -c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GeneralizedSeries):
            return mul(self, other)
        if isinstance(other, Number):
            other = complex(other)
            return self.map(lambda c: c * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GeneralizedSeries):
            return mul(self, fractional_pow(other, -1))
        if isinstance(other, Number):
            other = complex(other)
            return self.map(lambda c: c / other)
        return NotImplemented

    def __pow__(self, n):
        if isinstance(n, (int, np.integer)):
            return fractional_pow(self, int(n))
        return NotImplemented


def _align(a: GeneralizedSeries, b: GeneralizedSeries):
    """Common lattice for ``a`` and ``b``: (base offset, step, index of a, index of b)."""
    diff = b.offset - a.offset
    step = _frac_gcd(a.step, b.step)
    if _is_rational(diff):
        step = _frac_gcd(step, diff)
    k = _lattice_index(diff, step)
    if k >= 0:
        return a.offset, step, 0, k
    return b.offset, step, -k, 0


def add(a: GeneralizedSeries, b: GeneralizedSeries) -> GeneralizedSeries:
    """Sum on the refined common lattice, truncated to the smaller horizon."""
    base, step, ia, ib = _align(a, b)
    ra, rb = a.refine(step), b.refine(step)
    na = ia + ra.order
    nb = ib + rb.order
    n = min(na, nb)
    coeffs = [0j] * max(n, 0)
    for k, c in enumerate(ra.coeffs):
        if ia + k < n:
            coeffs[ia + k] += c
    for k, c in enumerate(rb.coeffs):
        if ib + k < n:
            coeffs[ib + k] += c
    return GeneralizedSeries(coeffs, base, step)


def sub(a: GeneralizedSeries, b: GeneralizedSeries) -> GeneralizedSeries:
    return add(a, -b)


def add_scalar(a: GeneralizedSeries, c) -> GeneralizedSeries:
    """Add an exact constant (exponent 0, no truncation of its own)."""
    c = complex(c)
    k = _lattice_index(Fraction(0) - a.offset, a.step) if _is_rational(a.offset) \
        else _lattice_index(-a.offset, a.step)
    if k >= a.order:
        return a
    if k >= 0:
        coeffs = list(a.coeffs)
        coeffs[k] += c
        return GeneralizedSeries(coeffs, a.offset, a.step)
    coeffs = [c] + [0j] * (-k - 1) + list(a.coeffs)
    return GeneralizedSeries(coeffs, Fraction(0), a.step)


def mul(a: GeneralizedSeries, b: GeneralizedSeries) -> GeneralizedSeries:
    """Cauchy product; offsets add and the horizon follows the min-rule."""
    step = _frac_gcd(a.step, b.step)
    ra, rb = a.refine(step), b.refine(step)
    n = min(ra.order, rb.order)
    if n == 0:
        return GeneralizedSeries((), a.offset + b.offset, step)
    x = np.asarray(ra.coeffs[:n], dtype=complex)
    y = np.asarray(rb.coeffs[:n], dtype=complex)
    coeffs = np.convolve(x, y)[:n]
    return GeneralizedSeries(coeffs, a.offset + b.offset, step)


def _unit_part(a: GeneralizedSeries) -> np.ndarray:
    """Coefficients of ``a / (c_0 u**offset)`` as a power series in ``u**step``."""
    if a.order == 0:
        raise ValueError("series of order 0 has no leading coefficient")
    c0 = a.coeffs[0]
    if c0 == 0:
        raise ValueError("leading coefficient is zero")
    return np.asarray(a.coeffs, dtype=complex) / c0


def _power_unit(f: np.ndarray, alpha: complex) -> np.ndarray:
    """``f**alpha`` for a power series with ``f[0] == 1`` (J.C.P. Miller recurrence)."""
    n = len(f)
    g = np.zeros(n, dtype=complex)
    if n == 0:
        return g
    g[0] = 1.0
    for k in range(1, n):
        j = np.arange(1, k + 1)
        g[k] = np.sum(((alpha + 1) * j - k) * f[j] * g[k - j]) / k
    return g


def fractional_pow(a: GeneralizedSeries, alpha, arg: float | None = None) -> GeneralizedSeries:
    """``a**alpha`` using ``arg`` as the argument of the leading coefficient.

    ``arg`` may be omitted for integer ``alpha``.  The result keeps the
    relative order of ``a``: it has the same number of coefficients, with
    offset ``alpha * a.offset``.
    """
    if a.order == 0:
        raise ValueError("series of order 0 has no leading coefficient")
    c0 = a.coeffs[0]
    if c0 == 0:
        raise ValueError("leading coefficient is zero")
    alpha_e = as_exponent(alpha)
    lead = _cpow(c0, alpha_e, arg)
    g = _power_unit(_unit_part(a), complex(alpha_e))
    return GeneralizedSeries(g * lead, alpha_e * a.offset, a.step)


def _on_zero_lattice(a: GeneralizedSeries):
    """Express ``a`` with offset 0 on the lattice generated by its offset and step."""
    if not _is_rational(a.offset):
        raise LatticeError("operation requires a rational leading exponent")
    step = _frac_gcd(a.step, a.offset)
    r = a.refine(step)
    k = _lattice_index(a.offset, step)
    return np.concatenate([np.zeros(k, dtype=complex), np.asarray(r.coeffs, dtype=complex)]), step


def exp_series(a: GeneralizedSeries) -> GeneralizedSeries:
    """``exp(a)`` for a series without constant term (positive leading exponent)."""
    if _real(a.offset) <= 0:
        raise ValueError("exp_series needs a strictly positive leading exponent")
    f, step = _on_zero_lattice(a)
    n = len(f)
    g = np.zeros(n, dtype=complex)
    g[0] = 1.0
    for k in range(1, n):
        j = np.arange(1, k + 1)
        g[k] = np.sum(j * f[j] * g[k - j]) / k
    return GeneralizedSeries(g, Fraction(0), step)


def log_series(a: GeneralizedSeries, arg: float | None = None) -> GeneralizedSeries:
    """``log(a)`` for a series with offset 0 and nonzero constant term.

    The constant term of the result is ``log|c_0| + i*arg`` (principal when
    ``arg`` is None).
    """
    if a.offset != 0:
        raise ValueError("log_series needs offset 0")
    f = _unit_part(a)
    n = len(f)
    lg = np.zeros(n, dtype=complex)
    for k in range(1, n):
        j = np.arange(1, k)
        lg[k] = f[k] - np.sum(j * lg[j] * f[k - j]) / k
    c0 = a.coeffs[0]
    lg[0] = complex(math.log(abs(c0)), cmath.phase(c0) if arg is None else arg)
    return GeneralizedSeries(lg, Fraction(0), a.step)


def reversion(w: GeneralizedSeries) -> GeneralizedSeries:
    """Compositional inverse of ``w = w_1 u + w_2 u**2 + ...`` (Lagrange inversion).

    Returns ``u = a_1 w + a_2 w**2 + ...`` to the same horizon as the input.
    """
    if w.offset != 1 or w.step != 1:
        raise ValueError("reversion needs offset 1 and step 1")
    if w.order == 0 or w.coeffs[0] == 0:
        raise ValueError("reversion needs a nonzero linear coefficient")
    n = w.order
    # h = u / w(u) as a power series; a_k = [u^(k-1)] h^k / k
    h = fractional_pow(GeneralizedSeries(w.coeffs, 0, 1), -1)
    hc = np.asarray(h.coeffs, dtype=complex)
    out = np.zeros(n, dtype=complex)
    hk = np.zeros(n, dtype=complex)
    hk[0] = 1.0
    for k in range(1, n + 1):
        hk = np.convolve(hk, hc)[:n]
        out[k - 1] = hk[k - 1] / k
    return GeneralizedSeries(out, 1, 1)


def compose(outer: GeneralizedSeries, inner: GeneralizedSeries,
            arg: float | None = None) -> GeneralizedSeries:
    """``outer(inner(u))`` truncated consistently.

    ``inner`` must have a positive rational leading exponent.  ``arg`` is the
    argument of the leading coefficient of ``inner``; it is needed only when
    ``outer`` has non-integer exponents.  The horizon of the result is the
    smaller of ``lead * outer.horizon`` and whatever survives from the
    truncation of ``inner`` through the min-rule of the arithmetic.
    """
    if inner.order == 0 or not _is_rational(inner.offset) or inner.offset <= 0:
        raise ValueError("inner series must have a positive rational leading exponent")
    if inner.coeffs[0] == 0:
        raise ValueError("inner series has a zero leading coefficient")
    lead = inner.offset
    out_offset = outer.offset * lead
    if outer.order == 0:
        return GeneralizedSeries((), out_offset, inner.step)
    outer_horizon = outer.horizon * lead
    jump = fractional_pow(inner, outer.step, arg)
    acc = _horner(outer.coeffs, jump, outer_horizon)
    if outer.offset != 0:
        acc = acc * fractional_pow(inner, outer.offset, arg)
    return _pad_to(acc, out_offset).truncate_to_horizon(
        min(outer_horizon, acc.horizon, key=lambda e: _real(e - out_offset)))


def _horner(coeffs: Sequence[complex], jump: GeneralizedSeries, horizon) -> GeneralizedSeries:
    """``sum_k coeffs[k] * jump**k`` with exact coefficients.

    While the accumulator is still an exact scalar it is kept as a number, so
    leading zero coefficients of the outer series cost no precision.
    """
    acc: complex | GeneralizedSeries = 0j
    for c in reversed(coeffs):
        if isinstance(acc, GeneralizedSeries):
            acc = add_scalar(acc * jump, c)
        elif acc == 0:
            acc = complex(c)
        else:
            acc = add_scalar(jump * acc, c)
    if isinstance(acc, GeneralizedSeries):
        return acc
    # exact constant: its only truncation is the outer horizon
    return GeneralizedSeries([acc], 0, jump.step).extend_to_horizon(horizon)


def _pad_to(a: GeneralizedSeries, offset: Exponent) -> GeneralizedSeries:
    """Re-express ``a`` with the given (lower or equal) offset."""
    k = _lattice_index(a.offset - offset, a.step)
    if k == 0:
        return a
    if k < 0:
        raise LatticeError("cannot raise the offset without losing coefficients")
    return GeneralizedSeries([0j] * k + list(a.coeffs), offset, a.step)


# -- serialization ---------------------------------------------------------

def series_to_json(a: GeneralizedSeries) -> dict:
    off = complex(a.offset)
    out = {
        "offset": [off.real, off.imag],
        "step": [a.step.numerator, a.step.denominator],
        "coeffs": [[c.real, c.imag] for c in a.coeffs],
    }
    if _is_rational(a.offset):
        out["offset_rational"] = [a.offset.numerator, a.offset.denominator]
    return out


def series_from_json(obj: dict) -> GeneralizedSeries:
    if "offset_rational" in obj:
        offset = Fraction(*obj["offset_rational"])
    else:
        re, im = obj["offset"]
        offset = complex(re, im)
    step = Fraction(*obj["step"])
    coeffs = [complex(re, im) for re, im in obj["coeffs"]]
    return GeneralizedSeries(coeffs, offset, step)
