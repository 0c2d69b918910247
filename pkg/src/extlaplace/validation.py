"""Loading and validating problem instances from JSON.

A spec file mirrors :class:`ExpansionSpec`.  Complex numbers are ``[re, im]``
pairs (a bare number is accepted as real), exponents may be given as
``[num, den]`` rationals or plain numbers.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import jsonschema

from .coeffs import ExpansionSpec

__all__ = ["SpecValidationError", "SPEC_SCHEMA", "spec_from_json", "spec_to_json", "load_spec", "check_spec"]


class SpecValidationError(ValueError):
    """Schema or invariant violation in a spec document."""

    def __init__(self, msg: str, path: str = ""):
        super().__init__(msg)
        self.path = path

    def to_json(self) -> dict:
        return {"error": "validation", "message": str(self), "path": self.path}


_NUM = {"type": "number"}
_COMPLEX = {"oneOf": [_NUM, {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}]}
_EXPONENT = {"oneOf": [_NUM, {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}]}

SPEC_SCHEMA = {
    "type": "object",
    "required": ["mu", "lambda", "p_coeffs", "q_coeffs"],
    "additionalProperties": False,
    "properties": {
        "mu": _EXPONENT,
        "nu": _EXPONENT,
        "lambda": _COMPLEX,
        "p_at_a": _COMPLEX,
        "p_coeffs": {"type": "array", "items": _COMPLEX, "minItems": 1},
        "q_coeffs": {"type": "array", "items": _COMPLEX, "minItems": 1},
        "r_coeffs": {"type": "array", "items": _COMPLEX},
        "varpi": _NUM,
        "theta_range": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
        "contour_conditions": {"type": "boolean"},
        "sheet": {"type": "integer"},
        "contour": {"type": "string"},
    },
}


def _complex(v) -> complex:
    z = complex(v[0], v[1]) if isinstance(v, list) else complex(v)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise SpecValidationError("non-finite number")
    return z


def _exponent(v):
    if isinstance(v, list):
        if v[1] == 0:
            raise SpecValidationError("zero denominator in exponent")
        return Fraction(v[0], v[1])
    if not math.isfinite(v):
        raise SpecValidationError("non-finite exponent")
    # snap decimals like 0.3333333333333333 onto the rational they spell
    f = Fraction(v).limit_denominator(4096)
    return f if abs(float(f) - v) < 1e-12 else v


def check_spec(obj) -> None:
    """Raise :class:`SpecValidationError` if ``obj`` does not match the schema."""
    try:
        jsonschema.validate(obj, SPEC_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SpecValidationError(exc.message, path) from None


def spec_from_json(obj: dict) -> ExpansionSpec:
    check_spec(obj)
    try:
        return ExpansionSpec(
            mu=_exponent(obj["mu"]),
            nu=_exponent(obj.get("nu", 0)),
            lam=_complex(obj["lambda"]),
            p_coeffs=[_complex(v) for v in obj["p_coeffs"]],
            q_coeffs=[_complex(v) for v in obj["q_coeffs"]],
            r_coeffs=[_complex(v) for v in obj.get("r_coeffs", [])],
            p_at_a=_complex(obj.get("p_at_a", 0)),
            varpi=float(obj.get("varpi", 0.0)),
            theta_range=tuple(obj.get("theta_range", (0.0, 0.0))),
            contour_conditions=bool(obj.get("contour_conditions", True)),
        )
    except SpecValidationError:
        raise
    except ValueError as exc:
        raise SpecValidationError(str(exc)) from None


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _exp_json(e):
    if isinstance(e, Fraction):
        return [e.numerator, e.denominator]
    return float(e)


def spec_to_json(spec: ExpansionSpec) -> dict:
    return {
        "mu": _exp_json(spec.mu),
        "nu": _exp_json(spec.nu),
        "lambda": _pair(spec.lam),
        "p_at_a": _pair(spec.p_at_a),
        "p_coeffs": [_pair(c) for c in spec.p_coeffs],
        "q_coeffs": [_pair(c) for c in spec.q_coeffs],
        "r_coeffs": [_pair(c) for c in spec.r_coeffs],
        "varpi": spec.varpi,
        "theta_range": list(spec.theta_range),
        "contour_conditions": spec.contour_conditions,
    }


def load_spec(path) -> tuple[ExpansionSpec, dict]:
    """Read a spec file; returns the spec and the raw document (for ``sheet``/``contour``)."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecValidationError(f"invalid JSON: {exc}") from None
    return spec_from_json(obj), obj
