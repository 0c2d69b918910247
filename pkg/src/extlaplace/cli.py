"""Command-line entry point.

Every subcommand prints one JSON document on stdout.  Exit status is 0 on
success, 2 for invalid input (bad flags, schema or spec invariants) and 1 for
numerical failure; in the last two cases the document is an error object.
Negative complex arguments need the ``--flag=-1,0`` spelling.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import __version__
from ._tanhsinh import QuadratureError
from .acceptance import run_all
from .applications import AngerWeberSpec, ConfluentSpec, anger_weber_eval, clipped_theta, confluent_eval
from .coeffs import compute_f, select_branch
from .contours import SHIPPED_THETAS, example_contour, shipped_contour
from .expansion import evaluate, evaluate_corollary2
from .faxen import FaxenQuery, fi
from .quadrature import Contour, anger_integrand, builtin_integrand, chu_integrand, integrate_contour
from .validation import SpecValidationError, load_spec


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {text!r}")


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _jsonable(obj):
    if isinstance(obj, np.generic) and not isinstance(obj, np.complexfloating):
        return obj.item()
    if isinstance(obj, (complex, np.complexfloating)):
        return _pair(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serialisable: {type(obj)}")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2, default=_jsonable) + "\n")


# -- subcommands --------------------------------------------------------------

def cmd_coeffs(args):
    spec, doc = load_spec(args.spec)
    theta = spec.theta_range[0] if args.theta is None else args.theta
    branch = select_branch(spec, theta)
    table = compute_f(spec, branch, args.order)
    out = table.to_json()
    out["branch"] = {"varpi0": branch.varpi0, "theta": branch.theta, "varpi": branch.varpi}
    return out


def cmd_expand(args):
    spec, doc = load_spec(args.spec)
    sheet = args.sheet if args.sheet is not None else doc.get("sheet")
    if args.corollary2:
        ev = evaluate_corollary2(spec, args.z, args.order, sheet, matched=args.matched)
    else:
        ev = evaluate(spec, args.z, args.order, sheet)
    out = ev.to_json()
    out["value"] = _pair(ev.value)
    return out


def cmd_faxen(args):
    res = fi(FaxenQuery(args.alpha, args.beta, args.x), method=args.method, tol=args.tol)
    return res.to_json()


def _load_contour(ref: str, start) -> Contour:
    # "shipped:NAME:KEY" picks a bundled path, anything else is a file
    if ref.startswith("shipped:"):
        _, name, key = ref.split(":", 2)
        if key not in SHIPPED_THETAS:
            raise ValueError(f"unknown shipped angle {key!r}; choose from {sorted(SHIPPED_THETAS)}")
        c = shipped_contour(name, SHIPPED_THETAS[key])
    else:
        c = Contour.load(ref)
    if start is not None:
        c = Contour(c.nodes, start, c.tail, c.meta)
    return c


def cmd_quad(args):
    try:
        params = json.loads(args.params)
    except json.JSONDecodeError as exc:
        raise ValueError(f"--params is not valid JSON: {exc}") from None
    f = builtin_integrand(args.integrand, params)
    path = _load_contour(args.contour, args.start_singularity)
    return integrate_contour(f, path, args.tol).to_json()


def _example_contour(name, theta, start=0j):
    try:
        return shipped_contour(name, theta, start)
    except ValueError:
        c = example_contour(name, theta)
        return Contour(c.nodes, start, c.tail, c.meta)


def _example_run(args, big):
    if args.name == "chu":
        s = ConfluentSpec(args.a, args.tau, big, args.delta, args.sheet)
        return s, confluent_eval(s, args.order)
    s = AngerWeberSpec(big, args.tau, args.delta, args.sheet)
    return s, anger_weber_eval(s, args.order)


def _example_quad(args, s, big_abs, tol):
    theta = s.theta
    path_theta = clipped_theta(theta, args.delta)
    if args.name == "chu":
        f = chu_integrand(args.a, args.tau, big_abs, theta)
        path = _example_contour("chu", path_theta, args.a - 1)
    else:
        f = anger_integrand(args.tau, big_abs, theta)
        path = _example_contour("anger", path_theta)
    return integrate_contour(f, path, tol)


def cmd_example(args):
    big = args.big
    if big is None:
        raise ValueError("--big (or --b / --rho) is required")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        s, value = _example_run(args, big)
    out = {"example": args.name, "order": args.order, "theta": s.theta, "value": _pair(value),
           "warnings": [str(w.message) for w in caught]}
    if args.name == "chu":
        out["a"] = _pair(args.a)
    out["tau"] = _pair(args.tau)
    out["big"] = _pair(big)
    if args.verify:
        q = _example_quad(args, s, abs(big), args.tol)
        rel = abs(value - q.value) / abs(q.value)
        out["quadrature"] = q.to_json()
        out["rel_error"] = rel
        # convergence order from the same comparison at |big|/10 and |big|/sqrt(10)
        scales = [0.1, 10 ** -0.5, 1.0]
        errs = []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for k in scales[:-1]:
                b = big * k
                sk, vk = _example_run(args, b)
                qk = _example_quad(args, sk, abs(b), args.tol)
                errs.append(abs(vk - qk.value) / abs(qk.value))
        errs.append(rel)
        if all(e > 0 for e in errs):
            slope = float(np.polyfit(np.log(np.array(scales) * abs(big)), np.log(errs), 1)[0])
            out["fitted_order"] = -slope
        else:
            out["fitted_order"] = None
        out["rel_errors_scan"] = {"big_abs": [abs(big) * k for k in scales], "rel_error": errs}
    return out


def cmd_selftest(args):
    results = run_all()
    for r in results:
        sys.stderr.write(r.line() + "\n")
    return {"passed": all(r.passed for r in results), "criteria": [r.to_json() for r in results]}


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="extlaplace", description="Extended Laplace-method expansions, Faxen integrals and oracles.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("coeffs", help="coefficient table a, b, c, f of a spec file")
    c.add_argument("--spec", required=True)
    c.add_argument("--order", type=int, default=4)
    c.add_argument("--theta", type=float, default=None, help="arg z used to fix the branch (default: theta_range[0])")
    c.set_defaults(func=cmd_coeffs)

    e = sub.add_parser("expand", help="evaluate the truncated expansion")
    e.add_argument("--spec", required=True)
    e.add_argument("--z", type=_complex, required=True)
    e.add_argument("--order", type=int, default=3)
    e.add_argument("--sheet", type=int, default=None)
    e.add_argument("--corollary2", action="store_true", help="use the regrouped form (integer mu, nu = 1)")
    e.add_argument("--matched", action="store_true", help="with --corollary2: keep only the first ORDER powers")
    e.set_defaults(func=cmd_expand)

    f = sub.add_parser("faxen", help="Faxen's integral Fi(alpha, beta; x)")
    f.add_argument("--alpha", type=float, required=True)
    f.add_argument("--beta", type=_complex, required=True)
    f.add_argument("--x", type=_complex, required=True)
    f.add_argument("--method", choices=("auto", "series", "asymptotic"), default="auto")
    f.add_argument("--tol", type=float, default=1e-10)
    f.set_defaults(func=cmd_faxen)

    q = sub.add_parser("quad", help="tanh-sinh quadrature of a built-in integrand along a contour")
    q.add_argument("--integrand", required=True, help="builtin:chu|anger|watson|faxen")
    q.add_argument("--contour", required=True, help="contour JSON file or shipped:NAME:ANGLE")
    q.add_argument("--params", default="{}", help="integrand parameters as JSON")
    q.add_argument("--start-singularity", type=_complex, default=None)
    q.add_argument("--tol", type=float, default=1e-10)
    q.set_defaults(func=cmd_quad)

    x = sub.add_parser("example", help="the confluent U and Anger-Weber examples")
    x.add_argument("name", choices=("chu", "anger"))
    x.add_argument("--a", type=_complex, default=complex(0.75))
    x.add_argument("--tau", type=_complex, default=complex(0.5))
    x.add_argument("--big", "--b", "--rho", dest="big", type=_complex, default=None)
    x.add_argument("--order", type=int, default=2)
    x.add_argument("--sheet", type=int, default=None)
    x.add_argument("--delta", type=float, default=0.1)
    x.add_argument("--verify", action="store_true", help="compare with quadrature and fit the convergence order")
    x.add_argument("--tol", type=float, default=1e-10)
    x.set_defaults(func=cmd_example)

    s = sub.add_parser("selftest", help="run the acceptance suite")
    s.add_argument("--quick", action="store_true", help="accepted for compatibility; the suite already runs in seconds")
    s.set_defaults(func=cmd_selftest)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out = args.func(args)
    except (UsageError, SpecValidationError, ValueError, TypeError) as exc:
        err = exc.to_json() if isinstance(exc, SpecValidationError) else {"error": "validation", "message": str(exc)}
        _emit(err)
        return 2
    except (QuadratureError, ArithmeticError, OverflowError) as exc:
        diag = {"error": "numerical", "message": str(exc)}
        if isinstance(exc, QuadratureError):
            diag["levels"] = exc.levels
        _emit(diag)
        return 1
    except OSError as exc:
        _emit({"error": "validation", "message": str(exc)})
        return 2
    _emit(out)
    if args.command == "selftest" and not out["passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())
