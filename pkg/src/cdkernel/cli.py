"""Command-line front end.

Every subcommand prints one JSON report on stdout (or CSV rows for
lambda sweeps). Errors go to stderr as JSON. Exit codes: 0 success, 1 a
failed check in verify-all, 2 bad usage or invalid input.
"""

import argparse
import csv
import io
import json
import os
import re
import sys

import numpy as np

from . import contract, hermlin, serialize
from .conformance import run_all
from .errors import CDKernelError, ParseError
from .holomaps import (MobiusMap, check_kernel_transform, check_metric_transform,
                       det_expansion_remainder, mobius_eval)
from .jetcurv import Polynomial, curvature, jet_gram, local_tuple, wallach_index
from .kernelzoo import DEFAULT_TRUNCATION, parse_kernel

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^([+-]?{_NUM})?(?:([+-])({_NUM})?i)?$|^([+-]?)({_NUM})?i$")


class UsageError(Exception):
    pass


def parse_complex(token, position=0):
    """'a', 'a+bi', 'a-bi', 'bi', '-i' -> complex."""
    t = token.strip()
    lead = len(token) - len(token.lstrip())
    m = _COMPLEX.match(t)
    if not t or m is None:
        raise ParseError(f"malformed complex literal {token.strip()!r}", position + lead)
    if m.group(4) is not None or m.group(5) is not None:
        if m.group(1) is None and m.group(2) is None:
            sign = -1.0 if m.group(4) == "-" else 1.0
            return complex(0.0, sign * float(m.group(5) or 1.0))
    re_part = float(m.group(1)) if m.group(1) else 0.0
    im_part = 0.0
    if m.group(2):
        im_part = float(m.group(3) or 1.0) * (-1.0 if m.group(2) == "-" else 1.0)
    return complex(re_part, im_part)


def parse_complex_list(text):
    out, pos = [], 0
    for tok in text.split(","):
        out.append(parse_complex(tok, pos))
        pos += len(tok) + 1
    return np.array(out, dtype=complex)


def parse_point(text, domain):
    """Comma-separated complex literals, validated against the domain."""
    return domain.validate(parse_complex_list(text))


def parse_range(text):
    """'start:stop:step' inclusive of stop (up to rounding)."""
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise ParseError(f"lambda range must be start:stop:step, got {text!r}") from exc
    if step <= 0 or stop < start:
        raise ParseError(f"empty lambda range {text!r}")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(n)]


def parse_monomials(items, nvars):
    """Polynomial from terms 'coef@e1,e2,...'."""
    terms = {}
    for item in items:
        coef, _, exps = item.partition("@")
        try:
            e = tuple(int(x) for x in exps.split(","))
        except ValueError as exc:
            raise ParseError(f"bad exponent list in {item!r}") from exc
        terms[e] = terms.get(e, 0) + parse_complex(coef)
    return Polynomial(nvars, terms)


def tolerance():
    env = os.environ.get("CDKERNEL_TOL")
    if env is None:
        return hermlin.PD_TOL
    try:
        return float(env)
    except ValueError as exc:
        raise ParseError(f"CDKERNEL_TOL is not a number: {env!r}") from exc


def _kernel(args):
    return parse_kernel(args.kernel, args.lam, args.truncation)


def _point(args, K, text=None):
    text = args.point if text is None else text
    if text is None:
        return np.zeros(K.dim, dtype=complex)
    return parse_point(text, K.domain)


def _inputs(args, **extra):
    d = {"kernel": args.kernel, "lambda": args.lam, "point": args.point}
    d.update(extra)
    return d


# ------------------------------------------------------------- subcommands

def cmd_jetgram(args):
    K = _kernel(args)
    w = _point(args, K)
    J = jet_gram(K, w, args.order, method=args.method)
    v = hermlin.pd_classify(J.gram, tolerance())
    return serialize.report("jetgram", _inputs(args, order=args.order, method=args.method),
                            {"index_list": J.index_list, "gram": J.gram, "pd": v},
                            tolerance(), v.is_pd)


def cmd_curvature(args):
    K = _kernel(args)
    C = curvature(K, _point(args, K), method=args.method)
    return serialize.report("curvature", _inputs(args, method=args.method),
                            {"H": C.H, "cowen_douglas": C.cowen_douglas})


def cmd_local_tuple(args):
    K = _kernel(args)
    lt = local_tuple(K, _point(args, K))
    out = {"A": lt.A, "N": lt.N, "identity_residual": lt.identity_residual()}
    if args.poly:
        out["rho"] = lt.rho(parse_monomials(args.poly, K.dim))
    return serialize.report("local-tuple", _inputs(args), out)


def cmd_wallach(args):
    K = _kernel(args)
    res = wallach_index(K, _point(args, K), args.max_order, tolerance())
    return serialize.report("wallach", _inputs(args, max_order=args.max_order),
                            {"index": res.describe(), "saturated": res.saturated,
                             "pd_levels": res.level_count, "verdicts": res.verdicts},
                            tolerance())


def _contract_one(args, lam):
    name = args.test
    if name in contract.CONTRACT_TESTS:
        rep = contract.CONTRACT_TESTS[name](lam)
        return rep.to_dict()
    if name == "ball-curvature":
        K = parse_kernel(args.kernel or "ball:2", lam, args.truncation)
        ok = contract.ball_curvature_inequality(K, None if args.point is None else _point(args, K))
        return {"test_name": name, "lambda": lam, "verdict": ok,
                "computed_threshold": 1 / (K.domain.n + 1)}
    if name == "nu":
        K = parse_kernel(args.kernel or "matrix-ball:2x2", lam, args.truncation)
        out = contract.nu_tests(lam, K.domain.r, K.domain.s)
        return {"test_name": name, "lambda": lam, **out}
    if name == "a-norm":
        K = parse_kernel(args.kernel or "matrix-ball:2x2", lam, args.truncation)
        w = _point(args, K)
        A = local_tuple(K, w).A
        target = contract.OriginNorm.for_domain(K.domain)
        if np.any(w != 0):
            if K.domain.tag not in ("matrix-ball", "disc"):
                raise ParseError("a-norm away from the origin is supported for the matrix ball and disc")
            A = contract.transport_to_origin(A, w.reshape(K.domain.r, K.domain.s))
        res = contract.a_norm(A, target, np.random.default_rng(args.seed))
        return {"test_name": name, "lambda": lam, "value": res.value, "exact": res.exact,
                "restarts": res.restarts, "verdict": res.value <= 1 + contract.BOUNDARY_SLACK}
    raise UsageError(f"unknown contract test {name!r}")


def cmd_contract(args):
    if (args.lam_range is None) == (args.lam_given is None):
        raise UsageError("give exactly one of --lambda or --lambda-range")
    if args.lam_given is not None:
        out = _contract_one(args, args.lam)
        return serialize.report("contract", {"test": args.test, "lambda": args.lam,
                                             "kernel": args.kernel, "point": args.point},
                                out, contract.BISECTION_TOL, out.get("verdict"))
    rows = [_contract_one(args, lam) for lam in parse_range(args.lam_range)]
    if args.format == "json":
        return serialize.report("contract", {"test": args.test, "lambda_range": args.lam_range}, rows)
    keys = [k for k in rows[0] if not isinstance(rows[0][k], dict)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(keys)
    for row in rows:
        writer.writerow([serialize.to_jsonable(row[k]) for k in keys])
    return buf.getvalue()


def cmd_pa_norm(args):
    if args.values is not None:
        V = parse_complex_list(args.values)
        if V.size != args.r * args.s:
            raise ParseError(f"expected {args.r * args.s} values, got {V.size}")
        out = contract.pa_norm(args.r, args.s, V=V)
    else:
        out = contract.pa_norm(args.r, args.s, lam=args.lam)
    ok = abs(out["formula"] - out["direct"]) <= 1e-10
    return serialize.report("pa-norm", {"r": args.r, "s": args.s, "lambda": args.lam,
                                        "values": args.values}, out, 1e-10, ok)


def cmd_check_transform(args):
    a = parse_complex(args.a)
    z = parse_complex(args.z)
    w = parse_complex(args.w) if args.w is not None else z
    phi = MobiusMap(a)
    out = {"map_at_z": mobius_eval(phi, z),
           "kernel_residual": check_kernel_transform(phi, z, w),
           "metric_residual": check_metric_transform(phi, w)}
    ok = out["kernel_residual"] < 1e-10 and out["metric_residual"] < 1e-6
    return serialize.report("check-transform", {"a": a, "z": z, "w": w}, out,
                            {"kernel": 1e-10, "metric": 1e-6}, ok)


def cmd_det_expansion(args):
    Z = parse_complex_list(args.matrix)
    if Z.size != args.r * args.s:
        raise ParseError(f"expected {args.r * args.s} entries, got {Z.size}")
    out = det_expansion_remainder(Z.reshape(args.r, args.s))
    return serialize.report("det-expansion", {"matrix": args.matrix, "r": args.r, "s": args.s}, out)


def cmd_bergman_eval(args):
    K = _kernel(args)
    z = _point(args, K, args.z)
    w = _point(args, K, args.w) if args.w is not None else z
    return serialize.report("bergman-eval", _inputs(args, z=args.z, w=args.w),
                            {"value": K.eval_polarized(z, w)})


def cmd_verify_all(args):
    results = run_all(args.seed)
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    return serialize.report("verify-all", {"seed": args.seed}, results, None, ok)


# ------------------------------------------------------------------ parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)

    kern = _Parser(add_help=False)
    kern.add_argument("--kernel", default="disc",
                      help="disc, polydisc:n, ball:n, matrix-ball:rxs, omega2[:normalized], omega3")
    kern.add_argument("--lambda", dest="lam", type=float, default=1.0)
    kern.add_argument("--point", help="comma-separated complex coordinates, default the origin")
    kern.add_argument("--truncation", type=int, default=DEFAULT_TRUNCATION)

    p = _Parser(prog="cdkernel", description="Jets, curvature and contractivity of powered kernels.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("jetgram", parents=[common, kern])
    s.add_argument("--order", type=int, default=1)
    s.add_argument("--method", choices=("analytic", "fd"), default="analytic")
    s.set_defaults(func=cmd_jetgram)

    s = sub.add_parser("curvature", parents=[common, kern])
    s.add_argument("--method", choices=("analytic", "fd"), default="analytic")
    s.set_defaults(func=cmd_curvature)

    s = sub.add_parser("local-tuple", parents=[common, kern])
    s.add_argument("--poly", action="append", help="polynomial term coef@e1,...,em (repeatable)")
    s.set_defaults(func=cmd_local_tuple)

    s = sub.add_parser("wallach", parents=[common, kern])
    s.add_argument("--max-order", type=int, default=4)
    s.set_defaults(func=cmd_wallach)

    s = sub.add_parser("contract", parents=[common])
    s.add_argument("--test", required=True,
                   choices=sorted(contract.CONTRACT_TESTS) + ["ball-curvature", "nu", "a-norm"])
    s.add_argument("--lambda", dest="lam_given", type=float)
    s.add_argument("--lambda-range", dest="lam_range")
    s.add_argument("--kernel")
    s.add_argument("--point")
    s.add_argument("--truncation", type=int, default=DEFAULT_TRUNCATION)
    s.set_defaults(func=cmd_contract)

    s = sub.add_parser("pa-norm", parents=[common])
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--lambda", dest="lam", type=float, default=1.0)
    s.add_argument("--values", help="r*s complex values v_ij in row-major order")
    s.set_defaults(func=cmd_pa_norm)

    s = sub.add_parser("check-transform", parents=[common])
    s.add_argument("--a", required=True, help="Moebius parameter in the disc")
    s.add_argument("--z", required=True)
    s.add_argument("--w")
    s.set_defaults(func=cmd_check_transform)

    s = sub.add_parser("det-expansion", parents=[common])
    s.add_argument("--matrix", required=True, help="r*s complex entries, row-major")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--s", type=int, required=True)
    s.set_defaults(func=cmd_det_expansion)

    s = sub.add_parser("bergman-eval", parents=[common, kern])
    s.add_argument("--z", required=True)
    s.add_argument("--w")
    s.set_defaults(func=cmd_bergman_eval)

    s = sub.add_parser("verify-all", parents=[common])
    s.set_defaults(func=cmd_verify_all)
    return p


def _error(kind, exc, **extra):
    d = {"error": kind, "message": str(exc)}
    d.update(extra)
    print(json.dumps(d), file=sys.stderr)


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "lam_given", None) is not None:
            args.lam = args.lam_given
        out = args.func(args)
    except UsageError as exc:
        _error("usage", exc)
        return 2
    except ParseError as exc:
        _error("parse", exc, position=exc.position)
        return 2
    except (CDKernelError, ValueError, ArithmeticError) as exc:
        _error(type(exc).__name__, exc)
        return 2
    text = out if isinstance(out, str) else serialize.dumps(out)
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if args.command == "verify-all" and not out["verdict"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
