"""Command-line entry point.

    lstieltjes stieltjes --k 1 --modulus 5 --all --digits 50
    lstieltjes lseries --modulus 3 --values "1,-1,0" --at 1 --digits 40
    lstieltjes verify --modulus 5 --identity all --trials 10 --digits 50 --seed 42
    lstieltjes relations --probe-conjecture --modulus 5 --coeff-bound 10000 --digits 200

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 refusal
because the requested precision cannot be honoured.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath

from . import __version__
from .cache import CacheRecord, ValueCache, utc_now
from .errors import ConvergenceError, LStieltjesError, PoleError, PrecisionInadequate
from .formatting import decimal_string, number_record, residual_string
from .hurwitz import euler_gamma, log_gamma
from .lseries import l1_odd_closed, l_eval, l_prime_0, l_prime_1_odd
from .periodic import PeriodicFunction
from .precision import PrecisionContext
from .relations import pslq, probe_conjecture
from .stieltjes import StieltjesKey, stieltjes_direct, stieltjes_em
from .verify import verify_all, verify_identity

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3
DEFAULT_X_CUT = 10**6

# closed form name -> (s, derivative order, implementation)
CLOSED_FORMS = {
    "l1": (1, 0, l1_odd_closed),
    "lp0": (0, 1, l_prime_0),
    "lp1": (1, 1, l_prime_1_odd),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _global_options(defaults: bool) -> argparse.ArgumentParser:
    # Registered twice so the flags work before or after the subcommand; the
    # subcommand copy uses SUPPRESS so it does not clobber the top-level value.
    p = _Parser(add_help=False)
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--format", choices=("json", "csv"), default=d("json"))
    p.add_argument("--cache", metavar="PATH", default=d(None))
    p.add_argument("--no-timestamps", action="store_true", default=d(False))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lstieltjes", parents=[_global_options(True)], description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_global_options(False)]

    p = sub.add_parser("stieltjes", parents=common, help="generalized Stieltjes constants gamma_k(a, q)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--modulus", type=int, required=True)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--residue", type=int)
    which.add_argument("--all", action="store_true")
    p.add_argument("--digits", type=int, default=50)
    p.add_argument("--method", choices=("direct", "em", "both"), default="em")
    p.add_argument("--x-cut", type=int, default=None)

    p = sub.add_parser("lseries", parents=common, help="L(s, f) and its derivatives")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--values", required=True, help='comma separated f(1),...,f(q); entries like 1/2, 0.25, 1+2i')
    p.add_argument("--at", help='"RE[,IM]"')
    p.add_argument("--deriv", type=int, default=0)
    p.add_argument("--digits", type=int, default=50)
    p.add_argument("--closed-form", choices=tuple(CLOSED_FORMS))

    p = sub.add_parser("verify", parents=common, help="randomized identity checks")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--identity", required=True, help="identity id, identity_lemma_<k>, or all")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--digits", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("relations", parents=common, help="integer relation search")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--probe-conjecture", action="store_true")
    what.add_argument("--vector", help='"expr1;expr2;..."')
    p.add_argument("--modulus", type=int)
    p.add_argument("--coeff-bound", type=int, required=True)
    p.add_argument("--digits", type=int, default=50)
    return parser


# ---------------------------------------------------------------- parsing


def parse_value(text: str):
    """'3', '-1/2', '0.25', '2i', '1-3i', '0.5+1/2j' -> Fraction or (re, im)."""
    t = text.strip().replace(" ", "")
    if not t:
        raise UsageError("empty value")
    try:
        if t[-1] not in "ij":
            return Fraction(t)
        body = t[:-1]
        split = max(
            (i for i, ch in enumerate(body) if ch in "+-" and i > 0 and body[i - 1] not in "eE"),
            default=0,
        )
        re_part, im_part = body[:split], body[split:]
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return (Fraction(re_part) if re_part else Fraction(0), Fraction(im_part))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse value {text!r}") from None


def parse_point(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (1, 2):
        raise UsageError(f'--at expects "RE" or "RE,IM", got {text!r}')
    try:
        re_part = mpmath.mpf(parts[0])
        im_part = mpmath.mpf(parts[1]) if len(parts) == 2 else mpmath.mpf(0)
    except (ValueError, TypeError):
        raise UsageError(f"cannot parse point {text!r}") from None
    return re_part if im_part == 0 else mpmath.mpc(re_part, im_part)


class _VectorExpr:
    """One entry of a --vector argument, re-evaluable at any precision.

    Admits decimal literals, log_pi, log_2, euler_gamma, log_gamma(a/q),
    stieltjes(k,a,q), combined with + - * / and parentheses.
    """

    NAMES = ("log_pi", "log_2", "euler_gamma")

    def __init__(self, source: str):
        self.source = source.strip()
        try:
            self.tree = ast.parse(self.source, mode="eval")
        except SyntaxError:
            raise UsageError(f"cannot parse vector entry {source!r}") from None
        self._check(self.tree.body)

    def _check(self, node):
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
            self._check(node.left)
            self._check(node.right)
        elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            self._check(node.operand)
        elif isinstance(node, ast.Constant) and type(node.value) in (int, float):
            pass
        elif isinstance(node, ast.Name) and node.id in self.NAMES:
            pass
        elif isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
            name, args = node.func.id, node.args
            if name == "log_gamma" and len(args) == 1 and self._ratio(args[0]) is not None:
                return
            if name == "stieltjes" and len(args) == 3 and all(self._int(a) is not None for a in args):
                return
            raise UsageError(f"unsupported call in vector entry {self.source!r}")
        else:
            raise UsageError(f"unsupported token in vector entry {self.source!r}")

    @staticmethod
    def _int(node) -> Optional[int]:
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return node.value
        return None

    def _ratio(self, node) -> Optional[Fraction]:
        if self._int(node) is not None:
            return Fraction(node.value)
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
            a, q = self._int(node.left), self._int(node.right)
            if a is not None and q:
                return Fraction(a, q)
        return None

    def evaluate(self, ctx: PrecisionContext):
        with ctx.activated():
            return self._eval(self.tree.body, ctx)

    def _eval(self, node, ctx):
        if isinstance(node, ast.BinOp):
            left, right = self._eval(node.left, ctx), self._eval(node.right, ctx)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            return left / right
        if isinstance(node, ast.UnaryOp):
            v = self._eval(node.operand, ctx)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Constant):
            # re-read the literal text so decimals are never routed through float
            return mpmath.mpf(ast.get_source_segment(self.source, node))
        if isinstance(node, ast.Name):
            if node.id == "log_pi":
                return mpmath.log(mpmath.pi)
            if node.id == "log_2":
                return mpmath.log(2)
            return euler_gamma(ctx)
        if node.func.id == "log_gamma":
            return log_gamma(self._ratio(node.args[0]), ctx)
        k, a, q = (self._int(x) for x in node.args)
        return stieltjes_em(StieltjesKey(k, a, q), ctx).value


# ---------------------------------------------------------------- commands


def _context(digits: int) -> PrecisionContext:
    try:
        return PrecisionContext(digits=digits)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _stamp(record: dict, args) -> dict:
    if not args.no_timestamps:
        record["created_at"] = utc_now()
    return record


def _cached_em(key: StieltjesKey, ctx: PrecisionContext, cache: Optional[ValueCache], args) -> tuple:
    """(value string, digits) for gamma_k(a, q), reusing or filling the cache."""
    if cache is not None:
        rec = cache.get("stieltjes", "euler_maclaurin", key.k, key.a, key.q, min_digits=ctx.digits)
        if rec is not None:
            with ctx.activated():
                return decimal_string(mpmath.mpf(rec.value), ctx.digits), ctx.digits
    v = stieltjes_em(key, ctx)
    text = decimal_string(v.value, ctx.digits)
    if cache is not None:
        cache.put(CacheRecord(
            "stieltjes", v.digits, text, v.method, key.k, key.a, key.q,
            None if args.no_timestamps else utc_now(),
        ))
    return text, v.digits


def cmd_stieltjes(args, cache: Optional[ValueCache]):
    ctx = _context(args.digits)
    q = args.modulus
    residues = range(1, q + 1) if args.all else [args.residue]
    x_cut = args.x_cut if args.x_cut is not None else max(DEFAULT_X_CUT, 10 * q)
    out = []
    for a in residues:
        try:
            key = StieltjesKey(args.k, a, q)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.method in ("em", "both"):
            text, digits = _cached_em(key, ctx, cache, args)
            out.append(_stamp({
                "kind": "stieltjes", "k": key.k, "a": a, "q": q,
                "value": text, "digits": digits, "method": "euler_maclaurin",
            }, args))
        if args.method in ("direct", "both"):
            v = stieltjes_direct(key, x_cut, ctx)
            shown = max(v.digits + 3, 6)
            out.append(_stamp({
                "kind": "stieltjes", "k": key.k, "a": a, "q": q,
                "value": decimal_string(v.value, shown), "digits": v.digits, "method": v.method,
                "x_cut": x_cut, "error_estimate": residual_string(v.error_estimate),
            }, args))
    return out, EXIT_OK


def cmd_lseries(args, cache):
    ctx = _context(args.digits)
    raw = [t for t in args.values.split(",")]
    if len(raw) != args.modulus:
        raise UsageError(f"--values has {len(raw)} entries, expected {args.modulus}")
    values = [parse_value(t) for t in raw]
    with ctx.activated():
        f = PeriodicFunction.from_values(values, ctx)
        at = parse_point(args.at) if args.at is not None else None
        record = {"kind": "lseries", "q": args.modulus, "values": [t.strip() for t in raw]}
        code = EXIT_OK
        if args.closed_form:
            s, k, route = CLOSED_FORMS[args.closed_form]
            if at is not None and at != s:
                raise UsageError(f"--closed-form {args.closed_form} is evaluated at s = {s}, not {args.at}")
            if args.deriv not in (0, k):
                raise UsageError(f"--closed-form {args.closed_form} fixes the derivative order to {k}")
            closed = route(f, ctx)
            series = l_eval(f, s, k, ctx).value
            residual = abs(closed - series) / max(1, abs(series))
            passed = residual < mpmath.mpf(10) ** (-mpmath.mpf(ctx.digits) / 2)
            record.update({
                "s": number_record(mpmath.mpf(s), ctx.digits), "deriv": k, "digits": ctx.digits,
                "value": number_record(series, ctx.digits),
                "closed_form": {"name": args.closed_form, "value": number_record(closed, ctx.digits),
                                "residual": residual_string(residual)},
                "verdict": "PASS" if passed else "FAIL",
            })
            code = EXIT_OK if passed else EXIT_FAIL
        else:
            if at is None:
                raise UsageError("--at is required unless --closed-form is given")
            ev = l_eval(f, at, args.deriv, ctx, allow_pole=True)
            record.update({"s": number_record(at, ctx.digits), "deriv": args.deriv, "digits": ctx.digits})
            if ev.pole_flag:
                record.update({"pole": True, "residue": number_record(ev.residue, ctx.digits)})
            else:
                record.update({"value": number_record(ev.value, ctx.digits), "pole": False})
    return _stamp(record, args), code


def cmd_verify(args, cache):
    ctx = _context(args.digits)
    if args.identity == "all":
        reports = verify_all(args.modulus, args.trials, ctx, args.seed)
    else:
        reports = [verify_identity(args.identity, args.modulus, args.trials, ctx, args.seed)]
    passed = all(r.passed for r in reports)
    doc = {
        "kind": "verify", "q": args.modulus, "identity": args.identity, "trials": args.trials,
        "digits": ctx.digits, "seed": args.seed,
        "reports": [r.as_dict() for r in reports],
        "verdict": "PASS" if passed else "FAIL",
    }
    return _stamp(doc, args), EXIT_OK if passed else EXIT_FAIL


def cmd_relations(args, cache):
    ctx = _context(args.digits)
    if args.probe_conjecture:
        if args.modulus is None:
            raise UsageError("--probe-conjecture needs --modulus")
        result = probe_conjecture(args.modulus, args.coeff_bound, ctx)
        doc = {"kind": "relation", "mode": "probe_conjecture", "q": args.modulus}
        doc.update(result.as_dict())
        if result.found:
            doc["counterexample_candidate"] = True
    else:
        exprs = [_VectorExpr(t) for t in args.vector.split(";") if t.strip()]
        recompute: Callable = lambda c: [e.evaluate(c) for e in exprs]
        result = pslq(recompute(ctx), args.coeff_bound, ctx, recompute=recompute)
        doc = {"kind": "relation", "mode": "vector", "vector": [e.source for e in exprs]}
        doc.update(result.as_dict())
    return _stamp(doc, args), EXIT_OK


COMMANDS = {
    "stieltjes": cmd_stieltjes,
    "lseries": cmd_lseries,
    "verify": cmd_verify,
    "relations": cmd_relations,
}


# ---------------------------------------------------------------- output


def _flatten(record: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        elif isinstance(value, list):
            flat[name] = json.dumps(value, sort_keys=True)
        else:
            flat[name] = value
    return flat


def render(payload, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if isinstance(payload, dict) and "reports" in payload:
        rows = [_flatten(r) for r in payload["reports"]]
    elif isinstance(payload, list):
        rows = [_flatten(r) for r in payload]
    else:
        rows = [_flatten(payload)]
    fields: list = []
    for row in rows:
        fields.extend(k for k in row if k not in fields)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    """Execute one invocation, write the output, and return the exit code."""
    stdout = stdout if stdout is not None else sys.stdout
    fmt = "json"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        cache = ValueCache(args.cache) if args.cache else None
        payload, code = COMMANDS[args.command](args, cache)
    except SystemExit as exc:
        # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        payload, code = {"error": str(exc), "kind": "usage"}, EXIT_USAGE
    except (PrecisionInadequate, ConvergenceError) as exc:
        payload, code = {"error": str(exc), "kind": "precision_inadequate"}, EXIT_PRECISION
    except PoleError as exc:
        payload, code = {"error": str(exc), "kind": "pole"}, EXIT_USAGE
    except (LStieltjesError, ValueError) as exc:
        payload, code = {"error": str(exc), "kind": type(exc).__name__}, EXIT_USAGE
    if "error" in (payload if isinstance(payload, dict) else {}):
        stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        stdout.write(render(payload, fmt))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
