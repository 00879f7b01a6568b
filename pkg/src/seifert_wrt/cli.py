"""Command line interface.

    seifert-wrt validate --p 2,3,5
    seifert-wrt series --p 2,3,5 --cutoff 2 --what psi-hat
    seifert-wrt wrt --p 2,3,5 --K 7 --method both
    seifert-wrt asymptote --p 4,3,5 --K 50 --grouping cs
    seifert-wrt check fast

Exit status: 0 success, 1 domain error or failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import asymptotics as A
from . import hblock as H
from .checks import SUITES, run_suite
from .errors import DomainError, NumericalError
from .numerics import PrecisionCtx
from .seifert import flat_connections, nonzero_cs_spectrum, validate_seifert

COMMANDS = ("validate", "series", "decompose", "wrt", "asymptote", "cs-spectrum", "check", "plot-data")


@dataclass(frozen=True)
class JobSpec:
    command: str
    p: tuple[int, ...] = ()
    q: tuple[int, ...] | None = None
    K: int | None = None
    digits: int = 50
    cutoff: Fraction = Fraction(5)
    order: int = 1
    output_format: str = "json"
    method: str = "both"
    what: str = "psi"
    grouping: str = "m"
    suite: str = "fast"
    Kmax: int = 30


def fmt_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_complex(z, ctx: PrecisionCtx) -> dict:
    mp = ctx.mp
    z = mp.mpc(z)
    return {"re": mp.nstr(z.real, ctx.digits), "im": mp.nstr(z.imag, ctx.digits)}


def _series_rows(s: H.RationalQSeries) -> list[dict]:
    return [{"exponent": fmt_rational(e), "coeff": fmt_rational(c)} for e, c in s.items()]


def _data(spec: JobSpec):
    if not spec.p:
        raise DomainError("--p is required")
    return validate_seifert(spec.p, spec.q)


def _need_K(spec: JobSpec) -> int:
    if spec.K is None:
        raise DomainError("--K is required for this command")
    return spec.K


def cmd_validate(spec, ctx):
    d = _data(spec)
    return {
        "n": d.n,
        "p": list(d.p),
        "q": list(d.q),
        "P": d.P,
        "theta0": fmt_rational(d.theta0),
        "perm": list(d.perm),
    }


def _series(d, what, cutoff):
    if what == "psi":
        return H.psi_series(d, cutoff)
    if what == "P":
        return H.p_polynomial(d)
    return H.psi_decomposed_series(d, cutoff)


def cmd_series(spec, ctx):
    d = _data(spec)
    s = _series(d, spec.what, spec.cutoff)
    return {
        "p": list(d.p),
        "what": spec.what,
        "denom": s.denom,
        "cutoff": None if s.cutoff is None else fmt_rational(s.cutoff),
        "rows": _series_rows(s),
    }


def cmd_decompose(spec, ctx):
    d = _data(spec)
    psi = H.psi_series(d, spec.cutoff)
    P = H.p_polynomial(d)
    hat = H.psi_decomposed_series(d, spec.cutoff)
    return {
        "p": list(d.p),
        "cutoff": fmt_rational(spec.cutoff),
        "identity_holds": (psi - P).truncate(spec.cutoff) == hat,
        "P": _series_rows(P),
        "rows": _series_rows(hat),
    }


def cmd_wrt(spec, ctx):
    d = _data(spec)
    K = _need_K(spec)
    out: dict = {"p": list(d.p), "K": K, "digits": spec.digits}
    exact = ext = None
    if spec.method in ("exact", "both"):
        exact = A.wrt_exact(d, K, ctx)
        out["exact"] = fmt_complex(exact, ctx)
    if spec.method in ("extrapolate", "both"):
        ext = A.wrt_extrapolate(d, K, ctx)
        out["extrapolate"] = fmt_complex(ext.value, ctx)
        out["extrapolate_error"] = ctx.mp.nstr(ext.error, 5)
    if exact is not None and ext is not None:
        out["abs_diff"] = ctx.mp.nstr(abs(exact - ext.value), 5)
    return out


def cmd_asymptote(spec, ctx):
    d = _data(spec)
    ex = A.asymptotic_expansion(d, ctx, max_r=spec.order)
    out: dict = {
        "p": list(d.p),
        "theta0": fmt_rational(d.theta0),
        "rows": [
            {"phase": fmt_rational(t.phase), "kpower": t.kpower, **{f"coeff_{k}": v for k, v in fmt_complex(t.coeff, ctx).items()}}
            for t in ex.oscillatory
        ],
        "tail": [{"r": r, "beta": fmt_complex(b, ctx)} for r, b in ex.tail],
        "p_term": fmt_complex(ex.p_term, ctx),
    }
    if spec.K is not None:
        K = spec.K
        tau = A.wrt_exact(d, K, ctx)
        lhs = A.lhs_normalized(d, K, tau, ctx)
        lead = A.cs_grouped_leading(d, K, ctx) if spec.grouping == "cs" else A.leading_term(d, K, ctx)
        mp = ctx.mp
        out["K"] = K
        out["grouping"] = spec.grouping
        out["lhs"] = fmt_complex(lhs, ctx)
        out["expansion"] = fmt_complex(ex.evaluate(K), ctx)
        # the corollary drops the xi^{Theta0/4} factor
        out["leading"] = fmt_complex(lead, ctx)
        out["leading_remainder"] = mp.nstr(abs(lhs / A.root_of_unity(mp, d.theta0 / (4 * K)) - lead), 8)
    return out


def cmd_cs_spectrum(spec, ctx):
    d = _data(spec)
    return {
        "p": list(d.p),
        "spectrum": [fmt_rational(x) for x in sorted(nonzero_cs_spectrum(d))],
        "rows": [{"l": ",".join(map(str, fc.l)), "cs": fmt_rational(fc.cs)} for fc in flat_connections(d)],
    }


def cmd_plot_data(spec, ctx):
    d = _data(spec)
    mp = ctx.mp
    rows = []
    for K in range(2, spec.Kmax + 1):
        tau = A.wrt_exact(d, K, ctx)
        lead = A.leading_term(d, K, ctx)
        lhs = mp.sqrt(mp.mpf(2) / K) * mp.sinpi(mp.mpf(1) / K) * tau
        rows.append(
            {
                "K": K,
                "re_tau": mp.nstr(tau.real, 20),
                "im_tau": mp.nstr(tau.imag, 20),
                "abs_leading": mp.nstr(abs(lead), 20),
                "abs_remainder": mp.nstr(abs(lhs - lead), 20),
            }
        )
    return {"p": list(d.p), "rows": rows}


def cmd_check(spec, ctx):
    results = run_suite(spec.suite, spec.digits)
    return {
        "suite": spec.suite,
        "passed": all(r.passed for r in results),
        "rows": [
            {"check": r.name, "status": "pass" if r.passed else "FAIL", "residual": r.residual, "seconds": f"{r.seconds:.2f}"}
            for r in results
        ],
    }


HANDLERS = {
    "validate": cmd_validate,
    "series": cmd_series,
    "decompose": cmd_decompose,
    "wrt": cmd_wrt,
    "asymptote": cmd_asymptote,
    "cs-spectrum": cmd_cs_spectrum,
    "check": cmd_check,
    "plot-data": cmd_plot_data,
}


def serialize(result: dict, output_format: str) -> str:
    if output_format == "json":
        return json.dumps(result, indent=2)
    if output_format == "csv":
        buf = io.StringIO()
        rows = result.get("rows")
        if rows:
            flat = [{k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in row.items()} for row in rows]
            w = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(flat)
        else:
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["key", "value"])
            for k, v in result.items():
                w.writerow([k, json.dumps(v) if isinstance(v, (dict, list)) else v])
        return buf.getvalue().rstrip("\n")
    lines = []
    for k, v in result.items():
        if k == "rows":
            for row in v:
                lines.append("  " + "  ".join(f"{a}={b}" for a, b in row.items()))
        else:
            lines.append(f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}")
    return "\n".join(lines)


def run(spec: JobSpec) -> tuple[int, str]:
    """Execute one job; returns the exit status and the serialized output."""
    ctx = PrecisionCtx(spec.digits)
    try:
        result = HANDLERS[spec.command](spec, ctx)
    except (DomainError, NumericalError) as exc:
        return 1, json.dumps({"error": type(exc).__name__, "message": str(exc)})
    code = 0
    if spec.command == "check" and not result["passed"]:
        code = 1
    return code, serialize(result, spec.output_format)


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers like 2,3,5, got {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        x = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 20 or 41/2, got {text!r}") from None
    if x <= 0:
        raise argparse.ArgumentTypeError(f"cutoff must be positive, got {text!r}")
    return x


def _digits(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if d < 20:
        raise argparse.ArgumentTypeError(f"digits must be >= 20, got {d}")
    return d


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seifert-wrt", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=_ints, help="fiber orders, e.g. 2,3,5")
    common.add_argument("--q", type=_ints, default=None, help="surgery coefficients (default: canonical)")
    common.add_argument("--digits", type=_digits, default=50)
    common.add_argument("--format", dest="output_format", choices=("json", "csv", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common])
    for name in ("series", "decompose"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--cutoff", type=_rational, default=Fraction(5), help="largest exponent, rational a/b")
        if name == "series":
            sp.add_argument("--what", choices=("psi", "P", "psi-hat"), default="psi")
    sp = sub.add_parser("wrt", parents=[common])
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--method", choices=("exact", "extrapolate", "both"), default="both")
    sp = sub.add_parser("asymptote", parents=[common])
    sp.add_argument("--K", type=int, default=None)
    sp.add_argument("--order", type=int, default=1, help="beta tail depth")
    sp.add_argument("--grouping", choices=("m", "cs"), default="m")
    sub.add_parser("cs-spectrum", parents=[common])
    sp = sub.add_parser("check", parents=[common])
    sp.add_argument("suite", choices=tuple(SUITES))
    sp = sub.add_parser("plot-data", parents=[common])
    sp.add_argument("--Kmax", type=int, default=30)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "check" and not args.p:
        parser.error(f"{args.command}: --p is required (comma-separated integers, e.g. --p 2,3,5)")
    fields = {k: v for k, v in vars(args).items() if k in JobSpec.__dataclass_fields__ and v is not None}
    if "p" in fields:
        fields["p"] = tuple(fields["p"])
    code, text = run(JobSpec(**fields))
    print(text, file=sys.stdout if code == 0 or args.command == "check" else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
