"""Command-line interface: reproducible experiments over all modules.

Every command is deterministic given its flags; JSON output always embeds
the tool version and the full flag set.  Exit codes: 0 success, 2 usage
error, 3 resource limit, 4 corrupt or version-mismatched checkpoint.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

from gmpy2 import mpq, mpz

from . import __version__
from .constants import gamma_classic, gamma_j_estimate, gamma_j_prime_estimate
from .errors import (
    CorruptCheckpointError,
    DomainError,
    HarmoniterError,
    NotPrimeError,
    ResourceLimitError,
    UnsupportedOrderError,
    VersionMismatchError,
)
from .exact import format_rational
from .harmonic import concavity_check, h_eval
from .numtheory import (
    denominator_valuation_scan,
    inequality_threshold,
    integrality_check,
    kurschak_witness,
    theisinger_witness,
)

#: Scans refuse to exceed this without --unbounded; the desk-scale
#: reference tables stop here and anything bigger deserves an explicit opt-in.
N_MAX_CAP = 2000

CHECKPOINT_DIR_ENV = "HARMONITER_CHECKPOINT_DIR"


def render_decimal(q: mpq, digits: int = 12) -> str:
    """Exact fixed-point rendering with round-half-even at ``digits``.

    Never truncates: the rational is scaled, rounded once, and printed,
    so the text is the correctly rounded decimal of the exact value.
    """
    if digits < 0:
        raise ValueError("digits must be >= 0")
    sign = "-" if q < 0 else ""
    num = abs(mpz(q.numerator)) * mpz(10) ** digits
    den = mpz(q.denominator)
    whole, rem = divmod(num, den)
    double = 2 * rem
    if double > den or (double == den and whole % 2 == 1):
        whole += 1
    text = str(whole).rjust(digits + 1, "0")
    if digits == 0:
        return sign + text
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def _flags_dict(args: argparse.Namespace) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit_json(payload: dict, args: argparse.Namespace) -> None:
    payload = {"version": __version__, "flags": _flags_dict(args), **payload}
    print(json.dumps(payload, indent=2, sort_keys=False))


# ---------------------------------------------------------------------------
# eval


def cmd_eval(args: argparse.Namespace) -> int:
    value = h_eval(args.j, args.n)
    rational = format_rational(value)
    decimal = render_decimal(value, args.precision)
    if args.format == "rational":
        print(rational)
    elif args.format == "decimal":
        print(decimal)
    elif args.format == "csv":
        print("j,n,rational,decimal")
        print(f"{args.j},{args.n},{rational},{decimal}")
    else:
        _emit_json(
            {"command": "eval", "j": args.j, "n": args.n,
             "rational": rational, "decimal": decimal},
            args,
        )
    return 0


# ---------------------------------------------------------------------------
# scan


def _checkpoint_path(args: argparse.Namespace) -> Optional[Path]:
    if args.checkpoint is None:
        return None
    path = Path(args.checkpoint)
    base = os.environ.get(CHECKPOINT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _scan_out_path(template: Path, j: int, p: int, multi: bool) -> Path:
    if not multi:
        return template
    return template.with_name(f"{template.stem}.j{j}.p{p}{template.suffix}")


def cmd_scan(args: argparse.Namespace) -> int:
    primes = [int(tok) for tok in args.primes.split(",") if tok.strip()]
    if not primes:
        raise DomainError("--primes must list at least one prime")
    result = denominator_valuation_scan(
        args.j,
        primes,
        args.n_max,
        checkpoint=_checkpoint_path(args),
        engine=args.engine,
        resume=args.resume,
        checkpoint_every=args.checkpoint_every,
    )
    digest = result.final_state.digest()
    written: List[str] = []
    if args.out:
        template = Path(args.out)
        multi = len(result.tables) > 1
        for table in result.tables:
            path = _scan_out_path(template, args.j, table.prime, multi)
            table.write_csv(path)
            written.append(str(path))
    if args.json:
        report = result.report()
        report["flags"] = _flags_dict(args)
        report["csv_files"] = written
        text = json.dumps(report, indent=2)
        if args.json == "-":
            print(text)
        else:
            Path(args.json).write_text(text + "\n", encoding="utf-8")
            written.append(args.json)
    for table in result.tables:
        runs = ", ".join(f"({s},{e},{v})" for s, e, v in table.runs)
        print(f"j={args.j} p={table.prime} n_max={args.n_max} runs: {runs}")
    print(f"engine={result.engine} checkpoint_digest=sha256:{digest}")
    if written:
        print("wrote: " + ", ".join(written))
    return 0


# ---------------------------------------------------------------------------
# gamma


def cmd_gamma(args: argparse.Namespace) -> int:
    method = args.method
    if method is None:
        method = "standard" if args.j == 1 else "improved"
    if args.j == 1:
        if method == "primed":
            raise DomainError("the primed constant is defined for j >= 2")
        est = gamma_classic(args.n, method)
    elif method == "primed":
        est = gamma_j_prime_estimate(args.j, args.n)
    elif method == "improved":
        est = gamma_j_estimate(args.j, args.n)
    else:
        raise DomainError(
            f"method {method!r} applies to j = 1 only; use improved or primed"
        )
    value = est.raw if est.corrected is None else est.corrected
    if args.format == "json":
        _emit_json(
            {
                "command": "gamma",
                "j": est.order,
                "n": est.n,
                "method": est.method,
                "raw": est.raw,
                "corrected": est.corrected,
                "value": value,
                "error_order": est.error_order,
            },
            args,
        )
        return 0
    print(f"{value:.{args.precision}f}")
    print(f"  raw       = {est.raw:.{args.precision}f}")
    if est.corrected is not None and est.method == "improved":
        print(f"  corrected = {est.corrected:.{args.precision}f}")
    if est.error_order is not None:
        print(f"  error order ~ {est.error_order:.3e}"
              + (" (converges like 1/ln, no digit below is certain)"
                 if est.method == "primed" else ""))
    return 0


# ---------------------------------------------------------------------------
# check


def cmd_check(args: argparse.Namespace) -> int:
    what = args.what
    if what == "integrality":
        hits = integrality_check(args.j, args.n_max)
        print(f"integral h_{args.j}(n) for n <= {args.n_max}: {hits}")
        return 0
    if what == "concavity":
        bad = concavity_check(args.j, args.n_max)
        if bad:
            print(f"second difference >= 0 at n = {bad}")
        else:
            print(f"h_{args.j} concave on [1, {args.n_max}]")
        return 0
    if what == "inequality":
        scan = inequality_threshold(args.n_max)
        vio = ",".join(str(k) for k in scan.violations)
        print(f"k*={scan.k_star}; violations: {vio}")
        if scan.marginal:
            print(f"marginal comparisons: {scan.marginal}")
        return 0
    if what == "theisinger":
        for n in range(2, args.n_max + 1):
            theisinger_witness(n)
        print(f"all witnesses verified for n in [2, {args.n_max}]")
        return 0
    if what == "kurschak":
        for n in range(2, args.n_max + 1):
            kurschak_witness(n)
        print(f"all witnesses verified for n in [2, {args.n_max}]")
        return 0
    raise DomainError(f"unknown check {what!r}")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmoniter",
        description="Iterated harmonic numbers, generalized Euler constants, "
                    "and p-adic valuation scans in exact arithmetic.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate h_j(n) exactly")
    p_eval.add_argument("--j", type=int, required=True)
    p_eval.add_argument("--n", type=int, required=True)
    p_eval.add_argument("--format", choices=["rational", "decimal", "csv", "json"],
                        default="rational")
    p_eval.add_argument("--precision", type=int, default=12,
                        help="decimal digits for float rendering (round-half-even)")
    p_eval.set_defaults(func=cmd_eval)

    p_scan = sub.add_parser("scan", help="valuation scan of h_j denominators")
    p_scan.add_argument("--j", type=int, required=True)
    p_scan.add_argument("--primes", required=True,
                        help="comma-separated primes, e.g. 2,3,5")
    p_scan.add_argument("--n-max", type=int, required=True)
    p_scan.add_argument("--out", help="CSV output path (per-prime suffix if several)")
    p_scan.add_argument("--json", help="JSON report path, or - for stdout")
    p_scan.add_argument("--checkpoint",
                        help=f"checkpoint file (relative paths join ${CHECKPOINT_DIR_ENV})")
    p_scan.add_argument("--resume", action="store_true",
                        help="continue from the checkpoint file")
    p_scan.add_argument("--checkpoint-every", type=int, default=1000)
    p_scan.add_argument("--engine", choices=["auto", "exact", "padic"], default="auto")
    p_scan.add_argument("--unbounded", action="store_true",
                        help=f"allow n-max beyond the default cap of {N_MAX_CAP}")
    p_scan.set_defaults(func=cmd_scan)

    p_gamma = sub.add_parser("gamma", help="estimate gamma, gamma_j, or gamma_j'")
    p_gamma.add_argument("--j", type=int, default=1)
    p_gamma.add_argument("--n", type=int, required=True)
    p_gamma.add_argument("--method",
                         choices=["minimal", "standard", "improved", "primed"])
    p_gamma.add_argument("--format", choices=["text", "json"], default="text")
    p_gamma.add_argument("--precision", type=int, default=12)
    p_gamma.set_defaults(func=cmd_gamma)

    p_check = sub.add_parser("check", help="run a verifier suite")
    p_check.add_argument("--what", required=True,
                         choices=["integrality", "inequality", "concavity",
                                  "theisinger", "kurschak"])
    p_check.add_argument("--j", type=int, default=1)
    p_check.add_argument("--n-max", type=int, default=100)
    p_check.set_defaults(func=cmd_check)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "scan" and args.n_max > N_MAX_CAP and not args.unbounded:
        parser.error(
            f"--n-max {args.n_max} exceeds the desk-scale cap of {N_MAX_CAP}; "
            "pass --unbounded for a full-scale run"
        )
    try:
        return args.func(args)
    except (CorruptCheckpointError, VersionMismatchError) as exc:
        print(f"harmoniter: checkpoint error: {exc}", file=sys.stderr)
        return 4
    except ResourceLimitError as exc:
        print(f"harmoniter: resource limit: {exc}", file=sys.stderr)
        return 3
    except (DomainError, NotPrimeError, UnsupportedOrderError, ValueError) as exc:
        print(f"harmoniter: {exc}", file=sys.stderr)
        return 2
    except HarmoniterError as exc:
        print(f"harmoniter: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
