"""Command-line front end.

    pairspace verify [--filter NAME] [--tol FLOAT] [--samples N] [--seed N]
    pairspace scenario run FILE --out FILE
    pairspace spectra KIND [--q Q] [--energy E]

Exit status is 0 when every check passes, 1 when one fails and 2 for bad
input.  Reports are JSON with sorted keys, so equal inputs give equal bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from . import scenario as scn
from . import spectra
from . import verify
from .errors import PairspaceError, ParseError, UnknownKind

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _report(checks: list, steps: list) -> dict:
    return {"version": __version__, "checks": checks, "scenario_steps": steps}


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _failures(checks: list) -> list[str]:
    return [f"{c['id']} (eq {c['paper_eq']}, residual {c['residual']:.3e})"
            for c in checks if not c["pass"]]


def _positive_float(raw: str) -> float:
    try:
        x = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {raw!r}") from None
    if not math.isfinite(x) or x <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive and finite")
    return x


def _nonneg_int(raw: str) -> int:
    try:
        x = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {raw!r}") from None
    if x < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return x


def cmd_verify(args) -> int:
    if not verify.select(args.filter):
        print(f"error: no check matches filter {args.filter!r}", file=sys.stderr)
        return EXIT_INPUT
    if args.corrupt is not None and args.corrupt not in {c.id for c in verify.REGISTRY}:
        print(f"error: unknown check {args.corrupt!r}", file=sys.stderr)
        return EXIT_INPUT
    checks = verify.run_checks(args.filter, args.tol, args.samples, args.seed, args.corrupt)
    _emit(dumps(_report(checks, [])), args.out)
    failed = _failures(checks)
    for line in failed:
        print(f"FAIL {line}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_scenario(args) -> int:
    try:
        sc = scn.load_file(args.file)
        result = scn.run(sc, args.tol)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ParseError as exc:
        where = f" (line {exc.line})" if exc.line is not None else ""
        print(f"ParseError{where}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PairspaceError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(dumps(_report(result["checks"], result["scenario_steps"])), args.out)
    failed = _failures(result["checks"])
    for line in failed:
        print(f"FAIL {line}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_spectra(args) -> int:
    try:
        text = spectra.render(args.kind, q=args.q, energy=args.energy)
    except UnknownKind as exc:
        print(f"UnknownKind: {exc}; known kinds: {', '.join(spectra.KINDS)}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pairspace", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the identity checks")
    v.add_argument("--filter", help="module name or check id")
    v.add_argument("--tol", type=_positive_float, default=None)
    v.add_argument("--samples", type=_nonneg_int, default=verify.DEFAULT_SAMPLES)
    v.add_argument("--seed", type=_nonneg_int, default=verify.DEFAULT_SEED)
    v.add_argument("--corrupt", metavar="CHECK_ID", help=argparse.SUPPRESS)
    v.add_argument("--out", help="write the report here instead of stdout")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("scenario", help="scenario files")
    ssub = s.add_subparsers(dest="action", required=True)
    r = ssub.add_parser("run", help="execute a scenario file")
    r.add_argument("file")
    r.add_argument("--out", help="report path (stdout when omitted)")
    r.add_argument("--tol", type=_positive_float, default=None)
    r.set_defaults(func=cmd_scenario)

    sp = sub.add_parser("spectra", help="print canonical matrices")
    sp.add_argument("kind", help=", ".join(spectra.KINDS))
    sp.add_argument("--q", default="1", help="charge magnitude, e.g. 1/3")
    sp.add_argument("--energy", default="1", help="energy E for the energy tables")
    sp.set_defaults(func=cmd_spectra)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help/--version
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        # a malformed PAIRSPACE_TOL surfaces here
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
