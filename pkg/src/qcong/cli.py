"""Command-line front end.

    qcong coeff  --family b_4_9 --n 7
    qcong verify --id T1.3.i --nmax 100
    qcong report --only newman --format structured
    qcong list

Exit codes: 0 all pass, 1 any failure, 2 usage error, 3 only vacuous results.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

from . import __version__
from .congruences import DEFAULT_ORDER, FAMILIES, TARGETS, SeriesCache, family_ids, sweep
from .newman import SERIES, newman_params, newman_series, verify_recurrence
from .partitions import ColoredSpec, RegularitySpec, verify_oracle
from .qseries import EtaQuotient, compile_quotient
from .report import VerificationReport, dump_document
from .theta import identity_ids, verify_dissection, verify_identity
from .util import is_prime, parse_int_list

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_VACUOUS = 0, 1, 2, 3

IDENTITY_ORDER = 400
NEWMAN_ORDER = 3000
NEWMAN_PRIMES = (5, 7, 11, 13)
ORACLE_REGULAR = ((3, 8), (4, 7), (4, 9), (3, 5, 8))
ORACLE_COLORED = ({3: 1, 5: 1}, {1: 1, 15: 1}, {1: 1, 3: 1, 5: 1, 15: 1})
ORACLE_REGULAR_N, ORACLE_COLORED_N = 200, 150
DISSECTIONS = [("f1", p, 200) for p in (5, 7, 11, 13)] + [("f1_cubed", p, 300) for p in (3, 5, 7, 11)]
CLASSES = ("identities", "oracles", "newman", "dissections", "families")


class UsageError(Exception):
    pass


# --- id resolution ----------------------------------------------------------------


def _parse_oracle(spec: str):
    """``regular:3,8`` or ``colored:3^1,5^1`` (a bare list means regular)."""
    kind, _, body = spec.partition(":")
    if not body:
        kind, body = "regular", spec
    try:
        if kind == "regular":
            return RegularitySpec(parse_int_list(body))
        if kind == "colored":
            parts = {}
            for tok in body.split(","):
                c, _, s = tok.partition("^")
                parts[int(c)] = int(s or 1)
            return ColoredSpec(parts)
    except ValueError as exc:
        raise UsageError(f"bad oracle spec {spec!r}: {exc}") from None
    raise UsageError(f"oracle kind must be 'regular' or 'colored', got {kind!r}")


def _parse_newman(body: str):
    try:
        r, s, q, p = parse_int_list(body)
        return newman_params(r, s, q, p)
    except ValueError as exc:
        raise UsageError(f"bad newman id {body!r}: {exc}") from None


def known_ids() -> list[str]:
    ids = list(identity_ids()) + family_ids()
    ids += [f"dissect:{kind}:{p}" for kind, p, _ in DISSECTIONS]
    ids += [f"newman:{r},{s},{q},{p}" for r, s, q in SERIES.values() for p in NEWMAN_PRIMES]
    ids += ["oracle:regular:" + ",".join(map(str, s)) for s in ORACLE_REGULAR]
    ids += ["oracle:colored:" + ",".join(f"{c}^{m}" for c, m in sorted(s.items())) for s in ORACLE_COLORED]
    return sorted(ids)


def _job(id: str, args, cache: SeriesCache) -> Callable[[], VerificationReport]:
    """Resolve an id to a zero-argument runner; raises UsageError for unknown ids."""
    if id in identity_ids():
        order = args.order or IDENTITY_ORDER
        return lambda: verify_identity(id, order)
    if id in FAMILIES:
        primes = parse_int_list(args.primes) if args.primes else None
        if primes is not None and not all(is_prime(p) for p in primes):
            raise UsageError(f"--primes must list primes, got {args.primes}")
        order = args.order or DEFAULT_ORDER
        return lambda: sweep(id, n_max=args.nmax, primes=primes, j_max=args.jmax, order=order, cache=cache)
    head, _, body = id.partition(":")
    if head == "newman":
        params = _parse_newman(body)
        order = args.order or NEWMAN_ORDER
        return lambda: verify_recurrence(newman_series(params.r, params.s, params.qp, order), params)
    if head == "oracle":
        spec = _parse_oracle(body)
        n_max = args.nmax or (ORACLE_COLORED_N if isinstance(spec, ColoredSpec) else ORACLE_REGULAR_N)
        return lambda: verify_oracle(spec, n_max)
    if head == "dissect":
        kind, _, p = body.partition(":")
        if kind not in ("f1", "f1_cubed") or not p.isdigit():
            raise UsageError(f"dissection id must be dissect:f1:<p> or dissect:f1_cubed:<p>, got {id!r}")
        order = args.order or (200 if kind == "f1" else 300)
        return lambda: verify_dissection(kind, int(p), order)
    raise UsageError(f"unknown id {id!r}; run 'list' to see the known ids")


def _suite(only: str | None) -> list[str]:
    groups = {
        "identities": list(identity_ids()),
        "families": family_ids(),
        "dissections": [f"dissect:{k}:{p}" for k, p, _ in DISSECTIONS],
        "newman": [f"newman:{r},{s},{q},{p}" for r, s, q in SERIES.values() for p in NEWMAN_PRIMES],
        "oracles": [i for i in known_ids() if i.startswith("oracle:")],
    }
    if only:
        return groups[only]
    return [i for name in CLASSES for i in groups[name]]


def exit_code(reports: list[VerificationReport]) -> int:
    statuses = {r.status for r in reports}
    if "fail" in statuses:
        return EXIT_FAIL
    if statuses == {"vacuous"}:
        return EXIT_VACUOUS
    return EXIT_PASS


# --- output -----------------------------------------------------------------------


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(reports: list[VerificationReport], args, run_params: dict) -> None:
    if args.format == "structured":
        _write(dump_document(__version__, run_params, reports), args.output)
        return
    lines = []
    for rep in sorted(reports, key=lambda r: r.id):
        lines.append(rep.summary())
        if args.verbose or rep.status != "pass":
            lines.extend(f"    {note}" for note in rep.notes)
            for f in rep.failures[: args.show]:
                lines.append("    " + json.dumps(f.to_dict()))
    counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "vacuous")}
    lines.append(f"{len(reports)} entries: {counts['pass']} pass, {counts['fail']} fail, {counts['vacuous']} vacuous")
    _write("\n".join(lines) + "\n", args.output)


def _run(ids: list[str], args) -> list[VerificationReport]:
    cache = SeriesCache()
    jobs = [_job(i, args, cache) for i in ids]
    if args.jobs > 1:
        with ThreadPoolExecutor(args.jobs) as pool:
            return list(pool.map(lambda job: job(), jobs))
    return [job() for job in jobs]


# --- commands -----------------------------------------------------------------------


def _resolve_family(name: str) -> EtaQuotient:
    if name in TARGETS:
        return TARGETS[name].quotient
    try:
        return EtaQuotient.parse(name)
    except ValueError:
        raise UsageError(f"unknown family {name!r}; use one of {', '.join(TARGETS)} or an eta quotient like 'f1^2 f3'")


def cmd_coeff(args) -> int:
    if args.family is None:
        raise UsageError("coeff needs --family")
    eq = _resolve_family(args.family)
    if args.n is not None:
        lo = hi = args.n
    else:
        lo, hi = 0, args.nmax if args.nmax is not None else 20
    if lo < 0 or hi < 0:
        raise UsageError("--n/--nmax must be nonnegative")
    modulus = None if args.mod in ("auto", "exact") else args.mod
    if modulus is not None:
        try:
            modulus = int(modulus)
        except ValueError:
            raise UsageError(f"--mod must be 'exact', 'auto' or an integer >= 2, got {args.mod!r}") from None
        if modulus < 2:
            raise UsageError("--mod must be at least 2")
    series = compile_quotient(eq, hi, modulus)
    if args.format == "structured":
        doc = {
            "tool_version": __version__,
            "family": args.family,
            "quotient": str(eq),
            "modulus": "" if modulus is None else str(modulus),
            "coefficients": {str(n): str(series.coeff(n)) for n in range(lo, hi + 1)},
        }
        _write(json.dumps(doc, indent=2) + "\n", args.output)
    else:
        _write("".join(f"{n}\t{series.coeff(n)}\n" for n in range(lo, hi + 1)), args.output)
    return EXIT_PASS


def cmd_verify(args) -> int:
    if not args.id:
        raise UsageError("verify needs --id")
    ids = args.id
    reports = _run(ids, args)
    _emit(reports, args, _run_params(args, "verify", ids=",".join(ids)))
    return exit_code(reports)


def cmd_report(args) -> int:
    ids = _suite(args.only)
    reports = _run(ids, args)
    _emit(reports, args, _run_params(args, "report", only=args.only or "all"))
    return exit_code(reports)


def cmd_list(args) -> int:
    lines = []
    for i in _suite(args.only) if args.only else known_ids():
        fam = FAMILIES.get(i)
        lines.append(f"{i}\t{fam.statement}" if fam else i)
    if not args.only:
        lines.append("")
        lines.extend(f"family {t.name}\t{t.quotient}\t{t.description}" for t in TARGETS.values())
    _write("\n".join(lines) + "\n", args.output)
    return EXIT_PASS


def _run_params(args, command: str, **extra) -> dict:
    out = {"command": command}
    for key in ("order", "nmax", "jmax", "primes"):
        value = getattr(args, key)
        out[key] = "default" if value is None else value
    out.update(extra)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcong", description="Exact q-series congruence verification.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--output", "-o", help="write to this file instead of standard output")

    def sweep_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--order", type=int, help="series truncation order (default depends on the entry)")
        p.add_argument("--nmax", type=int, help="largest n in a sweep, or oracle range")
        p.add_argument("--jmax", type=int, help="largest j (or k) in a sweep")
        p.add_argument("--primes", help="comma-separated primes, e.g. 5,7,11,13")
        p.add_argument("--jobs", type=int, default=1, help="run independent entries on this many threads")
        p.add_argument("--show", type=int, default=5, help="failures to print per entry in text mode")
        p.add_argument("--verbose", "-v", action="store_true", help="print notes for passing entries too")

    p = sub.add_parser("coeff", help="print coefficients of a counting function or eta quotient")
    p.add_argument("--family", help=f"one of {', '.join(TARGETS)} or an eta quotient string")
    p.add_argument("--n", type=int, help="single coefficient index")
    p.add_argument("--nmax", type=int, help="print indices 0..nmax (default 20)")
    p.add_argument("--mod", default="auto", help="'exact' (same as 'auto') or a modulus M")
    common(p)
    p.set_defaults(func=cmd_coeff)

    p = sub.add_parser("verify", help="run one or more verifications by id")
    p.add_argument("--id", action="append", help="identity, family, newman:r,s,q,p, oracle:<spec> or dissect:<kind>:<p>")
    sweep_flags(p)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="run the full suite or one class of it")
    p.add_argument("--only", choices=CLASSES)
    sweep_flags(p)
    common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("list", help="enumerate verification ids and families")
    p.add_argument("--only", choices=CLASSES)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_list)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    if getattr(args, "jobs", 1) < 1:
        parser.print_usage(sys.stderr)
        print("qcong: error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qcong: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, ValueError) as exc:
        # bad parameter combinations surface from the library as these
        msg = exc.args[0] if exc.args else exc
        print(f"qcong: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
