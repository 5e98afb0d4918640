"""Command line entry point: ``primsieve <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .criteria import (
    ELIMINATED,
    GENUINE_EXCEPTION,
    INCONCLUSIVE,
    POSSIBLE_EXCEPTION,
    ClassificationRecord,
    classify,
    criteria_can_apply,
    partial_hypersieve_check,
    prior_work_verdict,
)
from .fixtures import FixtureParseError, FixtureValidationError, bundled_fixtures, parse_fixtures
from .hyperplanes import (
    CERTIFICATE_FIELDS,
    SEARCH_MAX_ORDER,
    SearchBudgetError,
    bundled_certificates,
    exhaustive_exception_search,
)
from .finite_field import build_field
from .numtheory import prime_power_base
from .selfcheck import DEFAULT_ORDERS, FAULTS, orders_up_to, run_selfcheck
from .tables import TABLE_IDS, TABLE_QS, FactorSource, build_table, swept_out

EXIT_CODES = {ELIMINATED: 0, POSSIBLE_EXCEPTION: 10, GENUINE_EXCEPTION: 20, INCONCLUSIVE: 30}
EXIT_USAGE = 2


def _source(args) -> FactorSource:
    fixtures = bundled_fixtures()
    if args.factors:
        fixtures = fixtures.merged(parse_fixtures(args.factors))
    return FactorSource(fixtures)


def _check_q(q: int) -> None:
    prime_power_base(q)  # raises ValueError for a non prime power


def classify_record(q: int, r: int, source: FactorSource) -> ClassificationRecord:
    if r < 1:
        raise ValueError("r must be at least 1")
    prior = prior_work_verdict(q, r)
    if prior is not None:
        return prior
    f = source.get(q, r)
    if f is None:
        part = source.partial(q, r)
        if part is not None:
            rec = partial_hypersieve_check(q, r, part)
            if rec.verdict == ELIMINATED:
                return rec
        if q in TABLE_QS and swept_out(q, r):
            return ClassificationRecord(q, r, ELIMINATED, "omega_sweep", notes="r is past the omega-sweep threshold")
        if not criteria_can_apply(q, r):
            return ClassificationRecord(
                q, r, POSSIBLE_EXCEPTION, None, notes="no criterion can hold whatever the factorization"
            )
        return ClassificationRecord(
            q, r, INCONCLUSIVE, None, notes="factorization of q^r - 1 not available within the budget"
        )
    return classify(q, r, f, f.phi(), certificate=bundled_certificates().get((q, r)))


def _record_json(rec: ClassificationRecord) -> str:
    payload = {"schema": 1, "version": __version__, **rec.to_dict()}
    return json.dumps(payload, sort_keys=True)


def cmd_classify(args) -> int:
    _check_q(args.q)
    rec = classify_record(args.q, args.r, _source(args))
    if not args.json:
        print(f"{rec.q}\t{rec.r}\t{rec.verdict}\t{rec.criterion or ''}")
    else:
        print(_record_json(rec))
    return EXIT_CODES[rec.verdict]


def cmd_table(args) -> int:
    source = _source(args) if args.id not in ("1", "2") else None
    artifact = build_table(args.id, source)
    sys.stdout.write(artifact.to_json() if args.json else artifact.to_tsv())
    return 0


def cmd_sweep(args) -> int:
    _check_q(args.q)
    source = _source(args)
    worst = 0
    for r in range(args.r_min, args.r_max + 1):
        rec = classify_record(args.q, r, source)
        if args.json:
            print(_record_json(rec))
        else:
            print(f"{rec.q}\t{rec.r}\t{rec.verdict}\t{rec.criterion or ''}")
        worst = max(worst, EXIT_CODES[rec.verdict])
    return worst


def cmd_exceptions(args) -> int:
    p, k = prime_power_base(args.q)
    if args.q**args.r > SEARCH_MAX_ORDER:
        print(f"error: q^r = {args.q ** args.r} exceeds the search ceiling {SEARCH_MAX_ORDER}", file=sys.stderr)
        return EXIT_USAGE
    key = (args.q, args.r)
    ctx = CERTIFICATE_FIELDS[key]() if key in CERTIFICATE_FIELDS else build_field(p, k, args.r)
    certs = exhaustive_exception_search(ctx)
    if not certs:
        print("none")
        return 0
    for cert in certs:
        print(cert.to_line())
    return 20


def cmd_selfcheck(args) -> int:
    orders = DEFAULT_ORDERS if args.max_order is None else orders_up_to(args.max_order)
    report = run_selfcheck(orders, seed=args.seed, fault=args.inject_fault)
    sys.stdout.write(report.render())
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="primsieve", description="Primitive elements avoiding affine hyperplanes.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def output_flags(p, default_json: bool):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--json", action="store_true", default=default_json)
        g.add_argument("--tsv", dest="json", action="store_false")

    p = sub.add_parser("classify", help="classify one pair (q, r); exit 0/10/20/30")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--factors", help="extra factorization fixture file")
    output_flags(p, True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("table", help="regenerate a table")
    p.add_argument("--id", required=True, choices=TABLE_IDS)
    p.add_argument("--factors")
    output_flags(p, False)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sweep", help="classify r = r_min..r_max for one q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--r-max", type=int, required=True)
    p.add_argument("--r-min", type=int, default=2)
    p.add_argument("--factors")
    output_flags(p, False)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("exceptions", help="exhaustive hyperplane search (q^r <= 729)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_exceptions)

    p = sub.add_parser("selfcheck", help="run the brute-force property suites")
    p.add_argument("--max-order", type=int, default=None)
    p.add_argument("--seed", type=int, default=20240601)
    p.add_argument("--inject-fault", choices=FAULTS, default=None)
    p.set_defaults(func=cmd_selfcheck)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FixtureParseError, FixtureValidationError, SearchBudgetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
