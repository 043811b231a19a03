"""Command-line entry point: ``python -m toricdiag <command> ...``.

Exit codes: 0 success verdict (or command completed), 1 failure verdict,
2 error (missing data, validation or parse failure).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .database import ENV_VAR, FORMATS, get_variety, import_records, load_database, write_collection, dump_collection
from .exceptional import certify, verdict_json, verdict_report
from .fan import ParseError, ValidationError, class_group, unimodular, validate_smooth_complete
from .resolution import dump_cells, enumerate_cells
from .survey import ResultCache, format_summary, parse_range, run_survey, summarize


def _presentation(text: str | None):
    if not text:
        return None
    return json.loads(text)


def cmd_check(args) -> int:
    rec = get_variety(args.dim, args.index, args.db)
    fan = rec.fan
    bad = validate_smooth_complete(fan)
    if bad:
        print(f"error: {bad}", file=sys.stderr)
        return 2
    pi = class_group(fan, _presentation(args.class_map))
    v = certify(fan, pi, convention=args.convention)
    if args.json:
        out = verdict_json(v)
        out.update(dim=args.dim, index=args.index)
        print(json.dumps(out, indent=1))
    else:
        sys.stdout.write(verdict_report(v, header=f"smoothFanoToricVariety({args.dim},{args.index})"))
    return 0 if v.success else 1


def cmd_survey(args) -> int:
    db = load_database(args.dim, args.db)
    indices = parse_range(args.range, len(db))
    cache = ResultCache(args.cache)
    progress = None
    if args.verbose:
        progress = lambda r: print(f"{r.dim} {r.index} {r.status} success={r.hhl_success} {r.runtime_ms}ms", file=sys.stderr)
    records = run_survey(args.dim, jobs=args.jobs, cache=cache, indices=indices, timeout=args.timeout,
                         directory=args.db, progress=progress)
    if args.records:
        for r in records:
            print(r.to_json())
    sys.stdout.write(format_summary(summarize(args.dim, records, len(db))))
    return 0


def cmd_unimodular(args) -> int:
    db = load_database(args.dim, args.db)
    hits = [r.index for r in db if unimodular(r.fan)]
    print(f"unimodular: {len(hits)}/{len(db)}")
    print("indices: {" + ", ".join(map(str, hits)) + "}")
    return 0


def cmd_import(args) -> int:
    text = Path(args.file).read_text()
    kw = {}
    if args.format == "rays":
        kw = {"dim": args.dim, "index": args.index}
    records = import_records(text, args.format, **kw)
    for rec in records:
        bad = validate_smooth_complete(rec.fan)
        if bad:
            print(f"error: record {rec.index}: {bad}", file=sys.stderr)
            return 2
    if args.output:
        digest = write_collection(records, Path(args.output))
        print(f"{len(records)} records, sha256 {digest}", file=sys.stderr)
    else:
        sys.stdout.write(dump_collection(records))
    return 0


def cmd_dump_cells(args) -> int:
    fan = get_variety(args.dim, args.index, args.db).fan
    pi = class_group(fan, _presentation(args.class_map))
    sys.stdout.write(dump_cells(fan, pi, enumerate_cells(fan)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricdiag", description=__doc__.splitlines()[0])
    p.add_argument("--db", type=Path, default=None, help=f"database directory (default ${ENV_VAR} or bundled data)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="certify one variety")
    c.add_argument("dim", type=int)
    c.add_argument("index", type=int)
    c.add_argument("--json", action="store_true")
    c.add_argument("--class-map", help="class-group presentation as a JSON matrix (rows x rays)")
    c.add_argument("--convention", choices=("hhl", "bondal"), default="hhl")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("survey", help="certify a whole database")
    s.add_argument("dim", type=int)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--cache", type=Path)
    s.add_argument("--range", help="A..B, inclusive")
    s.add_argument("--timeout", type=float, help="seconds per variety")
    s.add_argument("--records", action="store_true", help="print one JSON record per variety")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_survey)

    u = sub.add_parser("unimodular", help="count unimodular varieties")
    u.add_argument("dim", type=int)
    u.set_defaults(func=cmd_unimodular)

    i = sub.add_parser("import", help="convert a database dump to the canonical format")
    i.add_argument("file")
    i.add_argument("--format", choices=FORMATS, required=True)
    i.add_argument("--dim", type=int)
    i.add_argument("--index", type=int, default=0)
    i.add_argument("-o", "--output")
    i.set_defaults(func=cmd_import)

    d = sub.add_parser("dump-cells", help="print the quotient cell complex")
    d.add_argument("dim", type=int)
    d.add_argument("index", type=int)
    d.add_argument("--class-map")
    d.set_defaults(func=cmd_dump_cells)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, KeyError, ParseError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
