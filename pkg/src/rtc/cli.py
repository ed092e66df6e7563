"""Command-line front end.

Exit codes: 0 success, 1 inadmissible parameters, 2 numerical instability,
3 disagreement with the closed-form tables.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .alcove import admissible_ps, ell_from_level, root_params
from .cache import FusionCache, table_to_dict
from .census import CSV_COLUMNS, analyze_point, records_to_csv, records_to_json
from .errors import CacheError, CoverageError, ParameterError, RTCError
from .lie import AlgebraId, build_root_datum
from .qnum import PrecisionCtx, twist_exponent
from .sweep import load_grid, sweep
from .tables import expected_flags

EXIT_OK, EXIT_PARAMS, EXIT_NUMERIC, EXIT_MISMATCH = 0, 1, 2, 3

log = logging.getLogger("rtc")


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, (ParameterError, CoverageError, CacheError)):
        return EXIT_PARAMS
    return EXIT_NUMERIC


def _ctx(args) -> PrecisionCtx:
    return PrecisionCtx(args.digits, args.tolerance_exponent)


def _cache(args) -> FusionCache:
    return FusionCache(args.cache_dir)


def _algebra_and_ell(args) -> tuple[AlgebraId, int]:
    algebra = AlgebraId(args.family.upper(), args.rank)
    if (args.ell is None) == (args.k is None):
        raise ParameterError("give exactly one of --ell and --k")
    ell = args.ell if args.ell is not None else ell_from_level(algebra, args.k)
    return algebra, ell


def _fmt(x, digits=20) -> str:
    mp = x.context if hasattr(x, "context") else None
    if mp is None:
        return str(x)
    # drop round-off imaginary/real parts far below the printed precision
    return mp.nstr(mp.chop(x, mp.mpf(10) ** (-mp.dps + 5)), digits)


def _compact_json(data: dict) -> str:
    """One top-level key per line, values on a single line."""
    body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(v, separators=(',', ':'))}"
                       for k, v in data.items())
    return "{\n" + body + "\n}"


def cmd_classify(args) -> int:
    algebra, ell = _algebra_and_ell(args)
    root_params(algebra, ell, args.p)
    ctx = _ctx(args)
    table = _cache(args).get(algebra, ell, ctx)
    oracle = True if args.with_smatrix else args.with_oracle
    res = analyze_point(algebra, ell, args.p, ctx, with_modular_oracle=oracle,
                        fast_unitarity=args.fast_unitarity, table=table,
                        keep_smatrix=args.with_smatrix)
    rec = res.record
    if args.format == "csv":
        sys.stdout.write(records_to_csv([rec]))
        return EXIT_OK
    datum = build_root_datum(algebra)
    objects = [{"weight": list(lam),
                "qdim": _fmt(d),
                "fpdim": _fmt(f),
                "twist_exponent": str(twist_exponent(datum, res.params, lam))}
               for lam, d, f in zip(res.table.objects, res.qtable.dims, res.table.fp_dims)]
    smatrix = None
    if res.smatrix is not None:
        smatrix = [[_fmt(z, 12) for z in row] for row in res.smatrix]
    if args.format == "json":
        out = {"record": {name: getattr(rec, name) for name in CSV_COLUMNS},
               "objects": objects}
        if smatrix is not None:
            out["smatrix"] = smatrix
        print(json.dumps(out, indent=2))
        return EXIT_OK
    for name in CSV_COLUMNS:
        print(f"{name:>15}: {getattr(rec, name)}")
    print("\nobjects (theta = exp(i pi t)):")
    for i, obj in enumerate(objects):
        print(f"  [{i}] {tuple(obj['weight'])}  d = {obj['qdim']}  "
              f"FPdim = {obj['fpdim']}  t = {obj['twist_exponent']}")
    if smatrix is not None:
        print("\nS (unnormalized, S_11 = 1):")
        for row in smatrix:
            print("  " + "  ".join(row))
    return EXIT_OK


def cmd_census(args) -> int:
    grid = load_grid(args.grid)
    report = sweep(grid, _ctx(args), _cache(args), with_oracle=args.with_oracle, jobs=args.jobs)
    as_json = args.format == "json" or (args.out and Path(args.out).suffix == ".json")
    text = records_to_json(report.records) if as_json else records_to_csv(report.records)
    if args.out:
        Path(args.out).write_text(text)
        report_path = Path(args.report or f"{args.out}.report.txt")
        report_path.write_text(report.summary())
    else:
        sys.stdout.write(text)
        if args.report:
            Path(args.report).write_text(report.summary())
    sys.stderr.write(report.summary() if not report.ok else
                     f"{len(report.records)} points, all flags agree with the tables\n")
    if report.mismatches:
        return EXIT_MISMATCH
    if report.errors:
        return EXIT_PARAMS if all(e.parameter for e in report.errors) else EXIT_NUMERIC
    return EXIT_OK


def cmd_fusion(args) -> int:
    algebra, ell = _algebra_and_ell(args)
    ctx = _ctx(args)
    table = _cache(args).get(algebra, ell, ctx)
    if args.format == "json":
        data = table_to_dict(table)
        data["fp_dims"] = [_fmt(f) for f in table.fp_dims]
        print(_compact_json(data))
        return EXIT_OK
    if args.format == "csv":
        print("i,j,k,N")
        for row in table.coeffs.tolist():
            print(",".join(map(str, row)))
        return EXIT_OK
    print(f"{algebra} ell={ell}: {len(table)} simple objects")
    for i, lam in enumerate(table.objects):
        print(f"  [{i}] {lam}  dual=[{table.dual_index[i]}]  FPdim = {_fmt(table.fp_dims[i])}")
    for i in range(len(table)):
        for j in range(i, len(table)):
            terms = " + ".join(f"{n}*[{k}]" if n > 1 else f"[{k}]"
                               for k, n in sorted(table.product(i, j).items()))
            print(f"  [{i}] x [{j}] = {terms}")
    return EXIT_OK


def cmd_cache(args) -> int:
    cache = _cache(args)
    if args.action == "clear":
        print(f"removed {cache.clear()} file(s) from {cache.directory}")
    else:
        for path in cache.entries():
            print(path)
    return EXIT_OK


def cmd_tables(args) -> int:
    algebra, ell = _algebra_and_ell(args)
    ps = [args.p] if args.p is not None else admissible_ps(ell)
    print("p,unitary,pseudo_unitary,modular")
    for p in ps:
        f = expected_flags(algebra, ell, p)
        print(f"{p},{int(f.unitary)},{int(f.pseudo_unitary)},{int(f.modular)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=30, help="working precision (default 30)")
    common.add_argument("--tolerance-exponent", type=int, default=20,
                        help="tolerances are 10^-N (default 20)")
    common.add_argument("--cache-dir", default=None,
                        help="fusion cache directory (default $RTC_CACHE or .rtc-cache)")
    common.add_argument("--format", choices=("table", "csv", "json"), default="table")
    oracle = common.add_mutually_exclusive_group()
    oracle.add_argument("--with-oracle", dest="with_oracle", action="store_const", const=True,
                        default=None, help="always compute the S-matrix invertibility oracle")
    oracle.add_argument("--no-oracle", dest="with_oracle", action="store_const", const=False,
                        help="never compute the oracle (default: only for <= 200 objects)")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("-v", "--verbose", action="store_true")

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument("--family", required=True, choices=list("ABCDEFGabcdefg"))
    point.add_argument("--rank", type=int, required=True)
    point.add_argument("--ell", type=int)
    point.add_argument("--k", type=int, help="uniform level, ell = m (k + g)")

    parser = argparse.ArgumentParser(
        prog="rtc", description="Ribbon categories from quantum groups at roots of unity.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common, point], help="classify one parameter point")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--with-smatrix", action="store_true", help="print the reconstructed S-matrix")
    p.add_argument("--fast-unitarity", action="store_true",
                   help="decide unitarity flags at machine precision")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("census", parents=[common], help="sweep a grid and compare with the tables")
    p.add_argument("--grid", required=True)
    p.add_argument("--out", help="output file (.csv or .json); stdout when omitted")
    p.add_argument("--report", help="mismatch report path (default <out>.report.txt)")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("fusion", parents=[common, point], help="dump a fusion table")
    p.set_defaults(func=cmd_fusion)

    p = sub.add_parser("cache", parents=[common], help="list or clear cached fusion tables")
    p.add_argument("action", choices=("list", "clear"))
    p.set_defaults(func=cmd_cache)

    p = sub.add_parser("tables", parents=[common, point], help="closed-form expected flags")
    p.add_argument("--p", type=int)
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except RTCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
