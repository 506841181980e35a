"""Benchmark command line: run experiment grids, verify the closed-form
constructions, reproduce the three-variable counterexample, and summarize
result CSVs.

    lineardag-bench run config.yaml --out results.csv --workers 4
    lineardag-bench verify-props --d 3,4,5,8
    lineardag-bench counterexample --seeds 30 --n 100000
    lineardag-bench summarize results.csv
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .config import config_from_dict, load_config
from .runner import rows_to_csv, run, summarize, summary_table
from .verify import VerificationReport, verify_constructions


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.population:
        cfg = replace(cfg, population=True)
    if args.seed_base is not None:
        n_seeds = len(cfg.seeds)
        cfg = replace(cfg, seeds=tuple(range(args.seed_base,
                                             args.seed_base + n_seeds)))
    rows = run(cfg, workers=args.workers)
    out = args.out or cfg.out
    if out:
        rows_to_csv(rows, out)
        print(f"wrote {len(rows)} rows to {out}")
    else:
        sys.stdout.write(rows_to_csv(rows))
    summary = summarize(rows)
    print(summary_table(summary))
    n_failed = sum(1 for r in rows if r.failed)
    if n_failed:
        print(f"warning: {n_failed}/{len(rows)} runs failed "
              f"(see the 'error' column)", file=sys.stderr)
    return 0


def _cmd_verify_props(args) -> int:
    d_list = [int(x) for x in args.d.split(",")]
    report = verify_constructions(d_list, seed=args.seed_base or 0)
    print(report)
    return 0 if report.ok else 1


def _cmd_counterexample(args) -> int:
    raw = {
        "kind": "counterexample",
        "d": [3],
        "n": [args.n],
        "population": args.population,
        "seeds": args.seeds,
        "seed_base": args.seed_base or 0,
    }
    cfg = config_from_dict(raw)
    rows = run(cfg, workers=args.workers)
    if args.out:
        rows_to_csv(rows, args.out)
        print(f"wrote {len(rows)} rows to {args.out}")

    report = VerificationReport()
    methods = sorted({r.method for r in rows})
    for method in methods:
        sub = [r for r in rows if r.method == method and not r.failed]
        hits = sum(1 for r in sub if r.target_match)
        report.add(f"{method}: returned the predicted wrong triangle",
                   len(sub) == len(cfg.seeds) and
                   hits >= 0.95 * len(sub), f"{hits}/{len(sub)}")
    var_ok = sum(1 for r in rows if r.var_order_ok)
    report.add("Var(X1) > Var(X2) > Var(X3) in every run",
               var_ok == len(rows), f"{var_ok}/{len(rows)}")
    print(report)
    return 0 if report.ok else 1


def _cmd_summarize(args) -> int:
    from .runner import rows_from_csv

    rows = rows_from_csv(args.csv)
    summary = summarize(rows)
    print(summary_table(summary))
    if args.out:
        summary.to_csv(args.out, index=False)
        print(f"wrote summary to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lineardag-bench",
                                     description=__doc__.split("\n")[0])
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment grid")
    p_run.add_argument("config", help="YAML experiment config")
    p_run.add_argument("--out", default=None, help="CSV output path")
    p_run.add_argument("--seed-base", type=int, default=None)
    p_run.add_argument("--workers", type=int, default=1)
    p_run.add_argument("--population", action="store_true",
                       help="exact large-sample-limit mode")
    p_run.set_defaults(func=_cmd_run)

    p_ver = sub.add_parser("verify-props", help="verify the constructions")
    p_ver.add_argument("--d", default="3,4,5,8",
                       help="comma-separated dimensions for the counterexample")
    p_ver.add_argument("--seed-base", type=int, default=0)
    p_ver.set_defaults(func=_cmd_verify_props)

    p_cx = sub.add_parser("counterexample",
                          help="reproduce the three-variable example")
    p_cx.add_argument("--seeds", type=int, default=30)
    p_cx.add_argument("--n", type=int, default=100000)
    p_cx.add_argument("--population", action="store_true")
    p_cx.add_argument("--seed-base", type=int, default=0)
    p_cx.add_argument("--workers", type=int, default=1)
    p_cx.add_argument("--out", default=None)
    p_cx.set_defaults(func=_cmd_counterexample)

    p_sum = sub.add_parser("summarize", help="aggregate a results CSV")
    p_sum.add_argument("csv")
    p_sum.add_argument("--out", default=None)
    p_sum.set_defaults(func=_cmd_summarize)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
