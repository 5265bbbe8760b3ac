"""Command-line interface: ``cfft <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .cyclotomic import check_lemma1, check_lemma2, partition_cosets
from .gf2m import make_field
from .planner import build_plan, load_plan, save_plan


def _hex(text: str) -> int:
    return int(text, 16)


def _field_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--m", type=int, required=required, help="extension degree")
    p.add_argument("--n", type=int, help="transform length (default 2^m - 1)")
    p.add_argument("--poly", type=_hex, help="primitive polynomial as hex, e.g. 13")


def _format_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "text"), default="text")


def _emit(rows, fmt, columns=None) -> None:
    from .metrics import CSV_COLUMNS, to_csv, to_text

    if fmt == "csv":
        sys.stdout.write(to_csv(rows, columns or CSV_COLUMNS))
    else:
        sys.stdout.write(to_text(rows, columns))


def _plan_from(args):
    if getattr(args, "plan", None):
        return load_plan(args.plan)
    if args.m is None:
        raise ValueError("either --m or --plan is required")
    return build_plan(make_field(args.m, args.poly), args.n)


def cmd_plan(args) -> int:
    plan = _plan_from(args)
    block_form = False
    if plan.n == plan.field.n:
        from .planner import build_block_form

        build_block_form(plan)
        block_form = True
    if args.out:
        save_plan(plan, args.out, block_form=block_form)
    print(f"n={plan.n} k={plan.k} blocks={','.join(map(str, plan.block_widths))}")
    return 0


def cmd_transform(args) -> int:
    from .engine import cfft, make_netplan, read_vector, write_vector

    plan = _plan_from(args)
    f = read_vector(args.infile, plan.field)
    netplan = None if args.no_addnet else make_netplan(plan, experimental=args.experimental)
    result = cfft(plan, f, netplan)
    if args.out:
        write_vector(args.out, result.F)
    else:
        for x in result.F:
            print(f"{x:x}")
    tallies = " ".join(f"{k}={v}" for k, v in sorted(result.tallies.items()))
    print(f"# mults={result.multiplications} adds={result.additions} {tallies}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    from .engine import verify

    plan = _plan_from(args)
    netplan = None
    if not args.no_addnet and plan.n != plan.field.n:
        from .engine import make_netplan

        netplan = make_netplan(plan, experimental=True)
    report = verify(plan, trials=args.trials, seed=args.seed, netplan=netplan,
                    use_addnet=not args.no_addnet)
    print(f"{report.summary()} (n={plan.n}, seed={report.seed}, "
          f"addnet={'yes' if report.addnet_checked else 'no'}, "
          f"tallies={'consistent' if report.tallies_consistent else 'INCONSISTENT'})")
    for line in report.failures[:10]:
        print(f"  {line}")
    return 0 if report.ok else 1


def cmd_count(args) -> int:
    from .engine import make_netplan
    from .metrics import bound_table, count, report_row

    plan = _plan_from(args)
    full = plan.n == plan.field.n
    netplan = make_netplan(plan, experimental=True) if full or args.experimental else None
    report = count(plan, netplan)
    if full:
        rows, _, _ = bound_table([plan.m], anchor_m=args.anchor, reports={plan.m: report})
        row = rows[0].as_dict()
    else:
        row = report_row(report)
    _emit([row], args.format)
    return 0


def cmd_bounds(args) -> int:
    from .metrics import bound_table

    rows, mult_curve, add_curve = bound_table(range(args.m_min, args.m_max + 1), anchor_m=args.anchor)
    _emit([r.as_dict() for r in rows], args.format)
    if args.format == "text":
        print(f"# scale fitted at m={args.anchor}: mult={mult_curve.scale:.6g} add={add_curve.scale:.6g}")
    return 0


def cmd_lemmas(args) -> int:
    rows = []
    for m in range(args.m_min, args.m_max + 1):
        part = partition_cosets((1 << m) - 1)
        l2 = check_lemma2(m, part)
        l1 = check_lemma1(part, m)
        rows.append({
            "m": m, "n": part.n, "k": l2.k, "km": l2.km,
            "lemma2": "pass" if l2.passed else "FAIL",
            "sizes": " ".join(f"{r.size}:{r.count}/{r.bound}" for r in l1),
            "lemma1": "pass" if all(r.passed for r in l1) else "FAIL",
        })
    columns = ["m", "n", "k", "km", "lemma2", "sizes", "lemma1"]
    _emit(rows, args.format, columns)
    ok = all(r["lemma1"] == "pass" and r["lemma2"] == "pass" for r in rows)
    return 0 if ok else 1


def cmd_netlist(args) -> int:
    from .addnet import export_netlist
    from .engine import make_netplan

    plan = _plan_from(args)
    doc = export_netlist(make_netplan(plan, experimental=args.experimental))
    text = json.dumps(doc, indent=None, separators=(",", ":"), sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    c = doc["counts"]
    modules = doc["stages"][2]["modules"]
    live = sum(1 for mod in modules if mod["status"] == "live")
    print(f"# modules={len(modules)} live={live} pre={c['pre']} mvp={c['mvp']} post={c['post']} "
          f"total={c['total']}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfft", description="Cyclotomic FFTs over GF(2^m)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="build a plan and write its document")
    _field_args(p)
    p.add_argument("--out", help="plan document path")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("transform", help="DFT of a vector file")
    _field_args(p, required=False)
    p.add_argument("--plan", help="plan document to use instead of --m")
    p.add_argument("--in", dest="infile", required=True, help="input vector, one hex element per line")
    p.add_argument("--out", help="output vector path (default stdout)")
    p.add_argument("--no-addnet", action="store_true", help="compute A v by direct row XORs")
    p.add_argument("--experimental", action="store_true", help="allow the network for n < 2^m - 1")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="randomized check against the naive DFT")
    _field_args(p, required=False)
    p.add_argument("--plan", help="plan document to use instead of --m")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-addnet", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", help="static complexity report")
    _field_args(p)
    p.add_argument("--anchor", type=int, default=4, help="m at which bound scales are fitted")
    p.add_argument("--experimental", action="store_true")
    _format_arg(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bounds", help="measured counts against scaled bound shapes")
    p.add_argument("--m-min", type=int, default=4)
    p.add_argument("--m-max", type=int, default=10)
    p.add_argument("--anchor", type=int, default=4)
    _format_arg(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("lemmas", help="coset-count lemma checks")
    p.add_argument("--m-min", type=int, default=2)
    p.add_argument("--m-max", type=int, default=12)
    _format_arg(p)
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("netlist", help="export the addition network")
    _field_args(p)
    p.add_argument("--out", help="netlist document path (default stdout)")
    p.add_argument("--experimental", action="store_true")
    p.set_defaults(func=cmd_netlist)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"cfft {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
