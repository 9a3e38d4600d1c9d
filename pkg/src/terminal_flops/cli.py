"""Command-line front end.

Every command prints JSON (or DOT for ``diagram --format dot``) on stdout
and diagnostics on stderr.  Exit status is 0 on success, 1 on a domain
error and 2 on a usage error.  Rationals are always printed as ``p/q`` text.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .blowup import BlowupError, BlowupWeight, all_charts, blowup_chart, chain_discrepancy_table, discrepancy
from .blowup import format_chain, parse_chain_text, run_chain
from .classify import ClassificationError, terminal_classify
from .diagrams import DiagramError, build_diagram, to_dot, to_json
from .germ import GermError, normal_form_cD, parse_germ_text
from .invariants import depth, feasible_resolution, gdepth, gore_height, verify_table_row, verify_tables, TABLE_ROWS
from .poly import ParseError, PolyError

DEFAULT_SEED = 0

DOMAIN_ERRORS = (GermError, PolyError, ParseError, BlowupError, ClassificationError, DiagramError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _read_germ(path: str):
    return parse_germ_text(Path(path).read_text())


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _cmd_classify(args) -> tuple[int, str]:
    g = _read_germ(args.germ)
    cls = terminal_classify(g, seed=args.seed)
    return 0, _dump({"germ": str(g), "seed": args.seed, **cls.report()})


def _chart_report(ch) -> dict:
    return {
        "chart": ch.chart_variable,
        "contains_origin": ch.contains_origin,
        "germ": ch.describe(),
    }


def _cmd_blowup(args) -> tuple[int, str]:
    g = _read_germ(args.germ)
    w = BlowupWeight.parse(args.weight)
    charts = [blowup_chart(g, w, args.chart)] if args.chart else all_charts(g, w)
    out = {
        "germ": str(g),
        "weight": str(w),
        "discrepancy": str(discrepancy(g, w)),
        "charts": [_chart_report(ch) for ch in charts],
    }
    return 0, _dump(out)


def _cmd_chain(args) -> tuple[int, str]:
    g = _read_germ(args.germ)
    chain = parse_chain_text(Path(args.file).read_text())
    results = run_chain(g, chain)
    out = {
        "germ": str(g),
        "steps": [
            {
                "index": r.index,
                "base": r.base,
                "chart": r.chart.chart_variable,
                "weight": str(r.chart.weight),
                "germ": r.chart.describe(),
                "discrepancy": str(r.discrepancy),
            }
            for r in results
        ],
    }
    if args.table:
        table = chain_discrepancy_table(g, results)
        out["table"] = [
            {"j": j, "i": i, "value": str(table[(j, i)])} for j in range(1, len(results) + 1) for i in range(j)
        ]
    return 0, _dump(out)


def _search_report(name: str, g, result, seed: int) -> dict:
    return {"invariant": name, "germ": str(g), "seed": seed, "value": result.length, **result.report()}


def _cmd_depth(args) -> tuple[int, str]:
    g = _read_germ(args.germ)
    return 0, _dump(_search_report("depth", g, depth(g, args.budget, args.seed), args.seed))


def _cmd_gdepth(args) -> tuple[int, str]:
    g = _read_germ(args.germ)
    return 0, _dump(_search_report("gdepth", g, gdepth(g, args.budget, args.seed), args.seed))


def _cmd_resolve(args) -> tuple[int, str]:
    g = _read_germ(args.germ)
    chain = feasible_resolution(g, args.budget, args.seed)
    if args.format == "chain":
        return 0, format_chain(chain)
    return 0, _dump({"germ": str(g), "seed": args.seed, "length": len(chain),
                     "chain": format_chain(chain).splitlines()})


def _cmd_gore(args) -> tuple[int, str]:
    g = _read_germ(args.germ)
    value = gore_height(g, seed=args.seed)
    return 0, _dump({"invariant": "GorE", "germ": str(g), "seed": args.seed, "value": str(value)})


def _parse_choices(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--choose expects LABEL=KIND, got {item!r}")
        label, kind = item.split("=", 1)
        out[label.strip()] = kind.strip()
    return out


def _cmd_diagram(args) -> tuple[int, str]:
    kind = args.template or args.kind
    if kind is None:
        raise UsageError("diagram: one of --kind or --template is required")
    d = build_diagram(kind, args.k, args.expansion_depth, _parse_choices(args.choose))
    if args.format == "dot":
        return 0, to_dot(d)
    return 0, to_json(d) + "\n"


def _cmd_normal_form(args) -> tuple[int, str]:
    g = _read_germ(args.germ)
    res = normal_form_cD(g, args.truncation)
    return 0, _dump({"germ": str(g), "normal_form": str(res.germ), "text": res.germ.text(), **res.metadata()})


def _summary(reports) -> dict:
    matrix: dict[str, dict[str, int]] = {}
    for rep in reports:
        row = matrix.setdefault(rep["table"], {"pass": 0, "fail": 0, "skipped": 0})
        row[rep["status"]] += 1
    return matrix


def _cmd_verify_tables(args) -> tuple[int, str]:
    if args.row:
        reports = []
        for label in args.row:
            table, row = label[0].upper(), label[1:]
            if (table, row) not in TABLE_ROWS:
                raise UsageError(f"verify-tables: unknown row {label!r}")
            reports.append(verify_table_row(table, row, args.seed))
    else:
        reports = verify_tables(args.seed)
    status = 1 if any(r["status"] == "fail" for r in reports) else 0
    return status, _dump({"seed": args.seed, "rows": reports, "summary": _summary(reports)})


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="terminal-flops", description="Terminal threefold singularities and flop diagrams.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def germ_cmd(name, func, help_text, seed=True):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("germ", help="germ file (ring:/group:/equation: lines)")
        if seed:
            sp.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for elephant draws (default 0)")
        sp.set_defaults(func=func)
        return sp

    germ_cmd("classify", _cmd_classify, "classify a terminal germ")
    sp = germ_cmd("blowup", _cmd_blowup, "weighted blow-up charts of a germ", seed=False)
    sp.add_argument("--weight", required=True, help="r:b1,...,bn or 1/r(b1,...,bn)")
    sp.add_argument("--chart", help="only this chart variable")

    sp = sub.add_parser("chain", help="run a chain of weighted blow-ups")
    sp.add_argument("germ")
    sp.add_argument("--file", required=True, help="chain description file")
    sp.add_argument("--table", action="store_true", help="include the discrepancy table a(E_j, W_i)")
    sp.set_defaults(func=_cmd_chain)

    for name, func in (("depth", _cmd_depth), ("gdepth", _cmd_gdepth)):
        sp = germ_cmd(name, func, f"compute {name} with a witness chain")
        sp.add_argument("--budget", type=int, default=16)
    sp = germ_cmd("resolve", _cmd_resolve, "a feasible resolution as a chain file")
    sp.add_argument("--budget", type=int, default=16)
    sp.add_argument("--format", choices=("json", "chain"), default="json")
    germ_cmd("gore", _cmd_gore, "Gorenstein elephant height")

    sp = sub.add_parser("diagram", help="flop factorization diagram")
    sp.add_argument("--kind", help="A, D, E6, E7, E8_1, E8_2 or A(k)/D(k)")
    sp.add_argument("--template", help="pago, 3flip_1, 3flip_2, 3flip_3, cax2 or a2flop")
    sp.add_argument("--k", type=int)
    sp.add_argument("--expansion-depth", type=int, default=0)
    sp.add_argument("--choose", action="append", metavar="LABEL=KIND",
                    help="concrete kind for a generic edge label when expanding, e.g. 'A or D=D(0)'")
    sp.add_argument("--format", choices=("json", "dot"), default="json")
    sp.set_defaults(func=_cmd_diagram)

    sp = sub.add_parser("verify-tables", help="check the classification table rows")
    sp.add_argument("--row", action="append", help="a single row such as G7 (repeatable)")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.set_defaults(func=_cmd_verify_tables)

    sp = germ_cmd("normal-form", _cmd_normal_form, "cD normal form", seed=False)
    sp.add_argument("--truncation", type=int, default=24)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        status, text = args.func(args)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return 2
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except DOMAIN_ERRORS as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())
