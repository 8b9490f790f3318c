"""Command-line front end: ``typed-contracts solve|generate|transform|verify|gaps``.

Exit codes: 0 success, 2 input error, 3 enumeration budget exceeded,
4 incentive-compatibility violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import benchmarks as bm
from . import generators as gen
from .instance import InstanceError, normalize, validate
from .io import (
    contract_to_dict,
    dump_json,
    instance_to_dict,
    load_contracts,
    load_graph,
    load_instance,
    save_instance,
)
from .numeric import DEFAULT_TOLERANCE, decimal_str, fraction_str, to_fraction
from .response import Menu, evaluate_contract, evaluate_menu, verify_ic

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_IC = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


# ----- helpers -------------------------------------------------------------------


def _num(value):
    return {"exact": fraction_str(value), "decimal": decimal_str(value)}


def _load(args, path):
    inst = load_instance(path, sort=args.sort)
    problems = validate(inst)
    if problems:
        raise CliError("invalid instance:\n  " + "\n  ".join(str(p) for p in problems))
    if args.mode == "float":
        inst = inst.to_float(args.tolerance)
    return inst


def _emit(args, report, text):
    print(text)
    if args.out:
        dump_json(report, args.out)


def _witness(result):
    w = result.witness
    if isinstance(w, bm.BenchmarkResult):  # pragma: no cover - defensive
        w = w.witness
    if hasattr(w, "alpha"):
        return {"alpha": fraction_str(w.alpha)}
    if isinstance(w, Menu) or hasattr(w, "x"):
        return contract_to_dict(w)
    if isinstance(w, tuple) and w and hasattr(w[0], "x"):
        return {"contracts": [[fraction_str(v) for v in c.x] for c in w]}
    return {"actions": list(w)}


def _table(rows, header):
    widths = [max(len(str(r[k])) for r in [header] + rows) for k in range(len(header))]
    line = lambda r: "  ".join(str(v).ljust(w) for v, w in zip(r, widths)).rstrip()  # noqa: E731
    return "\n".join([line(header)] + [line(r) for r in rows])


# ----- commands ------------------------------------------------------------------

_SOLVERS = {
    "welfare": ("Welfare", lambda inst, a: bm.welfare(inst)),
    "typeaware": ("Opt-TypeAware", lambda inst, a: bm.opt_typeaware(inst)),
    "menu": (
        "Opt-Menu",
        lambda inst, a: bm.opt_menu(inst, budget=a.budget, workers=a.workers),
    ),
    "single": (
        "Opt-Single",
        lambda inst, a: bm.opt_single(inst, budget=a.budget, workers=a.workers),
    ),
    "linear": ("Opt-Linear", lambda inst, a: bm.opt_linear(inst)),
    "extreme": ("Opt-Single (extreme points)", lambda inst, a: bm.opt_single_extreme_points(inst)),
}


def cmd_solve(args):
    inst = _load(args, args.instance)
    chosen = [k for k in _SOLVERS if getattr(args, k)]
    if args.all or not chosen:
        chosen = ["welfare", "typeaware", "menu", "single", "linear"]
    rows, values = [], {}
    started = time.perf_counter()
    for key in chosen:
        label, fn = _SOLVERS[key]
        t0 = time.perf_counter()
        res = fn(inst, args)
        elapsed = time.perf_counter() - t0
        entry = _num(res.value)
        entry["witness"] = _witness(res)
        entry["seconds"] = round(elapsed, 6)
        entry["metadata"] = {
            k: v for k, v in res.metadata.items() if isinstance(v, (int, str, tuple, list))
        }
        values[label] = entry
        extra = ""
        if "alpha" in entry["witness"]:
            extra = f"alpha={entry['witness']['alpha']}"
        elif "lp_solves" in res.metadata:
            extra = f"lp_solves={res.metadata['lp_solves']}"
        rows.append([label, entry["exact"], entry["decimal"], extra])
    report = {
        "command": "solve",
        "instance": str(args.instance),
        "provenance": inst.metadata.get("provenance"),
        "mode": args.mode,
        "benchmarks": values,
        "seconds": round(time.perf_counter() - started, 6),
    }
    _emit(args, report, _table(rows, ["benchmark", "exact", "decimal", "notes"]))
    return EXIT_OK


def cmd_generate(args):
    fam = args.family
    if fam == "theorem32":
        if args.n is None or args.types is None or args.lam is None:
            raise CliError("theorem32 needs --n, --types and --lambda")
        inst = gen.theorem32_family(args.n, args.types, to_fraction(args.lam), args.log_t)
    elif fam == "domset":
        if args.graph:
            graph = load_graph(args.graph)
        elif args.cycle:
            graph = gen.cycle_graph(args.cycle)
        elif args.path:
            graph = gen.path_graph(args.path)
        elif args.star:
            graph = gen.star_graph(args.star)
        else:
            raise CliError("domset needs --graph, --cycle, --path or --star")
        inst = gen.dominating_set_reduction(graph)
    elif fam == "gap3v4":
        if args.k is None:
            raise CliError("gap3v4 needs --k")
        inst = gen.gap3v4_family(args.k)
        if args.menu_out:
            dump_json(contract_to_dict(gen.gap3v4_menu(args.k)), args.menu_out)
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown family {fam}")
    return _write_instance(args, inst)


def _write_instance(args, inst):
    problems = validate(inst)
    if problems:  # pragma: no cover - generators emit valid instances
        raise CliError("generated instance is invalid: " + "; ".join(map(str, problems)))
    if args.out:
        save_instance(inst, args.out)
        T, n, m = inst.shape
        print(f"wrote {args.out}: {T} types, {n} actions, {m} outcomes")
    else:
        print(json.dumps(instance_to_dict(inst), indent=2))
    return EXIT_OK


def cmd_transform(args):
    inst = load_instance(args.input, sort=args.sort)
    problems = validate(inst)
    if problems:
        raise CliError("invalid instance:\n  " + "\n  ".join(str(p) for p in problems))
    kind = args.kind
    if kind == "nonlinearity":
        out = gen.nonlinearity_disparity(inst)
    elif kind == "infopower":
        if args.epsilon is not None:
            out = gen.info_is_power(inst, to_fraction(args.epsilon))
        elif args.zeta is not None:
            out = gen.info_is_power(inst, zeta=to_fraction(args.zeta), budget=args.budget)
        else:
            raise CliError("infopower needs --epsilon or --zeta")
    elif kind == "collapse":
        out = gen.collapse_to_standard(inst)
    elif kind == "expand":
        if args.n is None or args.types is None:
            raise CliError("expand needs --n and --types")
        out = gen.expand_to_typed(inst, args.n, args.types)
    elif kind == "uniformize":
        out = gen.uniformize_costs(inst)
    elif kind == "normalize":
        out = normalize(inst)
    else:  # pragma: no cover
        raise CliError(f"unknown transform {kind}")
    return _write_instance(args, out)


def cmd_verify(args):
    inst = _load(args, args.instance)
    offer = load_contracts(args.contracts)
    rows = []
    if isinstance(offer, Menu):
        profile = None
        if args.profile:
            profile = [int(v) for v in args.profile.split(",")]
            if len(profile) != inst.num_types:
                raise CliError(f"--profile needs {inst.num_types} actions")
        ic = verify_ic(inst, offer, profile)
        report = evaluate_menu(inst, offer)
        for r in report.responses:
            rows.append([r.type_index, r.entry, r.action, fraction_str(r.utility), fraction_str(r.profit)])
        header = ["type", "entry", "action", "utility", "profit"]
        status = "IC" if ic.ok else "NOT IC"
        lines = [f"status: {status}", f"profit: {fraction_str(report.profit)} ({decimal_str(report.profit)})"]
        for v in ic.violations:
            lines.append(f"violation: type {v.type_index} prefers entry {v.reported} (slack {fraction_str(v.slack)})")
        for v in ic.obedience:
            lines.append(
                f"violation: type {v.type_index} prefers action {v.better_action} over target {v.target}"
                f" (slack {fraction_str(v.slack)})"
            )
        data = {
            "command": "verify",
            "ic": ic.ok,
            "profit": _num(report.profit),
            "violations": [[v.type_index, v.reported, fraction_str(v.slack)] for v in ic.violations],
            "obedience": [[v.type_index, v.target, v.better_action, fraction_str(v.slack)] for v in ic.obedience],
        }
        code = EXIT_OK if ic.ok else EXIT_IC
    else:
        report = evaluate_contract(inst, offer)
        for r in report.responses:
            rows.append([r.type_index, "-", r.action, fraction_str(r.utility), fraction_str(r.profit)])
        header = ["type", "entry", "action", "utility", "profit"]
        lines = ["status: single contract", f"profit: {fraction_str(report.profit)} ({decimal_str(report.profit)})"]
        data = {"command": "verify", "ic": True, "profit": _num(report.profit)}
        code = EXIT_OK
    data["responses"] = [list(map(str, r)) for r in rows]
    _emit(args, data, "\n".join(lines) + "\n" + _table(rows, header))
    return code


def _cell(value):
    return value if isinstance(value, str) else fraction_str(value)


def cmd_gaps(args):
    inst = _load(args, args.instance)
    table = bm.gaps_table(inst, budget=args.budget, workers=args.workers)
    names = bm.BENCHMARK_NAMES
    rows = [[r] + [_cell(v) for v in vals] for r, vals in table.rows()]
    text = ["values:"]
    text.append(
        _table([[k, _cell(v), decimal_str(v)] for k, v in table.values.items()], ["benchmark", "exact", "decimal"])
    )
    text.append("")
    text.append("ratios (row / column):")
    text.append(_table(rows, ["", *names]))
    delta = "n/a" if table.delta is None else f"{table.delta:.12g}"
    text.append("")
    text.append(f"Delta(c) = {delta}")
    if all(v == 0 for v in table.values.values()):
        text.append("note: every benchmark is zero; all ratios are undefined")
    if args.csv:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["row", *names])
        for r in rows:
            writer.writerow(r)
        writer.writerow([])
        writer.writerow(["benchmark", "value"])
        for k, v in table.values.items():
            writer.writerow([k, _cell(v)])
        writer.writerow(["Delta(c)", delta])
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    report = {
        "command": "gaps",
        "values": {k: _num(v) for k, v in table.values.items()},
        "ratios": {f"{r}/{c}": _cell(v) for (r, c), v in table.ratios.items()},
        "delta": table.delta,
    }
    _emit(args, report, "\n".join(text))
    return EXIT_OK


# ----- parser --------------------------------------------------------------------


def _global_flags(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = parser.add_argument_group("global options")
    g.add_argument("--mode", choices=["exact", "float"], default=d("exact"))
    g.add_argument("--tolerance", type=float, default=d(DEFAULT_TOLERANCE))
    g.add_argument("--workers", type=int, default=d(1))
    g.add_argument("--budget", type=int, default=d(bm.DEFAULT_BUDGET))
    g.add_argument("--out", default=d(None), help="output file (instance or JSON report)")
    g.add_argument("--sort", action="store_true", default=d(False), help="sort costs/rewards on load")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="typed-contracts",
        description="Exact benchmarks for typed principal-agent problems.",
    )
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute benchmark values")
    _global_flags(p, suppress=True)
    p.add_argument("instance")
    p.add_argument("--all", action="store_true")
    for key in _SOLVERS:
        p.add_argument(f"--{key}", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="write an instance family member")
    _global_flags(p, suppress=True)
    p.add_argument("family", choices=["theorem32", "domset", "gap3v4"])
    p.add_argument("--n", type=int)
    p.add_argument("--types", type=int)
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--log-t", dest="log_t", help="rational stand-in for ln T")
    p.add_argument("--graph")
    p.add_argument("--cycle", type=int)
    p.add_argument("--path", type=int)
    p.add_argument("--star", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--menu-out", help="gap3v4: also write the separating menu")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("transform", help="apply a reduction to an instance")
    _global_flags(p, suppress=True)
    p.add_argument(
        "kind", choices=["nonlinearity", "infopower", "collapse", "expand", "uniformize", "normalize"]
    )
    p.add_argument("input")
    p.add_argument("--epsilon")
    p.add_argument("--zeta")
    p.add_argument("--n", type=int)
    p.add_argument("--types", type=int)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="check a contract or menu")
    _global_flags(p, suppress=True)
    p.add_argument("instance")
    p.add_argument("contracts")
    p.add_argument("--profile", help="comma-separated target actions, one per type")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gaps", help="ratio table of the five benchmarks")
    _global_flags(p, suppress=True)
    p.add_argument("instance")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_gaps)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tolerance <= 0:
        print("error: --tolerance must be positive", file=sys.stderr)
        return EXIT_INPUT
    if args.workers < 1 or args.budget < 1:
        print("error: --workers and --budget must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except bm.BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (InstanceError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
