"""Command-line driver.

Exit codes: 0 success (or equivalent), 1 input error, 2 incompatible inputs,
3 refused by a size guard, 4 not equivalent.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .compiler import CompileError, compile_classifier, size_bound
from .interval import format_interval
from .model import ModelError, learn_from_csv, load_model, prob_to_log_odds, save_model
from .odd import Odd, OddError, deserialize, evaluate, export_dot, reduce, serialize
from .ops import (
    OrderMismatchError,
    disagreement,
    equivalent,
    format_instance,
    model_count,
)
from .oracle import OracleGuardError
from .ordering import make_order, parse_order
from .sensitivity import (
    count_prior_classifiers,
    count_weight_classifiers,
    sensitivity_report,
    sweep_distinct_classifiers,
)

EXIT_OK, EXIT_INPUT, EXIT_INCOMPATIBLE, EXIT_GUARD, EXIT_DIFFERENT = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(_jsonable(payload), indent=2))
    else:
        sys.stdout.write(text)


def _threshold(args, required: bool = True) -> float | None:
    if args.p is not None and args.rho is not None:
        raise CliError("give exactly one of --p and --rho")
    if args.p is not None:
        try:
            return prob_to_log_odds(args.p)
        except ValueError as exc:
            raise CliError(str(exc)) from None
    if args.rho is not None:
        if not math.isfinite(args.rho):
            raise CliError("--rho must be finite")
        return args.rho
    if required:
        raise CliError("a threshold is required: give --p or --rho")
    return None


def _is_odd_file(path: Path) -> bool:
    if path.suffix == ".odd":
        return True
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.readline().startswith("order:")
    except OSError:
        return False


def _load_model(path: str, args):
    try:
        return load_model(path, strict_zero=getattr(args, "strict_zero", False))
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    except ModelError as exc:
        raise CliError(f"{path}: {exc}") from None


def _load_odd(path: str) -> Odd:
    try:
        return deserialize(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    except OddError as exc:
        raise CliError(f"{path}: {exc}") from None


def _order_for(model, args, names: list[str] | None = None) -> tuple[int, ...]:
    if names is not None:
        try:
            return tuple(model.attribute_index(nm) for nm in names)
        except ModelError as exc:
            raise CliError(str(exc), EXIT_INCOMPATIBLE) from None
    try:
        return make_order(model, parse_order(args.order, model))
    except (ValueError, ModelError) as exc:
        raise CliError(f"--order: {exc}") from None


def _compile(model, rho, order):
    try:
        return compile_classifier(model, rho, order)
    except CompileError as exc:
        raise CliError(str(exc)) from None


def _diagram(path: str, args, order_names: list[str] | None = None) -> Odd:
    """A diagram from an ``.odd`` file, or by compiling a model file."""
    if _is_odd_file(Path(path)):
        odd = _load_odd(path)
        if order_names is not None and [a.name for a in odd.order] != order_names:
            raise CliError(f"{path}: attribute order differs", EXIT_INCOMPATIBLE)
        return odd
    model = _load_model(path, args)
    rho = _threshold(args)
    return _compile(model, rho, _order_for(model, args, order_names)).odd


def _pair(args) -> tuple[Odd, Odd]:
    first = _diagram(args.a, args)
    d2 = _diagram(args.b, args, [a.name for a in first.order])
    if first.order != d2.order:
        raise CliError("inputs have different attribute specifications", EXIT_INCOMPATIBLE)
    return first, d2


def _parse_instance(odd: Odd, text: str) -> list[int]:
    pairs = {}
    for tok in text.split(","):
        name, sep, value = tok.strip().partition("=")
        if not sep:
            raise CliError(f"bad instance item {tok!r}; expected attr=value")
        pairs[name] = value
    inst = []
    for a in odd.order:
        if a.name not in pairs:
            raise CliError(f"instance is missing attribute {a.name!r}")
        if pairs[a.name] not in a.values:
            raise CliError(f"attribute {a.name!r} has no value {pairs[a.name]!r}")
        inst.append(a.values.index(pairs.pop(a.name)))
    if pairs:
        raise CliError(f"unknown attributes in instance: {sorted(pairs)}")
    return inst


# --- commands -----------------------------------------------------------------


def cmd_compile(args) -> int:
    model = _load_model(args.model, args)
    rho = _threshold(args)
    result = _compile(model, rho, _order_for(model, args))
    odd = reduce(result.odd) if args.reduce else result.odd
    out = Path(args.output) if args.output else Path(args.model).with_suffix(".odd")
    try:
        out.write_text(serialize(odd), encoding="utf-8")
    except OddError as exc:
        raise CliError(str(exc)) from None
    stats = result.stats() | {"output": str(out), "written_nodes": len(odd.nodes)}
    text = "\n".join([
        f"wrote {out}",
        f"order: {' '.join(stats['order'])}",
        f"rho: {rho:.6g}",
        f"cache sizes by depth: {' '.join(map(str, result.cache_sizes))}",
        f"nodes: {result.node_count} (bound {result.bound})"
        + (f", {len(odd.nodes)} after reduction" if args.reduce else ""),
        f"root interval: {format_interval(result.root_interval)}",
        f"time: {result.seconds:.4f}s",
    ]) + "\n"
    _emit(args, stats, text)
    return EXIT_OK


def cmd_eval(args) -> int:
    odd = _diagram(args.input, args)
    inst = _parse_instance(odd, args.instance)
    label = evaluate(odd, inst)
    _emit(args, {"instance": format_instance(odd, inst), "label": label}, f"{label}\n")
    return EXIT_OK


def cmd_equiv(args) -> int:
    d1, d2 = _pair(args)
    same = equivalent(d1, d2)
    _emit(args, {"equivalent": same}, "equivalent\n" if same else "not equivalent\n")
    return EXIT_OK if same else EXIT_DIFFERENT


def cmd_diff(args) -> int:
    d1, d2 = _pair(args)
    count, witnesses = disagreement(d1, d2, args.limit)
    lines = [f"equivalent: {'yes' if count == 0 else 'no'}", f"disagreements: {count}"]
    lines += [format_instance(d1, w) for w in witnesses]
    _emit(
        args,
        {
            "equivalent": count == 0,
            "disagreements": count,
            "witnesses": [
                {"instance": format_instance(d1, w), "a": evaluate(d1, w), "b": evaluate(d2, w)}
                for w in witnesses
            ],
        },
        "\n".join(lines) + "\n",
    )
    return EXIT_OK


def cmd_count(args) -> int:
    odd = _diagram(args.input, args)
    pos, neg = model_count(odd)
    _emit(args, {"positive": pos, "negative": neg, "total": pos + neg},
          f"positive: {pos}\nnegative: {neg}\n")
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    from .report import plot_sensitivity, sensitivity_csv, sensitivity_text

    model = _load_model(args.model, args)
    rho = _threshold(args)
    try:
        report = sensitivity_report(model, rho)
    except CompileError as exc:
        raise CliError(str(exc)) from None
    if args.report_dir:
        d = Path(args.report_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / "sensitivity.csv").write_text(sensitivity_csv(report), encoding="utf-8")
        plot_sensitivity(report, d / "sensitivity.png")
    _emit(args, report.to_dict(), sensitivity_text(report))
    return EXIT_OK


def cmd_count_classifiers(args) -> int:
    model = _load_model(args.model, args)
    cards = model.cardinalities
    payload = {"prior": {"bound": count_prior_classifiers(cards)}, "attributes": {}}
    lines = [f"prior: at most {payload['prior']['bound']}"]
    rho = _threshold(args, required=args.sweep)
    try:
        if args.sweep:
            payload["prior"]["sweep"] = sweep_distinct_classifiers(model, rho, "prior")
            lines[0] += f", sweep {payload['prior']['sweep']}"
        for i, attr in enumerate(model.attributes):
            k = model.instance_count // attr.cardinality
            entry = {"bound": count_weight_classifiers(k, attr.cardinality)}
            line = f"{attr.name}: at most {entry['bound']}"
            if args.sweep:
                entry["sweep_box"] = sweep_distinct_classifiers(model, rho, i)
                entry["sweep_restricted"] = sweep_distinct_classifiers(model, rho, i, restricted=True)
                line += f", sweep {entry['sweep_restricted']} (unrestricted box {entry['sweep_box']})"
            payload["attributes"][attr.name] = entry
            lines.append(line)
    except OracleGuardError as exc:
        raise CliError(str(exc), EXIT_GUARD) from None
    _emit(args, payload, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_bound(args) -> int:
    if args.model:
        model = _load_model(args.model, args)
        cards = model.cardinalities
        order = _order_for(model, args)
    elif args.cards:
        cards = [int(x) for x in args.cards.split(",")]
        order = None
    elif args.binary is not None:
        cards = [2] * args.binary
        order = None
    else:
        raise CliError("give a model file, --cards or --binary")
    bound = size_bound(cards, order)
    _emit(args, {"cardinalities": cards, "instances": math.prod(cards), "bound": bound},
          f"{bound}\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    from .report import bench_csv, bench_table, plot_bench

    heuristics = tuple(args.heuristics.split(","))
    for h in heuristics:
        if h not in bench_mod.HEURISTICS:
            raise CliError(f"unknown heuristic {h!r}")
    records = bench_mod.bench(
        args.n, trials=args.trials, seed=args.seed, heuristics=heuristics,
        check=args.check, force_check=args.force, jobs=args.jobs,
    )
    if args.report_dir:
        d = Path(args.report_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / "bench.csv").write_text(bench_csv(records, heuristics), encoding="utf-8")
        plot_bench(records, d / "bench.png", heuristics)
    _emit(args, {"records": [r.row(heuristics) for r in records]}, bench_table(records, heuristics))
    return EXIT_OK


def cmd_learn(args) -> int:
    try:
        model = learn_from_csv(args.csv, args.class_column, args.smoothing, args.positive)
    except OSError as exc:
        raise CliError(f"{args.csv}: {exc.strerror}") from None
    except (ModelError, ValueError) as exc:
        raise CliError(f"{args.csv}: {exc}") from None
    save_model(model, args.output)
    _emit(args, {"output": args.output, "attributes": model.n, "instances": model.instance_count},
          f"wrote {args.output}: {model.n} attributes, {model.instance_count} instances\n")
    return EXIT_OK


def cmd_export_dot(args) -> int:
    odd = _diagram(args.input, args)
    if args.reduce:
        odd = reduce(odd)
    text = export_dot(odd)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def _add_threshold(p):
    p.add_argument("--p", type=float, help="probability threshold, converted to log-odds")
    p.add_argument("--rho", type=float, help="log-odds threshold")


def _add_order(p):
    p.add_argument("--order", default="asc",
                   help="random:<seed> | desc | asc | explicit:<comma-list> (default asc)")


def _add_common(p):
    p.add_argument("--json", action="store_true", help="structured output")
    p.add_argument("--strict-zero", action="store_true",
                   help="keep zero CPT entries as infinite weights instead of clamping")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nbodd", description="Compile naive Bayes classifiers into decision diagrams."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a model file to an .odd diagram")
    p.add_argument("model")
    p.add_argument("-o", "--output")
    p.add_argument("--reduce", action="store_true", help="write the reduced diagram")
    _add_threshold(p), _add_order(p), _add_common(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("eval", help="classify one instance")
    p.add_argument("input", help="model file or .odd file")
    p.add_argument("--instance", required=True, help="attr=value,attr=value,...")
    _add_threshold(p), _add_order(p), _add_common(p)
    p.set_defaults(func=cmd_eval)

    for name, func, helptext in (
        ("equiv", cmd_equiv, "do two classifiers agree on every instance?"),
        ("diff", cmd_diff, "count and list instances two classifiers disagree on"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("a")
        p.add_argument("b")
        if name == "diff":
            p.add_argument("--limit", type=int, default=10)
        _add_threshold(p), _add_order(p), _add_common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("count", help="count positive and negative instances")
    p.add_argument("input")
    _add_threshold(p), _add_order(p), _add_common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("sensitivity", help="allowed CPT changes that keep the classifier")
    p.add_argument("model")
    p.add_argument("--report-dir", help="also write sensitivity.csv and sensitivity.png here")
    _add_threshold(p), _add_common(p)
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("count-classifiers", help="how many classifiers one CPT can induce")
    p.add_argument("model")
    p.add_argument("--sweep", action="store_true", help="also count exhaustively (small models)")
    _add_threshold(p), _add_common(p)
    p.set_defaults(func=cmd_count_classifiers)

    p = sub.add_parser("bound", help="worst-case compiled size")
    p.add_argument("model", nargs="?")
    p.add_argument("--cards", help="comma-separated cardinalities")
    p.add_argument("--binary", type=int, help="number of binary attributes")
    _add_order(p), _add_common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("bench", help="random-model size benchmark")
    p.add_argument("--n", type=int, nargs="+", default=[10, 15, 20])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--heuristics", default="random,desc,asc")
    p.add_argument("--check", action="store_true",
                   help=f"verify every diagram exhaustively (n <= {bench_mod.CHECK_LIMIT})")
    p.add_argument("--force", action="store_true", help="allow --check above the size limit")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report-dir", help="also write bench.csv and bench.png here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("learn", help="learn a model file from a CSV dataset")
    p.add_argument("csv")
    p.add_argument("--class", dest="class_column", required=True)
    p.add_argument("--smoothing", type=float, default=1.0)
    p.add_argument("--positive", help="class value treated as positive (default: first seen)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("export-dot", help="write a diagram in DOT format")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--reduce", action="store_true")
    _add_threshold(p), _add_order(p), _add_common(p)
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"nbodd {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except OrderMismatchError as exc:
        print(f"nbodd {args.command}: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    except OracleGuardError as exc:
        print(f"nbodd {args.command}: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
