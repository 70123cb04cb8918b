"""Command line entry points.

Subcommands: skeleta, critical-pairs, charts, oracle, realize, degenerate,
report.  Exit codes: 0 when all requested checks pass (an infeasible problem
is reported distinctly and still exits 0), 1 when a check fails, 2 on input
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from .charts import ChartError, ReductionError, chart_ideal, dimension_report
from .fields import FieldError, PrimeField
from .oracle import (OracleError, finest_slot_blocks, membership_vs_oracle, slot_split_summands,
                     submodule_from_vectors, top_degeneration)
from .polynomials import PolyError
from .problem import (ProblemError, ProblemSpec, load_problem, problem_from_dict, realize_variety)
from .quiver import QuiverError, RelationError
from .report import PipelineOptions, PipelineResult, run_pipeline, write_report
from .skeleta import (SemisimpleSequence, SkeletonError, count_skeleta, critical_pairs,
                      enumerate_skeleta, variable_index)

INPUT_ERRORS = (ProblemError, QuiverError, RelationError, SkeletonError, ChartError,
                PolyError, OracleError, FieldError, ReductionError, ValueError)


def _emit(data, emit: str, text_lines) -> None:
    if emit == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _load(args) -> ProblemSpec:
    return load_problem(args.problem)


def _layering_override(spec: ProblemSpec, args):
    if getattr(args, "layering", None):
        rows = json.loads(args.layering)
        return SemisimpleSequence(spec.quiver, rows)
    return spec.layering()


def _dimension_override(spec: ProblemSpec, args) -> int:
    return args.dim if getattr(args, "dim", None) is not None else spec.dimension


def cmd_skeleta(args) -> int:
    spec = _load(args)
    algebra = spec.algebra()
    top = spec.top()
    dim = _dimension_override(spec, args)
    layering = _layering_override(spec, args)
    if args.count_only:
        count = count_skeleta(algebra, top, dim, layering)
        _emit({"count": count}, args.emit, [f"skeleta: {count}"])
        return 0
    skeleta = enumerate_skeleta(algebra, top, dim, layering)
    from .report import _skeleton_json

    data = {"dimension": dim, "count": len(skeleta),
            "skeleta": [_skeleton_json(s, i) for i, s in enumerate(skeleta)]}
    if not skeleta:
        data["status"] = "infeasible"
        _emit(data, args.emit, ["infeasible: no skeleta for the requested dimension/layering"])
        return 0
    lines = [f"{len(skeleta)} skeleta of dimension {dim}"]
    for i, s in enumerate(skeleta):
        lines.append(f"  [{i}] {s}")
    _emit(data, args.emit, lines)
    return 0


def _skeleton_by_id(spec: ProblemSpec, algebra, top, ident: int):
    layering = spec.layering()
    skeleta = enumerate_skeleta(algebra, top, spec.dimension, layering)
    if not 0 <= ident < len(skeleta):
        raise ProblemError(f"skeleton id {ident} out of range 0..{len(skeleta) - 1}"
                           if skeleta else "the problem has no skeleta")
    return skeleta[ident]


def cmd_critical_pairs(args) -> int:
    spec = _load(args)
    algebra = spec.algebra()
    top = spec.top()
    skel = _skeleton_by_id(spec, algebra, top, args.skeleton)
    pairs = critical_pairs(algebra, skel)
    index = variable_index(pairs, graded=not args.ungraded)
    data = {
        "skeletonId": args.skeleton,
        "graded": not args.ungraded,
        "pairs": [
            {
                "arrow": p.arrow.name,
                "basePath": str(p.base),
                "slot": p.slot,
                "targets": [str(t) for t in p.targets],
                "gradedTargets": [str(t) for t in p.graded_targets],
            }
            for p in pairs
        ],
        "variables": index.describe(),
    }
    lines = [f"skeleton [{args.skeleton}] {skel}", f"{len(pairs)} critical pairs:"]
    for p in pairs:
        tg = ", ".join(map(str, p.graded_targets)) or "-"
        lines.append(f"  {p}  graded targets: {tg}")
    lines.append(f"{index.size} chart coordinates")
    for v in index.variables:
        lines.append(f"  {v.name} = [{v.arrow.name} * {v.base}^({v.slot}) -> {v.target}]")
    _emit(data, args.emit, lines)
    return 0


def cmd_charts(args) -> int:
    spec = _load(args)
    options = PipelineOptions(graded=not args.ungraded, skeleton_id=args.skeleton)
    result = run_pipeline(spec, options)
    if result.infeasible:
        _emit(result.data, args.emit, ["infeasible: no skeleta for the requested dimension/layering"])
        return 0
    lines: List[str] = []
    for entry in result.data["charts"]:
        rep = entry["report"]
        lines.append(f"skeleton [{entry['skeletonId']}] "
                     f"variables={rep['variables']} generators={rep['generators']} "
                     f"linear_rank={rep['linearRank']} free={rep['freeParameters']}")
        for v in entry["variables"]:
            lines.append(f"  {v['name']} = [{v['arrow']} * {v['basePath']}^({v['slot']})"
                         f" -> {v['target']}^({v['targetSlot']})]")
        for g in entry["generators"]:
            lines.append(f"  gen: {g}")
    _emit(result.data, args.emit, lines)
    return 0


def cmd_oracle(args) -> int:
    spec = _load(args)
    algebra = spec.algebra()
    top = spec.top()
    layering = spec.layering()
    skeleta = enumerate_skeleta(algebra, top, spec.dimension, layering)
    if not skeleta:
        _emit({"status": "infeasible"}, args.emit, ["infeasible: no skeleta"])
        return 0
    chosen = list(enumerate(skeleta))
    if args.skeleton is not None:
        skel = _skeleton_by_id(spec, algebra, top, args.skeleton)
        chosen = [(args.skeleton, skel)]
    field = PrimeField(args.prime)
    reports = []
    failed = 0
    lines = []
    for ident, skel in chosen:
        chart = chart_ideal(algebra, top, skel, graded=not args.ungraded)
        rep = membership_vs_oracle(algebra, top, skel, chart, field,
                                   trials=args.trials, seed=args.seed)
        reports.append({"skeletonId": ident, **rep.as_dict()})
        status = "ok" if rep.ok else "MISMATCH"
        lines.append(f"skeleton [{ident}] trials={rep.trials} in_variety={rep.in_variety} "
                     f"outside={rep.outside} {status}")
        if not rep.ok:
            failed += 1
    data = {"prime": args.prime, "seed": args.seed, "reports": reports,
            "status": "ok" if failed == 0 else "check-failed"}
    lines.append(f"oracle: {'all agree' if failed == 0 else f'{failed} skeleta disagree'}")
    _emit(data, args.emit, lines)
    return 0 if failed == 0 else 1


def cmd_realize(args) -> int:
    spec = realize_variety(args.poly, args.max_index, args.levels, convention=args.convention)
    payload = json.dumps(spec.as_dict(), indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload)
            fh.write("\n")
        print(f"wrote {args.output}")
    else:
        print(payload)
    return 0


def cmd_degenerate(args) -> int:
    with open(args.submodule, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProblemError(
                f"{args.submodule}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(data, dict) or "problem" not in data or "vectors" not in data:
        raise ProblemError("submodule file must carry 'problem' and 'vectors'")
    prob = data["problem"]
    spec = load_problem(prob) if isinstance(prob, str) else problem_from_dict(prob)
    algebra = spec.algebra()
    top = spec.top()
    from .skeleta import TaggedPath

    vectors = []
    for i, vec in enumerate(data["vectors"]):
        row: Dict[TaggedPath, Fraction] = {}
        for cell in vec:
            path = spec.quiver.path_from_string(str(cell["path"]))
            row[TaggedPath(path, int(cell["slot"]))] = Fraction(str(cell.get("coeff", "1")))
        vectors.append(row)
    pres = submodule_from_vectors(algebra, top, vectors)
    out = top_degeneration(pres, args.slot)
    split = slot_split_summands(out)
    blocks = finest_slot_blocks(out)
    payload = {
        "problem": spec.as_dict(),
        "slot": args.slot,
        "vectors": [
            [{"coeff": str(c), "path": str(tp.path), "slot": tp.slot} for tp, c in sorted(
                vec.items(), key=lambda kv: kv[0].key())]
            for vec in out.vectors()
        ],
        "submoduleDimension": out.submodule_dimension,
        "quotientDimension": out.quotient_dimension,
        "homogeneous": out.homogeneous,
        "slotSplit": list(split) if split is not None else None,
        "finestBlocks": [list(b) for b in blocks],
    }
    lines = [
        f"degenerated along slot {args.slot}",
        f"dim C = {out.submodule_dimension}, module dimension = {out.quotient_dimension}",
        f"homogeneous: {out.homogeneous}",
        f"slot split: {split if split is not None else 'none'}",
        f"finest blocks: {blocks}",
    ]
    _emit(payload, args.emit, lines)
    return 0


def cmd_report(args) -> int:
    spec = _load(args)
    options = PipelineOptions(graded=not args.ungraded, oracle=args.oracle,
                              trials=args.trials, prime=args.prime, seed=args.seed)
    result = run_pipeline(spec, options)
    files = write_report(result, args.outdir, figures=not args.no_figures)
    for f in files:
        print(f)
    if result.infeasible:
        print("infeasible: no skeleta for the requested dimension/layering")
        return 0
    if result.checks_failed:
        print(f"check failures: {result.checks_failed}")
        return 1
    print("ok")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quiver-moduli",
        description="Distinguished affine charts of graded-module varieties over path algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, problem=True):
        if problem:
            p.add_argument("problem", help="problem JSON file")
        p.add_argument("--emit", choices=("json", "text"), default="text")

    p = sub.add_parser("skeleta", help="enumerate skeleta")
    add_common(p)
    p.add_argument("--dim", type=int, default=None, help="override the problem dimension")
    p.add_argument("--layering", default=None, help="layering rows as JSON, e.g. [[1,0],[0,2]]")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_skeleta)

    p = sub.add_parser("critical-pairs", help="critical pairs and chart coordinates of one skeleton")
    add_common(p)
    p.add_argument("--skeleton", type=int, required=True, help="skeleton id from the enumeration")
    p.add_argument("--ungraded", action="store_true")
    p.set_defaults(func=cmd_critical_pairs)

    p = sub.add_parser("charts", help="chart ideals for the skeleta")
    add_common(p)
    p.add_argument("--skeleton", type=int, default=None)
    p.add_argument("--ungraded", action="store_true")
    p.set_defaults(func=cmd_charts)

    p = sub.add_parser("oracle", help="sampled agreement between polynomials and matrices")
    add_common(p)
    p.add_argument("--skeleton", type=int, default=None)
    p.add_argument("--ungraded", action="store_true")
    p.add_argument("--prime", type=int, default=32003)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("realize", help="emit the problem recovering a projective zero set")
    p.add_argument("--poly", action="append", default=[], help="homogeneous polynomial in X0..Xn")
    p.add_argument("--max-index", type=int, required=True, help="largest coordinate index n")
    p.add_argument("--levels", type=int, required=True, help="number of grading steps d")
    p.add_argument("--convention", choices=("desc", "asc"), default="desc")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("degenerate", help="split a top summand off an explicit submodule")
    p.add_argument("submodule", help="JSON file with 'problem' and 'vectors'")
    p.add_argument("--slot", type=int, required=True)
    p.add_argument("--emit", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_degenerate)

    p = sub.add_parser("report", help="write report.json, charts.csv and figures")
    add_common(p)
    p.add_argument("--outdir", required=True)
    p.add_argument("--ungraded", action="store_true")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--prime", type=int, default=32003)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
