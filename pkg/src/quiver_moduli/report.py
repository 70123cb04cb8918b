"""Pipeline driver and on-disk reports: JSON, CSV, and figures.

``run_pipeline`` turns a problem file into the full chart listing (skeleta,
variable indices, generators, dimension counts, optional sampling reports).
``write_report`` materializes that as report.json plus charts.csv, and draws
the quiver and one tree figure per skeleton with matplotlib.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import FancyArrowPatch

from .charts import chart_ideal, dimension_report
from .fields import PrimeField
from .oracle import membership_vs_oracle
from .problem import ProblemSpec
from .skeleta import Skeleton, layering_of


@dataclass
class PipelineOptions:
    graded: bool = True
    oracle: bool = False
    trials: int = 100
    prime: int = 32003
    seed: int = 0
    skeleton_id: Optional[int] = None
    max_steps: int = 10000


@dataclass
class PipelineResult:
    data: Dict[str, object]
    checks_failed: int
    infeasible: bool
    skeleta: List[Skeleton] = field(default_factory=list)


def _skeleton_json(skel: Skeleton, ident: int) -> Dict[str, object]:
    return {
        "id": ident,
        "slots": [
            {
                "slot": label,
                "vertex": skel.top.vertex(label),
                "shift": skel.top.shift(label),
                "paths": [str(p) for p in skel.paths_by_slot[label]],
            }
            for label, _ in skel.top.slots
        ],
        "layering": layering_of(skel).as_lists(),
    }


def run_pipeline(spec: ProblemSpec, options: Optional[PipelineOptions] = None) -> PipelineResult:
    options = options or PipelineOptions()
    from .skeleta import enumerate_skeleta

    algebra = spec.algebra()
    top = spec.top()
    layering = spec.layering()
    skeleta = enumerate_skeleta(algebra, top, spec.dimension, layering)
    data: Dict[str, object] = {
        "problem": spec.as_dict(),
        "loewyLength": algebra.loewy_length,
        "algebraGradedDimensions": algebra.graded_dimensions(),
        "algebraDimension": algebra.dimension(),
        "graded": options.graded,
    }
    if not skeleta:
        data["status"] = "infeasible"
        data["skeleta"] = []
        data["charts"] = []
        return PipelineResult(data, checks_failed=0, infeasible=True)
    chosen = list(enumerate(skeleta))
    if options.skeleton_id is not None:
        if not 0 <= options.skeleton_id < len(skeleta):
            from .problem import ProblemError

            raise ProblemError(f"skeleton id {options.skeleton_id} out of range 0..{len(skeleta) - 1}")
        chosen = [(options.skeleton_id, skeleta[options.skeleton_id])]
    failures = 0
    charts_json: List[Dict[str, object]] = []
    for ident, skel in chosen:
        chart = chart_ideal(algebra, top, skel, graded=options.graded, max_steps=options.max_steps)
        report = dimension_report(chart)
        entry: Dict[str, object] = {
            "skeletonId": ident,
            "skeleton": _skeleton_json(skel, ident),
            "variables": chart.index.describe(),
            "generators": [str(g) for g in chart.generators],
            "report": report.as_dict(),
        }
        if options.oracle:
            field_p = PrimeField(options.prime)
            oracle = membership_vs_oracle(algebra, top, skel, chart, field_p,
                                          trials=options.trials, seed=options.seed)
            entry["oracle"] = oracle.as_dict()
            if not oracle.ok:
                failures += 1
        charts_json.append(entry)
    data["status"] = "ok" if failures == 0 else "check-failed"
    data["skeleta"] = [_skeleton_json(s, i) for i, s in enumerate(skeleta)]
    data["charts"] = charts_json
    return PipelineResult(data, checks_failed=failures, infeasible=False,
                          skeleta=[s for _, s in chosen])


def write_report(result: PipelineResult, outdir: str, figures: bool = True) -> List[str]:
    """Write report.json, charts.csv, and figures; return the file list."""
    os.makedirs(outdir, exist_ok=True)
    written: List[str] = []
    report_path = os.path.join(outdir, "report.json")
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(result.data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(report_path)
    csv_path = os.path.join(outdir, "charts.csv")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        header = ["skeleton_id", "skeleton", "layering", "variables", "generators",
                  "linear_rank", "free_parameters", "oracle_trials", "oracle_in_variety",
                  "oracle_mismatches", "oracle_ok"]
        writer.writerow(header)
        for entry in result.data.get("charts", []):
            skel = entry["skeleton"]
            rep = entry["report"]
            oracle = entry.get("oracle")
            writer.writerow([
                entry["skeletonId"],
                " | ".join(",".join(s["paths"]) for s in skel["slots"]),
                json.dumps(skel["layering"]),
                rep["variables"],
                rep["generators"],
                rep["linearRank"],
                rep["freeParameters"],
                oracle["trials"] if oracle else "",
                oracle["inVariety"] if oracle else "",
                len(oracle["mismatches"]) if oracle else "",
                oracle["ok"] if oracle else "",
            ])
    written.append(csv_path)
    if figures:
        problem = result.data["problem"]
        fig_path = os.path.join(outdir, "quiver.png")
        draw_quiver_figure(problem, fig_path)
        written.append(fig_path)
        for entry in result.data.get("charts", []):
            ident = entry["skeletonId"]
            path = os.path.join(outdir, f"skeleton_{ident}.png")
            draw_skeleton_figure(entry["skeleton"], path)
            written.append(path)
    return written


def draw_quiver_figure(problem: Dict[str, object], path: str) -> None:
    vertices = list(problem["vertices"])
    arrows = list(problem["arrows"])
    n = len(vertices)
    pos: Dict[str, tuple] = {}
    for i, v in enumerate(vertices):
        angle = math.pi / 2 - 2 * math.pi * i / max(n, 1)
        r = 0.0 if n == 1 else 1.0
        pos[v] = (r * math.cos(angle), r * math.sin(angle))
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.set_aspect("equal")
    ax.axis("off")
    groups: Dict[tuple, List[dict]] = {}
    for a in arrows:
        groups.setdefault((a["from"], a["to"]), []).append(a)
    for (src, tgt), group in sorted(groups.items()):
        for k, a in enumerate(sorted(group, key=lambda d: d["name"])):
            if src == tgt:
                x, y = pos[src]
                rad = 1.8 + 0.6 * k
                patch = FancyArrowPatch((x - 0.06, y + 0.05), (x + 0.06, y + 0.05),
                                        connectionstyle=f"arc3,rad={rad}",
                                        arrowstyle="-|>", mutation_scale=12, color="tab:blue")
                ax.add_patch(patch)
                ax.annotate(a["name"], (x, y + 0.28 + 0.17 * k), ha="center", fontsize=9)
            else:
                spread = (k - (len(group) - 1) / 2) * 0.35
                patch = FancyArrowPatch(pos[src], pos[tgt], connectionstyle=f"arc3,rad={spread}",
                                        arrowstyle="-|>", mutation_scale=12, color="tab:blue",
                                        shrinkA=12, shrinkB=12)
                ax.add_patch(patch)
                mx = (pos[src][0] + pos[tgt][0]) / 2
                my = (pos[src][1] + pos[tgt][1]) / 2
                dx = pos[tgt][0] - pos[src][0]
                dy = pos[tgt][1] - pos[src][1]
                norm = math.hypot(dx, dy) or 1.0
                off = 0.55 * spread
                ax.annotate(a["name"], (mx - dy / norm * off, my + dx / norm * off),
                            ha="center", fontsize=9)
    for v, (x, y) in pos.items():
        ax.scatter([x], [y], s=420, color="white", edgecolors="black", zorder=3)
        ax.annotate(str(v), (x, y), ha="center", va="center", zorder=4)
    ax.relim()
    ax.autoscale_view()
    ax.margins(0.25)
    fig.suptitle(str(problem.get("name", "quiver")))
    fig.savefig(path, dpi=110)
    plt.close(fig)


def draw_skeleton_figure(skeleton_json: Dict[str, object], path: str) -> None:
    """One tree per slot: nodes are skeleton paths, edges append one arrow."""
    slots = skeleton_json["slots"]
    fig, axes = plt.subplots(1, len(slots), figsize=(4 * len(slots), 4), squeeze=False)
    for ax, slot in zip(axes[0], slots):
        ax.axis("off")
        paths = list(slot["paths"])
        # parent of a positive-length path drops its leftmost (last applied) arrow
        def parent(p: str) -> Optional[str]:
            if p.startswith("e_"):
                return None
            parts = p.split("*")
            return "*".join(parts[1:]) if len(parts) > 1 else f"e_{slot['vertex']}"

        children: Dict[str, List[str]] = {p: [] for p in paths}
        root = None
        for p in paths:
            par = parent(p)
            if par is None:
                root = p
            else:
                children.setdefault(par, []).append(p)
        for v in children.values():
            v.sort()
        xs: Dict[str, float] = {}
        counter = [0.0]

        def place(node: str, depth: int):
            kids = children.get(node, [])
            if not kids:
                xs[node] = counter[0]
                counter[0] += 1.0
            else:
                for k in kids:
                    place(k, depth + 1)
                xs[node] = sum(xs[k] for k in kids) / len(kids)

        if root is None:
            continue
        place(root, 0)

        def depth_of(p: str) -> int:
            return 0 if p.startswith("e_") else len(p.split("*"))

        for p in paths:
            par = parent(p)
            if par is not None and par in xs:
                ax.plot([xs[par], xs[p]], [-depth_of(par), -depth_of(p)], color="gray", zorder=1)
                label = p.split("*")[0]
                ax.annotate(label, ((xs[par] + xs[p]) / 2 + 0.06, -(depth_of(par) + depth_of(p)) / 2),
                            fontsize=8, color="tab:red")
        for p in paths:
            ax.scatter([xs[p]], [-depth_of(p)], s=240, color="white", edgecolors="black", zorder=2)
            ax.annotate(p, (xs[p], -depth_of(p) - 0.28), ha="center", fontsize=7)
        ax.set_title(f"slot {slot['slot']} at {slot['vertex']}")
        ax.margins(0.3)
    fig.suptitle(f"skeleton {skeleton_json['id']}")
    fig.savefig(path, dpi=110)
    plt.close(fig)
