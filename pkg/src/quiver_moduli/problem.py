"""Problem files: quiver, relations, top, dimension, optional layering.

The JSON schema:

    {
      "vertices": ["0", "1"],
      "arrows":   [{"name": "a", "from": "0", "to": "1"}],
      "relations": ["b*a - d*c"],
      "loewy_bound": 2,
      "top": {"0": 1},
      "degree_vector": [0],
      "dimension": 3,
      "layering": [[1, 0], [0, 2]]
    }

``*`` composes paths with the right factor acting first.  Keys starting with
an underscore are ignored (used for metadata of generated files).

``realize_variety`` builds the problem whose distinguished chart recovers the
zero set of the given homogeneous polynomials: one vertex per degree level,
parallel arrows indexed by the variables, commutativity relations between
levels, and one relation per polynomial with monomials laid out along the
levels in a recorded index order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .polynomials import MultiPoly, PolyRing, PolyError, parse_polynomial
from .quiver import (Path, Quiver, QuiverAlgebra, QuiverError, RelationError,
                     TopSpec, parse_element)
from .skeleta import SemisimpleSequence, Skeleton, SkeletonError, validate_skeleton


class ProblemError(ValueError):
    pass


@dataclass
class ProblemSpec:
    name: str
    quiver: Quiver
    relation_strings: List[str]
    loewy_bound: Optional[int]
    top_multiplicities: Dict[str, int]
    degree_vector: Optional[List[int]]
    dimension: int
    layering_rows: Optional[List[List[int]]]
    metadata: Dict[str, object]

    def algebra(self, max_degree: int = 64) -> QuiverAlgebra:
        relations = [parse_element(self.quiver, s) for s in self.relation_strings]
        return QuiverAlgebra(self.quiver, relations, loewy_bound=self.loewy_bound,
                             max_degree=max_degree)

    def top(self) -> TopSpec:
        return TopSpec(self.quiver, self.top_multiplicities, self.degree_vector)

    def layering(self) -> Optional[SemisimpleSequence]:
        if self.layering_rows is None:
            return None
        return SemisimpleSequence(self.quiver, self.layering_rows)

    def as_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {
            "name": self.name,
            "vertices": list(self.quiver.vertices),
            "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in self.quiver.arrows],
            "relations": list(self.relation_strings),
            "top": dict(self.top_multiplicities),
            "dimension": self.dimension,
        }
        if self.loewy_bound is not None:
            out["loewy_bound"] = self.loewy_bound
        if self.degree_vector is not None:
            out["degree_vector"] = list(self.degree_vector)
        if self.layering_rows is not None:
            out["layering"] = [list(r) for r in self.layering_rows]
        for k, v in self.metadata.items():
            out[k] = v
        return out


def _expect(data: Mapping, key: str, kind, where: str):
    if key not in data:
        raise ProblemError(f"{where}: missing required key {key!r}")
    value = data[key]
    if not isinstance(value, kind):
        raise ProblemError(f"{where}: key {key!r} must be {kind.__name__}, got {type(value).__name__}")
    return value


def problem_from_dict(data: Mapping, name: str = "problem") -> ProblemSpec:
    where = name
    vertices = _expect(data, "vertices", list, where)
    arrows_raw = _expect(data, "arrows", list, where)
    arrows = []
    for i, a in enumerate(arrows_raw):
        if not isinstance(a, Mapping):
            raise ProblemError(f"{where}: arrows[{i}] must be an object")
        for key in ("name", "from", "to"):
            if key not in a:
                raise ProblemError(f"{where}: arrows[{i}] is missing {key!r}")
        arrows.append((str(a["name"]), str(a["from"]), str(a["to"])))
    try:
        quiver = Quiver([str(v) for v in vertices], arrows)
    except QuiverError as exc:
        raise ProblemError(f"{where}: {exc}") from exc
    relations = data.get("relations", [])
    if not isinstance(relations, list) or not all(isinstance(r, str) for r in relations):
        raise ProblemError(f"{where}: relations must be a list of strings")
    top_raw = _expect(data, "top", dict, where)
    top = {}
    for v, m in top_raw.items():
        if not isinstance(m, int):
            raise ProblemError(f"{where}: top multiplicity of {v!r} must be an integer")
        top[str(v)] = m
    dimension = _expect(data, "dimension", int, where)
    if dimension < 1:
        raise ProblemError(f"{where}: dimension must be positive")
    loewy_bound = data.get("loewy_bound")
    if loewy_bound is not None and (not isinstance(loewy_bound, int) or loewy_bound < 0):
        raise ProblemError(f"{where}: loewy_bound must be a nonnegative integer")
    degree_vector = data.get("degree_vector")
    if degree_vector is not None:
        if not isinstance(degree_vector, list) or not all(isinstance(h, int) for h in degree_vector):
            raise ProblemError(f"{where}: degree_vector must be a list of integers")
    layering = data.get("layering")
    if layering is not None:
        if (not isinstance(layering, list)
                or not all(isinstance(row, list) and all(isinstance(x, int) for x in row) for row in layering)):
            raise ProblemError(f"{where}: layering must be a list of integer rows")
    metadata = {k: v for k, v in data.items() if isinstance(k, str) and k.startswith("_")}
    spec = ProblemSpec(
        name=str(data.get("name", name)),
        quiver=quiver,
        relation_strings=[r for r in relations],
        loewy_bound=loewy_bound,
        top_multiplicities=top,
        degree_vector=degree_vector,
        dimension=dimension,
        layering_rows=layering,
        metadata=metadata,
    )
    # surface parse problems in relations and the top early, with context
    try:
        spec.top()
        for r in spec.relation_strings:
            parse_element(quiver, r)
    except (QuiverError, RelationError) as exc:
        raise ProblemError(f"{where}: {exc}") from exc
    return spec


def load_problem(path: str) -> ProblemSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ProblemError(f"no such problem file: {path}") from None
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ProblemError(f"{path}: the problem must be a JSON object")
    return problem_from_dict(data, name=path)


BUNDLED = (
    "example_5_1",
    "example_5_4_n1_d2",
    "example_5_4_n2_d3",
    "example_5_5_conic",
    "example_nilpotent_loops",
)


def bundled_problem(name: str) -> ProblemSpec:
    if name not in BUNDLED:
        raise ProblemError(f"unknown bundled problem {name!r}; have {', '.join(BUNDLED)}")
    text = resources.files("quiver_moduli").joinpath(f"data/{name}.json").read_text("utf-8")
    return problem_from_dict(json.loads(text), name=name)


def distinguished_skeleton(spec: ProblemSpec, algebra: QuiverAlgebra, chain_index: int = 0) -> Skeleton:
    """For level-graded problems: the chain skeleton along one variable index."""
    top = spec.top()
    if top.slot_count != 1:
        raise ProblemError("the chain skeleton needs a single-slot top")
    (label, vertex), = top.slots
    if chain_index < 0:
        raise ProblemError("chain_index must be nonnegative")
    paths = [algebra.quiver.trivial_path(vertex)]
    while len(paths) < spec.dimension:
        prev = paths[-1]
        options = sorted(algebra.quiver.outgoing(prev.end), key=lambda a: a.name)
        if not options:
            raise ProblemError("the quiver is too short for a chain of the requested dimension")
        if chain_index >= len(options):
            raise ProblemError(
                f"chain_index {chain_index} out of range: {prev.end} has {len(options)} outgoing arrows")
        paths.append(Path(prev.arrows + (options[chain_index],)))
    return validate_skeleton(algebra, top, {label: paths}, dimension=spec.dimension)


# --- realization of projective zero sets ---------------------------------


def _level_vertex(j: int) -> str:
    return str(j)


def _arrow_name(i: int, j: int) -> str:
    return f"a{i}_{j}"


def realize_variety(polynomials: Sequence[str], max_index: int, levels: int,
                    convention: str = "desc") -> ProblemSpec:
    """Problem whose distinguished chart carves out the common zero set.

    ``polynomials`` are homogeneous in X0..X<max_index>, of degree between 1
    and ``levels``.  Monomials become paths by assigning one variable index
    per level; with "desc" the indices read nonincreasing along composition
    order, with "asc" nondecreasing.
    """
    if convention not in ("desc", "asc"):
        raise ProblemError(f"unknown convention {convention!r}")
    if max_index < 1 or levels < 1:
        raise ProblemError("need at least two projective coordinates and one level")
    ring = PolyRing([f"X{i}" for i in range(max_index + 1)])
    parsed: List[MultiPoly] = []
    for s in polynomials:
        try:
            p = parse_polynomial(s, ring)
        except PolyError as exc:
            raise ProblemError(f"polynomial {s!r}: {exc}") from exc
        if p.is_zero():
            raise ProblemError(f"polynomial {s!r} is zero")
        degrees = {sum(m) for m in p.terms}
        if len(degrees) != 1:
            raise ProblemError(f"polynomial {s!r} is not homogeneous")
        (deg,) = degrees
        if not 1 <= deg <= levels:
            raise ProblemError(f"polynomial {s!r} has degree {deg}, outside 1..{levels}")
        parsed.append(p)

    vertices = [_level_vertex(j) for j in range(levels + 1)]
    arrows = [
        {"name": _arrow_name(i, j), "from": _level_vertex(j), "to": _level_vertex(j + 1)}
        for j in range(levels)
        for i in range(max_index + 1)
    ]
    relations: List[str] = []
    for r in range(1, levels):
        for i, j in itertools.combinations(range(max_index + 1), 2):
            relations.append(f"{_arrow_name(i, r)}*{_arrow_name(j, r - 1)} "
                             f"- {_arrow_name(j, r)}*{_arrow_name(i, r - 1)}")

    def monomial_path(mono: Tuple[int, ...], degree: int) -> str:
        indices: List[int] = []
        for i, e in enumerate(mono):
            indices.extend([i] * e)
        # "desc": variable indices read nonincreasing in composition order,
        # so the lowest index sits at level 0; "asc" is the mirror image.
        indices.sort(reverse=(convention == "asc"))
        names = [_arrow_name(indices[k], k) for k in range(degree)]
        return "*".join(reversed(names))

    for p in parsed:
        deg = p.total_degree()
        parts = []
        for mono, coeff in sorted(p.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True):
            body = monomial_path(mono, deg)
            if abs(coeff) != 1:
                body = f"{abs(coeff)}*{body}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        relations.append(" ".join(parts))

    data = {
        "name": f"realized_{len(parsed)}_polys",
        "vertices": vertices,
        "arrows": arrows,
        "relations": relations,
        "top": {_level_vertex(0): 1},
        "dimension": levels + 1,
        "layering": [[1 if k == j else 0 for k in range(levels + 1)] for j in range(levels + 1)],
        "_realization": {
            "polynomials": list(polynomials),
            "coordinates": max_index + 1,
            "levels": levels,
            "convention": convention,
        },
    }
    return problem_from_dict(data, name=data["name"])
