"""Numeric cross-checks: explicit representations, sampling, degenerations.

This path never touches the symbolic reduction.  A chart point is turned
into honest arrow matrices on the skeleton basis; relations are then checked
by multiplying matrices, and layerings by ranking radical powers.  Agreement
with the vanishing of the chart polynomials at the same point is what ties
the two routes together.

The degeneration side works with explicit submodules of the projective
cover: projecting a submodule onto one slot and keeping its intersection
with the complementary slots produces the limit module used to split off a
top summand; allocation partitions of the other degenerations are classified
by their multiset of (vertex, dimension) factors.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .charts import ChartIdeal, normal_form
from .fields import QQ, PrimeField
from .linalg import Echelon, rank_over
from .polynomials import eliminate_linear
from .quiver import (AlgebraElement, Path, QuiverAlgebra, TopSpec, compose,
                     left_ideal_generators)
from .skeleta import (SemisimpleSequence, Skeleton, TaggedPath, VariableIndex,
                      layering_of)


class OracleError(ValueError):
    pass


class Representation:
    """Arrow matrices acting on the tagged skeleton basis."""

    def __init__(self, algebra: QuiverAlgebra, skeleton: Skeleton, field,
                 basis: Sequence[TaggedPath], columns: Dict[str, Dict[int, List[Tuple[int, object]]]]):
        self.algebra = algebra
        self.skeleton = skeleton
        self.field = field
        self.basis = tuple(basis)
        self.position = {tp: i for i, tp in enumerate(self.basis)}
        self._columns = columns

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def arrow_matrix(self, name: str) -> List[List[object]]:
        n = self.dimension
        zero = self.field.zero
        mat = [[zero for _ in range(n)] for _ in range(n)]
        for col, entries in self._columns.get(name, {}).items():
            for row, val in entries:
                mat[row][col] = val
        return mat

    def idempotent_matrix(self, vertex: str) -> List[List[object]]:
        n = self.dimension
        zero, one = self.field.zero, self.field.one
        return [[one if (i == j and self.basis[i].path.end == vertex) else zero
                 for j in range(n)] for i in range(n)]

    def apply_arrow(self, name: str, vec: Dict[int, object]) -> Dict[int, object]:
        cols = self._columns.get(name, {})
        out: Dict[int, object] = {}
        for col, val in vec.items():
            for row, entry in cols.get(col, ()):
                s = out.get(row, self.field.zero) + entry * val
                if s:
                    out[row] = s
                else:
                    out.pop(row, None)
        return out

    def apply_path(self, path: Path, vec: Dict[int, object]) -> Dict[int, object]:
        if path.length == 0:
            return {i: v for i, v in vec.items() if self.basis[i].path.end == path.base and v}
        out = vec
        for arrow in path.arrows:
            out = {i: v for i, v in out.items() if self.basis[i].path.end == arrow.source}
            out = self.apply_arrow(arrow.name, out)
            if not out:
                return {}
        return out

    def apply_element(self, elem: AlgebraElement, vec: Dict[int, object]) -> Dict[int, object]:
        out: Dict[int, object] = {}
        for path, coeff in elem.terms.items():
            c = self.field.of(coeff)
            for row, val in self.apply_path(path, vec).items():
                s = out.get(row, self.field.zero) + c * val
                if s:
                    out[row] = s
                else:
                    out.pop(row, None)
        return out


def instantiate(algebra: QuiverAlgebra, skeleton: Skeleton, index: VariableIndex,
                point: Sequence, field) -> Representation:
    """Build the representation at one coordinate point of the chart."""
    if len(point) != index.size:
        raise OracleError(f"point has {len(point)} coordinates, index needs {index.size}")
    values = [field.of(v) for v in point]
    top = skeleton.top
    basis = sorted(skeleton.tagged(), key=lambda tp: (skeleton.effective_degree(tp), tp.slot, tp.path.key()))
    position = {tp: i for i, tp in enumerate(basis)}
    L = algebra.loewy_length
    columns: Dict[str, Dict[int, List[Tuple[int, object]]]] = {a.name: {} for a in algebra.quiver.arrows}
    for tp in basis:
        col = position[tp]
        for arrow in algebra.quiver.outgoing(tp.path.end):
            ext = Path(tp.path.arrows + (arrow,))
            if skeleton.contains(tp.slot, ext):
                columns[arrow.name].setdefault(col, []).append((position[TaggedPath(ext, tp.slot)], field.one))
                continue
            if ext.length > L:
                continue
            entry = index.substitutions(tp.slot, arrow.name, tp.path)
            if entry is None:
                raise OracleError(f"missing critical pair ({arrow.name}, {tp.path}^({tp.slot}))")
            cells = []
            for var in entry:
                val = values[var.position]
                if val:
                    cells.append((position[var.target], val))
            if cells:
                columns[arrow.name][col] = cells
    return Representation(algebra, skeleton, field, basis, columns)


def satisfies_relations(rep: Representation, top: Optional[TopSpec] = None):
    """Check every relation component and restricted ideal generator; return (ok, witness)."""
    algebra = rep.algebra
    if top is None:
        top = rep.skeleton.top
    elements = list(algebra.relation_components) + list(left_ideal_generators(algebra, top))
    for elem in elements:
        start = elem.start
        for tp, col in rep.position.items():
            if tp.path.end != start:
                continue
            image = rep.apply_element(elem, {col: rep.field.one})
            if image:
                return False, (elem, tp)
    return True, None


def radical_layering(rep: Representation) -> SemisimpleSequence:
    """Vertex multiplicities of successive radical powers, by matrix ranks."""
    quiver = rep.algebra.quiver
    n = rep.dimension
    field = rep.field
    spans: List[List[Dict[int, object]]] = [[{i: field.one} for i in range(n)]]
    while True:
        ech = Echelon()
        for vec in spans[-1]:
            for arrow in quiver.arrows:
                img = rep.apply_arrow(arrow.name, {
                    i: v for i, v in vec.items() if rep.basis[i].path.end == arrow.source})
                if img:
                    ech.add(img)
        rows = ech.basis_rows()
        spans.append(rows)
        if not rows:
            break
        if len(spans) > rep.algebra.loewy_length + 2:
            raise OracleError("radical powers fail to vanish; representation is not nilpotent over the layers")
    per_vertex: List[Dict[str, int]] = []
    for rows in spans:
        dims: Dict[str, int] = {}
        for v in quiver.vertices:
            cols = [i for i in range(n) if rep.basis[i].path.end == v]
            keep = set(cols)
            proj = [{c: val for c, val in row.items() if c in keep} for row in rows]
            dims[v] = rank_over(field, [p for p in proj if p], ncols=n)
        per_vertex.append(dims)
    layers = []
    for cur, nxt in zip(per_vertex, per_vertex[1:]):
        layers.append([cur[v] - nxt[v] for v in quiver.vertices])
    return SemisimpleSequence(quiver, layers)


@dataclass
class OracleReport:
    prime: Optional[int]
    seed: int
    trials: int
    in_variety: int
    outside: int
    mismatches: List[Dict[str, object]]
    layering_mismatches: List[Dict[str, object]]

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.layering_mismatches

    def as_dict(self) -> Dict[str, object]:
        return {
            "prime": self.prime,
            "seed": self.seed,
            "trials": self.trials,
            "inVariety": self.in_variety,
            "outside": self.outside,
            "mismatches": self.mismatches,
            "layeringMismatches": self.layering_mismatches,
            "ok": self.ok,
        }


def membership_vs_oracle(algebra: QuiverAlgebra, top: TopSpec, skeleton: Skeleton,
                         chart: ChartIdeal, field, trials: int = 100, seed: int = 0,
                         check_layering: bool = True, solve_linear: bool = True) -> OracleReport:
    """Sample points and demand: polynomials vanish iff the matrices satisfy the relations.

    Odd-numbered trials are first projected through the chart's linear
    generators so that charts cut out by linear equations contribute points
    on the variety as well; every point runs the identical two-sided check.
    """
    rng = random.Random(seed)
    index = chart.index
    expected_layering = layering_of(skeleton) if check_layering else None
    images = None
    if solve_linear and chart.generators:
        _, images, _, consistent = eliminate_linear(chart.generators)
        if not consistent:
            images = None
    mismatches: List[Dict[str, object]] = []
    layering_mismatches: List[Dict[str, object]] = []
    in_variety = 0
    for trial in range(trials):
        point = [field.random(rng) for _ in range(index.size)]
        if images is not None and trial % 2 == 1:
            point = [img.evaluate(point, field) for img in images]
        vanishes = all(not g.evaluate(point, field) for g in chart.generators)
        rep = instantiate(algebra, skeleton, index, point, field)
        ok, witness = satisfies_relations(rep, top)
        if vanishes != ok:
            mismatches.append({
                "trial": trial,
                "point": [str(v) for v in point],
                "vanishes": vanishes,
                "satisfiesRelations": ok,
                "witness": None if witness is None else [str(witness[0]), str(witness[1])],
            })
        if vanishes:
            in_variety += 1
            if expected_layering is not None and chart.graded and ok:
                found = radical_layering(rep)
                if found != expected_layering:
                    layering_mismatches.append({
                        "trial": trial,
                        "point": [str(v) for v in point],
                        "expected": expected_layering.as_lists(),
                        "found": found.as_lists(),
                    })
    prime = getattr(field, "p", None)
    return OracleReport(prime, seed, trials, in_variety, trials - in_variety,
                        mismatches, layering_mismatches)


# --- explicit submodules of the projective cover -------------------------


class SubmodulePresentation:
    """A submodule of the radical of the cover, as reduced coordinate rows."""

    def __init__(self, algebra: QuiverAlgebra, top: TopSpec, rows: Sequence[Dict[int, Fraction]],
                 validate: bool = True):
        self.algebra = algebra
        self.top = top
        self.basis = cover_basis(algebra, top)
        self.position = {tp: i for i, tp in enumerate(self.basis)}
        ech = Echelon()
        for row in rows:
            ech.add(dict(row))
        self.rows = ech.basis_rows()
        if validate:
            self._validate()
        self.homogeneous = self._homogeneity()

    @property
    def cover_dimension(self) -> int:
        return len(self.basis)

    @property
    def submodule_dimension(self) -> int:
        return len(self.rows)

    @property
    def quotient_dimension(self) -> int:
        return self.cover_dimension - self.submodule_dimension

    def _span(self) -> Echelon:
        ech = Echelon()
        for row in self.rows:
            ech.add(dict(row))
        return ech

    def _arrow_image(self, arrow_name: str, row: Dict[int, Fraction]) -> Dict[int, Fraction]:
        arrow = self.algebra.quiver.arrow(arrow_name)
        out: Dict[int, Fraction] = {}
        for i, c in row.items():
            tp = self.basis[i]
            if tp.path.end != arrow.source:
                continue
            ext = compose(Path((arrow,)), tp.path)
            for bp, bc in self.algebra.reduce_path(ext).items():
                j = self.position[TaggedPath(bp, tp.slot)]
                s = out.get(j, Fraction(0)) + c * bc
                if s:
                    out[j] = s
                else:
                    out.pop(j, None)
        return out

    def _validate(self):
        for row in self.rows:
            for i in row:
                if self.basis[i].path.length == 0:
                    raise OracleError(
                        f"submodule is not inside the radical: coordinate at {self.basis[i]}")
        span = self._span()
        for row in self.rows:
            for arrow in self.algebra.quiver.arrows:
                img = self._arrow_image(arrow.name, row)
                if img and not span.contains(img):
                    raise OracleError(f"rows are not closed under the action of {arrow.name}")

    def _homogeneity(self) -> bool:
        span = self._span()
        for row in self.rows:
            degrees = sorted({self.basis[i].path.length + self.top.shift(self.basis[i].slot)
                              for i in row})
            for d in degrees:
                comp = {i: c for i, c in row.items()
                        if self.basis[i].path.length + self.top.shift(self.basis[i].slot) == d}
                if comp and not span.contains(comp):
                    return False
        return True

    def vectors(self) -> List[Dict[TaggedPath, Fraction]]:
        return [{self.basis[i]: c for i, c in row.items()} for row in self.rows]

    def __repr__(self) -> str:
        return (f"SubmodulePresentation(dim C = {self.submodule_dimension}, "
                f"dim cover = {self.cover_dimension}, homogeneous = {self.homogeneous})")


def cover_basis(algebra: QuiverAlgebra, top: TopSpec) -> List[TaggedPath]:
    """Path basis of the projective cover, slot-major, short paths first."""
    out: List[TaggedPath] = []
    for label, vertex in top.slots:
        for p in algebra.basis(start=vertex):
            out.append(TaggedPath(p, label))
    out.sort(key=lambda tp: (tp.slot, tp.path.key()))
    return out


def submodule_from_vectors(algebra: QuiverAlgebra, top: TopSpec,
                           vectors: Iterable[Dict[TaggedPath, Fraction]],
                           validate: bool = True) -> SubmodulePresentation:
    basis = cover_basis(algebra, top)
    position = {tp: i for i, tp in enumerate(basis)}
    rows = []
    for vec in vectors:
        row: Dict[int, Fraction] = {}
        for tp, c in vec.items():
            if tp not in position:
                raise OracleError(f"{tp} is not a basis path of the cover")
            if c:
                row[position[tp]] = Fraction(c)
        rows.append(row)
    return SubmodulePresentation(algebra, top, rows, validate=validate)


def submodule_from_point(algebra: QuiverAlgebra, skeleton: Skeleton, index: VariableIndex,
                         point: Sequence) -> SubmodulePresentation:
    """The kernel of cover -> instantiated module, over QQ."""
    top = skeleton.top
    values = [Fraction(v) for v in point]
    basis = cover_basis(algebra, top)
    position = {tp: i for i, tp in enumerate(basis)}
    rows = []
    for tp in basis:
        if skeleton.contains(tp.slot, tp.path):
            continue
        nf = normal_form(algebra, skeleton, index, [(Fraction(1), tp.path, tp.slot)])
        row = {position[tp]: Fraction(1)}
        for target, poly in nf.items():
            val = poly.evaluate(values, QQ)
            if val:
                row[position[target]] = -val
        rows.append(row)
    return SubmodulePresentation(algebra, top, rows, validate=False)


def top_degeneration(pres: SubmodulePresentation, slot: int) -> SubmodulePresentation:
    """Replace C by (projection of C to the slot) + (C meet the complement).

    Reordering columns so the chosen slot block comes first and row reducing
    makes both pieces drop out of one echelon pass; the result is again a
    submodule of the radical with the same dimension.
    """
    if slot not in {label for label, _ in pres.top.slots}:
        raise OracleError(f"no slot {slot}")
    n = pres.cover_dimension
    block = [i for i, tp in enumerate(pres.basis) if tp.slot == slot]
    rest = [i for i in range(n) if i not in set(block)]
    order = block + rest
    rank_of = {col: i for i, col in enumerate(order)}
    ech = Echelon()
    for row in pres.rows:
        ech.add({rank_of[c]: v for c, v in row.items()})
    new_rows: List[Dict[int, Fraction]] = []
    nblock = len(block)
    for pcol in sorted(ech.rows):
        row = ech.rows[pcol]
        if pcol < nblock:
            proj = {order[c]: v for c, v in row.items() if c < nblock}
            if proj:
                new_rows.append(proj)
        else:
            new_rows.append({order[c]: v for c, v in row.items()})
    out = SubmodulePresentation(pres.algebra, pres.top, new_rows, validate=False)
    if out.submodule_dimension != pres.submodule_dimension:
        raise OracleError("degeneration changed the submodule dimension")
    return out


def slot_split_summands(pres: SubmodulePresentation) -> Optional[Tuple[int, ...]]:
    """Allocated dimensions per slot when C splits along every slot, else None."""
    blocks = [frozenset([label]) for label, _ in pres.top.slots]
    if not _splits_into(pres, blocks):
        return None
    dims = []
    for label, vertex in pres.top.slots:
        cols = {i for i, tp in enumerate(pres.basis) if tp.slot == label}
        inter = _intersection_dimension(pres, cols)
        dims.append(len(cols) - inter)
    return tuple(dims)


def _intersection_dimension(pres: SubmodulePresentation, cols: Set[int]) -> int:
    n = pres.cover_dimension
    inside = sorted(cols)
    outside = [i for i in range(n) if i not in cols]
    order = outside + inside
    rank_of = {col: i for i, col in enumerate(order)}
    ech = Echelon()
    for row in pres.rows:
        ech.add({rank_of[c]: v for c, v in row.items()})
    cut = len(outside)
    return sum(1 for pcol in ech.rows if pcol >= cut)


def _splits_into(pres: SubmodulePresentation, blocks: Sequence[frozenset]) -> bool:
    total = 0
    for b in blocks:
        cols = {i for i, tp in enumerate(pres.basis) if tp.slot in b}
        total += _intersection_dimension(pres, cols)
    return total == pres.submodule_dimension


def finest_slot_blocks(pres: SubmodulePresentation) -> List[Tuple[int, ...]]:
    """Finest partition of the slots along which C decomposes."""
    labels = [label for label, _ in pres.top.slots]

    def refine(block: Tuple[int, ...]) -> List[Tuple[int, ...]]:
        if len(block) == 1:
            return [block]
        bset = frozenset(block)
        for size in range(1, len(block) // 2 + 1):
            for sub in itertools.combinations(block, size):
                left = frozenset(sub)
                right = bset - left
                if _splits_into(pres, [left, right]):
                    return refine(tuple(sorted(left))) + refine(tuple(sorted(right)))
        return [block]

    out = refine(tuple(labels))
    return sorted(out)


def slot_aligned_summand_count(pres: SubmodulePresentation) -> int:
    return len(finest_slot_blocks(pres))


@dataclass(frozen=True)
class PartitionClass:
    """An equivalence class of dimension allocations across the slots."""

    representative: Tuple[int, ...]
    factors: Tuple[Tuple[str, int], ...]
    members: int


def partition_classes(top: TopSpec, dimension: int) -> List[PartitionClass]:
    """Allocations (d_r >= 1, sum d) up to permuting slots with equal vertex."""
    t = top.slot_count
    classes: Dict[Tuple, List[Tuple[int, ...]]] = {}
    for split in _compositions(dimension, t):
        key_parts: Dict[str, List[int]] = {}
        for (label, vertex), d_r in zip(top.slots, split):
            key_parts.setdefault(vertex, []).append(d_r)
        key = tuple((v, tuple(sorted(ds))) for v, ds in sorted(key_parts.items()))
        classes.setdefault(key, []).append(split)
    out = []
    for key in sorted(classes):
        members = sorted(classes[key])
        rep = members[0]
        factors = tuple((vertex, d_r) for (label, vertex), d_r in zip(top.slots, rep))
        out.append(PartitionClass(rep, factors, len(members)))
    out.sort(key=lambda c: c.representative)
    return out


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
