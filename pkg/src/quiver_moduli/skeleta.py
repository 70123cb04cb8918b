"""Skeleta of graded modules with a fixed top, and their critical pairs.

A skeleton assigns to every slot r of the projective cover a set of paths
starting at the slot vertex, closed under right subpaths, surviving in the
quotient algebra, of length at most the top nonzero degree.  The effective
degree of a tagged path is its length plus the slot shift; collecting
multiplicities per effective degree and vertex gives the layering the
skeleton forces on the modules it presents.

A critical pair is an arrow alpha together with a tagged skeleton path p
such that alpha*p leaves the skeleton while staying within the length bound.
Each pair contributes one chart coordinate per admissible target path; the
graded index keeps only targets whose effective degree matches.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .polynomials import PolyRing
from .quiver import Arrow, Path, Quiver, QuiverAlgebra, TopSpec, compose


class SkeletonError(ValueError):
    pass


@dataclass(frozen=True)
class TaggedPath:
    path: Path
    slot: int

    def key(self) -> Tuple:
        return (self.slot, self.path.key())

    def __str__(self) -> str:
        return f"{self.path}^({self.slot})"


class SemisimpleSequence:
    """Per-layer vertex multiplicities, rows aligned with the quiver vertices."""

    def __init__(self, quiver: Quiver, layers: Sequence[Sequence[int]]):
        rows = []
        for row in layers:
            row = tuple(int(x) for x in row)
            if len(row) != len(quiver.vertices):
                raise SkeletonError(f"layer {row} must list one count per vertex")
            if any(x < 0 for x in row):
                raise SkeletonError(f"negative multiplicity in layer {row}")
            rows.append(row)
        while rows and not any(rows[-1]):
            rows.pop()
        self.quiver = quiver
        self.layers = tuple(rows)

    def total(self) -> int:
        return sum(sum(row) for row in self.layers)

    def multiplicity(self, layer: int, vertex: str) -> int:
        if layer >= len(self.layers):
            return 0
        return self.layers[layer][self.quiver.vertex_index(vertex)]

    def as_lists(self) -> List[List[int]]:
        return [list(row) for row in self.layers]

    def __eq__(self, other) -> bool:
        return isinstance(other, SemisimpleSequence) and other.layers == self.layers

    def __hash__(self) -> int:
        return hash(self.layers)

    def __repr__(self) -> str:
        return f"SemisimpleSequence{list(map(list, self.layers))}"


class Skeleton:
    """Slot-indexed path sets; equality and hashing are content-based."""

    def __init__(self, top: TopSpec, paths_by_slot: Mapping[int, Iterable[Path]]):
        self.top = top
        table: Dict[int, Tuple[Path, ...]] = {}
        for label, _ in top.slots:
            paths = tuple(sorted(paths_by_slot.get(label, ()), key=Path.key))
            table[label] = paths
        extra = set(paths_by_slot) - {label for label, _ in top.slots}
        if extra:
            raise SkeletonError(f"paths assigned to unknown slots {sorted(extra)}")
        self.paths_by_slot = table
        self._sets = {label: frozenset(paths) for label, paths in table.items()}

    def size(self) -> int:
        return sum(len(v) for v in self.paths_by_slot.values())

    def contains(self, slot: int, path: Path) -> bool:
        return path in self._sets.get(slot, frozenset())

    def tagged(self) -> List[TaggedPath]:
        out = [TaggedPath(p, label) for label, paths in sorted(self.paths_by_slot.items()) for p in paths]
        return out

    def effective_degree(self, tp: TaggedPath) -> int:
        return tp.path.length + self.top.shift(tp.slot)

    def __eq__(self, other) -> bool:
        return isinstance(other, Skeleton) and other.top == self.top and other.paths_by_slot == self.paths_by_slot

    def __hash__(self) -> int:
        return hash((self.top, tuple(sorted((s, p) for s, p in self.paths_by_slot.items()))))

    def __str__(self) -> str:
        body = "; ".join(
            f"({label}) {', '.join(map(str, paths)) if paths else '-'}"
            for label, paths in sorted(self.paths_by_slot.items())
        )
        return "{" + body + "}"

    __repr__ = __str__


def validate_skeleton(algebra: QuiverAlgebra, top: TopSpec,
                      paths_by_slot: Mapping[int, Iterable[Path]],
                      dimension: Optional[int] = None) -> Skeleton:
    """Check the defining conditions and return the skeleton."""
    skel = Skeleton(top, paths_by_slot)
    L = algebra.loewy_length
    for label, paths in skel.paths_by_slot.items():
        vertex = top.vertex(label)
        members = skel._sets[label]
        if skel.top.quiver.trivial_path(vertex) not in members:
            raise SkeletonError(f"slot {label} is missing its trivial path e_{vertex}")
        for p in paths:
            if p.start != vertex:
                raise SkeletonError(f"path {p} in slot {label} does not start at e({label}) = {vertex}")
            if p.length > L:
                raise SkeletonError(f"path {p} exceeds the top nonzero degree {L}")
            if algebra.in_ideal(p):
                raise SkeletonError(f"path {p} is zero in the algebra")
            if p.length and p.right_subpath(p.length - 1) not in members:
                raise SkeletonError(f"slot {label} lacks the right subpath of {p}")
    if dimension is not None and skel.size() != dimension:
        raise SkeletonError(f"skeleton has {skel.size()} paths, expected {dimension}")
    return skel


def layering_of(skeleton: Skeleton) -> SemisimpleSequence:
    """Vertex multiplicities per effective degree forced by the skeleton."""
    quiver = skeleton.top.quiver
    depth = 0
    for tp in skeleton.tagged():
        depth = max(depth, skeleton.effective_degree(tp))
    rows = [[0] * len(quiver.vertices) for _ in range(depth + 1)]
    for tp in skeleton.tagged():
        rows[skeleton.effective_degree(tp)][quiver.vertex_index(tp.path.end)] += 1
    return SemisimpleSequence(quiver, rows)


def _enumerate(algebra: QuiverAlgebra, top: TopSpec, dimension: int,
               layering: Optional[SemisimpleSequence]):
    quiver = algebra.quiver
    L = algebra.loewy_length
    base: Dict[int, List[Path]] = {label: [quiver.trivial_path(v)] for label, v in top.slots}
    t = top.slot_count
    if dimension < t:
        return
    if layering is not None and layering.total() != dimension:
        return

    def layer_counts(table: Dict[int, List[Path]]):
        counts: Dict[Tuple[int, int], int] = {}
        for label, paths in table.items():
            shift = top.shift(label)
            for p in paths:
                key = (p.length + shift, quiver.vertex_index(p.end))
                counts[key] = counts.get(key, 0) + 1
        return counts

    def fits(counts) -> bool:
        if layering is None:
            return True
        for (layer, vi), c in counts.items():
            if layer >= len(layering.layers) or c > layering.layers[layer][vi]:
                return False
        return True

    if not fits(layer_counts(base)):
        return

    def candidates(table: Dict[int, List[Path]], last_key):
        for label, paths in table.items():
            existing = set(paths)
            for p in paths:
                for a in quiver.outgoing(p.end):
                    q = Path(p.arrows + (a,))
                    if q.length > L or q in existing:
                        continue
                    key = (q.key(), label)
                    if last_key is not None and key <= last_key:
                        continue
                    if not algebra.survives(q):
                        continue
                    yield key, label, q

    def rec(table: Dict[int, List[Path]], size: int, last_key):
        if size == dimension:
            skel = Skeleton(top, {label: tuple(paths) for label, paths in table.items()})
            if layering is None or layering_of(skel) == layering:
                yield skel
            return
        for key, label, q in sorted(candidates(table, last_key), key=lambda x: x[0]):
            table[label].append(q)
            counts = layer_counts(table)
            if fits(counts):
                yield from rec(table, size + 1, key)
            table[label].pop()

    yield from rec(base, t, None)


def enumerate_skeleta(algebra: QuiverAlgebra, top: TopSpec, dimension: int,
                      layering: Optional[SemisimpleSequence] = None) -> List[Skeleton]:
    """All skeleta with the given total dimension (and layering, if given).

    Deterministic order: depth-first extension by the shortest admissible
    path, arrow names breaking ties.  Returns the empty list when none exist.
    """
    return list(_enumerate(algebra, top, dimension, layering))


def count_skeleta(algebra: QuiverAlgebra, top: TopSpec, dimension: int,
                  layering: Optional[SemisimpleSequence] = None) -> int:
    return sum(1 for _ in _enumerate(algebra, top, dimension, layering))


@dataclass(frozen=True)
class CriticalPair:
    arrow: Arrow
    base: Path
    slot: int
    targets: Tuple[TaggedPath, ...]
    graded_targets: Tuple[TaggedPath, ...]

    @property
    def extended(self) -> Path:
        return Path(self.base.arrows + (self.arrow,))

    def key(self) -> Tuple:
        return (self.slot, self.base.key(), self.arrow.name)

    def __str__(self) -> str:
        return f"({self.arrow.name}, {self.base}^({self.slot}))"


def critical_pairs(algebra: QuiverAlgebra, skeleton: Skeleton) -> List[CriticalPair]:
    """All (arrow, tagged path) pairs whose extension leaves the skeleton."""
    top = skeleton.top
    quiver = top.quiver
    L = algebra.loewy_length
    tagged = skeleton.tagged()
    out: List[CriticalPair] = []
    for tp in tagged:
        for a in quiver.outgoing(tp.path.end):
            ext = Path(tp.path.arrows + (a,))
            if ext.length > L or skeleton.contains(tp.slot, ext):
                continue
            targets = tuple(sorted(
                (cand for cand in tagged
                 if cand.path.length >= ext.length and cand.path.end == a.target),
                key=TaggedPath.key))
            want = ext.length + top.shift(tp.slot)
            graded = tuple(c for c in targets if skeleton.effective_degree(c) == want)
            out.append(CriticalPair(a, tp.path, tp.slot, targets, graded))
    out.sort(key=CriticalPair.key)
    return out


@dataclass(frozen=True)
class ChartVariable:
    pair_index: int
    arrow: Arrow
    base: Path
    slot: int
    target: TaggedPath
    position: int
    name: str

    def __str__(self) -> str:
        return self.name


class VariableIndex:
    """Orders the chart coordinates: one per (critical pair, target path)."""

    def __init__(self, pairs: Sequence[CriticalPair], graded: bool = True, prefix: str = "X"):
        self.pairs = tuple(pairs)
        self.graded = graded
        variables: List[ChartVariable] = []
        lookup: Dict[Tuple[int, str, Path], List[ChartVariable]] = {}
        for i, pair in enumerate(self.pairs):
            targets = pair.graded_targets if graded else pair.targets
            entry: List[ChartVariable] = []
            for t in targets:
                var = ChartVariable(i, pair.arrow, pair.base, pair.slot, t,
                                    len(variables), f"{prefix}{len(variables) + 1}")
                variables.append(var)
                entry.append(var)
            lookup[(pair.slot, pair.arrow.name, pair.base)] = entry
        self.variables = tuple(variables)
        self._lookup = lookup
        self._ring = PolyRing([v.name for v in variables])

    @property
    def size(self) -> int:
        return len(self.variables)

    @property
    def ring(self) -> PolyRing:
        return self._ring

    def substitutions(self, slot: int, arrow_name: str, base: Path) -> Optional[List[ChartVariable]]:
        """The variables fed by one critical pair; None when the pair is unknown."""
        return self._lookup.get((slot, arrow_name, base))

    def variable_for(self, slot: int, arrow_name: str, base: Path, target: TaggedPath) -> ChartVariable:
        entry = self._lookup.get((slot, arrow_name, base))
        if entry is None:
            raise SkeletonError(f"no critical pair ({arrow_name}, {base}^({slot}))")
        for var in entry:
            if var.target == target:
                return var
        raise SkeletonError(f"no coordinate for target {target} of ({arrow_name}, {base}^({slot}))")

    def describe(self) -> List[Dict[str, object]]:
        return [
            {
                "name": v.name,
                "arrow": v.arrow.name,
                "basePath": str(v.base),
                "slot": v.slot,
                "target": str(v.target.path),
                "targetSlot": v.target.slot,
            }
            for v in self.variables
        ]


def variable_index(pairs: Sequence[CriticalPair], graded: bool = True) -> VariableIndex:
    return VariableIndex(pairs, graded=graded)
