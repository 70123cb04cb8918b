"""Quivers, paths, and path algebras with homogeneous relations.

Composition follows the right-to-left convention: ``compose(p, q)`` is the
path that traverses ``q`` first and ``p`` second, and the string form
``"b*a"`` denotes the composite that applies ``a`` first.  Internally a path
stores its arrows in traversal order (first applied first).

A :class:`QuiverAlgebra` is the quotient of the path algebra by the ideal
generated by length-homogeneous elements of length >= 2 (optionally truncated
by all paths of a given length).  The ideal is expanded degree by degree with
exact linear algebra over QQ; each graded piece gets a reduced echelon basis,
so path residues, surviving paths, and the top nonzero degree all come from
row reduction rather than rewriting.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .linalg import Echelon


class QuiverError(ValueError):
    pass


class RelationError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str

    def __str__(self) -> str:
        return f"{self.name}: {self.source} -> {self.target}"


class Path:
    """A path in the quiver; ``arrows`` is in traversal order."""

    __slots__ = ("arrows", "base")

    def __init__(self, arrows: Sequence[Arrow] = (), base: Optional[str] = None):
        arrows = tuple(arrows)
        if not arrows and base is None:
            raise QuiverError("a length-0 path needs its vertex")
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise QuiverError(f"arrows {a.name}, {b.name} do not compose")
        self.arrows = arrows
        self.base = base if not arrows else None

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def start(self) -> str:
        return self.arrows[0].source if self.arrows else self.base

    @property
    def end(self) -> str:
        return self.arrows[-1].target if self.arrows else self.base

    def key(self) -> Tuple:
        if self.arrows:
            return (len(self.arrows), tuple(a.name for a in self.arrows))
        return (0, (self.base,))

    def right_subpath(self, k: int) -> "Path":
        """The initial segment of length k (the factor applied first)."""
        if not 0 <= k <= self.length:
            raise QuiverError(f"no right subpath of length {k}")
        if k == 0:
            return Path((), self.start)
        return Path(self.arrows[:k])

    def remainder_after(self, k: int) -> "Path":
        """What is left after peeling the right subpath of length k."""
        if k == self.length:
            return Path((), self.end)
        return Path(self.arrows[k:])

    def __eq__(self, other) -> bool:
        return isinstance(other, Path) and other.arrows == self.arrows and other.base == self.base

    def __hash__(self) -> int:
        return hash((self.arrows, self.base))

    def __str__(self) -> str:
        if not self.arrows:
            return f"e_{self.base}"
        return "*".join(a.name for a in reversed(self.arrows))

    def __repr__(self) -> str:
        return f"Path({self})"


def compose(p: Path, q: Path) -> Optional[Path]:
    """First q, then p; None when the endpoints do not match."""
    if q.end != p.start:
        return None
    if not p.arrows and not q.arrows:
        return Path((), q.base)
    return Path(q.arrows + p.arrows)


class Quiver:
    def __init__(self, vertices: Sequence[str], arrows: Iterable):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex names")
        vset = set(self.vertices)
        built: List[Arrow] = []
        for a in arrows:
            if not isinstance(a, Arrow):
                name, src, tgt = a
                a = Arrow(str(name), str(src), str(tgt))
            if a.source not in vset or a.target not in vset:
                raise QuiverError(f"arrow {a.name} uses unknown vertex")
            built.append(a)
        names = [a.name for a in built]
        if len(set(names)) != len(names):
            raise QuiverError("duplicate arrow names")
        self.arrows = tuple(built)
        self._by_name = {a.name: a for a in built}
        self._outgoing: Dict[str, Tuple[Arrow, ...]] = {
            v: tuple(sorted((a for a in built if a.source == v), key=lambda a: a.name)) for v in self.vertices
        }
        self._incoming: Dict[str, Tuple[Arrow, ...]] = {
            v: tuple(sorted((a for a in built if a.target == v), key=lambda a: a.name)) for v in self.vertices
        }

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise QuiverError(f"unknown arrow {name!r}") from None

    def outgoing(self, vertex: str) -> Tuple[Arrow, ...]:
        return self._outgoing[vertex]

    def incoming(self, vertex: str) -> Tuple[Arrow, ...]:
        return self._incoming[vertex]

    def vertex_index(self, vertex: str) -> int:
        try:
            return self.vertices.index(vertex)
        except ValueError:
            raise QuiverError(f"unknown vertex {vertex!r}") from None

    def trivial_path(self, vertex: str) -> Path:
        if vertex not in self._outgoing:
            raise QuiverError(f"unknown vertex {vertex!r}")
        return Path((), vertex)

    def path(self, names: Sequence[str]) -> Path:
        """Build a path from arrow names listed in traversal order."""
        return Path(tuple(self.arrow(n) for n in names))

    def path_from_string(self, s: str) -> Path:
        """Parse composition-order notation: 'b*a' applies a first."""
        s = s.strip()
        m = re.fullmatch(r"e_(\w+)", s)
        if m:
            return self.trivial_path(m.group(1))
        names = [part.strip() for part in s.split("*")]
        return self.path(list(reversed(names)))


def enumerate_paths(quiver: Quiver, start: str, max_length: int) -> List[Path]:
    """All paths of KQ from ``start`` up to the length bound, length-lex order."""
    out = [quiver.trivial_path(start)]
    frontier = [out[0]]
    for _ in range(max_length):
        nxt = []
        for p in frontier:
            for a in quiver.outgoing(p.end):
                nxt.append(Path(p.arrows + (a,)))
        nxt.sort(key=Path.key)
        out.extend(nxt)
        frontier = nxt
    return out


class AlgebraElement:
    """A finite QQ-combination of paths of KQ."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Path, Fraction]):
        self.terms = {p: Fraction(c) for p, c in terms.items() if c}

    @classmethod
    def from_path(cls, path: Path, coeff=1) -> "AlgebraElement":
        return cls({path: Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        lengths = {p.length for p in self.terms}
        return len(lengths) <= 1

    def is_uniform(self) -> bool:
        """Same length, same start, same end for all terms."""
        sig = {(p.length, p.start, p.end) for p in self.terms}
        return len(sig) <= 1

    @property
    def degree(self) -> int:
        if not self.terms:
            raise RelationError("the zero element has no degree")
        (length,) = {p.length for p in self.terms}
        return length

    @property
    def start(self) -> str:
        (s,) = {p.start for p in self.terms}
        return s

    @property
    def end(self) -> str:
        (e,) = {p.end for p in self.terms}
        return e

    def components(self) -> List["AlgebraElement"]:
        """Split into pieces with uniform (start, end) endpoints."""
        buckets: Dict[Tuple[str, str], Dict[Path, Fraction]] = {}
        for p, c in self.terms.items():
            buckets.setdefault((p.start, p.end), {})[p] = c
        return [AlgebraElement(b) for _, b in sorted(buckets.items())]

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.terms)
        for p, c in other.terms.items():
            s = out.get(p, Fraction(0)) + c
            if s:
                out[p] = s
            else:
                out.pop(p, None)
        return AlgebraElement(out)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement({p: -c for p, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement({p: v * c for p, v in self.terms.items()})

    def left_multiply(self, arrow: Arrow) -> "AlgebraElement":
        out: Dict[Path, Fraction] = {}
        for p, c in self.terms.items():
            q = compose(Path((arrow,)), p)
            if q is not None:
                out[q] = out.get(q, Fraction(0)) + c
        return AlgebraElement(out)

    def right_multiply(self, arrow: Arrow) -> "AlgebraElement":
        out: Dict[Path, Fraction] = {}
        for p, c in self.terms.items():
            q = compose(p, Path((arrow,)))
            if q is not None:
                out[q] = out.get(q, Fraction(0)) + c
        return AlgebraElement(out)

    def compose_right(self, q: Path) -> "AlgebraElement":
        """The product (self)*(q): q is traversed first."""
        out: Dict[Path, Fraction] = {}
        for p, c in self.terms.items():
            pq = compose(p, q)
            if pq is not None:
                out[pq] = out.get(pq, Fraction(0)) + c
        return AlgebraElement(out)

    def sort_key(self):
        return tuple(sorted((p.key(), c) for p, c in self.terms.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraElement) and other.terms == self.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: List[str] = []
        for p, c in sorted(self.terms.items(), key=lambda t: t[0].key()):
            body = str(p) if abs(c) == 1 else f"{abs(c)}*{p}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    __repr__ = __str__


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_element(quiver: Quiver, s: str) -> AlgebraElement:
    """Parse a relation string like ``"b1*a0 - b0*a1"`` or ``"2*c*b*a + d"``."""
    if not s.strip():
        raise RelationError("empty relation string")
    terms: Dict[Path, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or not m.group(2).strip():
            raise RelationError(f"cannot parse relation {s!r} at position {pos}")
        sign, body = m.group(1), m.group(2).strip()
        if sign is None and not first:
            raise RelationError(f"missing sign in {s!r}")
        coeff = Fraction(-1 if sign == "-" else 1)
        factors = [f.strip() for f in body.split("*")]
        names: List[str] = []
        for f in factors:
            if re.fullmatch(r"\d+(/\d+)?", f):
                coeff *= Fraction(f)
            else:
                names.append(f)
        if not names:
            raise RelationError(f"term {body!r} has no path factor")
        if len(names) == 1 and names[0].startswith("e_"):
            path = quiver.path_from_string(names[0])
        else:
            path = quiver.path(list(reversed(names)))
        terms[path] = terms.get(path, Fraction(0)) + coeff
        pos = m.end()
        first = False
    return AlgebraElement(terms)


class QuiverAlgebra:
    """KQ modulo an admissible length-homogeneous ideal."""

    def __init__(self, quiver: Quiver, relations: Sequence[AlgebraElement], loewy_bound: Optional[int] = None,
                 max_degree: int = 64):
        self.quiver = quiver
        rels: List[AlgebraElement] = []
        for rel in relations:
            if rel.is_zero():
                continue
            if not rel.is_homogeneous():
                raise RelationError(f"relation {rel} is not length-homogeneous")
            if rel.degree < 2:
                raise RelationError(f"relation {rel} has length < 2; the ideal would not be admissible")
            rels.append(rel)
        self.relations = tuple(rels)
        self.relation_components = tuple(c for rel in rels for c in rel.components())
        if loewy_bound is not None and loewy_bound < 0:
            raise RelationError("the length truncation must be nonnegative")
        self.loewy_bound = loewy_bound
        self._paths: Dict[int, List[Path]] = {0: sorted((quiver.trivial_path(v) for v in quiver.vertices),
                                                        key=Path.key)}
        self._pos: Dict[int, Dict[Path, int]] = {0: {p: i for i, p in enumerate(self._paths[0])}}
        self._ideal: Dict[int, Echelon] = {0: Echelon()}
        self._basis: Dict[int, List[Path]] = {0: list(self._paths[0])}
        self.loewy_length = self._expand(max_degree)

    # -- construction ---------------------------------------------------

    def _paths_of(self, degree: int) -> List[Path]:
        while degree not in self._paths:
            d = 1 + max(self._paths)
            prev = self._paths[d - 1]
            nxt = []
            for p in prev:
                for a in self.quiver.outgoing(p.end):
                    nxt.append(Path(p.arrows + (a,)))
            nxt.sort(key=Path.key)
            if len(nxt) > 200000:
                raise RelationError(f"path count explodes at length {d}; supply a length truncation")
            self._paths[d] = nxt
            self._pos[d] = {p: i for i, p in enumerate(nxt)}
        return self._paths[degree]

    def _vector(self, elem: AlgebraElement, degree: int) -> Dict[int, Fraction]:
        pos = self._pos[degree]
        return {pos[p]: c for p, c in elem.terms.items()}

    def _expand(self, max_degree: int) -> int:
        by_degree: Dict[int, List[AlgebraElement]] = {}
        for comp in self.relation_components:
            by_degree.setdefault(comp.degree, []).append(comp)
        cap = self.loewy_bound if self.loewy_bound is not None else max_degree
        level = 0
        while True:
            d = level + 1
            if self.loewy_bound is not None and d > self.loewy_bound:
                break
            paths = self._paths_of(d)
            ech = Echelon()
            if paths:
                for g in by_degree.get(d, ()):
                    ech.add(self._vector(g, d))
                prev_paths = self._paths[d - 1]
                for row in self._ideal[d - 1].basis_rows():
                    elem = AlgebraElement({prev_paths[i]: c for i, c in row.items()})
                    for a in self.quiver.arrows:
                        left = elem.left_multiply(a)
                        if not left.is_zero():
                            ech.add(self._vector(left, d))
                        right = elem.right_multiply(a)
                        if not right.is_zero():
                            ech.add(self._vector(right, d))
            self._ideal[d] = ech
            pivots = set(ech.pivots)
            basis = [p for i, p in enumerate(paths) if i not in pivots]
            self._basis[d] = basis
            if not basis:
                return level
            level = d
            if self.loewy_bound is None and d >= cap:
                raise RelationError(
                    f"nonzero paths persist past length {cap}; the ideal is not admissible "
                    "(supply a length truncation)")
        # truncated at the requested bound: everything longer is declared zero
        self._paths_of(level + 1)
        return level

    # -- queries ---------------------------------------------------------

    @property
    def L(self) -> int:
        return self.loewy_length

    def paths_of_length(self, degree: int) -> List[Path]:
        return list(self._paths_of(degree))

    def basis(self, degree: Optional[int] = None, start: Optional[str] = None,
              end: Optional[str] = None) -> List[Path]:
        """Paths whose residues form a basis of the graded piece(s)."""
        degrees = [degree] if degree is not None else list(range(self.loewy_length + 1))
        out: List[Path] = []
        for d in degrees:
            if d > self.loewy_length:
                continue
            for p in self._basis.get(d, []):
                if start is not None and p.start != start:
                    continue
                if end is not None and p.end != end:
                    continue
                out.append(p)
        return out

    def dimension(self) -> int:
        return sum(len(self._basis[d]) for d in range(self.loewy_length + 1))

    def in_ideal(self, path: Path) -> bool:
        if path.length > self.loewy_length:
            return True
        ech = self._ideal.get(path.length)
        if ech is None or path.length == 0:
            return False
        return ech.contains({self._pos[path.length][path]: Fraction(1)})

    def survives(self, path: Path) -> bool:
        return not self.in_ideal(path)

    def reduce_path(self, path: Path) -> Dict[Path, Fraction]:
        """Expand the residue of a path over the chosen basis paths."""
        d = path.length
        if d > self.loewy_length:
            return {}
        if d == 0:
            return {path: Fraction(1)}
        res = self._ideal[d].reduce({self._pos[d][path]: Fraction(1)})
        paths = self._paths[d]
        return {paths[i]: c for i, c in res.items()}

    def reduce_element(self, elem: AlgebraElement) -> Dict[Path, Fraction]:
        out: Dict[Path, Fraction] = {}
        for p, c in elem.terms.items():
            for bp, bc in self.reduce_path(p).items():
                s = out.get(bp, Fraction(0)) + c * bc
                if s:
                    out[bp] = s
                else:
                    out.pop(bp, None)
        return out

    def graded_dimensions(self) -> List[int]:
        return [len(self._basis[d]) for d in range(self.loewy_length + 1)]


class TopSpec:
    """The chosen semisimple top: slot r carries the vertex e(r) and a degree shift."""

    def __init__(self, quiver: Quiver, multiplicities: Mapping[str, int],
                 degree_vector: Optional[Sequence[int]] = None):
        self.quiver = quiver
        mult: Dict[str, int] = {}
        for v in quiver.vertices:
            m = int(multiplicities.get(v, 0))
            if m < 0:
                raise QuiverError(f"negative multiplicity for vertex {v}")
            if m:
                mult[v] = m
        unknown = set(multiplicities) - set(quiver.vertices)
        if unknown:
            raise QuiverError(f"top names unknown vertices {sorted(unknown)}")
        if not mult:
            raise QuiverError("the top must contain at least one simple")
        self.multiplicities = mult
        slots: List[Tuple[int, str]] = []
        label = 1
        for v in quiver.vertices:
            for _ in range(mult.get(v, 0)):
                slots.append((label, v))
                label += 1
        self.slots = tuple(slots)
        if degree_vector is None:
            degree_vector = [0] * len(slots)
        degree_vector = [int(h) for h in degree_vector]
        if len(degree_vector) != len(slots):
            raise QuiverError(f"degree vector must list one shift per slot ({len(slots)} slots)")
        if any(h < 0 for h in degree_vector):
            raise QuiverError("degree shifts must be nonnegative")
        self.degree_vector = tuple(degree_vector)
        self._vertex_of = {label: v for label, v in slots}
        self._shift_of = {label: h for (label, _), h in zip(slots, self.degree_vector)}

    @property
    def slot_count(self) -> int:
        return len(self.slots)

    def vertex(self, slot: int) -> str:
        try:
            return self._vertex_of[slot]
        except KeyError:
            raise QuiverError(f"no slot {slot}") from None

    def shift(self, slot: int) -> int:
        return self._shift_of[slot]

    def slots_at(self, vertex: str) -> List[int]:
        return [label for label, v in self.slots if v == vertex]

    def __eq__(self, other) -> bool:
        return (isinstance(other, TopSpec) and other.slots == self.slots
                and other.degree_vector == self.degree_vector)

    def __hash__(self) -> int:
        return hash((self.slots, self.degree_vector))

    def __repr__(self) -> str:
        body = ", ".join(f"{label}:{v}(+{self._shift_of[label]})" for label, v in self.slots)
        return f"TopSpec({body})"


def projective_cover_dimension(algebra: QuiverAlgebra, top: TopSpec) -> int:
    return sum(len(algebra.basis(start=top.vertex(r))) for r, _ in top.slots)


def left_ideal_generators(algebra: QuiverAlgebra, top: TopSpec) -> List[AlgebraElement]:
    """A finite generating set of the relation ideal restricted to the cover.

    Takes every endpoint-uniform relation component g, composed with every
    path q running from a top vertex into start(g) subject to
    length(g) + length(q) <= L, plus all paths of length L+1 leaving a top
    vertex.  Left multiples of these span every graded piece of the ideal
    columns picked out by the top idempotents.
    """
    L = algebra.loewy_length
    top_vertices = sorted({v for _, v in top.slots})
    out: List[AlgebraElement] = []
    seen = set()
    for g in algebra.relation_components:
        room = L - g.degree
        if room < 0:
            continue
        for v in top_vertices:
            for q in enumerate_paths(algebra.quiver, v, room):
                if q.end != g.start:
                    continue
                gq = g.compose_right(q)
                if gq.is_zero():
                    continue
                key = gq.sort_key()
                if key not in seen:
                    seen.add(key)
                    out.append(gq)
    for v in top_vertices:
        for p in algebra.paths_of_length(L + 1):
            if p.start != v:
                continue
            elem = AlgebraElement.from_path(p)
            key = elem.sort_key()
            if key not in seen:
                seen.add(key)
                out.append(elem)
    out.sort(key=lambda e: (e.degree, e.sort_key()))
    return out
