"""Normal forms on the projective cover and the resulting chart ideals.

Every element of the cover is congruent, modulo the span of the defining
congruences, to a combination of skeleton paths with coefficients in the
polynomial ring of chart coordinates.  The reduction loop factors each
pending path at its longest right subpath lying in the skeleton, replaces the
blocking arrow extension through the matching critical pair, and pushes the
rewritten terms back on the work list.  Terms whose extension exceeds the top
nonzero degree vanish, as do substitutions with no admissible target.

Applying the reduction to every generator of the restricted relation ideal
and collecting coefficients yields the defining polynomials of the chart.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .polynomials import MultiPoly, PolyRing
from .quiver import AlgebraElement, Path, QuiverAlgebra, TopSpec, compose, left_ideal_generators
from .skeleta import (CriticalPair, Skeleton, TaggedPath, VariableIndex, critical_pairs,
                      variable_index)


class ChartError(ValueError):
    pass


class ReductionError(RuntimeError):
    """Raised when the substitution loop exceeds its step budget."""

    def __init__(self, message: str, pending: Optional[Tuple] = None):
        super().__init__(message)
        self.pending = pending


NormalForm = Dict[TaggedPath, MultiPoly]


def normal_form(algebra: QuiverAlgebra, skeleton: Skeleton, index: VariableIndex,
                terms: Iterable[Tuple[object, Path, int]],
                rng: Optional[random.Random] = None,
                max_steps: int = 10000) -> NormalForm:
    """Reduce a slot-tagged combination to skeleton paths with polynomial coefficients.

    ``terms`` lists (coefficient, path, slot); coefficients may be rationals
    or ring elements.  ``rng`` only shuffles the processing order of the work
    list, which must not change the result.  ``max_steps`` bounds the number
    of substitutions (relevant for ungraded indices).
    """
    ring = index.ring
    top = skeleton.top
    L = algebra.loewy_length
    work: List[Tuple[MultiPoly, Path, int]] = []
    for coeff, path, slot in terms:
        poly = coeff if isinstance(coeff, MultiPoly) else ring.const(coeff)
        if poly.ring != ring:
            raise ChartError("coefficient from a foreign ring")
        vertex = top.vertex(slot)
        if path.start != vertex:
            raise ChartError(f"path {path} does not start at the slot-{slot} vertex {vertex}")
        if not poly.is_zero():
            work.append((poly, path, slot))
    out: NormalForm = {}
    steps = 0
    while work:
        if rng is None:
            poly, path, slot = work.pop()
        else:
            poly, path, slot = work.pop(rng.randrange(len(work)))
        if path.length > L:
            continue
        if skeleton.contains(slot, path):
            tp = TaggedPath(path, slot)
            acc = out.get(tp)
            out[tp] = poly if acc is None else acc + poly
            continue
        k = path.length - 1
        while k > 0 and not skeleton.contains(slot, path.right_subpath(k)):
            k -= 1
        base = path.right_subpath(k)
        if not skeleton.contains(slot, base):
            raise ChartError(f"slot {slot} lacks its trivial path; invalid skeleton")
        arrow = path.arrows[k]
        entry = index.substitutions(slot, arrow.name, base)
        if entry is None:
            raise ChartError(f"missing critical pair ({arrow.name}, {base}^({slot}))")
        rest = path.remainder_after(k + 1)
        for var in entry:
            steps += 1
            if steps > max_steps:
                raise ReductionError(
                    f"reduction exceeded {max_steps} substitutions; offending term {path}^({slot})",
                    pending=(str(path), slot))
            tail = compose(rest, var.target.path)
            if tail is None:
                raise ChartError("target path does not continue the factorization")
            work.append((poly * ring.var(var.position), tail, var.target.slot))
    return {tp: p for tp, p in out.items() if not p.is_zero()}


@dataclass
class ChartIdeal:
    """Defining data of one distinguished affine chart."""

    skeleton: Skeleton
    index: VariableIndex
    generators: List[MultiPoly]
    graded: bool
    sources: List[Tuple[AlgebraElement, int, TaggedPath, MultiPoly]] = field(default_factory=list)

    @property
    def ring(self) -> PolyRing:
        return self.index.ring

    @property
    def n_variables(self) -> int:
        return self.index.size

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    def linear_generators(self) -> List[MultiPoly]:
        return [g for g in self.generators if g.total_degree() <= 1]


def _collect_generators(algebra: QuiverAlgebra, top: TopSpec, skeleton: Skeleton,
                        index: VariableIndex, max_steps: int) -> Tuple[List[MultiPoly], List]:
    ring = index.ring
    gens: Dict[Tuple, MultiPoly] = {}
    sources = []
    for rho in left_ideal_generators(algebra, top):
        for slot in top.slots_at(rho.start):
            nf = normal_form(algebra, skeleton, index,
                             [(Fraction(c), p, slot) for p, c in rho.terms.items()],
                             max_steps=max_steps)
            for tp, poly in sorted(nf.items(), key=lambda kv: kv[0].key()):
                sources.append((rho, slot, tp, poly))
                mon = poly.monic()
                gens.setdefault(mon.sort_key(), mon)
    ordered = [gens[k] for k in sorted(gens)]
    return ordered, sources


def chart_ideal(algebra: QuiverAlgebra, top: TopSpec, skeleton: Skeleton,
                graded: bool = True, max_steps: int = 10000) -> ChartIdeal:
    """Polynomials cutting the chart of the skeleton out of its coordinate space."""
    pairs = critical_pairs(algebra, skeleton)
    index = variable_index(pairs, graded=graded)
    generators, sources = _collect_generators(algebra, top, skeleton, index, max_steps)
    return ChartIdeal(skeleton, index, generators, graded, sources)


def ungraded_chart_ideal(algebra: QuiverAlgebra, top: TopSpec, skeleton: Skeleton,
                         max_steps: int = 10000) -> ChartIdeal:
    return chart_ideal(algebra, top, skeleton, graded=False, max_steps=max_steps)


def specialize_to_graded(ungraded: ChartIdeal, graded_index: Optional[VariableIndex] = None) -> List[MultiPoly]:
    """Set every degree-mismatched coordinate to zero and rename the rest.

    Returns the specialized generator list in the graded ring, deduplicated
    and sorted the same way chart_ideal sorts its output.
    """
    if ungraded.graded:
        raise ChartError("expected an ungraded chart")
    if graded_index is None:
        graded_index = variable_index(ungraded.index.pairs, graded=True)
    ring = graded_index.ring
    images: List[Optional[MultiPoly]] = []
    for var in ungraded.index.variables:
        entry = graded_index.substitutions(var.slot, var.arrow.name, var.base) or []
        image = None
        for gv in entry:
            if gv.target == var.target:
                image = ring.var(gv.position)
                break
        images.append(image)
    seen: Dict[Tuple, MultiPoly] = {}
    for g in ungraded.generators:
        sub = g.map_variables(ring, images)
        if sub.is_zero():
            continue
        mon = sub.monic()
        seen.setdefault(mon.sort_key(), mon)
    return [seen[k] for k in sorted(seen)]


@dataclass
class ChartReport:
    n_variables: int
    n_generators: int
    linear_rank: int
    free_parameters: int
    linear_generators: List[str]

    def as_dict(self) -> Dict[str, object]:
        return {
            "variables": self.n_variables,
            "generators": self.n_generators,
            "linearRank": self.linear_rank,
            "freeParameters": self.free_parameters,
            "linearGenerators": list(self.linear_generators),
        }


def dimension_report(chart: ChartIdeal) -> ChartReport:
    """Count coordinates, generators, and the linear elimination they allow."""
    from .linalg import Echelon

    linear = chart.linear_generators()
    ech = Echelon()
    n = chart.n_variables
    for g in linear:
        vec = {i: c for i, c in g.linear_coefficients().items()}
        c0 = g.constant_term()
        if c0:
            vec[n] = c0
        ech.add(vec)
    return ChartReport(
        n_variables=n,
        n_generators=chart.n_generators,
        linear_rank=ech.rank,
        free_parameters=n - len([p for p in ech.pivots if p < n]),
        linear_generators=[str(g) for g in linear],
    )
