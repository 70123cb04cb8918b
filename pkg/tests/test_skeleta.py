"""Skeleton enumeration, layerings, critical pairs, coordinate indexing."""

import itertools

import pytest

from quiver_moduli.problem import bundled_problem, distinguished_skeleton
from quiver_moduli.quiver import Quiver, QuiverAlgebra, TopSpec, enumerate_paths
from quiver_moduli.skeleta import (CriticalPair, SemisimpleSequence, Skeleton,
                                   SkeletonError, count_skeleta, critical_pairs,
                                   enumerate_skeleta, layering_of, validate_skeleton,
                                   variable_index)


def four_arrow_setup(shifts=None):
    q = Quiver(["1", "2"], [(f"a{i}", "1", "2") for i in range(1, 5)])
    algebra = QuiverAlgebra(q, [], loewy_bound=1)
    mult = {"1": 2} if shifts else {"1": 1}
    top = TopSpec(q, mult, shifts)
    return q, algebra, top


def commuting_square_setup():
    spec = bundled_problem("example_5_4_n1_d2")
    return spec, spec.algebra(), spec.top()


def brute_force_single_slot(algebra, top, dimension, layering=None):
    """Reference enumeration: filter all right-closed surviving path subsets."""
    vertex = top.vertex(1)
    pool = [p for p in enumerate_paths(top.quiver, vertex, algebra.loewy_length)
            if not algebra.in_ideal(p)]
    trivial = top.quiver.trivial_path(vertex)
    found = []
    rest = [p for p in pool if p.length]
    for extra in itertools.combinations(rest, dimension - 1):
        paths = (trivial,) + extra
        members = set(paths)
        if any(p.length and p.right_subpath(p.length - 1) not in members for p in paths):
            continue
        skel = Skeleton(top, {1: paths})
        if layering is not None and layering_of(skel) != layering:
            continue
        found.append(frozenset(str(p) for p in paths))
    return found


def test_semisimple_sequence_trims_and_compares():
    q = Quiver(["1", "2"], [("a", "1", "2")])
    s = SemisimpleSequence(q, [[1, 0], [0, 1], [0, 0]])
    assert s.as_lists() == [[1, 0], [0, 1]]
    assert s == SemisimpleSequence(q, [[1, 0], [0, 1]])
    assert s.total() == 2
    assert s.multiplicity(0, "1") == 1 and s.multiplicity(1, "2") == 1
    assert s.multiplicity(5, "1") == 0


def test_skeleton_basics_and_string():
    q, algebra, top = four_arrow_setup()
    e = q.trivial_path("1")
    a1 = q.path_from_string("a1")
    skel = Skeleton(top, {1: [a1, e]})
    assert skel.size() == 2
    assert skel.contains(1, a1) and not skel.contains(1, q.path_from_string("a2"))
    assert str(skel) == "{(1) e_1, a1}"
    tags = skel.tagged()
    assert [str(t.path) for t in tags] == ["e_1", "a1"]
    assert skel.effective_degree(tags[1]) == 1


def test_validate_skeleton_rejections():
    spec, algebra, top = commuting_square_setup()
    q = spec.quiver
    e = q.trivial_path("0")
    a0 = q.path_from_string("a0_0")
    square = q.path_from_string("a0_1*a0_0")
    validate_skeleton(algebra, top, {1: [e, a0, square]}, dimension=3)
    with pytest.raises(SkeletonError, match="missing its trivial path"):
        validate_skeleton(algebra, top, {1: [a0]})
    with pytest.raises(SkeletonError, match="lacks the right subpath"):
        validate_skeleton(algebra, top, {1: [e, square]})
    with pytest.raises(SkeletonError, match="does not start"):
        validate_skeleton(algebra, top, {1: [e, q.path_from_string("a0_1")]})
    with pytest.raises(SkeletonError, match="expected 4"):
        validate_skeleton(algebra, top, {1: [e, a0]}, dimension=4)

    loops = bundled_problem("example_nilpotent_loops")
    lalg, ltop = loops.algebra(), loops.top()
    lq = loops.quiver
    dead = lq.path_from_string("x*y")
    with pytest.raises(SkeletonError, match="zero in the algebra"):
        validate_skeleton(lalg, ltop, {1: [lq.trivial_path("1"), lq.path_from_string("y"), dead]})
    tall = lq.path_from_string("x*x*x")
    with pytest.raises(SkeletonError, match="exceeds"):
        validate_skeleton(lalg, ltop, {1: [lq.trivial_path("1"), lq.path_from_string("x"),
                                           lq.path_from_string("x*x"), tall]})


def test_chain_layering_is_one_per_degree():
    spec, algebra, top = commuting_square_setup()
    skel = distinguished_skeleton(spec, algebra)
    assert layering_of(skel).as_lists() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_shifted_slots_move_effective_degrees():
    q, algebra, top = four_arrow_setup(shifts=[0, 1])
    e = q.trivial_path("1")
    skel = Skeleton(top, {1: [e, q.path_from_string("a1")], 2: [e]})
    assert str(skel) == "{(1) e_1, a1; (2) e_1}"
    assert layering_of(skel).as_lists() == [[1, 0], [1, 1]]


def test_enumeration_matches_brute_force_four_arrows():
    q, algebra, top = four_arrow_setup()
    spec = bundled_problem("example_5_1")
    layering = spec.layering()
    skeleta = enumerate_skeleta(algebra, top, 3, layering)
    assert len(skeleta) == 6
    assert count_skeleta(algebra, top, 3, layering) == 6
    got = {frozenset(str(p) for p in s.paths_by_slot[1]) for s in skeleta}
    expected = set(brute_force_single_slot(algebra, top, 3, layering))
    assert got == expected
    for s in skeleta:
        validate_skeleton(algebra, top, s.paths_by_slot, dimension=3)


def test_enumeration_matches_brute_force_commuting_square():
    spec, algebra, top = commuting_square_setup()
    skeleta = enumerate_skeleta(algebra, top, spec.dimension, spec.layering())
    assert len(skeleta) == 4
    got = {frozenset(str(p) for p in s.paths_by_slot[1]) for s in skeleta}
    expected = set(brute_force_single_slot(algebra, top, spec.dimension, spec.layering()))
    assert got == expected


def test_enumeration_matches_brute_force_conic():
    spec = bundled_problem("example_5_5_conic")
    algebra, top = spec.algebra(), spec.top()
    skeleta = enumerate_skeleta(algebra, top, spec.dimension, spec.layering())
    assert len(skeleta) == 9
    got = {frozenset(str(p) for p in s.paths_by_slot[1]) for s in skeleta}
    expected = set(brute_force_single_slot(algebra, top, spec.dimension, spec.layering()))
    assert got == expected


def test_bundled_skeleton_counts():
    for name, expected in [("example_5_1", 6), ("example_5_4_n1_d2", 4),
                           ("example_5_4_n2_d3", 27), ("example_5_5_conic", 9),
                           ("example_nilpotent_loops", 1)]:
        spec = bundled_problem(name)
        algebra, top = spec.algebra(), spec.top()
        assert count_skeleta(algebra, top, spec.dimension, spec.layering()) == expected


def test_layering_filter_and_infeasible_dimension():
    q, algebra, top = four_arrow_setup()
    assert count_skeleta(algebra, top, 3) == 6
    wrong = SemisimpleSequence(q, [[1, 0], [1, 1]])
    assert count_skeleta(algebra, top, 3, wrong) == 0
    assert enumerate_skeleta(algebra, top, 9) == []


def test_multi_slot_enumeration_orders_slots():
    q, algebra, top = four_arrow_setup(shifts=[0, 1])
    skeleta = enumerate_skeleta(algebra, top, 3)
    assert len(skeleta) == 8
    assert str(skeleta[0]) == "{(1) e_1, a1; (2) e_1}"
    # every arrow appears once in either slot
    shapes = {str(s) for s in skeleta}
    assert "{(1) e_1; (2) e_1, a3}" in shapes


def test_critical_pairs_on_chain():
    spec, algebra, top = commuting_square_setup()
    skel = distinguished_skeleton(spec, algebra)
    pairs = critical_pairs(algebra, skel)
    assert [(p.arrow.name, str(p.base)) for p in pairs] == [
        ("a1_0", "e_0"), ("a1_1", "a0_0")]
    first, second = pairs
    assert [str(t.path) for t in first.targets] == ["a0_0"]
    assert first.graded_targets == first.targets
    assert [str(t.path) for t in second.targets] == ["a0_1*a0_0"]
    assert str(first.extended) == "a1_0"
    assert str(second.extended) == "a1_1*a0_0"


def test_critical_pairs_graded_filter_with_shifts():
    q, algebra, top = four_arrow_setup(shifts=[0, 1])
    e = q.trivial_path("1")
    skel = Skeleton(top, {1: [e, q.path_from_string("a1")], 2: [e]})
    pairs = critical_pairs(algebra, skel)
    assert [(p.slot, p.arrow.name) for p in pairs] == [
        (1, "a2"), (1, "a3"), (1, "a4"), (2, "a1"), (2, "a2"), (2, "a3"), (2, "a4")]
    for p in pairs:
        assert [str(t.path) for t in p.targets] == ["a1"]
        if p.slot == 1:
            assert p.graded_targets == p.targets
        else:
            # a degree-0 path in a shifted slot extends into degree 2,
            # but the only candidate sits in degree 1
            assert p.graded_targets == ()
    graded = variable_index(pairs, graded=True)
    ungraded = variable_index(pairs, graded=False)
    assert graded.size == 3 and ungraded.size == 7


def test_variable_index_names_and_lookup():
    spec = bundled_problem("example_5_5_conic")
    algebra, top = spec.algebra(), spec.top()
    skel = distinguished_skeleton(spec, algebra)
    index = variable_index(critical_pairs(algebra, skel))
    assert [v.name for v in index.variables] == ["X1", "X2", "X3", "X4"]
    rows = index.describe()
    assert rows[0] == {"name": "X1", "arrow": "a1_0", "basePath": "e_0",
                       "slot": 1, "target": "a0_0", "targetSlot": 1}
    assert rows[3]["arrow"] == "a2_1" and rows[3]["target"] == "a0_1*a0_0"
    base = spec.quiver.trivial_path("0")
    subs = index.substitutions(1, "a1_0", base)
    assert [v.name for v in subs] == ["X1"]
    assert index.substitutions(1, "a0_0", base) is None
    var = index.variable_for(1, "a1_0", base, subs[0].target)
    assert var.name == "X1"
    with pytest.raises(SkeletonError):
        index.variable_for(1, "a0_0", base, subs[0].target)


def test_ring_variable_order_follows_index():
    spec, algebra, top = commuting_square_setup()
    skel = distinguished_skeleton(spec, algebra)
    index = variable_index(critical_pairs(algebra, skel))
    assert index.ring.names == ("X1", "X2")
    assert index.size == 2
