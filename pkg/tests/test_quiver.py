"""Paths, path algebras with homogeneous relations, tops and covers."""

import random
from fractions import Fraction

import pytest

from quiver_moduli.fields import QQ, PrimeField
from quiver_moduli.linalg import rank_over
from quiver_moduli.problem import bundled_problem, realize_variety
from quiver_moduli.quiver import (AlgebraElement, Arrow, Path, Quiver, QuiverAlgebra,
                                  QuiverError, RelationError, TopSpec, compose,
                                  enumerate_paths, left_ideal_generators, parse_element,
                                  projective_cover_dimension)


def chain_quiver():
    return Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])


def four_arrow_quiver():
    return Quiver(["1", "2"], [(f"a{i}", "1", "2") for i in range(1, 5)])


def loop_algebra():
    spec = bundled_problem("example_nilpotent_loops")
    return spec, spec.algebra()


def test_path_composition_order():
    q = chain_quiver()
    a, b = q.arrow("a"), q.arrow("b")
    pa, pb = Path([a]), Path([b])
    ba = compose(pb, pa)  # apply a first, then b
    assert ba is not None
    assert str(ba) == "b*a"
    assert (ba.start, ba.end, ba.length) == ("1", "3", 2)
    assert compose(pa, pb) is None
    e1 = q.trivial_path("1")
    assert str(e1) == "e_1"
    assert compose(pa, e1) == pa and compose(q.trivial_path("2"), pa) == pa
    assert ba.right_subpath(1) == pa
    assert ba.remainder_after(1) == pb
    assert ba.right_subpath(0) == e1
    assert ba.remainder_after(2) == q.trivial_path("3")


def test_path_keys_sort_short_first():
    q = chain_quiver()
    e1 = q.trivial_path("1")
    pa = q.path_from_string("a")
    ba = q.path_from_string("b*a")
    assert sorted([ba, pa, e1], key=lambda p: p.key()) == [e1, pa, ba]


def test_path_from_string_errors():
    q = chain_quiver()
    assert q.path_from_string("e_2") == q.trivial_path("2")
    with pytest.raises(QuiverError):
        q.path_from_string("a*b")  # endpoints do not match in this order
    with pytest.raises(QuiverError):
        q.path_from_string("c")
    with pytest.raises(QuiverError):
        q.path_from_string("e_7")


def test_quiver_validation():
    with pytest.raises(QuiverError):
        Quiver(["1", "1"], [])
    with pytest.raises(QuiverError):
        Quiver(["1"], [("a", "1", "2")])
    with pytest.raises(QuiverError):
        Quiver(["1"], [("a", "1", "1"), ("a", "1", "1")])


def test_enumerate_paths():
    q = four_arrow_quiver()
    paths = enumerate_paths(q, "1", 2)
    assert [str(p) for p in paths] == ["e_1", "a1", "a2", "a3", "a4"]
    loops = Quiver(["1"], [("x", "1", "1"), ("y", "1", "1")])
    assert len(enumerate_paths(loops, "1", 2)) == 1 + 2 + 4


def test_parse_element_and_arithmetic():
    spec, _ = loop_algebra()
    q = spec.quiver
    e = parse_element(q, "2*x*y - 1/2*y + e_1")
    x = q.path_from_string("x*y")
    assert e.terms[x] == Fraction(2)
    assert e.terms[q.path_from_string("y")] == Fraction(-1, 2)
    assert e.terms[q.trivial_path("1")] == Fraction(1)
    assert not e.is_homogeneous()
    back = parse_element(q, str(e))
    assert back == e

    conic = bundled_problem("example_5_5_conic")
    r = parse_element(conic.quiver, conic.relation_strings[0])
    assert r.is_homogeneous() and r.is_uniform()
    assert r.degree == 2 and r.start == "0" and r.end == "2"
    assert len(r.components()) == 1
    mixed = parse_element(conic.quiver, "a0_0 + a0_1*a1_0")
    assert [str(c) for c in sorted((str(x) for x in mixed.components()))]
    assert len(mixed.components()) == 2


def test_element_multiplications():
    q = chain_quiver()
    a, b = q.arrow("a"), q.arrow("b")
    u = AlgebraElement.from_path(Path([a]), 3)
    assert str(u.left_multiply(b)) == "3*b*a"
    assert u.left_multiply(a).is_zero()
    v = AlgebraElement.from_path(Path([b]))
    assert str(v.right_multiply(a)) == "b*a"
    assert str(v.compose_right(Path([a]))) == "b*a"
    assert (u - u).is_zero()
    assert str(u.scale(Fraction(1, 3))) == "a"


def test_commuting_square_dimensions():
    spec = bundled_problem("example_5_4_n1_d2")
    algebra = spec.algebra()
    assert algebra.loewy_length == 2
    assert algebra.graded_dimensions() == [3, 4, 3]
    assert algebra.dimension() == 10


def test_degree_two_basis_matches_rank_oracle():
    """Complement dimension equals path count minus the relation span rank."""
    numpy = pytest.importorskip("numpy")
    for name, expected in [("example_5_4_n1_d2", 3), ("example_5_4_n2_d3", 12)]:
        spec = bundled_problem(name)
        algebra = spec.algebra()
        paths = algebra.paths_of_length(2)
        position = {p: i for i, p in enumerate(paths)}
        relations = [parse_element(spec.quiver, s) for s in spec.relation_strings]
        rows = []
        for rel in relations:
            if rel.degree != 2:
                continue
            row = [0] * len(paths)
            for p, c in rel.terms.items():
                row[position[p]] = float(c)
            rows.append(row)
        rank = int(numpy.linalg.matrix_rank(numpy.array(rows)))
        assert len(algebra.basis(degree=2)) == len(paths) - rank == expected


def test_degree_three_basis_matches_rank_oracle():
    """In degree three the ideal is spanned by arrow multiples of the relations."""
    numpy = pytest.importorskip("numpy")
    spec = bundled_problem("example_5_4_n2_d3")
    q = spec.quiver
    algebra = spec.algebra()
    paths = algebra.paths_of_length(3)
    position = {p: i for i, p in enumerate(paths)}
    relations = [parse_element(q, s) for s in spec.relation_strings]
    rows = []
    for rel in relations:
        for arrow in q.arrows:
            for prod in (rel.left_multiply(arrow), rel.right_multiply(arrow)):
                if prod.is_zero():
                    continue
                row = [0] * len(paths)
                for p, c in prod.terms.items():
                    row[position[p]] = float(c)
                rows.append(row)
    rank = int(numpy.linalg.matrix_rank(numpy.array(rows)))
    assert len(paths) == 27
    assert len(algebra.basis(degree=3)) == len(paths) - rank == 10


def test_basis_dimensions_stable_over_prime_field():
    """Relation span ranks agree over the rationals and a large prime field."""
    spec = bundled_problem("example_5_5_conic")
    algebra = spec.algebra()
    paths = algebra.paths_of_length(2)
    position = {p: i for i, p in enumerate(paths)}
    relations = [parse_element(spec.quiver, s) for s in spec.relation_strings]
    rows = []
    for rel in relations:
        rows.append({position[p]: c for p, c in rel.terms.items()})
    F = PrimeField(32003)
    frows = [{c: F.of(v) for c, v in r.items()} for r in rows]
    assert rank_over(QQ, rows, len(paths)) == rank_over(F, frows, len(paths))
    assert algebra.graded_dimensions() == [3, 6, 5]


def test_conic_path_reduction():
    spec = bundled_problem("example_5_5_conic")
    algebra = spec.algebra()
    q = spec.quiver
    red = algebra.reduce_path(q.path_from_string("a2_1*a0_0"))
    assert {str(p): c for p, c in red.items()} == {"a0_1*a2_0": Fraction(1)}
    red2 = algebra.reduce_path(q.path_from_string("a1_1*a1_0"))
    assert {str(p): c for p, c in red2.items()} == {"a0_1*a2_0": Fraction(1)}
    assert [str(p) for p in algebra.basis(degree=2)] == [
        "a0_1*a0_0", "a0_1*a1_0", "a0_1*a2_0", "a1_1*a2_0", "a2_1*a2_0"]
    assert algebra.survives(q.path_from_string("a2_1*a0_0"))
    assert not algebra.in_ideal(q.path_from_string("a1_1*a2_0"))


def test_nilpotent_loop_truncation():
    spec, algebra = loop_algebra()
    q = spec.quiver
    assert algebra.loewy_length == 2
    assert algebra.graded_dimensions() == [1, 2, 1]
    assert algebra.in_ideal(q.path_from_string("x*y"))
    assert not algebra.survives(q.path_from_string("y*x"))
    assert [str(p) for p in algebra.basis(degree=2)] == ["x*x"]
    # paths past the bound vanish without being enumerated
    assert algebra.in_ideal(q.path_from_string("x*x*x*x"))


def test_unbounded_loop_needs_explicit_bound():
    q = Quiver(["1"], [("x", "1", "1")])
    with pytest.raises(RelationError):
        QuiverAlgebra(q, [], max_degree=8)
    algebra = QuiverAlgebra(q, [], loewy_bound=3)
    assert algebra.loewy_length == 3
    assert algebra.graded_dimensions() == [1, 1, 1, 1]
    assert algebra.in_ideal(q.path_from_string("x*x*x*x"))


def test_relations_must_be_homogeneous_of_degree_two_plus():
    q = Quiver(["1"], [("x", "1", "1"), ("y", "1", "1")])
    bad = parse_element(q, "x + y*x")
    with pytest.raises(RelationError):
        QuiverAlgebra(q, [bad], loewy_bound=3)
    too_low = parse_element(q, "x - y")
    with pytest.raises(RelationError):
        QuiverAlgebra(q, [too_low], loewy_bound=3)


def test_top_spec_slots_and_validation():
    q = four_arrow_quiver()
    top = TopSpec(q, {"1": 2, "2": 1})
    assert top.slot_count == 3
    assert top.slots == ((1, "1"), (2, "1"), (3, "2"))
    assert top.vertex(3) == "2" and top.shift(2) == 0
    assert top.slots_at("1") == [1, 2]
    shifted = TopSpec(q, {"1": 1}, [2])
    assert shifted.shift(1) == 2
    with pytest.raises(QuiverError):
        TopSpec(q, {"7": 1})
    with pytest.raises(QuiverError):
        TopSpec(q, {"1": 0})
    with pytest.raises(QuiverError):
        TopSpec(q, {"1": 1}, [-1])
    with pytest.raises(QuiverError):
        TopSpec(q, {"1": 1}, [0, 0])


def test_projective_cover_dimension():
    spec = bundled_problem("example_5_4_n1_d2")
    algebra, top = spec.algebra(), spec.top()
    # paths out of the top vertex: e_0, two arrows, three surviving squares
    assert projective_cover_dimension(algebra, top) == 6
    q = four_arrow_quiver()
    falg = QuiverAlgebra(q, [], loewy_bound=1)
    assert projective_cover_dimension(falg, TopSpec(q, {"1": 2})) == 10
    assert projective_cover_dimension(falg, TopSpec(q, {"2": 1})) == 1


def test_left_ideal_generators_loops():
    spec, algebra = loop_algebra()
    gens = left_ideal_generators(algebra, spec.top())
    names = sorted(str(g) for g in gens)
    assert names == ["x*x*x", "x*x*y", "x*y", "x*y*x", "x*y*y", "y*x",
                     "y*x*x", "y*x*y", "y*y", "y*y*x", "y*y*y"]
    for g in gens:
        assert g.is_uniform() and g.start == "1" and g.degree >= 2


def test_left_ideal_generators_walk_paths_into_relation_starts():
    # one relation starts where no arrow ends, the other is reached two ways
    spec = realize_variety([], 1, 3)
    algebra, top = spec.algebra(), spec.top()
    gens = left_ideal_generators(algebra, top)
    assert len(gens) == 3
    starts = sorted(str(g) for g in gens)
    assert starts == ["-a1_1*a0_0 + a0_1*a1_0",
                      "-a1_2*a0_1*a0_0 + a0_2*a1_1*a0_0",
                      "-a1_2*a0_1*a1_0 + a0_2*a1_1*a1_0"]


def test_left_ideal_generators_include_truncation_paths():
    q = Quiver(["1"], [("x", "1", "1")])
    algebra = QuiverAlgebra(q, [], loewy_bound=2)
    gens = left_ideal_generators(algebra, TopSpec(q, {"1": 1}))
    assert [str(g) for g in gens] == ["x*x*x"]


def test_random_elements_reduce_consistently():
    """reduce_element agrees with path-by-path reduction, linearly."""
    spec = bundled_problem("example_5_5_conic")
    algebra = spec.algebra()
    rng = random.Random(17)
    paths = [p for d in range(algebra.loewy_length + 1) for p in algebra.paths_of_length(d)]
    for _ in range(50):
        picks = rng.sample(paths, k=3)
        coeffs = [Fraction(rng.randrange(-5, 6)) for _ in picks]
        elem = AlgebraElement({})
        expected = {}
        for p, c in zip(picks, coeffs):
            elem = elem + AlgebraElement.from_path(p, c)
            for b, v in algebra.reduce_path(p).items():
                s = expected.get(b, Fraction(0)) + c * v
                if s:
                    expected[b] = s
                else:
                    expected.pop(b, None)
        assert algebra.reduce_element(elem) == expected
