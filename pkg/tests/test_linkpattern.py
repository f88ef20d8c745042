"""
Tests for link patterns, their statistics and the closed-form lengths
"""
import pytest
from abelorbits.errors import OverlappingSupportError, RootSystemError
from abelorbits.linkpattern import (
    LinkPattern,
    disjoint_sets,
    halving_identity_check,
    length_formula,
    length_formula_A,
    length_formula_C,
    length_formula_D,
    length_formula_S2n,
    negated_points,
    pattern_of,
    render_ascii,
    serialize,
    shape_counts,
    stat_b,
    stat_c,
    stat_r,
)
from abelorbits.roots import RootSystemType, minus_root, parse_root, plus_root, unit
from abelorbits.weyl import involution_from_roots, length, to_symmetric_group


def c6_example():
    return [parse_root(text, 6) for text in ("e2-e1", "e6+e3", "2e4")]


class TestPatternOf:
    """Test drawing disjoint sets as arcs"""

    def test_c6_example(self):
        p = pattern_of(c6_example(), RootSystemType("C", 6))
        assert p.arcs == ((-6, 3), (-4, 4), (-3, 6), (-2, -1), (1, 2))
        assert p.size == 5
        assert p.fixed_points == (-5, 5)
        assert p.is_symmetric()

    def test_type_a(self):
        p = pattern_of([minus_root(3, 1, 4)], RootSystemType("A", 3))
        assert p.vertices == (1, 2, 3, 4)
        assert p.arcs == ((1, 3),)
        assert not p.is_symmetric()

    def test_overlapping_support(self):
        with pytest.raises(OverlappingSupportError, match="share an index"):
            pattern_of([minus_root(2, 1, 2), plus_root(2, 1, 2)], RootSystemType("B", 2))

    def test_short_root_in_type_a(self):
        with pytest.raises(RootSystemError):
            pattern_of([unit(1, 3)], RootSystemType("A", 2))

    def test_link_pattern_validation(self):
        with pytest.raises(ValueError, match="must have a < b"):
            LinkPattern((1, 2), ((2, 1),))
        with pytest.raises(OverlappingSupportError):
            LinkPattern((1, 2, 3), ((1, 2), (2, 3)))


class TestStatistics:
    """Test crossings, arcs to the right and bridges"""

    def test_c6_example(self):
        p = pattern_of(c6_example(), RootSystemType("C", 6))
        assert (p.size, stat_c(p), stat_r(p), stat_b(p)) == (5, 3, 1, 2)

    def test_shape_counts(self):
        counts = shape_counts(c6_example())
        assert (counts.a, counts.d, counts.f) == (1, 1, 1)

    def test_serialize(self):
        p = pattern_of(c6_example(), RootSystemType("C", 6))
        assert serialize(p) == "(-6,3)(-4,4)(-3,6)(-2,-1)(1,2)"


class TestLengthFormulas:
    """Test the closed forms against inversion counts"""

    def test_c6_example(self):
        roots = c6_example()
        brute = length(involution_from_roots(roots, 6, "C"), RootSystemType("C", 6))
        assert length_formula_C(roots) == 21
        assert brute == 21

    @pytest.mark.parametrize("pairs,expected", [
        (((1, 3), (2, 4)), 4),
        (((1, 2), (3, 4)), 2),
        (((1, 4), (2, 3)), 6),
    ])
    def test_type_a(self, pairs, expected):
        roots = [minus_root(j, i, 4) for i, j in pairs]
        assert length_formula_A(roots) == expected
        assert length(involution_from_roots(roots, 4, "A"), RootSystemType("A", 3)) == expected

    @pytest.mark.parametrize("texts,expected", [
        (("e2+e1",), 3),
        (("e2-e1",), 1),
        (("2e2",), 3),
        (("2e1", "2e2"), 4),
    ])
    def test_type_c(self, texts, expected):
        roots = [parse_root(text, 2) for text in texts]
        assert length_formula_C(roots) == expected

    def test_type_d(self):
        assert length_formula_D([unit(1, 2), unit(2, 2)]) == 2
        assert length_formula_D([plus_root(3, 1, 3)]) == 3

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_type_d_last_two_shorts(self, n):
        shorts = [unit(n - 1, n), unit(n, n)]
        assert length_formula_D(shorts) == 4 * n - 6
        t = RootSystemType("D", n)
        assert length(involution_from_roots(shorts, n, "D"), t) == 4 * n - 6

    def test_type_d_odd_shorts(self):
        with pytest.raises(RootSystemError, match="even number"):
            length_formula_D([unit(1, 2)])

    def test_empty_set(self):
        assert length_formula_A([]) == 0
        assert length_formula_C([]) == 0
        assert length_formula_D([]) == 0

    def test_dispatch(self):
        assert length_formula("B", c6_example()) == 21
        with pytest.raises(RootSystemError, match="unknown family"):
            length_formula("E", c6_example())

    @pytest.mark.parametrize("family,rank", [
        ("A", 4), ("B", 3), ("C", 3), ("D", 2), ("D", 3), ("D", 4),
    ])
    def test_exhaustive(self, family, rank):
        t = RootSystemType(family, rank)
        for S in disjoint_sets(t):
            roots = sorted(S)
            assert length_formula(family, roots) == length(involution_from_roots(roots, t.dimension, family), t)


class TestHalvingIdentity:
    """Test the reductions to S_2n"""

    def test_negated_points(self):
        assert negated_points(c6_example()) == 3

    def test_s2n_formula(self):
        roots = c6_example()
        sigma = involution_from_roots(roots, 6, "C")
        assert length_formula_S2n(roots) == length(to_symmetric_group(sigma), RootSystemType("A", 11))

    @pytest.mark.parametrize("family,rank", [("B", 3), ("C", 3), ("D", 3)])
    def test_holds_exhaustively(self, family, rank):
        for S in disjoint_sets(RootSystemType(family, rank)):
            assert halving_identity_check(S, rank)


class TestDisjointSets:
    """Test exhaustive enumeration of disjoint shapes"""

    def test_counts(self):
        assert sum(1 for _ in disjoint_sets(RootSystemType("A", 3))) == 10
        assert sum(1 for _ in disjoint_sets(RootSystemType("C", 2))) == 6
        assert sum(1 for _ in disjoint_sets(RootSystemType("B", 3))) == 20
        assert sum(1 for _ in disjoint_sets(RootSystemType("D", 2))) == 4

    def test_d_even_shorts(self):
        for S in disjoint_sets(RootSystemType("D", 3)):
            assert shape_counts(S).d % 2 == 0


class TestRenderAscii:
    """Test arc diagrams"""

    def test_single_arc(self):
        p = pattern_of([minus_root(2, 1, 2)], RootSystemType("A", 1))
        assert render_ascii(p) == " +-+\n 1 2"

    def test_symmetric_axis_has_no_zero(self):
        p = pattern_of([unit(1, 2, 2)], RootSystemType("C", 2))
        lines = render_ascii(p).splitlines()
        assert lines[-1].split() == ["-2", "-1", "1", "2"]
        assert len(lines) == 2

    def test_longest_arc_on_top(self):
        p = pattern_of([unit(1, 2, 2), unit(2, 2, 2)], RootSystemType("C", 2))
        top, below, _ = render_ascii(p).splitlines()
        assert top.count("+") == 2
        assert below.count("|") == 2
