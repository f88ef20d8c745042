"""
Tests for root system data and abelian nilradicals
"""
import pytest
from abelorbits.errors import RootSystemError
from abelorbits.roots import (
    Root,
    RootSystemType,
    abelian_nilradicals,
    is_disjoint,
    is_positive,
    is_root,
    is_strongly_orthogonal,
    maximal_root,
    minus_root,
    nilradical_from_string,
    nilradical_positive_roots,
    parabolic_positive_roots,
    parse_root,
    plus_root,
    positive_roots,
    simple_root_coefficients,
    simple_roots,
    unit,
    NilradicalId,
)


class TestRootSystemType:
    """Test construction and validation of root system types"""

    def test_dimension(self):
        assert RootSystemType("A", 3).dimension == 4
        assert RootSystemType("C", 3).dimension == 3

    def test_str(self):
        assert str(RootSystemType("D", 4)) == "D4"

    def test_invalid_family(self):
        with pytest.raises(RootSystemError, match="family"):
            RootSystemType("E", 6)

    def test_invalid_rank(self):
        with pytest.raises(RootSystemError, match="rank"):
            RootSystemType("B", 0)
        with pytest.raises(RootSystemError, match="D requires"):
            RootSystemType("D", 1)


class TestRoot:
    """Test root arithmetic, printing and parsing"""

    def test_str(self):
        assert str(minus_root(3, 1, 3)) == "e3-e1"
        assert str(plus_root(3, 1, 3)) == "e3+e1"
        assert str(unit(2, 3)) == "e2"
        assert str(unit(2, 3, 2)) == "2e2"
        assert str(Root((1, 0, -1))) == "-e3+e1"
        assert str(Root((0, 0))) == "0"

    def test_parse_inverts_str(self):
        for text in ("e3-e1", "e3+e1", "e2", "2e1", "-e3+e1"):
            assert str(parse_root(text, 3)) == text

    def test_parse_errors(self):
        with pytest.raises(RootSystemError, match="out of range"):
            parse_root("e9", 3)
        with pytest.raises(RootSystemError, match="cannot parse"):
            parse_root("x1", 3)
        with pytest.raises(RootSystemError, match="empty"):
            parse_root("", 3)

    def test_support_and_arithmetic(self):
        r = plus_root(3, 1, 3)
        assert r.support == (1, 3)
        assert r - minus_root(3, 1, 3) == unit(1, 3, 2)
        assert -(-r) == r

    def test_positivity(self):
        assert is_positive(minus_root(3, 1, 3))
        assert not is_positive(Root((1, 0, -1)))


class TestPositiveRoots:
    """Test positive and simple roots per family"""

    @pytest.mark.parametrize("family,rank,count", [
        ("A", 3, 6), ("B", 2, 4), ("B", 3, 9), ("C", 3, 9), ("D", 3, 6), ("D", 4, 12),
    ])
    def test_counts(self, family, rank, count):
        assert len(positive_roots(RootSystemType(family, rank))) == count

    def test_order_b2(self):
        roots = [str(r) for r in positive_roots(RootSystemType("B", 2))]
        assert roots == ["e1", "e2-e1", "e2+e1", "e2"]

    def test_order_c2(self):
        roots = [str(r) for r in positive_roots(RootSystemType("C", 2))]
        assert roots == ["2e1", "e2-e1", "e2+e1", "2e2"]

    def test_simple_roots(self):
        assert [str(r) for r in simple_roots(RootSystemType("B", 3))] == ["e1", "e2-e1", "e3-e2"]
        assert [str(r) for r in simple_roots(RootSystemType("D", 3))] == ["e2+e1", "e2-e1", "e3-e2"]

    def test_maximal_root(self):
        assert str(maximal_root(RootSystemType("A", 3))) == "e4-e1"
        assert str(maximal_root(RootSystemType("B", 3))) == "e3+e2"
        assert str(maximal_root(RootSystemType("B", 1))) == "e1"
        assert str(maximal_root(RootSystemType("C", 3))) == "2e3"
        assert str(maximal_root(RootSystemType("D", 4))) == "e4+e3"

    def test_simple_root_coefficients(self):
        t = RootSystemType("B", 3)
        assert simple_root_coefficients(plus_root(3, 2, 3), t) == (2, 2, 1)
        assert simple_root_coefficients(-plus_root(3, 2, 3), t) == (-2, -2, -1)

    def test_is_root(self):
        t = RootSystemType("C", 2)
        assert is_root(unit(1, 2, 2), t)
        assert not is_root(unit(1, 2), t)
        assert is_root(unit(1, 2), RootSystemType("B", 2))
        assert not is_root(plus_root(2, 1, 2), RootSystemType("A", 1))


class TestOrthogonality:
    """Test strong orthogonality and disjointness"""

    def test_type_b_pair(self):
        t = RootSystemType("B", 2)
        assert is_strongly_orthogonal(minus_root(2, 1, 2), plus_root(2, 1, 2), t)

    def test_type_c_pair(self):
        # e2-e1 + e2+e1 = 2e2 is a long root of C
        t = RootSystemType("C", 2)
        assert not is_strongly_orthogonal(minus_root(2, 1, 2), plus_root(2, 1, 2), t)

    def test_type_a(self):
        t = RootSystemType("A", 3)
        assert is_strongly_orthogonal(minus_root(2, 1, 4), minus_root(4, 3, 4), t)
        assert not is_strongly_orthogonal(minus_root(2, 1, 4), minus_root(3, 2, 4), t)

    def test_disjoint(self):
        assert is_disjoint(minus_root(2, 1, 4), minus_root(4, 3, 4))
        assert not is_disjoint(minus_root(2, 1, 2), plus_root(2, 1, 2))


class TestNilradicals:
    """Test abelian nilradical identification"""

    def test_counts(self):
        assert len(abelian_nilradicals(RootSystemType("A", 3))) == 3
        assert len(abelian_nilradicals(RootSystemType("A", 4))) == 4
        assert len(abelian_nilradicals(RootSystemType("B", 3))) == 1
        assert len(abelian_nilradicals(RootSystemType("C", 3))) == 1
        assert len(abelian_nilradicals(RootSystemType("D", 4))) == 3

    def test_deleted_roots(self):
        (b,) = abelian_nilradicals(RootSystemType("B", 3))
        (c,) = abelian_nilradicals(RootSystemType("C", 3))
        assert str(b.simple_root) == "e3-e2"
        assert str(c.simple_root) == "2e1"
        d = [str(n.simple_root) for n in abelian_nilradicals(RootSystemType("D", 4))]
        assert d == ["e2+e1", "e2-e1", "e4-e3"]

    def test_b1(self):
        (nid,) = abelian_nilradicals(RootSystemType("B", 1))
        assert nilradical_positive_roots(nid) == {unit(1, 1)}

    def test_d2_rejected(self):
        with pytest.raises(RootSystemError, match="D2"):
            abelian_nilradicals(RootSystemType("D", 2))

    def test_not_abelian(self):
        with pytest.raises(RootSystemError, match="not abelian"):
            NilradicalId(RootSystemType("B", 3), unit(1, 3))

    def test_not_simple(self):
        with pytest.raises(RootSystemError, match="not a simple root"):
            NilradicalId(RootSystemType("B", 3), plus_root(3, 1, 3))

    def test_nilradical_roots(self):
        b3 = abelian_nilradicals(RootSystemType("B", 3))[0]
        assert {str(r) for r in nilradical_positive_roots(b3)} == {"e3-e1", "e3+e1", "e3-e2", "e3+e2", "e3"}
        c2 = abelian_nilradicals(RootSystemType("C", 2))[0]
        assert {str(r) for r in nilradical_positive_roots(c2)} == {"2e1", "e2+e1", "2e2"}
        d4 = nilradical_from_string(RootSystemType("D", 4), "e4-e3")
        assert len(nilradical_positive_roots(d4)) == 6

    def test_parabolic_complement(self):
        b3 = abelian_nilradicals(RootSystemType("B", 3))[0]
        assert {str(r) for r in parabolic_positive_roots(b3)} == {"e1", "e2-e1", "e2+e1", "e2"}

    def test_from_string(self):
        nid = nilradical_from_string(RootSystemType("C", 2), "2e1")
        assert str(nid) == "C2:m_2e1"
        with pytest.raises(RootSystemError, match="does not select"):
            nilradical_from_string(RootSystemType("C", 2), "e2-e1")
