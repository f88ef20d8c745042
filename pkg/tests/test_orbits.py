"""
Tests for orbit labels, the two orders and poset output
"""
import json
import logging
import re

import pydot
import pytest

from abelorbits.errors import NilradicalMismatchError, NotStronglyOrthogonalError, RootSystemError
from abelorbits.orbits import (
    OrbitLabel,
    build_poset,
    bruhat_predicted_leq,
    canonical_label,
    closure_relations,
    disagreement_edges,
    elementary_move_closure,
    enumerate_orbits,
    geometric_leq,
    interval_leq,
    move_generated_order,
    parse_label,
    poset_to_dot,
    poset_to_json,
    predicted_coadjoint_dimension,
    predicted_dimension,
    sl_embedding,
)
from abelorbits.roots import (
    RootSystemType,
    abelian_nilradicals,
    minus_root,
    nilradical_from_string,
    plus_root,
    unit,
)


def only(family, rank):
    (nid,) = abelian_nilradicals(RootSystemType(family, rank))
    return nid


def small_d(rank):
    return abelian_nilradicals(RootSystemType("D", rank))[-1]


class TestLabels:
    """Test label validation and parsing"""

    def test_str_and_parse(self):
        nid = only("C", 2)
        label = parse_label(nid, "2e2,2e1")
        assert str(label) == "2e2,2e1"
        assert label.cardinality == 2
        assert str(parse_label(nid, "0")) == "0"

    def test_not_in_nilradical(self):
        with pytest.raises(RootSystemError, match="is not a root of"):
            canonical_label(only("C", 2), [minus_root(2, 1, 2)])

    def test_not_strongly_orthogonal(self):
        nid = only("C", 2)
        with pytest.raises(NotStronglyOrthogonalError):
            canonical_label(nid, [plus_root(2, 1, 2), unit(1, 2, 2)])

    def test_mismatched_nilradicals(self):
        x = OrbitLabel(only("C", 2), ())
        y = OrbitLabel(only("B", 2), ())
        with pytest.raises(NilradicalMismatchError):
            bruhat_predicted_leq(x, y)


class TestEnumeration:
    """Test the list of orbit labels per nilradical"""

    def test_c2_order(self):
        labels = [str(label) for label in enumerate_orbits(only("C", 2))]
        assert labels == ["0", "2e2", "e2+e1", "2e1", "2e2,2e1"]

    @pytest.mark.parametrize("rank,count", [(1, 2), (2, 5), (3, 14), (4, 43)])
    def test_c_counts(self, rank, count):
        assert len(enumerate_orbits(only("C", rank))) == count

    def test_b3(self):
        assert len(enumerate_orbits(only("B", 3))) == 8

    def test_a3_middle(self):
        nid = nilradical_from_string(RootSystemType("A", 3), "e3-e2")
        assert len(enumerate_orbits(nid)) == 7

    @pytest.mark.parametrize("rank", [3, 4, 5])
    def test_d_small_nilradical(self, rank):
        assert len(enumerate_orbits(small_d(rank))) == 3 * (rank - 1) + 1

    def test_zero_orbit_first(self):
        for nid in abelian_nilradicals(RootSystemType("D", 4)):
            assert enumerate_orbits(nid)[0].roots == ()


class TestDimensions:
    """Test the predicted orbit dimensions"""

    def test_c2(self):
        labels = enumerate_orbits(only("C", 2))
        assert [predicted_dimension(label) for label in labels] == [0, 1, 2, 2, 3]

    def test_c2_coadjoint(self):
        nid = only("C", 2)
        assert predicted_coadjoint_dimension(parse_label(nid, "e2+e1")) == 2
        assert predicted_coadjoint_dimension(parse_label(nid, "2e1")) == 1

    @pytest.mark.parametrize("text,expected", [
        ("e3+e2", 1), ("e3+e1", 2), ("e3-e1", 3), ("e3", 3),
        ("e3-e2", 4), ("e3-e1,e3+e1", 4), ("e3-e2,e3+e2", 5),
    ])
    def test_b3(self, text, expected):
        assert predicted_dimension(parse_label(only("B", 3), text)) == expected

    def test_d4_small(self):
        assert predicted_dimension(parse_label(small_d(4), "e4+e1")) == 3


class TestIntervalOrder:
    """Test interval counts and the sl_2n embedding"""

    def test_longer_arc_is_smaller(self):
        assert interval_leq(frozenset({(1, 4)}), frozenset({(1, 3)}), 4)
        assert not interval_leq(frozenset({(1, 3)}), frozenset({(1, 4)}), 4)

    def test_empty_is_bottom(self):
        assert interval_leq(frozenset(), frozenset({(2, 3)}), 4)

    def test_sl_embedding(self):
        assert sl_embedding([unit(1, 2, 2)], 2) == frozenset({minus_root(3, 2, 4)})
        assert sl_embedding([], 2) == frozenset()


class TestClosureTable:
    """Test the B and D closure tables"""

    def test_b2_rows(self):
        rows = closure_relations(only("B", 2))
        exp = {(tuple(map(str, r.lower)), tuple(map(str, r.upper))) for r in rows if r.witness == "exp"}
        assert (("e2+e1",), ("e2-e1",)) in exp
        assert (("e2+e1",), ("e2",)) in exp

    def test_d_incomparable_row(self):
        rows = closure_relations(small_d(4))
        (row,) = [r for r in rows if r.kind == "incomparable"]
        assert row.witness == "dimension"
        assert [str(r) for r in row.lower] == ["e4+e1"]
        assert [str(r) for r in row.upper] == ["e4-e1"]

    def test_flip(self):
        rows = closure_relations(only("B", 2), fault="flip")
        (flipped,) = [r for r in rows if r.provenance.endswith("[flipped]")]
        assert [str(r) for r in flipped.lower] == ["e2"]
        assert [str(r) for r in flipped.upper] == ["e2+e1"]

    def test_flip_without_row(self, caplog):
        with caplog.at_level(logging.WARNING, logger="abelorbits.orbits"):
            rows = closure_relations(only("B", 1), fault="flip")
        assert rows == closure_relations(only("B", 1))
        assert "Fault 'flip' ignored" in caplog.text

    def test_unknown_fault(self):
        with pytest.raises(ValueError, match="fault must be"):
            closure_relations(only("B", 2), fault="swap")

    def test_no_table_for_c(self):
        with pytest.raises(RootSystemError, match="no closure table"):
            closure_relations(only("C", 2))


class TestGeometricOrder:
    """Test closure inclusion between labels"""

    def test_b2(self):
        nid = only("B", 2)
        p1, en, m1 = (parse_label(nid, text) for text in ("e2+e1", "e2", "e2-e1"))
        assert geometric_leq(p1, en)
        assert geometric_leq(p1, m1)
        assert not geometric_leq(en, p1)
        assert not geometric_leq(en, m1) and not geometric_leq(m1, en)

    def test_d_equal_dimension_incomparable(self):
        nid = small_d(4)
        p1, m1 = parse_label(nid, "e4+e1"), parse_label(nid, "e4-e1")
        assert not geometric_leq(p1, m1) and not geometric_leq(m1, p1)

    def test_type_a(self):
        nid = nilradical_from_string(RootSystemType("A", 3), "e2-e1")
        corner = parse_label(nid, "e4-e1")
        short = parse_label(nid, "e2-e1")
        assert geometric_leq(corner, short)
        assert not geometric_leq(short, corner)


class TestPosets:
    """Test poset construction and agreement of the two orders"""

    def test_c2_covers(self):
        poset = build_poset(only("C", 2))
        assert poset.covers == ((0, 1), (1, 2), (1, 3), (2, 4), (3, 4))
        assert poset.dims == (0, 1, 2, 2, 3)

    def test_b2_covers(self):
        poset = build_poset(only("B", 2))
        assert [str(label) for label in poset.labels] == ["0", "e2-e1", "e2", "e2+e1", "e2-e1,e2+e1"]
        assert len(poset.covers) == 5

    def test_relation_is_read_only(self):
        poset = build_poset(only("C", 2))
        with pytest.raises(ValueError):
            poset.leq[0, 1] = False

    def test_unknown_order(self):
        with pytest.raises(ValueError, match="order must be"):
            build_poset(only("C", 2), "dominance")

    @pytest.mark.parametrize("family,rank", [("A", 3), ("A", 4), ("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 4)])
    def test_orders_agree(self, family, rank):
        for nid in abelian_nilradicals(RootSystemType(family, rank)):
            geometric = build_poset(nid, "geometric")
            bruhat = build_poset(nid, "bruhat_predicted")
            assert disagreement_edges(geometric, bruhat) == []

    def test_flip_creates_disagreement(self):
        nid = only("B", 2)
        assert disagreement_edges(build_poset(nid, "geometric", "flip"), build_poset(nid, "bruhat_predicted"))

    def test_coadjoint_poset(self):
        poset = build_poset(only("C", 2), "coadjoint")
        assert poset.order == "coadjoint"
        assert poset.dims[0] == 0

    def test_mismatched_label_lists(self):
        with pytest.raises(NilradicalMismatchError):
            disagreement_edges(build_poset(only("C", 2)), build_poset(only("B", 2)))


class TestElementaryMoves:
    """Test the move-generated order in type A"""

    def test_moves_below_short_arc(self):
        nid = nilradical_from_string(RootSystemType("A", 3), "e2-e1")
        below = {str(label) for label in elementary_move_closure(parse_label(nid, "e2-e1"))}
        assert below == {"0", "e3-e1", "e4-e1"}

    def test_not_type_a(self):
        with pytest.raises(RootSystemError, match="type A only"):
            elementary_move_closure(OrbitLabel(only("C", 2), ()))

    def test_restricted_inside_unrestricted(self):
        nid = nilradical_from_string(RootSystemType("A", 3), "e3-e2")
        restricted = move_generated_order(nid, restricted=True)
        unrestricted = move_generated_order(nid, restricted=False)
        assert restricted.shape == (7, 7)
        assert restricted.diagonal().all()
        assert not (restricted & ~unrestricted).any()


class TestSerialization:
    """Test DOT and JSON output"""

    def test_dot_parses(self):
        poset = build_poset(only("C", 2))
        (graph,) = pydot.graph_from_dot_data(poset_to_dot(poset))
        nodes = [node for node in graph.get_nodes() if re.fullmatch(r"n\d+", node.get_name())]
        assert len(nodes) == len(poset.labels)
        assert len(graph.get_edges()) == len(poset.covers)

    def test_dot_disagreement_edges(self):
        poset = build_poset(only("C", 2))
        (graph,) = pydot.graph_from_dot_data(poset_to_dot(poset, [(3, 2)]))
        assert graph.get_name().strip('"') == "C2:m_2e1"
        assert graph.get("rankdir") == "BT"
        dashed = [e for e in graph.get_edges() if e.get("style") == "dashed"]
        assert [(e.get_source(), e.get_destination()) for e in dashed] == [("n3", "n2")]
        assert dashed[0].get("color") == "red"
        assert len(graph.get_edges()) == len(poset.covers) + 1

    def test_dot_labels_carry_dimension(self):
        poset = build_poset(only("C", 2))
        (graph,) = pydot.graph_from_dot_data(poset_to_dot(poset))
        (top,) = graph.get_node("n4")
        assert top.get("label").strip('"') == "2e2,2e1\\ndim=3"

    def test_json(self):
        document = json.loads(poset_to_json(build_poset(only("C", 2))))
        assert document["labels"] == ["0", "2e2", "e2+e1", "2e1", "2e2,2e1"]
        assert document["covers"] == [[0, 1], [1, 2], [1, 3], [2, 4], [3, 4]]
        assert document["order"] == "geometric"
