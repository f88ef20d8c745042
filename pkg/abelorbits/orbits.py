"""
B-orbits in abelian nilradicals

Orbits are labelled by strongly orthogonal sets S inside the nilradical
(the empty set labels the zero orbit). Each label carries sigma_S, the
product of its reflections, and its conjugate w sigma_S w by the longest
element w of the parabolic subgroup.

Two orders are built on the labels:
- bruhat_predicted: x <= y iff w sigma_x w <= w sigma_y w in Bruhat order
- geometric: orbit closure inclusion, from interval counts in type A,
  through the sl_2n embedding for C and the big D nilradicals, and from
  a closure table for the B nilradical and D's m_(e_n - e_(n-1)).
"""
import json
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Optional

import networkx as nx
import numpy as np
import pydot

from .cache import cached
from .errors import (
    IntegrityError,
    NilradicalMismatchError,
    NotStronglyOrthogonalError,
    RootSystemError,
)
from .linkpattern import disjoint_sets, pattern_of
from .models import PosetDocument
from .roots import (
    NilradicalId,
    Root,
    RootSystemType,
    is_strongly_orthogonal,
    minus_root,
    nilradical_positive_roots,
    parse_root,
    plus_root,
    unit,
)
from .weyl import (
    SignedPermutation,
    bruhat_leq,
    conjugate_by,
    involution_of_set,
    length,
    longest_parabolic,
)

logger = logging.getLogger(__name__)

ORDERS = ("geometric", "bruhat_predicted", "coadjoint")
FAULTS = (None, "flip")


@dataclass(frozen=True)
class OrbitLabel:
    nilradical: NilradicalId
    roots: tuple[Root, ...]

    @property
    def type(self) -> RootSystemType:
        return self.nilradical.type

    @property
    def cardinality(self) -> int:
        """#(S)"""
        return len(self.roots)

    @cached_property
    def involution(self) -> SignedPermutation:
        return involution_of_set(self.roots, self.type)

    @cached_property
    def conjugate(self) -> SignedPermutation:
        return conjugate_by(longest_parabolic(self.nilradical), self.involution)

    def __str__(self) -> str:
        return ",".join(str(r) for r in self.roots) or "0"


def canonical_label(nid: NilradicalId, S: Iterable[Root]) -> OrbitLabel:
    """
    Validate S against the nilradical and return its label.

    Raises:
        RootSystemError: a root outside the nilradical
        NotStronglyOrthogonalError: two roots fail the alpha +/- beta test
    """
    roots = tuple(sorted(set(S)))
    allowed = nilradical_positive_roots(nid)
    for r in roots:
        if r not in allowed:
            raise RootSystemError(f"{r} is not a root of {nid}")
    for x, y in combinations(roots, 2):
        if not is_strongly_orthogonal(x, y, nid.type):
            raise NotStronglyOrthogonalError(f"{x} and {y} are not strongly orthogonal")
    return OrbitLabel(nid, roots)


def parse_label(nid: NilradicalId, text: str) -> OrbitLabel:
    """Inverse of str(label); '0' or '' is the zero orbit"""
    text = text.strip()
    if text in ("", "0"):
        return OrbitLabel(nid, ())
    return canonical_label(nid, [parse_root(part, nid.type.dimension) for part in text.split(",")])


@cached("orbits")
def enumerate_orbits(nid: NilradicalId) -> tuple[OrbitLabel, ...]:
    """All strongly orthogonal subsets of the nilradical, by (#S, roots)"""
    t = nid.type
    pool = sorted(nilradical_positive_roots(nid))

    def extend(start: int, chosen: tuple[Root, ...]):
        yield chosen
        for k in range(start, len(pool)):
            beta = pool[k]
            if all(is_strongly_orthogonal(beta, c, t) for c in chosen):
                yield from extend(k + 1, chosen + (beta,))

    labels = sorted(
        (OrbitLabel(nid, tuple(sorted(S))) for S in extend(0, ())),
        key=lambda label: (label.cardinality, label.roots),
    )

    seen: dict = {}
    for label in labels:
        key = label.involution.images
        if key in seen:
            raise IntegrityError(
                f"labels {seen[key]} and {label} of {nid} share an involution",
                {"nilradical": str(nid), "labels": [str(seen[key]), str(label)]},
            )
        seen[key] = label
    logger.debug(f"{nid}: {len(labels)} orbit labels")
    return tuple(labels)


def _halve(numerator: int, label: OrbitLabel, kind: str) -> int:
    if numerator % 2:
        raise IntegrityError(
            f"odd {kind} numerator {numerator} for {label} in {label.nilradical}",
            {"nilradical": str(label.nilradical), "label": str(label), "numerator": numerator, "kind": kind},
        )
    return numerator // 2


def predicted_dimension(label: OrbitLabel) -> int:
    """(l(w sigma w) + #S) / 2"""
    return _halve(length(label.conjugate, label.type) + label.cardinality, label, "adjoint")


def predicted_coadjoint_dimension(label: OrbitLabel) -> int:
    """(l(sigma) + #S) / 2; no geometric counterpart is checked"""
    return _halve(length(label.involution, label.type) + label.cardinality, label, "coadjoint")


def _same_nilradical(x: OrbitLabel, y: OrbitLabel) -> None:
    if x.nilradical != y.nilradical:
        raise NilradicalMismatchError(f"{x} lives in {x.nilradical}, {y} in {y.nilradical}")


def bruhat_predicted_leq(x: OrbitLabel, y: OrbitLabel) -> bool:
    _same_nilradical(x, y)
    return bruhat_leq(x.conjugate, y.conjugate, x.type)


def coadjoint_predicted_leq(x: OrbitLabel, y: OrbitLabel) -> bool:
    _same_nilradical(x, y)
    return bruhat_leq(x.involution, y.involution, x.type)


# Geometric order: interval counts

def _arcs_of(roots: Iterable[Root]) -> frozenset[tuple[int, int]]:
    arcs = set()
    for r in roots:
        i, j = r.support
        arcs.add((i, j))
    return frozenset(arcs)


@lru_cache(maxsize=None)
def _interval_profile(arcs: frozenset, points: int) -> tuple[int, ...]:
    """|pi_ij| for every interval 1 <= i < j <= points"""
    return tuple(
        sum(1 for k, l in arcs if i <= k and l <= j)
        for i in range(1, points + 1)
        for j in range(i + 1, points + 1)
    )


def interval_leq(lower: frozenset, upper: frozenset, points: int) -> bool:
    """Closure inclusion for partial matchings of 1..points"""
    low = _interval_profile(lower, points)
    high = _interval_profile(upper, points)
    return all(x <= y for x, y in zip(low, high))


def sl_embedding(S: Iterable[Root], n: int) -> frozenset[Root]:
    """
    Symmetric pattern of S on -n..n redrawn as sl_2n roots.

    Vertex i goes to n+i and -i to n+1-i, matching weyl.to_symmetric_group.
    """
    roots = list(S)
    if not roots:
        return frozenset()
    pattern = pattern_of(roots, RootSystemType("B", n))

    def point(x: int) -> int:
        return n + x if x > 0 else n + 1 + x

    return frozenset(minus_root(point(b), point(a), 2 * n) for a, b in pattern.arcs)


def _flip_first(r: Root) -> Root:
    return Root((-r.coeffs[0],) + r.coeffs[1:])


def _uses_table(nid: NilradicalId) -> bool:
    t = nid.type
    if t.family == "B":
        return True
    return t.family == "D" and nid.simple_root == minus_root(t.rank, t.rank - 1, t.rank)


def _is_minus_first(nid: NilradicalId) -> bool:
    """True for D's m_(e_2 - e_1)"""
    return nid.type.family == "D" and nid.simple_root == minus_root(2, 1, nid.type.rank)


def _doubled_arcs(label: OrbitLabel) -> tuple[frozenset, int]:
    t = label.type
    roots = label.roots
    if _is_minus_first(label.nilradical):
        roots = tuple(_flip_first(r) for r in roots)
    return _arcs_of(sl_embedding(roots, t.rank)), 2 * t.rank


# Geometric order: closure table

@dataclass(frozen=True)
class ClosureRelation:
    """
    One row of the closure table.

    witness is 'exp' (acting roots and the expected support of Exp(a X).Y,
    each root mapped to '0', '1', '2' or 'vanishing' = c0 + c2 a^2),
    'torus' (lower is a subset of upper) or 'dimension' (equal dimensions,
    used for incomparable pairs).
    """
    lower: tuple[Root, ...]
    upper: tuple[Root, ...]
    kind: str
    witness: str
    provenance: str
    acting: tuple[Root, ...] = ()
    expected: tuple[tuple[Root, str], ...] = ()


def _exp_row(lower, upper, acting, expected: dict, provenance: str) -> ClosureRelation:
    return ClosureRelation(
        lower=tuple(sorted(lower)),
        upper=tuple(sorted(upper)),
        kind="leq",
        witness="exp",
        provenance=provenance,
        acting=tuple(acting),
        expected=tuple(sorted(expected.items())),
    )


def closure_relations(nid: NilradicalId, fault: Optional[str] = None) -> tuple[ClosureRelation, ...]:
    """
    Closure table for B_n's nilradical and D_n's m_(e_n - e_(n-1)).

    fault='flip' reverses the row {e_n+e_1} <= {e_n} (B) or
    {e_n+e_2} <= {e_n-e_1} (D); it exists to exercise failing reports.
    """
    if fault not in FAULTS:
        raise ValueError(f"fault must be one of {FAULTS}, got {fault!r}")
    if not _uses_table(nid):
        raise RootSystemError(f"{nid} has no closure table; its order comes from interval counts")
    t = nid.type
    n = t.rank
    is_b = t.family == "B"

    def m(i):
        return minus_root(n, i, n)

    def p(i):
        return plus_root(n, i, n)

    en = unit(n, n)
    rows = []

    for i in range(2, n):
        rows.append(_exp_row(
            [m(i - 1)], [m(i)], [minus_root(i, i - 1, n)],
            {m(i): "0", m(i - 1): "1"},
            f"chain e{n}-e{i - 1} below e{n}-e{i}",
        ))
    if is_b and n >= 2:
        rows.append(_exp_row(
            [p(1)], [m(1)], [unit(1, n)],
            {m(1): "0", en: "1", p(1): "2"},
            f"e{n}+e1 below e{n}-e1 through e{n}",
        ))
    if not is_b:
        rows.append(_exp_row(
            [p(1)], [m(2)], [plus_root(2, 1, n)],
            {m(2): "0", p(1): "1"},
            f"e{n}+e1 below e{n}-e2",
        ))
        rows.append(_exp_row(
            [p(2)], [m(1)], [plus_root(2, 1, n)],
            {m(1): "0", p(2): "1"},
            f"e{n}+e2 below e{n}-e1",
        ))
    for i in range(1, n - 1):
        rows.append(_exp_row(
            [p(i + 1)], [p(i)], [minus_root(i + 1, i, n)],
            {p(i): "0", p(i + 1): "1"},
            f"chain e{n}+e{i + 1} below e{n}+e{i}",
        ))
    if is_b and n >= 2:
        rows.append(_exp_row(
            [p(1)], [en], [unit(1, n)],
            {en: "0", p(1): "1"},
            f"e{n}+e1 below e{n}",
        ))
    for i, j in combinations(range(1, n), 2):
        rows.append(_exp_row(
            [m(i), p(i)], [m(j), p(j)], [minus_root(j, i, n), plus_root(j, i, n)],
            {m(j): "0", p(j): "vanishing", m(i): "1", p(i): "1"},
            f"pair e{n}-+e{i} below pair e{n}-+e{j}",
        ))
    if is_b:
        for j in range(1, n):
            rows.append(_exp_row(
                [en], [m(j), p(j)], [unit(j, n)],
                {m(j): "0", en: "1", p(j): "vanishing"},
                f"e{n} below pair e{n}-+e{j}",
            ))
    if not is_b:
        rows.append(ClosureRelation(
            lower=(p(1),), upper=(m(1),), kind="incomparable", witness="dimension",
            provenance=f"e{n}+e1 and e{n}-e1 have equal dimension",
        ))

    for label in enumerate_orbits(nid):
        for size in range(label.cardinality):
            for subset in combinations(label.roots, size):
                rows.append(ClosureRelation(
                    lower=tuple(subset), upper=label.roots, kind="leq", witness="torus",
                    provenance=f"torus limit of {label}",
                ))

    if fault == "flip":
        target = ((p(1),), (en,)) if is_b else ((p(2),), (m(1),))
        target = tuple(tuple(sorted(side)) for side in target)
        if not any((row.lower, row.upper) == target and row.witness == "exp" for row in rows):
            logger.warning(f"Fault 'flip' ignored: {nid} has no row to reverse")
        flipped = []
        for row in rows:
            if (row.lower, row.upper) == target and row.witness == "exp":
                row = ClosureRelation(
                    lower=row.upper, upper=row.lower, kind=row.kind, witness=row.witness,
                    provenance=row.provenance + " [flipped]", acting=row.acting, expected=row.expected,
                )
                logger.warning(f"Fault injected into closure table of {nid}: {row.provenance}")
            flipped.append(row)
        rows = flipped
    return tuple(rows)


@cached("closure_graph")
def _closure_graph(nid: NilradicalId, fault: Optional[str]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(str(label) for label in enumerate_orbits(nid))
    for row in closure_relations(nid, fault):
        if row.kind != "leq":
            continue
        lower = str(OrbitLabel(nid, row.lower))
        upper = str(OrbitLabel(nid, row.upper))
        if lower not in graph or upper not in graph:
            raise IntegrityError(
                f"closure row {row.provenance} names a label outside {nid}",
                {"nilradical": str(nid), "row": row.provenance},
            )
        graph.add_edge(lower, upper)
    return nx.transitive_closure(graph)


def geometric_leq(x: OrbitLabel, y: OrbitLabel, fault: Optional[str] = None) -> bool:
    """True iff the orbit of x lies in the closure of the orbit of y"""
    _same_nilradical(x, y)
    if x.roots == y.roots:
        return True
    nid = x.nilradical
    t = nid.type
    if t.family == "A":
        return interval_leq(_arcs_of(x.roots), _arcs_of(y.roots), t.dimension)
    if _uses_table(nid):
        return _closure_graph(nid, fault).has_edge(str(x), str(y))
    low, points = _doubled_arcs(x)
    high, _ = _doubled_arcs(y)
    return interval_leq(low, high, points)


# Elementary moves (type A)

def _moves(arcs: frozenset, points: int) -> set[frozenset]:
    """Partial matchings one elementary move below arcs"""
    used = {v for arc in arcs for v in arc}
    fixed = [v for v in range(1, points + 1) if v not in used]
    result = set()
    for arc in arcs:
        rest = arcs - {arc}
        i, j = arc
        result.add(rest)
        for k in fixed:
            if k > j:
                result.add(rest | {(i, k)})
            if k < i:
                result.add(rest | {(k, j)})
    for (i1, j1), (i2, j2) in combinations(sorted(arcs), 2):
        rest = arcs - {(i1, j1), (i2, j2)}
        if i1 < i2 < j2 < j1:
            result.add(rest | {(i1, j2), (i2, j1)})
        if j1 < i2:
            result.add(rest | {(i1, i2), (j1, j2)})
    return result


def _require_a(nid: NilradicalId) -> None:
    if nid.type.family != "A":
        raise RootSystemError(f"elementary moves are defined for type A only, not {nid}")


def elementary_move_closure(x: OrbitLabel) -> set[OrbitLabel]:
    """Labels of the same nilradical one elementary move below x"""
    nid = x.nilradical
    _require_a(nid)
    n = nid.type.dimension
    allowed = nilradical_positive_roots(nid)
    result = set()
    for arcs in _moves(_arcs_of(x.roots), n):
        roots = tuple(sorted(minus_root(j, i, n) for i, j in arcs))
        if all(r in allowed for r in roots):
            result.add(OrbitLabel(nid, roots))
    return result


def move_generated_order(nid: NilradicalId, restricted: bool) -> np.ndarray:
    """
    Reflexive-transitive closure of the elementary moves, on enumerate_orbits(nid).

    restricted=True moves only between labels of the nilradical; otherwise
    the closure runs over every partial matching of sl_N and is then
    restricted.
    """
    _require_a(nid)
    labels = enumerate_orbits(nid)
    n = nid.type.dimension
    graph = nx.DiGraph()
    if restricted:
        for label in labels:
            graph.add_node(_arcs_of(label.roots))
            for below in elementary_move_closure(label):
                graph.add_edge(_arcs_of(below.roots), _arcs_of(label.roots))
    else:
        for S in disjoint_sets(nid.type):
            arcs = _arcs_of(S)
            graph.add_node(arcs)
            for below in _moves(arcs, n):
                graph.add_edge(below, arcs)
    closure = nx.transitive_closure(graph)
    keys = [_arcs_of(label.roots) for label in labels]
    k = len(labels)
    leq = np.zeros((k, k), dtype=bool)
    for i, low in enumerate(keys):
        for j, high in enumerate(keys):
            leq[i, j] = i == j or closure.has_edge(low, high)
    return leq


# Posets

@dataclass(frozen=True)
class OrbitPoset:
    nilradical: NilradicalId
    order: str
    labels: tuple[OrbitLabel, ...]
    leq: np.ndarray
    covers: tuple[tuple[int, int], ...]
    dims: tuple[int, ...]

    def index(self, label: OrbitLabel) -> int:
        return self.labels.index(label)


def _relation(order: str, fault: Optional[str]):
    if order == "geometric":
        return lambda x, y: geometric_leq(x, y, fault)
    if order == "bruhat_predicted":
        return bruhat_predicted_leq
    if order == "coadjoint":
        return coadjoint_predicted_leq
    raise ValueError(f"order must be one of {ORDERS}, got {order!r}")


def _check_partial_order(nid: NilradicalId, order: str, labels, leq: np.ndarray) -> None:
    if not leq.diagonal().all():
        raise IntegrityError(f"{order} relation on {nid} is not reflexive", {"nilradical": str(nid), "order": order})
    both = leq & leq.T
    np.fill_diagonal(both, False)
    if both.any():
        i, j = (int(v) for v in np.argwhere(both)[0])
        raise IntegrityError(
            f"{order} relation on {nid} is not antisymmetric: {labels[i]} and {labels[j]}",
            {"nilradical": str(nid), "order": order, "labels": [str(labels[i]), str(labels[j])]},
        )
    as_int = leq.astype(int)
    if not np.array_equal((as_int @ as_int) > 0, leq):
        raise IntegrityError(f"{order} relation on {nid} is not transitive", {"nilradical": str(nid), "order": order})


@cached("poset")
def build_poset(nid: NilradicalId, order: str = "geometric", fault: Optional[str] = None) -> OrbitPoset:
    """
    Relation matrix, Hasse covers and dimensions for one order.

    order is 'geometric', 'bruhat_predicted' (w-conjugated Bruhat order) or
    'coadjoint' (plain Bruhat order on sigma_S, with coadjoint dimensions).
    """
    relation = _relation(order, fault)
    labels = enumerate_orbits(nid)
    k = len(labels)
    leq = np.zeros((k, k), dtype=bool)
    for i, x in enumerate(labels):
        for j, y in enumerate(labels):
            leq[i, j] = relation(x, y)
    _check_partial_order(nid, order, labels, leq)

    graph = nx.DiGraph()
    graph.add_nodes_from(range(k))
    graph.add_edges_from((int(i), int(j)) for i, j in np.argwhere(leq) if i != j)
    try:
        reduction = nx.transitive_reduction(graph)
    except nx.NetworkXError as e:
        raise IntegrityError(f"{order} relation on {nid} has a cycle: {e}", {"nilradical": str(nid), "order": order})
    covers = tuple(sorted((int(i), int(j)) for i, j in reduction.edges()))

    if order == "coadjoint":
        dims = tuple(predicted_coadjoint_dimension(label) for label in labels)
    else:
        dims = tuple(predicted_dimension(label) for label in labels)
    leq.setflags(write=False)
    logger.info(f"Built {order} poset of {nid}: {k} labels, {len(covers)} covers")
    return OrbitPoset(nid, order, labels, leq, covers, dims)


def poset_document(poset: OrbitPoset) -> PosetDocument:
    return PosetDocument(
        nilradical=str(poset.nilradical),
        order=poset.order,
        labels=[str(label) for label in poset.labels],
        dims=list(poset.dims),
        covers=[list(c) for c in poset.covers],
    )


def poset_to_json(poset: OrbitPoset) -> str:
    return json.dumps(poset_document(poset).model_dump(), sort_keys=True, indent=2)


def poset_to_dot(poset: OrbitPoset, disagreements: Iterable[tuple[int, int]] = ()) -> str:
    """Hasse diagram, bottom to top; disagreement edges are drawn red and dashed"""
    graph = pydot.Dot(f'"{poset.nilradical}"', graph_type="digraph", rankdir="BT")
    for i, (label, dim) in enumerate(zip(poset.labels, poset.dims)):
        graph.add_node(pydot.Node(f"n{i}", label=f'"{label}\\ndim={dim}"'))
    for i, j in poset.covers:
        graph.add_edge(pydot.Edge(f"n{i}", f"n{j}"))
    for i, j in sorted(disagreements):
        graph.add_edge(pydot.Edge(f"n{i}", f"n{j}", color="red", style="dashed"))
    return graph.to_string()


def disagreement_edges(first: OrbitPoset, second: OrbitPoset) -> list[tuple[int, int]]:
    """Pairs (i, j), i != j, related in exactly one of the two posets"""
    if first.labels != second.labels:
        raise NilradicalMismatchError("posets are built on different label lists")
    differ = first.leq ^ second.leq
    return [(int(i), int(j)) for i, j in np.argwhere(differ)]
