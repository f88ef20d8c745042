"""
Link patterns of involutions and the closed-form length formulas

A disjoint set S of root shapes is drawn as arcs on a vertex line:
1..N in type A, -n..-1, 1..n otherwise (there is no vertex 0).

    e_j - e_i  ->  (i, j)              and, for B/C/D, (-j, -i)
    e_j + e_i  ->  (-i, j), (-j, i)
    e_i, 2e_i  ->  (-i, i)

Statistics over the arcs (a_s, b_s):
    c  crossings      #{t : a_t < a_s < b_t < b_s}
    r  arcs to the right  #{t : a_t > b_s}
    b  fixed points under arcs
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .errors import OverlappingSupportError, RootSystemError
from .roots import Root, RootSystemType, is_disjoint, minus_root, plus_root, unit
from .weyl import (
    involution_from_roots,
    length,
    to_symmetric_group,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinkPattern:
    vertices: tuple[int, ...]
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        used = [v for arc in self.arcs for v in arc]
        if len(used) != len(set(used)):
            raise OverlappingSupportError(f"arcs {self.arcs} share a vertex")
        for a, b in self.arcs:
            if a >= b:
                raise ValueError(f"arc ({a},{b}) must have a < b")
            if a not in self.vertices or b not in self.vertices:
                raise ValueError(f"arc ({a},{b}) leaves the vertex line")

    @property
    def size(self) -> int:
        """|S|, the number of arcs"""
        return len(self.arcs)

    @property
    def fixed_points(self) -> tuple[int, ...]:
        used = {v for arc in self.arcs for v in arc}
        return tuple(v for v in self.vertices if v not in used)

    def is_symmetric(self) -> bool:
        return set(self.arcs) == {(-b, -a) for a, b in self.arcs}


@dataclass(frozen=True)
class SetShapeCounts:
    """a: e_j - e_i roots, d: e_k or 2e_k roots, f: e_j + e_i roots"""
    a: int
    d: int
    f: int


def shape_counts(S: Iterable[Root]) -> SetShapeCounts:
    a = d = f = 0
    for root in S:
        support = root.support
        if len(support) == 1:
            d += 1
        elif root.coefficient(support[0]) * root.coefficient(support[1]) < 0:
            a += 1
        else:
            f += 1
    return SetShapeCounts(a, d, f)


def _check_disjoint(roots: list[Root]) -> None:
    for x, y in combinations(roots, 2):
        if not is_disjoint(x, y):
            raise OverlappingSupportError(
                f"{x} and {y} share an index; decompose into disjoint reflections first"
            )


def pattern_of(S: Iterable[Root], t: RootSystemType) -> LinkPattern:
    roots = sorted(S)
    _check_disjoint(roots)
    n = t.dimension
    if t.family == "A":
        vertices = tuple(range(1, n + 1))
    else:
        vertices = tuple(range(-n, 0)) + tuple(range(1, n + 1))

    arcs = []
    for root in roots:
        if root.dimension != n:
            raise RootSystemError(f"{root} does not live on {n} coordinates")
        support = root.support
        if len(support) == 1:
            if t.family == "A":
                raise RootSystemError(f"{root} is not a type A root")
            i = support[0]
            arcs.append((-i, i))
            continue
        i, j = support
        if root.coefficient(i) * root.coefficient(j) < 0:
            arcs.append((i, j))
            if t.family != "A":
                arcs.append((-j, -i))
        else:
            if t.family == "A":
                raise RootSystemError(f"{root} is not a type A root")
            arcs.append((-i, j))
            arcs.append((-j, i))
    return LinkPattern(vertices, tuple(sorted(arcs)))


def stat_c(p: LinkPattern) -> int:
    return sum(
        1
        for a_s, b_s in p.arcs
        for a_t, b_t in p.arcs
        if a_t < a_s < b_t < b_s
    )


def stat_r(p: LinkPattern) -> int:
    return sum(1 for _, b_s in p.arcs for a_t, _ in p.arcs if a_t > b_s)


def stat_b(p: LinkPattern) -> int:
    fixed = p.fixed_points
    return sum(1 for a, b in p.arcs for v in fixed if a < v < b)


def length_formula_A(S: Iterable[Root]) -> int:
    """2|S|^2 - |S| + 2b - 4r - 2c for a partial matching in sl_N"""
    roots = list(S)
    if not roots:
        return 0
    t = RootSystemType("A", roots[0].dimension - 1)
    p = pattern_of(roots, t)
    k = p.size
    return 2 * k * k - k + 2 * stat_b(p) - 4 * stat_r(p) - 2 * stat_c(p)


def _symmetric_pattern(roots: list[Root]) -> LinkPattern:
    n = roots[0].dimension
    # B and C share the symmetric drawing; short roots are accepted in either form
    return pattern_of(roots, RootSystemType("B", n))


def length_formula_C(S: Iterable[Root]) -> int:
    """|S|^2 - a + b - c - 2r; also the B length of the same signed permutation"""
    roots = list(S)
    if not roots:
        return 0
    p = _symmetric_pattern(roots)
    k = p.size
    return k * k - shape_counts(roots).a + stat_b(p) - stat_c(p) - 2 * stat_r(p)


def length_formula_D(S: Iterable[Root]) -> int:
    """|S|^2 - |S| + a + b - c - 2r for an even number of short roots"""
    roots = list(S)
    if not roots:
        return 0
    counts = shape_counts(roots)
    if counts.d % 2:
        raise RootSystemError("D length formula needs an even number of short roots")
    p = _symmetric_pattern(roots)
    k = p.size
    return k * k - k + counts.a + stat_b(p) - stat_c(p) - 2 * stat_r(p)


def length_formula_S2n(S: Iterable[Root]) -> int:
    """The A formula evaluated on the symmetric pattern viewed on 2n points"""
    roots = list(S)
    if not roots:
        return 0
    p = _symmetric_pattern(roots)
    k = p.size
    return 2 * k * k - k + 2 * stat_b(p) - 4 * stat_r(p) - 2 * stat_c(p)


def length_formula(family: str, S: Iterable[Root]) -> int:
    """The closed form for family: A, C (also B) or D"""
    if family == "A":
        return length_formula_A(S)
    if family == "D":
        return length_formula_D(S)
    if family in ("B", "C"):
        return length_formula_C(S)
    raise RootSystemError(f"unknown family {family!r}")


def negated_points(S: Iterable[Root]) -> int:
    """x = |S| - 2a, the number of i > 0 sent to negatives"""
    roots = list(S)
    if not roots:
        return 0
    return _symmetric_pattern(roots).size - 2 * shape_counts(roots).a


def halving_identity_check(S: Iterable[Root], n: int) -> bool:
    """
    Brute-force check of the reductions behind the C and D formulas.

    l_C = (l_S2n + x) / 2 always; l_D = l_B - x when x is even; and the
    S_2n length agrees with length_formula_S2n.
    """
    roots = sorted(S)
    sigma = involution_from_roots(roots, n, "C")
    x = sigma.sign_changes()
    if roots and x != negated_points(roots):
        return False

    ell_c = length(sigma, RootSystemType("C", n))
    ell_s2n = length(to_symmetric_group(sigma), RootSystemType("A", 2 * n - 1))
    if 2 * ell_c != ell_s2n + x:
        return False
    if ell_s2n != length_formula_S2n(roots):
        return False

    if x % 2 == 0 and n >= 2:
        ell_b = length(sigma, RootSystemType("B", n))
        ell_d = length(sigma.retag("D"), RootSystemType("D", n))
        if ell_d != ell_b - x:
            return False
    return True


def disjoint_sets(t: RootSystemType) -> Iterator[frozenset[Root]]:
    """
    Every pairwise disjoint set of positive root shapes of t.

    A: partial matchings. B, C: each point fixed, negated, or paired by
    e_j - e_i or e_j + e_i. D: as B with an even number of negated points.
    """
    n = t.dimension
    short_scale = 2 if t.family == "C" else 1

    def extend(free: tuple[int, ...], chosen: tuple[Root, ...], shorts: int):
        if not free:
            if t.family != "D" or shorts % 2 == 0:
                yield frozenset(chosen)
            return
        i, rest = free[0], free[1:]
        yield from extend(rest, chosen, shorts)
        if t.family != "A":
            yield from extend(rest, chosen + (unit(i, n, short_scale),), shorts + 1)
        for pos, j in enumerate(rest):
            remaining = rest[:pos] + rest[pos + 1:]
            yield from extend(remaining, chosen + (minus_root(j, i, n),), shorts)
            if t.family != "A":
                yield from extend(remaining, chosen + (plus_root(j, i, n),), shorts)

    yield from extend(tuple(range(1, n + 1)), (), 0)


def render_ascii(p: LinkPattern) -> str:
    """
    Arcs drawn above the labelled vertex line, longest arc on top.

    Every arc gets its own row; '+' marks its endpoints and '|' carries the
    endpoints of higher arcs down to the axis.
    """
    width = max(len(str(v)) for v in p.vertices) + 1
    column = {v: k * width + width - 1 for k, v in enumerate(p.vertices)}
    line_width = width * len(p.vertices)

    rows = []
    drawn: list[tuple[int, int]] = []
    for a, b in sorted(p.arcs, key=lambda arc: (-(column[arc[1]] - column[arc[0]]), arc)):
        row = [" "] * line_width
        for c in range(column[a] + 1, column[b]):
            row[c] = "-"
        for x, y in drawn:
            row[column[x]] = "|"
            row[column[y]] = "|"
        row[column[a]] = "+"
        row[column[b]] = "+"
        rows.append("".join(row).rstrip())
        drawn.append((a, b))

    axis = "".join(str(v).rjust(width) for v in p.vertices)
    return "\n".join(rows + [axis])


def serialize(p: LinkPattern) -> str:
    """(a1,b1)(a2,b2)... sorted by left endpoint"""
    return "".join(f"({a},{b})" for a, b in sorted(p.arcs))
