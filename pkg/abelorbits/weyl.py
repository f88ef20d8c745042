"""
Weyl groups of types A, B, C, D as (signed) permutations

An element w is stored by its images w(1), ..., w(n) and extended by
w(-i) = -w(i). It acts on roots by w(e_i) = sign(w(i)) e_|w(i)|. Type A
elements carry no sign changes; type D elements carry an even number.

Bruhat order is decided by descent recursion; a cover-graph closure over the
whole group is kept as a rank-gated oracle for cross-checking.
"""
import logging
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

import networkx as nx

from .cache import cached
from .config import settings
from .errors import (
    NotAnInvolutionError,
    NotStronglyOrthogonalError,
    OverlappingSupportError,
    RootSystemError,
)
from .roots import (
    NilradicalId,
    Root,
    RootSystemType,
    is_disjoint,
    is_positive,
    is_root,
    is_strongly_orthogonal,
    minus_root,
    plus_root,
    positive_roots,
    simple_roots,
    unit,
)

logger = logging.getLogger(__name__)

Images = tuple[int, ...]


@dataclass(frozen=True)
class SignedPermutation:
    images: Images
    family: str = "B"

    def __post_init__(self):
        n = len(self.images)
        if sorted(abs(x) for x in self.images) != list(range(1, n + 1)):
            raise RootSystemError(f"{list(self.images)} is not a signed permutation of 1..{n}")
        negatives = self.sign_changes()
        if self.family == "A" and negatives:
            raise RootSystemError(f"type A element {list(self.images)} has sign changes")
        if self.family == "D" and negatives % 2:
            raise RootSystemError(f"type D element {list(self.images)} has an odd number of sign changes")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if i > 0:
            return self.images[i - 1]
        return -self.images[-i - 1]

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """self o other"""
        return SignedPermutation(_compose(self.images, other.images), self.family)

    __mul__ = compose

    def inverse(self) -> "SignedPermutation":
        inv = [0] * self.n
        for i, v in enumerate(self.images, start=1):
            inv[abs(v) - 1] = i if v > 0 else -i
        return SignedPermutation(tuple(inv), self.family)

    def sign_changes(self) -> int:
        return sum(1 for x in self.images if x < 0)

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def is_involution(self) -> bool:
        return _compose(self.images, self.images) == tuple(range(1, self.n + 1))

    def retag(self, family: str) -> "SignedPermutation":
        return SignedPermutation(self.images, family)

    def __str__(self) -> str:
        return "[" + ",".join(str(x) for x in self.images) + "]"


def _compose(u: Images, v: Images) -> Images:
    return tuple(u[x - 1] if x > 0 else -u[-x - 1] for x in v)


def _terms(a: Root) -> tuple[tuple[int, int], ...]:
    return tuple((k, a.coefficient(k)) for k in a.support)


def _maps_negative(images: Images, terms) -> bool:
    """True when the element sends the root with these (index, coefficient) terms into R-"""
    top, sign = 0, 0
    for k, c in terms:
        v = images[k - 1]
        if abs(v) > top:
            top = abs(v)
            sign = c if v > 0 else -c
    return sign < 0


def _belongs(w: SignedPermutation, t: RootSystemType) -> bool:
    if w.n != t.dimension:
        return False
    if t.family == "A":
        return w.sign_changes() == 0
    if t.family == "D":
        return w.sign_changes() % 2 == 0
    return True


def _require_member(w: SignedPermutation, t: RootSystemType) -> None:
    if not _belongs(w, t):
        raise RootSystemError(f"{w} is not an element of W({t})")


def identity(t: RootSystemType) -> SignedPermutation:
    return SignedPermutation(tuple(range(1, t.dimension + 1)), t.family)


def _reflection_images(a: Root) -> Images:
    # s_a(e_k) = e_k - (2 a_k / (a, a)) a
    norm = sum(c * c for c in a.coeffs)
    images = []
    for k in range(1, a.dimension + 1):
        factor = 2 * a.coefficient(k) // norm
        image = [-factor * c for c in a.coeffs]
        image[k - 1] += 1
        index = next(m for m, c in enumerate(image, start=1) if c)
        images.append(index * image[index - 1])
    return tuple(images)


def reflection(a: Root, t: RootSystemType) -> SignedPermutation:
    if not is_root(a, t):
        raise RootSystemError(f"{a} is not a root of {t}")
    return SignedPermutation(_reflection_images(a), t.family)


def simple_reflections(t: RootSystemType) -> tuple[SignedPermutation, ...]:
    return tuple(reflection(alpha, t) for alpha in simple_roots(t))


def act_on_root(w: SignedPermutation, a: Root) -> Root:
    coeffs = [0] * a.dimension
    for k, c in _terms(a):
        v = w(k)
        coeffs[abs(v) - 1] += c if v > 0 else -c
    return Root(tuple(coeffs))


@cached("positive_terms")
def _positive_terms(t: RootSystemType) -> tuple:
    return tuple(_terms(beta) for beta in positive_roots(t))


def _length(images: Images, t: RootSystemType) -> int:
    return sum(1 for terms in _positive_terms(t) if _maps_negative(images, terms))


def length(w: SignedPermutation, t: RootSystemType) -> int:
    """Number of positive roots sent to negative roots"""
    _require_member(w, t)
    return _length(w.images, t)


def inversions(w: SignedPermutation, t: RootSystemType) -> list[Root]:
    _require_member(w, t)
    return [beta for beta in positive_roots(t) if not is_positive(act_on_root(w, beta))]


def involution_of_set(S: Iterable[Root], t: RootSystemType) -> SignedPermutation:
    """Product of the reflections of a strongly orthogonal set"""
    roots = sorted(S)
    for a in roots:
        if not is_root(a, t):
            raise RootSystemError(f"{a} is not a root of {t}")
    for a, b in combinations(roots, 2):
        if not is_strongly_orthogonal(a, b, t):
            raise NotStronglyOrthogonalError(f"{a} and {b} are not strongly orthogonal in {t}")
    images = tuple(range(1, t.dimension + 1))
    for a in roots:
        images = _compose(images, _reflection_images(a))
    return SignedPermutation(images, t.family)


def involution_from_roots(T: Iterable[Root], n: int, family: str) -> SignedPermutation:
    """
    Involution of a pairwise disjoint set of root shapes on n points.

    Short roots e_k are accepted for every signed family, so D involutions
    can be written with the shape used by the D length formula.
    """
    roots = sorted(T)
    for a, b in combinations(roots, 2):
        if not is_disjoint(a, b):
            raise OverlappingSupportError(f"{a} and {b} share an index")
    images = list(range(1, n + 1))
    for a in roots:
        if a.dimension != n:
            raise RootSystemError(f"{a} does not live on {n} coordinates")
        terms = _terms(a)
        if len(terms) == 1:
            (i, _), = terms
            images[i - 1] = -i
        elif len(terms) == 2:
            (i, ci), (j, cj) = terms
            sign = -ci * cj
            images[i - 1] = sign * j
            images[j - 1] = sign * i
        else:
            raise RootSystemError(f"{a} is not a classical root shape")
    return SignedPermutation(tuple(images), family)


def disjoint_reflection_decomposition(s: SignedPermutation) -> frozenset[Root]:
    """
    The unique disjoint set T of positive root shapes with product s.

    Fixed sign changes i -> -i become e_i (2e_i for family C).
    """
    if not s.is_involution():
        raise NotAnInvolutionError(f"{s} is not an involution")
    n = s.n
    result = set()
    for i in range(1, n + 1):
        v = s(i)
        if v == i:
            continue
        if v == -i:
            result.add(unit(i, n, 2 if s.family == "C" else 1))
        elif v > i:
            result.add(minus_root(v, i, n))
        elif -v > i:
            result.add(plus_root(-v, i, n))
    return frozenset(result)


def to_symmetric_group(w: SignedPermutation) -> SignedPermutation:
    """Embed into S_2n via i -> n+i, -i -> n+1-i"""
    n = w.n

    def point(x: int) -> int:
        return n + x if x > 0 else n + 1 + x

    def signed(p: int) -> int:
        return p - n if p > n else -(n + 1 - p)

    return SignedPermutation(tuple(point(w(signed(p))) for p in range(1, 2 * n + 1)), "A")


@cached("longest_parabolic")
def longest_parabolic(nid: NilradicalId) -> SignedPermutation:
    """Longest element of the parabolic subgroup generated by the other simple roots"""
    t = nid.type
    generators = [
        (_terms(alpha), _reflection_images(alpha))
        for alpha in simple_roots(t)
        if alpha != nid.simple_root
    ]
    w = tuple(range(1, t.dimension + 1))
    climbing = True
    while climbing:
        climbing = False
        for terms, s in generators:
            if not _maps_negative(w, terms):
                w = _compose(w, s)
                climbing = True
                break
    return SignedPermutation(w, t.family)


def conjugate_by(w: SignedPermutation, s: SignedPermutation) -> SignedPermutation:
    """w o s o w^-1 (equal to w o s o w for the involutions used here)"""
    return w.compose(s).compose(w.inverse())


@cached("simple_generators")
def _simple_generators(t: RootSystemType) -> tuple:
    return tuple((_terms(alpha), _reflection_images(alpha)) for alpha in simple_roots(t))


def bruhat_leq(u: SignedPermutation, w: SignedPermutation, t: RootSystemType) -> bool:
    """
    Bruhat comparison by right descents.

    For a descent s of w (ws < w): u <= w iff min(u, us) <= ws.
    """
    _require_member(u, t)
    _require_member(w, t)
    return _bruhat_leq(u.images, w.images, t)


def _bruhat_leq(u: Images, w: Images, t: RootSystemType) -> bool:
    unit_images = tuple(range(1, t.dimension + 1))
    generators = _simple_generators(t)
    while True:
        if u == w:
            return True
        if w == unit_images:
            return False
        for terms, s in generators:
            if _maps_negative(w, terms):
                break
        if _maps_negative(u, terms):
            u = _compose(u, s)
        w = _compose(w, s)


@cached("weyl_group")
def _group_images(t: RootSystemType) -> tuple:
    start = tuple(range(1, t.dimension + 1))
    seen = {start}
    queue = deque([start])
    generators = [s for _, s in _simple_generators(t)]
    while queue:
        w = queue.popleft()
        for s in generators:
            ws = _compose(w, s)
            if ws not in seen:
                seen.add(ws)
                queue.append(ws)
    ordered = sorted(seen, key=lambda images: (_length(images, t), images))
    logger.info(f"Enumerated W({t}): {len(ordered)} elements")
    return tuple(ordered)


def weyl_group(t: RootSystemType) -> tuple[SignedPermutation, ...]:
    """All elements, ordered by (length, images)"""
    return tuple(SignedPermutation(images, t.family) for images in _group_images(t))


def _check_oracle_rank(t: RootSystemType, max_rank: Optional[int]) -> None:
    ceiling = max_rank if max_rank is not None else settings.oracle_ceiling(t.family)
    if t.rank > ceiling:
        raise RootSystemError(f"cover-graph oracle is limited to rank {ceiling} for {t.family} (got {t})")


@cached("bruhat_cover_closure")
def _cover_closure(t: RootSystemType) -> nx.DiGraph:
    elements = _group_images(t)
    lengths = {w: _length(w, t) for w in elements}
    reflections = [_reflection_images(beta) for beta in positive_roots(t)]
    graph = nx.DiGraph()
    graph.add_nodes_from(elements)
    for v in elements:
        for r in reflections:
            vr = _compose(v, r)
            if lengths[vr] == lengths[v] + 1:
                graph.add_edge(v, vr)
    logger.info(f"Cover graph of W({t}): {graph.number_of_edges()} covers")
    return nx.transitive_closure(graph)


def bruhat_leq_oracle(
    u: SignedPermutation,
    w: SignedPermutation,
    t: RootSystemType,
    max_rank: Optional[int] = None,
) -> bool:
    """Bruhat comparison read off the transitive closure of the cover graph"""
    _require_member(u, t)
    _require_member(w, t)
    _check_oracle_rank(t, max_rank)
    if u.images == w.images:
        return True
    return _cover_closure(t).has_edge(u.images, w.images)
