"""
Classical root systems A, B, C, D

Conventions:
- A of rank r lives on N = r+1 coordinates e_1..e_N; B, C, D of rank n on n.
- R+ = {e_j - e_i} (A); {e_j +/- e_i} plus {e_i} (B), {2e_i} (C); {e_j +/- e_i} (D).
- Simple roots: A {e_(i+1) - e_i}; B {e_1, e_(i+1) - e_i}; C {2e_1, e_(i+1) - e_i};
  D {e_2 + e_1, e_(i+1) - e_i}.

A root is positive when its highest-index coefficient is positive.
"""
import re
import logging
from dataclasses import dataclass
from itertools import combinations

from sympy import Matrix

from .cache import cached
from .errors import RootSystemError

logger = logging.getLogger(__name__)

FAMILIES = ("A", "B", "C", "D")

_TERM = re.compile(r"([+-]?)(\d*)e(\d+)")


@dataclass(frozen=True)
class RootSystemType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise RootSystemError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise RootSystemError(f"rank must be a positive integer, got {self.rank!r}")
        if self.family == "D" and self.rank < 2:
            raise RootSystemError("D requires rank >= 2")

    @property
    def dimension(self) -> int:
        """Number of e_i coordinates"""
        return self.rank + 1 if self.family == "A" else self.rank

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True, order=True)
class Root:
    """Integer vector over e_1..e_N; ordering is lexicographic on coeffs"""
    coeffs: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.coeffs)

    @property
    def support(self) -> tuple[int, ...]:
        """1-based indices with nonzero coefficient"""
        return tuple(k + 1 for k, c in enumerate(self.coeffs) if c)

    def coefficient(self, index: int) -> int:
        return self.coeffs[index - 1]

    def __add__(self, other: "Root") -> "Root":
        return Root(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Root") -> "Root":
        return Root(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Root":
        return Root(tuple(-a for a in self.coeffs))

    def __str__(self) -> str:
        terms = []
        for index in reversed(range(1, self.dimension + 1)):
            c = self.coeffs[index - 1]
            if c == 0:
                continue
            if c == 1:
                body = f"e{index}"
            elif c == -1:
                body = f"-e{index}"
            else:
                body = f"{c}e{index}"
            if terms and c > 0:
                body = "+" + body
            terms.append(body)
        return "".join(terms) or "0"


def unit(index: int, dimension: int, scale: int = 1) -> Root:
    coeffs = [0] * dimension
    coeffs[index - 1] = scale
    return Root(tuple(coeffs))


def minus_root(j: int, i: int, dimension: int) -> Root:
    """e_j - e_i"""
    return unit(j, dimension) - unit(i, dimension)


def plus_root(j: int, i: int, dimension: int) -> Root:
    """e_j + e_i"""
    return unit(j, dimension) + unit(i, dimension)


def parse_root(text: str, dimension: int) -> Root:
    """
    Parse the str() form of a root, e.g. 'e3-e1', 'e3+e1', 'e2', '2e1', '-e3+e1'.

    Raises:
        RootSystemError: on malformed text or an index outside 1..dimension
    """
    compact = text.replace(" ", "")
    if not compact:
        raise RootSystemError("empty root string")
    coeffs = [0] * dimension
    position = 0
    for match in _TERM.finditer(compact):
        if match.start() != position:
            break
        sign = -1 if match.group(1) == "-" else 1
        scale = int(match.group(2)) if match.group(2) else 1
        index = int(match.group(3))
        if not 1 <= index <= dimension:
            raise RootSystemError(f"index e{index} out of range 1..{dimension} in {text!r}")
        coeffs[index - 1] += sign * scale
        position = match.end()
    if position != len(compact):
        raise RootSystemError(f"cannot parse root {text!r}")
    return Root(tuple(coeffs))


def is_root(v: Root, t: RootSystemType) -> bool:
    """Shape check against the family"""
    if v.dimension != t.dimension:
        return False
    entries = [c for c in v.coeffs if c]
    if len(entries) == 2:
        if t.family == "A":
            return sorted(entries) == [-1, 1]
        return all(abs(c) == 1 for c in entries)
    if len(entries) == 1:
        if t.family == "B":
            return abs(entries[0]) == 1
        if t.family == "C":
            return abs(entries[0]) == 2
    return False


def is_positive(a: Root) -> bool:
    for c in reversed(a.coeffs):
        if c:
            return c > 0
    return False


def _require_root(a: Root, t: RootSystemType) -> None:
    if not is_root(a, t):
        raise RootSystemError(f"{a} is not a root of {t}")


@cached("positive_roots")
def positive_roots(t: RootSystemType) -> tuple[Root, ...]:
    """R+ ordered by (j, i, shape): e_j - e_i before e_j + e_i, the i = j root last"""
    n = t.dimension
    result = []
    for j in range(1, n + 1):
        for i in range(1, j):
            result.append(minus_root(j, i, n))
            if t.family != "A":
                result.append(plus_root(j, i, n))
        if t.family == "B":
            result.append(unit(j, n))
        elif t.family == "C":
            result.append(unit(j, n, 2))
    return tuple(result)


def simple_roots(t: RootSystemType) -> tuple[Root, ...]:
    n = t.dimension
    chain = [minus_root(i + 1, i, n) for i in range(1, n)]
    if t.family == "A":
        return tuple(chain)
    if t.family == "B":
        return (unit(1, n),) + tuple(chain)
    if t.family == "C":
        return (unit(1, n, 2),) + tuple(chain)
    return (plus_root(2, 1, n),) + tuple(chain)


def maximal_root(t: RootSystemType) -> Root:
    n = t.dimension
    if t.family == "A":
        return minus_root(n, 1, n)
    if t.family == "C":
        return unit(n, n, 2)
    if t.family == "B" and n == 1:
        return unit(1, n)
    return plus_root(n, n - 1, n)


@cached("simple_root_coefficients")
def _coefficient_table(t: RootSystemType) -> dict:
    basis = Matrix([list(alpha.coeffs) for alpha in simple_roots(t)]).T
    table = {}
    for beta in positive_roots(t):
        solution, params = basis.gauss_jordan_solve(Matrix(beta.coeffs))
        if params.shape[0]:
            raise RootSystemError(f"simple roots of {t} are not independent")
        table[beta] = tuple(int(x) for x in solution)
    logger.debug(f"Expanded {len(table)} positive roots of {t} in simple roots")
    return table


def simple_root_coefficients(a: Root, t: RootSystemType) -> tuple[int, ...]:
    """Coefficients of a in the simple roots, in simple_roots(t) order"""
    _require_root(a, t)
    table = _coefficient_table(t)
    if is_positive(a):
        return table[a]
    return tuple(-k for k in table[-a])


def is_strongly_orthogonal(a: Root, b: Root, t: RootSystemType) -> bool:
    return not is_root(a + b, t) and not is_root(a - b, t)


def is_disjoint(a: Root, b: Root) -> bool:
    return not set(a.support) & set(b.support)


def is_strongly_orthogonal_set(roots, t: RootSystemType) -> bool:
    return all(is_strongly_orthogonal(a, b, t) for a, b in combinations(roots, 2))


@dataclass(frozen=True)
class NilradicalId:
    """Abelian nilradical m_alpha of the maximal parabolic deleting simple_root"""
    type: RootSystemType
    simple_root: Root

    def __post_init__(self):
        if self.type.family == "D" and self.type.rank < 3:
            raise RootSystemError("D2 is not simple; nilradicals need D rank >= 3")
        deltas = simple_roots(self.type)
        if self.simple_root not in deltas:
            raise RootSystemError(f"{self.simple_root} is not a simple root of {self.type}")
        k = simple_root_coefficients(maximal_root(self.type), self.type)[deltas.index(self.simple_root)]
        if k != 1:
            raise RootSystemError(
                f"m_{self.simple_root} of {self.type} is not abelian (coefficient {k} in the maximal root)"
            )

    @property
    def index(self) -> int:
        """Position of the deleted root in simple_roots(type)"""
        return simple_roots(self.type).index(self.simple_root)

    def __str__(self) -> str:
        return f"{self.type}:m_{self.simple_root}"


def abelian_nilradicals(t: RootSystemType) -> tuple[NilradicalId, ...]:
    """
    All abelian nilradicals of t, in simple-root order.

    D2 is not simple and has none here.
    """
    if t.family == "D" and t.rank < 3:
        raise RootSystemError("D2 is not simple; nilradicals need D rank >= 3")
    theta = simple_root_coefficients(maximal_root(t), t)
    return tuple(
        NilradicalId(t, alpha)
        for alpha, k in zip(simple_roots(t), theta)
        if k == 1
    )


def nilradical_from_string(t: RootSystemType, text: str) -> NilradicalId:
    """Select a nilradical by its deleted simple root, e.g. 'e3-e2'"""
    alpha = parse_root(text, t.dimension)
    for nid in abelian_nilradicals(t):
        if nid.simple_root == alpha:
            return nid
    choices = ", ".join(str(nid.simple_root) for nid in abelian_nilradicals(t))
    raise RootSystemError(f"{text!r} does not select an abelian nilradical of {t} (choices: {choices})")


@cached("nilradical_roots")
def nilradical_positive_roots(nid: NilradicalId) -> frozenset[Root]:
    """Positive roots with positive coefficient at the deleted simple root"""
    k = nid.index
    table = _coefficient_table(nid.type)
    return frozenset(beta for beta in positive_roots(nid.type) if table[beta][k] > 0)


def parabolic_positive_roots(nid: NilradicalId) -> frozenset[Root]:
    return frozenset(positive_roots(nid.type)) - nilradical_positive_roots(nid)
