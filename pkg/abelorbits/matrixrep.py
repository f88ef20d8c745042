"""
Exact matrix realizations of sl_N, so_(2n+1), sp_2n and so_2n

Index dictionary (basis vectors v_1..v_N):
- sl_N: v_p has weight e_(N+1-p).
- so/sp: v_p has weight e_(n+1-p) for p <= n, -e_(p-N+n) for p > N-n,
  and weight 0 at the middle index n+1 of so_(2n+1).

The bilinear form is antidiagonal (symmetric for so; +1 above and -1 below
the antidiagonal middle for sp), so the Borel subalgebra is upper triangular.
Root vectors:
    sl:  X = E_pq
    so:  X = E_pq - E_(q'p')
    sp:  X = E_pq - eps_p eps_q E_(q'p'), and X = E_pp' for long roots
where p' = N+1-p, eps = +1 on the first n indices and -1 after, and (p, q)
is the first entry (row-major) of weight alpha.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Union

import sympy
from sympy import ImmutableMatrix, Matrix, QQ, Rational, Symbol, expand, factorial, zeros
from sympy.polys.matrices import DomainMatrix

from .cache import cached
from .errors import NotInNilradicalError, NotNilpotentError, RootSystemError
from .roots import Root, RootSystemType, is_root, positive_roots, unit

logger = logging.getLogger(__name__)

a = Symbol("a")

Scalar = Union[int, Rational, sympy.Expr]


@dataclass(frozen=True)
class LieMatrix:
    matrix: ImmutableMatrix
    algebra: RootSystemType

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def is_zero(self) -> bool:
        return all(expand(x) == 0 for x in self.matrix)

    def __add__(self, other: "LieMatrix") -> "LieMatrix":
        _require_same(self, other)
        return LieMatrix(ImmutableMatrix(self.matrix + other.matrix), self.algebra)

    def __sub__(self, other: "LieMatrix") -> "LieMatrix":
        _require_same(self, other)
        return LieMatrix(ImmutableMatrix(self.matrix - other.matrix), self.algebra)

    def scale(self, c: Scalar) -> "LieMatrix":
        return LieMatrix(ImmutableMatrix(self.matrix * c), self.algebra)


def _require_same(x: LieMatrix, y: LieMatrix) -> None:
    if x.algebra != y.algebra or x.matrix.shape != y.matrix.shape:
        raise RootSystemError(f"cannot combine matrices of {x.algebra} and {y.algebra}")


def matrix_size(t: RootSystemType) -> int:
    if t.family == "A":
        return t.dimension
    if t.family == "B":
        return 2 * t.rank + 1
    return 2 * t.rank


@cached("basis_weights")
def _weights(t: RootSystemType) -> tuple[Root, ...]:
    """Weight of each basis vector v_1..v_N"""
    N, n = matrix_size(t), t.dimension
    if t.family == "A":
        return tuple(unit(N + 1 - p, n) for p in range(1, N + 1))
    zero = Root((0,) * n)
    weights = []
    for p in range(1, N + 1):
        if p <= n:
            weights.append(unit(n + 1 - p, n))
        elif p > N - n:
            weights.append(-unit(p - (N - n), n))
        else:
            weights.append(zero)
    return tuple(weights)


def _eps(p: int, t: RootSystemType) -> int:
    return 1 if p <= t.rank else -1


def form_matrix(t: RootSystemType) -> ImmutableMatrix:
    """Antidiagonal form J with X^T J + J X = 0 on the algebra (so/sp only)"""
    N = matrix_size(t)
    J = zeros(N, N)
    for p in range(1, N + 1):
        J[p - 1, N - p] = _eps(p, t) if t.family == "C" else 1
    return ImmutableMatrix(J)


@cached("root_entries")
def _root_entries(t: RootSystemType) -> dict:
    """Root -> first (p, q) of that weight, 1-based"""
    weights = _weights(t)
    N = len(weights)
    entries = {}
    for p in range(1, N + 1):
        for q in range(1, N + 1):
            if p == q:
                continue
            w = weights[p - 1] - weights[q - 1]
            if is_root(w, t) and w not in entries:
                entries[w] = (p, q)
    return entries


def _elementary(N: int, p: int, q: int) -> Matrix:
    m = zeros(N, N)
    m[p - 1, q - 1] = 1
    return m


def root_vector(t: RootSystemType, alpha: Root) -> LieMatrix:
    if not is_root(alpha, t):
        raise RootSystemError(f"{alpha} is not a root of {t}")
    N = matrix_size(t)
    p, q = _root_entries(t)[alpha]
    m = _elementary(N, p, q)
    if t.family != "A":
        pb, qb = N + 1 - p, N + 1 - q
        if (qb, pb) != (p, q):
            sign = _eps(p, t) * _eps(q, t) if t.family == "C" else 1
            m[qb - 1, pb - 1] -= sign
    return LieMatrix(ImmutableMatrix(m), t)


@cached("cartan_basis")
def cartan_basis(t: RootSystemType) -> tuple[LieMatrix, ...]:
    N = matrix_size(t)
    basis = []
    for p in range(1, t.rank + 1):
        if t.family == "A":
            h = _elementary(N, p, p) - _elementary(N, p + 1, p + 1)
        else:
            h = _elementary(N, p, p) - _elementary(N, N + 1 - p, N + 1 - p)
        basis.append(LieMatrix(ImmutableMatrix(h), t))
    return tuple(basis)


@cached("borel_basis")
def borel_basis(t: RootSystemType) -> tuple[LieMatrix, ...]:
    return cartan_basis(t) + tuple(root_vector(t, beta) for beta in positive_roots(t))


def zero_matrix(t: RootSystemType) -> LieMatrix:
    N = matrix_size(t)
    return LieMatrix(ImmutableMatrix(zeros(N, N)), t)


def representative(t: RootSystemType, S: Iterable[Root]) -> LieMatrix:
    """Sum of root vectors over S"""
    total = zero_matrix(t)
    for alpha in sorted(S):
        total = total + root_vector(t, alpha)
    return total


def in_algebra(X: LieMatrix) -> bool:
    t = X.algebra
    if t.family == "A":
        return expand(X.matrix.trace()) == 0
    J = form_matrix(t)
    return all(expand(x) == 0 for x in X.matrix.T * J + J * X.matrix)


def bracket(X: LieMatrix, Y: LieMatrix) -> LieMatrix:
    _require_same(X, Y)
    return LieMatrix(ImmutableMatrix(X.matrix * Y.matrix - Y.matrix * X.matrix), X.algebra)


def nilpotency_order(X: LieMatrix) -> int:
    """Least m with X^m = 0"""
    power = Matrix(X.matrix)
    for m in range(1, X.size + 1):
        if all(expand(x) == 0 for x in power):
            return m
        power = power * X.matrix
    raise NotNilpotentError(f"matrix of {X.algebra} has no vanishing power up to {X.size}")


def exp_adjoint(coeff: Scalar, X: LieMatrix, Y: LieMatrix) -> LieMatrix:
    """
    Exp(coeff X).Y = sum_k coeff^k / k! ad_X^k (Y), entries expanded.

    coeff may be a rational or an expression in the symbol `a`.
    """
    nilpotency_order(X)
    _require_same(X, Y)
    result = Matrix(Y.matrix)
    term = Y
    for k in range(1, 2 * X.size):
        term = bracket(X, term)
        if term.is_zero():
            break
        result += term.matrix * coeff ** k / factorial(k)
    return LieMatrix(ImmutableMatrix(result.applyfunc(expand)), X.algebra)


def coefficients(Y: LieMatrix) -> dict[Root, sympy.Expr]:
    """
    Expansion of Y over the positive root vectors (nonzero terms only).

    Raises:
        NotInNilradicalError: if Y has a component outside the span
    """
    t = Y.algebra
    entries = _root_entries(t)
    residual = Matrix(Y.matrix)
    result = {}
    for beta in positive_roots(t):
        p, q = entries[beta]
        c = expand(Y.matrix[p - 1, q - 1])
        if c == 0:
            continue
        result[beta] = c
        residual -= root_vector(t, beta).matrix * c
    if any(expand(x) != 0 for x in residual):
        raise NotInNilradicalError(f"matrix is not in the nilradical of the Borel of {t}")
    return result


def weight_support(Y: LieMatrix) -> frozenset[Root]:
    return frozenset(coefficients(Y))


@cached("borel_domain")
def _borel_domain(t: RootSystemType) -> tuple:
    return tuple(DomainMatrix.from_Matrix(Matrix(b.matrix)).convert_to(QQ) for b in borel_basis(t))


def orbit_dimension(x: LieMatrix, t: RootSystemType) -> int:
    """Rank of y -> [y, x] on the Borel subalgebra, over QQ"""
    if x.algebra != t:
        raise RootSystemError(f"matrix of {x.algebra} used with {t}")
    coefficients(x)
    N = x.size
    xd = DomainMatrix.from_Matrix(Matrix(x.matrix)).convert_to(QQ)
    rows = []
    for bd in _borel_domain(t):
        commutator = bd.matmul(xd).sub(xd.matmul(bd))
        rows.append(commutator.to_Matrix().reshape(1, N * N))
    stacked = DomainMatrix.from_Matrix(Matrix.vstack(*rows)).convert_to(QQ)
    return int(stacked.rank())


def dump(X: LieMatrix) -> str:
    """Plain-text grid, one row per line"""
    cells = [[str(x) for x in X.matrix.row(i)] for i in range(X.size)]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)
