"""
Verification harness

Every check returns a VerificationReport. Mismatches are raised inside a
check as IntegrityError and turned into a failing report whose
counterexample carries the offending data plus a 'replay' entry naming
(check, family, rank, nilradical, fault), which is all replay() needs.

Checks:
    lengths      closed-form lengths against inversion counts, halving identities
    pinned       the C6 link pattern with statistics (5, 3, 1, 2)
    conjecture   geometric order == conjugated Bruhat order, dimensions, covers
    witnesses    each closure-table row of the B/D small nilradicals
    coadjoint    consistency of the plain-Bruhat predictions (no geometric oracle)
    bruhat       descent recursion against the cover-graph oracle
    embedding    W(C_n) inside S_2n: lengths and Bruhat order
    isomorphism  D's m_(e2-e1) and m_(e2+e1) through the sign of e1
"""
import json
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Optional, TextIO

import numpy as np
from sympy import Poly

from .config import settings
from .errors import IntegrityError, RootSystemError
from .linkpattern import (
    disjoint_sets,
    halving_identity_check,
    length_formula,
    length_formula_C,
    pattern_of,
    stat_b,
    stat_c,
    stat_r,
)
from .matrixrep import a, coefficients, exp_adjoint, orbit_dimension, representative, root_vector
from .models import VerificationReport
from .orbits import (
    OrbitLabel,
    build_poset,
    closure_relations,
    disagreement_edges,
    move_generated_order,
    predicted_coadjoint_dimension,
)
from .roots import (
    FAMILIES,
    NilradicalId,
    Root,
    RootSystemType,
    abelian_nilradicals,
    minus_root,
    nilradical_from_string,
    nilradical_positive_roots,
    parse_root,
    plus_root,
)
from .weyl import (
    act_on_root,
    bruhat_leq,
    bruhat_leq_oracle,
    involution_from_roots,
    length,
    longest_parabolic,
    to_symmetric_group,
    weyl_group,
)

logger = logging.getLogger(__name__)

CHECK_GROUPS = {
    "lengths": ("lengths", "pinned"),
    "conjecture": ("conjecture", "isomorphism"),
    "witnesses": ("witnesses",),
    "coadjoint": ("coadjoint",),
    "bruhat": ("bruhat", "embedding"),
}

# Lowest rank each family is checked at; D nilradicals start at 3
LENGTHS_MIN_RANK = {"A": 1, "B": 1, "C": 1, "D": 2}
NILRADICAL_MIN_RANK = {"A": 1, "B": 1, "C": 1, "D": 3}

BRUHAT_DEFAULT_TYPES = (("A", 3), ("B", 3), ("B", 4), ("D", 4))
EMBEDDING_MAX_RANK = 3

PINNED_ROOTS = ("e2-e1", "e6+e3", "2e4")
PINNED_STATS = {"arcs": 5, "c": 3, "r": 1, "b": 2}


def _replay_entry(check: str, family: str, rank: int, nid: Optional[NilradicalId], fault: Optional[str]) -> dict:
    return {
        "check": check,
        "family": family,
        "rank": rank,
        "nilradical": str(nid.simple_root) if nid else None,
        "fault": fault,
    }


def _run(
    check: str,
    family: str,
    rank: int,
    body: Callable[[], Optional[dict]],
    nid: Optional[NilradicalId] = None,
    fault: Optional[str] = None,
) -> VerificationReport:
    started = time.perf_counter()
    details, counterexample = None, None
    try:
        details = body()
    except IntegrityError as e:
        logger.error(f"{check} failed on {nid or f'{family}{rank}'}: {e}")
        counterexample = {**e.payload, "message": str(e)}
    except Exception as e:
        logger.exception(f"{check} raised on {nid or f'{family}{rank}'}")
        counterexample = {"error": f"{type(e).__name__}: {e}"}

    if counterexample is not None:
        counterexample["replay"] = _replay_entry(check, family, rank, nid, fault)
    millis = int((time.perf_counter() - started) * 1000)
    status = "fail" if counterexample is not None else "pass"
    logger.info(f"{check} {nid or f'{family}{rank}'}: {status} in {millis} ms")
    return VerificationReport(
        check=check,
        family=family,
        rank=rank,
        nilradical=str(nid) if nid else None,
        status=status,
        counterexample=counterexample,
        millis=millis,
        details=details,
    )


def _names(roots: Iterable[Root]) -> list[str]:
    return [str(r) for r in sorted(roots)]


# Length formulas

def _check_pinned() -> dict:
    t = RootSystemType("C", 6)
    roots = [parse_root(text, 6) for text in PINNED_ROOTS]
    p = pattern_of(roots, t)
    stats = {"arcs": p.size, "c": stat_c(p), "r": stat_r(p), "b": stat_b(p)}
    if stats != PINNED_STATS:
        raise IntegrityError(
            "pinned C6 pattern has the wrong statistics",
            {"roots": _names(roots), "expected": PINNED_STATS, "actual": stats},
        )
    formula = length_formula_C(roots)
    brute = length(involution_from_roots(roots, 6, "C"), t)
    if formula != brute:
        raise IntegrityError(
            "pinned C6 length formula disagrees with the inversion count",
            {"roots": _names(roots), "expected": brute, "actual": formula},
        )
    return {**stats, "length": brute}


def verify_pinned_example() -> VerificationReport:
    return _run("pinned", "C", 6, _check_pinned)


def verify_length_formulas(family: str, n_max: int) -> VerificationReport:
    """
    Closed-form length against the inversion count for every disjoint set,
    ranks LENGTHS_MIN_RANK[family]..n_max; B/C/D also run the halving identities.
    """
    RootSystemType(family, max(n_max, LENGTHS_MIN_RANK[family]))

    def body() -> dict:
        checked = 0
        for n in range(LENGTHS_MIN_RANK[family], n_max + 1):
            t = RootSystemType(family, n)
            for S in disjoint_sets(t):
                roots = sorted(S)
                formula = length_formula(family, roots)
                brute = length(involution_from_roots(roots, t.dimension, family), t)
                if formula != brute:
                    raise IntegrityError(
                        f"length formula of {t} disagrees with the inversion count",
                        {"type": str(t), "roots": _names(roots), "expected": brute, "actual": formula},
                    )
                if family != "A" and not halving_identity_check(roots, n):
                    raise IntegrityError(
                        f"halving identity fails in {t}",
                        {"type": str(t), "roots": _names(roots)},
                    )
                checked += 1
            logger.debug(f"Length formulas hold on {t}")
        details = {"sets": checked}
        if family == "C":
            details["pinned"] = _check_pinned()
        return details

    return _run("lengths", family, n_max, body)


# Conjecture

def _pair_payload(poset, i: int, j: int) -> list[str]:
    return [str(poset.labels[i]), str(poset.labels[j])]


def _check_structure(poset) -> None:
    """Covers of codimension one, a unique minimum, monotone and dense dimensions"""
    nid, dims, leq = poset.nilradical, poset.dims, poset.leq
    for i, j in poset.covers:
        if dims[j] - dims[i] != 1:
            raise IntegrityError(
                f"cover {poset.labels[i]} < {poset.labels[j]} of {nid} drops dimension by {dims[j] - dims[i]}",
                {"nilradical": str(nid), "labels": _pair_payload(poset, i, j), "dims": [dims[i], dims[j]]},
            )
    for i, j in np.argwhere(leq):
        if i != j and dims[i] >= dims[j]:
            raise IntegrityError(
                f"dimension is not monotone on {nid}",
                {"nilradical": str(nid), "labels": _pair_payload(poset, i, j), "dims": [dims[i], dims[j]]},
            )
    minima = [int(i) for i in range(len(poset.labels)) if leq[:, i].sum() == 1]
    if minima != [0] or poset.labels[0].roots:
        raise IntegrityError(
            f"the zero orbit is not the unique minimum of {nid}",
            {"nilradical": str(nid), "minima": [str(poset.labels[i]) for i in minima]},
        )
    top = max(dims)
    ambient = len(nilradical_positive_roots(nid))
    maxima = [i for i in range(len(poset.labels)) if leq[i, :].sum() == 1]
    if top != ambient or len(maxima) != 1:
        raise IntegrityError(
            f"{nid} has no dense orbit of dimension {ambient}",
            {"nilradical": str(nid), "expected": ambient, "actual": top,
             "maxima": [str(poset.labels[i]) for i in maxima]},
        )


def _move_readings(nid: NilradicalId, geometric: np.ndarray) -> dict:
    readings = {
        "restricted": bool(np.array_equal(move_generated_order(nid, True), geometric)),
        "unrestricted": bool(np.array_equal(move_generated_order(nid, False), geometric)),
    }
    if not any(readings.values()):
        raise IntegrityError(
            f"elementary moves reproduce the interval-count order of {nid} under neither reading",
            {"nilradical": str(nid), "readings": readings},
        )
    return readings


def verify_conjecture(nid: NilradicalId, fault: Optional[str] = None) -> VerificationReport:
    """Poset equality, matrix-rank dimensions, parity and cover structure on one nilradical"""
    t = nid.type

    def body() -> dict:
        geometric = build_poset(nid, "geometric", fault)
        bruhat = build_poset(nid, "bruhat_predicted")
        diff = disagreement_edges(geometric, bruhat)
        if diff:
            raise IntegrityError(
                f"geometric and conjugated Bruhat orders differ on {nid}",
                {
                    "nilradical": str(nid),
                    "disagreements": [
                        {
                            "lower": str(geometric.labels[i]),
                            "upper": str(geometric.labels[j]),
                            "geometric": bool(geometric.leq[i, j]),
                            "bruhat_predicted": bool(bruhat.leq[i, j]),
                        }
                        for i, j in diff[:10]
                    ],
                },
            )

        for label, predicted in zip(geometric.labels, geometric.dims):
            predicted_coadjoint_dimension(label)
            actual = orbit_dimension(representative(t, label.roots), t)
            if actual != predicted:
                raise IntegrityError(
                    f"dimension of {label} in {nid} is {actual}, predicted {predicted}",
                    {"nilradical": str(nid), "label": str(label), "expected": predicted, "actual": actual},
                )
        _check_structure(geometric)

        details = {"labels": len(geometric.labels), "covers": len(geometric.covers)}
        if t.family == "A":
            details["move_readings"] = _move_readings(nid, geometric.leq)
        return details

    return _run("conjecture", t.family, t.rank, body, nid=nid, fault=fault)


# Closure-table witnesses

def _degree_matches(coeff, expected: str) -> bool:
    poly = Poly(coeff, a)
    if expected == "vanishing":
        return poly.degree() == 2 and poly.nth(1) == 0 and poly.nth(0) != 0 and poly.nth(2) != 0
    return poly.degree() == int(expected)


def _small_nilradical(family: str, n: int) -> NilradicalId:
    if family not in ("B", "D"):
        raise RootSystemError(f"closure tables exist for B and D only, not {family}")
    return abelian_nilradicals(RootSystemType(family, n))[-1]


def _check_exp_row(t: RootSystemType, nid: NilradicalId, row) -> None:
    X = root_vector(t, row.acting[0])
    for extra in row.acting[1:]:
        X = X + root_vector(t, extra)
    Y = representative(t, row.upper)
    moved = coefficients(exp_adjoint(a, X, Y))
    expected = dict(row.expected)
    if set(moved) != set(expected):
        raise IntegrityError(
            f"witness of row '{row.provenance}' in {nid} has the wrong support",
            {
                "nilradical": str(nid),
                "row": row.provenance,
                "expected": _names(expected),
                "actual": _names(moved),
            },
        )
    for root, degree in expected.items():
        if not _degree_matches(moved[root], degree):
            raise IntegrityError(
                f"witness of row '{row.provenance}' in {nid}: coefficient of {root} is {moved[root]}",
                {
                    "nilradical": str(nid),
                    "row": row.provenance,
                    "root": str(root),
                    "expected": degree,
                    "actual": str(moved[root]),
                },
            )
    if exp_adjoint(0, X, Y).matrix != Y.matrix:
        raise IntegrityError(
            f"Exp(0) is not the identity on row '{row.provenance}'",
            {"nilradical": str(nid), "row": row.provenance},
        )


def _check_torus_row(nid: NilradicalId, row) -> None:
    weights = np.array([r.coeffs for r in row.upper], dtype=int)
    if not set(row.lower) < set(row.upper) or np.linalg.matrix_rank(weights) != len(row.upper):
        raise IntegrityError(
            f"torus row '{row.provenance}' in {nid} is not a coordinate degeneration",
            {"nilradical": str(nid), "lower": _names(row.lower), "upper": _names(row.upper)},
        )


def _check_dimension_row(t: RootSystemType, nid: NilradicalId, row, fault: Optional[str]) -> None:
    dims = [orbit_dimension(representative(t, side), t) for side in (row.lower, row.upper)]
    poset = build_poset(nid, "geometric", fault)
    i = poset.index(OrbitLabel(nid, row.lower))
    j = poset.index(OrbitLabel(nid, row.upper))
    if dims[0] != dims[1] or poset.leq[i, j] or poset.leq[j, i]:
        raise IntegrityError(
            f"row '{row.provenance}' in {nid} is not an incomparable pair of equal dimension",
            {"nilradical": str(nid), "labels": _pair_payload(poset, i, j), "dims": dims},
        )


def verify_exp_witnesses(family: str, n: int, fault: Optional[str] = None) -> VerificationReport:
    """
    Re-derive every closure-table row of the small B/D nilradical.

    Raises:
        RootSystemError: for families A and C, which have no table
    """
    nid = _small_nilradical(family, n)
    t = nid.type

    def body() -> dict:
        counts = {"exp": 0, "torus": 0, "dimension": 0}
        for row in closure_relations(nid, fault):
            if row.witness == "exp":
                _check_exp_row(t, nid, row)
            elif row.witness == "torus":
                _check_torus_row(nid, row)
            else:
                _check_dimension_row(t, nid, row, fault)
            counts[row.witness] += 1
        return counts

    return _run("witnesses", family, n, body, nid=nid, fault=fault)


# Coadjoint predictions

def emit_coadjoint_predictions(nid: NilradicalId) -> VerificationReport:
    """
    Plain Bruhat order on sigma_S with (l(sigma) + #S) / 2.

    Only consistency is checked: parity, monotone dimensions, the zero orbit
    as unique minimum, and the relabelling S -> w(S) that carries the
    adjoint poset onto this one.
    """
    t = nid.type

    def body() -> dict:
        coadjoint = build_poset(nid, "coadjoint")
        adjoint = build_poset(nid, "bruhat_predicted")
        for i, j in np.argwhere(coadjoint.leq):
            if i != j and coadjoint.dims[i] >= coadjoint.dims[j]:
                raise IntegrityError(
                    f"coadjoint dimension is not monotone on {nid}",
                    {"nilradical": str(nid), "labels": _pair_payload(coadjoint, i, j)},
                )
        minima = [i for i in range(len(coadjoint.labels)) if coadjoint.leq[:, i].sum() == 1]
        if minima != [0]:
            raise IntegrityError(
                f"the zero orbit is not the unique coadjoint minimum of {nid}",
                {"nilradical": str(nid), "minima": [str(coadjoint.labels[i]) for i in minima]},
            )

        w = longest_parabolic(nid)
        position = {label.roots: k for k, label in enumerate(coadjoint.labels)}
        relabel = []
        for label in adjoint.labels:
            image = tuple(sorted(act_on_root(w, r) for r in label.roots))
            if image not in position:
                raise IntegrityError(
                    f"w({label}) is not a label of {nid}",
                    {"nilradical": str(nid), "label": str(label), "image": _names(image)},
                )
            relabel.append(position[image])
        if sorted(relabel) != list(range(len(relabel))):
            raise IntegrityError(f"w does not permute the labels of {nid}", {"nilradical": str(nid)})
        perm = np.array(relabel)
        if not np.array_equal(adjoint.leq, coadjoint.leq[np.ix_(perm, perm)]):
            raise IntegrityError(
                f"relabelling by w does not carry the adjoint order onto the coadjoint order of {nid}",
                {"nilradical": str(nid)},
            )
        if [coadjoint.dims[k] for k in relabel] != list(adjoint.dims):
            raise IntegrityError(
                f"relabelling by w does not preserve dimensions on {nid}",
                {"nilradical": str(nid)},
            )
        return {
            "note": "no geometric oracle",
            "labels": len(coadjoint.labels),
            "covers": [_pair_payload(coadjoint, i, j) for i, j in coadjoint.covers],
            "dims": list(coadjoint.dims),
        }

    return _run("coadjoint", t.family, t.rank, body, nid=nid)


# Weyl group checks

def _order_violation(leq: np.ndarray) -> Optional[str]:
    if not leq.diagonal().all():
        return "not reflexive"
    both = leq & leq.T
    np.fill_diagonal(both, False)
    if both.any():
        return "not antisymmetric"
    as_int = leq.astype(int)
    if not np.array_equal((as_int @ as_int) > 0, leq):
        return "not transitive"
    return None


def verify_bruhat_engine(t: RootSystemType, max_rank: Optional[int] = None) -> VerificationReport:
    """Descent recursion against the cover-graph oracle on every pair of W(t)"""

    def body() -> dict:
        group = weyl_group(t)
        lengths = [length(w, t) for w in group]
        k = len(group)
        leq = np.zeros((k, k), dtype=bool)
        for (i, u), (j, w) in product(enumerate(group), repeat=2):
            fast = bruhat_leq(u, w, t)
            if fast != bruhat_leq_oracle(u, w, t, max_rank):
                raise IntegrityError(
                    f"Bruhat recursion disagrees with the oracle on W({t})",
                    {"type": str(t), "u": str(u), "w": str(w), "expected": not fast, "actual": fast},
                )
            if fast and i != j and lengths[i] >= lengths[j]:
                raise IntegrityError(
                    f"Bruhat order is not graded by length on W({t})",
                    {"type": str(t), "u": str(u), "w": str(w)},
                )
            leq[i, j] = fast
        problem = _order_violation(leq)
        if problem:
            raise IntegrityError(f"Bruhat relation on W({t}) is {problem}", {"type": str(t)})
        return {"elements": k, "relations": int(leq.sum())}

    return _run("bruhat", t.family, t.rank, body)


def verify_embedding(n: int) -> VerificationReport:
    """W(C_n) -> S_2n: 2 l_C(w) = l_S2n(w) + #negatives, and Bruhat order is induced"""
    t = RootSystemType("C", n)
    big = RootSystemType("A", 2 * n - 1)

    def body() -> dict:
        group = weyl_group(t)
        images = [to_symmetric_group(w) for w in group]
        for w, image in zip(group, images):
            if 2 * length(w, t) != length(image, big) + w.sign_changes():
                raise IntegrityError(
                    f"length halving fails for {w} in W({t})",
                    {"type": str(t), "w": str(w), "expected": 2 * length(w, t),
                     "actual": length(image, big) + w.sign_changes()},
                )
        for (u, u2), (w, w2) in product(zip(group, images), repeat=2):
            if bruhat_leq(u, w, t) != bruhat_leq(u2, w2, big):
                raise IntegrityError(
                    f"Bruhat order of W({t}) is not induced from S_{2 * n}",
                    {"type": str(t), "u": str(u), "w": str(w)},
                )
        return {"elements": len(group)}

    return _run("embedding", "C", n, body)


def _flip_first(r: Root) -> Root:
    return Root((-r.coeffs[0],) + r.coeffs[1:])


def verify_isomorphic_nilradicals(n: int) -> VerificationReport:
    """D_n's m_(e2-e1) and m_(e2+e1): same conjugated Bruhat poset after e1 -> -e1"""
    t = RootSystemType("D", n)
    minus = NilradicalId(t, minus_root(2, 1, n))
    plus = NilradicalId(t, plus_root(2, 1, n))

    def body() -> dict:
        left = build_poset(minus, "bruhat_predicted")
        right = build_poset(plus, "bruhat_predicted")
        position = {label.roots: k for k, label in enumerate(right.labels)}
        relabel = []
        for label in left.labels:
            image = tuple(sorted(_flip_first(r) for r in label.roots))
            if image not in position:
                raise IntegrityError(
                    f"flipping e1 in {label} leaves {plus}",
                    {"nilradical": str(minus), "label": str(label)},
                )
            relabel.append(position[image])
        perm = np.array(relabel)
        if len(left.labels) != len(right.labels) or not np.array_equal(left.leq, right.leq[np.ix_(perm, perm)]):
            raise IntegrityError(
                f"{minus} and {plus} have non-isomorphic posets",
                {"nilradical": str(minus), "other": str(plus)},
            )
        if [right.dims[k] for k in relabel] != list(left.dims):
            raise IntegrityError(
                f"{minus} and {plus} disagree on dimensions",
                {"nilradical": str(minus), "other": str(plus)},
            )
        return {"labels": len(left.labels)}

    return _run("isomorphism", "D", n, body, nid=minus)


# Suite

@dataclass(frozen=True)
class Task:
    check: str
    family: str
    rank: int
    nilradical: Optional[str] = None
    fault: Optional[str] = None

    def nilradical_id(self) -> NilradicalId:
        return nilradical_from_string(RootSystemType(self.family, self.rank), self.nilradical)


def execute(task: Task, oracle_max_rank: Optional[int] = None) -> VerificationReport:
    """Run one task; unexpected errors become failing reports"""
    try:
        if task.check == "lengths":
            return verify_length_formulas(task.family, task.rank)
        if task.check == "pinned":
            return verify_pinned_example()
        if task.check == "conjecture":
            return verify_conjecture(task.nilradical_id(), task.fault)
        if task.check == "witnesses":
            return verify_exp_witnesses(task.family, task.rank, task.fault)
        if task.check == "coadjoint":
            return emit_coadjoint_predictions(task.nilradical_id())
        if task.check == "bruhat":
            return verify_bruhat_engine(RootSystemType(task.family, task.rank), oracle_max_rank)
        if task.check == "embedding":
            return verify_embedding(task.rank)
        if task.check == "isomorphism":
            return verify_isomorphic_nilradicals(task.rank)
        raise ValueError(f"unknown check {task.check!r}")
    except Exception as e:
        logger.exception(f"Task {task} could not run")
        return VerificationReport(
            check=task.check,
            family=task.family,
            rank=task.rank,
            status="fail",
            counterexample={
                "error": f"{type(e).__name__}: {e}",
                "replay": {
                    "check": task.check,
                    "family": task.family,
                    "rank": task.rank,
                    "nilradical": task.nilradical,
                    "fault": task.fault,
                },
            },
            millis=0,
        )


def _ranks(family: str, low: int, high: int, ranks: Optional[Iterable[int]]) -> list[int]:
    if ranks is None:
        return list(range(low, high + 1))
    chosen = sorted(set(ranks))
    skipped = [r for r in chosen if r < low]
    if skipped:
        logger.warning(f"Skipping {family} ranks {skipped}: below {low}")
    return [r for r in chosen if r >= low]


def _nilradical_tasks(check, family, rank, nilradical, fault) -> list[Task]:
    t = RootSystemType(family, rank)
    if nilradical is not None:
        return [Task(check, family, rank, str(nilradical_from_string(t, nilradical).simple_root), fault)]
    return [Task(check, family, rank, str(nid.simple_root), fault) for nid in abelian_nilradicals(t)]


def plan_tasks(
    checks: Iterable[str] = ("all",),
    families: Iterable[str] = FAMILIES,
    ranks: Optional[Iterable[int]] = None,
    nilradical: Optional[str] = None,
    fault: Optional[str] = None,
    oracle_max_rank: Optional[int] = None,
) -> list[Task]:
    """
    Expand check groups over families and ranks.

    Without ranks every family runs up to its configured ceiling; with
    ranks, nilradical checks run at exactly those ranks and lengths runs up
    to the largest one.
    """
    selected = []
    for name in checks:
        if name == "all":
            selected.extend(CHECK_GROUPS)
        elif name in CHECK_GROUPS:
            selected.append(name)
        else:
            raise ValueError(f"check must be 'all' or one of {tuple(CHECK_GROUPS)}, got {name!r}")
    families = [f for f in FAMILIES if f in set(families)]
    ranks = list(ranks) if ranks is not None else None

    tasks = []
    for group in dict.fromkeys(selected):
        for family in families:
            ceiling = settings.conjecture_ceiling(family)
            if group == "lengths":
                n_max = max(ranks) if ranks else settings.lengths_ceiling(family)
                if n_max >= LENGTHS_MIN_RANK[family]:
                    tasks.append(Task("lengths", family, n_max))
                if family == "C" and ranks is None:
                    tasks.append(Task("pinned", "C", 6))
            elif group == "conjecture":
                for r in _ranks(family, NILRADICAL_MIN_RANK[family], ceiling, ranks):
                    tasks.extend(_nilradical_tasks("conjecture", family, r, nilradical, fault))
                    if family == "D" and nilradical is None:
                        tasks.append(Task("isomorphism", "D", r))
            elif group == "witnesses":
                if family in ("B", "D"):
                    low = 2 if family == "B" else 3
                    for r in _ranks(family, low, ceiling, ranks):
                        tasks.append(Task("witnesses", family, r, fault=fault))
            elif group == "coadjoint":
                for r in _ranks(family, NILRADICAL_MIN_RANK[family], ceiling, ranks):
                    tasks.extend(_nilradical_tasks("coadjoint", family, r, nilradical, None))
            elif group == "bruhat":
                oracle = oracle_max_rank or settings.oracle_ceiling(family)
                if ranks is None:
                    scope = [r for f, r in BRUHAT_DEFAULT_TYPES if f == family]
                else:
                    scope = [r for r in ranks if r >= LENGTHS_MIN_RANK[family]]
                for r in scope:
                    if r > oracle:
                        logger.warning(f"Skipping bruhat on {family}{r}: oracle ceiling is {oracle}")
                        continue
                    tasks.append(Task("bruhat", family, r))
                if family == "C":
                    top = min(EMBEDDING_MAX_RANK, oracle)
                    for r in (range(1, top + 1) if ranks is None else [r for r in ranks if 1 <= r <= top]):
                        tasks.append(Task("embedding", "C", r))
    return tasks


class ReportSink:
    """Serialized JSON-lines writer shared by the worker threads"""

    def __init__(self, stream: Optional[TextIO] = None, path: Optional[str] = None):
        self._lock = threading.Lock()
        self._owned = path is not None
        self.stream = open(path, "a") if path is not None else stream
        self.written = 0

    def write(self, report: VerificationReport) -> None:
        line = json.dumps(report.model_dump(exclude_none=True), sort_keys=True)
        with self._lock:
            if self.stream is not None:
                self.stream.write(line + "\n")
                self.stream.flush()
            self.written += 1

    def close(self) -> None:
        if self._owned and self.stream is not None:
            self.stream.close()

    def __enter__(self) -> "ReportSink":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def run_suite(
    checks: Iterable[str] = ("all",),
    families: Iterable[str] = FAMILIES,
    ranks: Optional[Iterable[int]] = None,
    fault: Optional[str] = None,
    workers: Optional[int] = None,
    sink: Optional[ReportSink] = None,
    nilradical: Optional[str] = None,
    oracle_max_rank: Optional[int] = None,
) -> list[VerificationReport]:
    """
    Run the planned tasks on a thread pool.

    Reports come back (and are written) in task order whatever the number
    of workers.
    """
    tasks = plan_tasks(checks, families, ranks, nilradical, fault, oracle_max_rank)
    workers = workers or settings.workers
    logger.info(f"Running {len(tasks)} verification tasks on {workers} worker(s)")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(execute, task, oracle_max_rank) for task in tasks]
        reports = []
        for future in futures:
            report = future.result()
            if sink is not None:
                sink.write(report)
            reports.append(report)
    failed = sum(1 for r in reports if not r.passed)
    logger.info(f"Suite finished: {len(reports) - failed} passed, {failed} failed")
    return reports


def task_from_report(report: VerificationReport) -> Task:
    """Rebuild the task behind a report, including any injected fault"""
    entry = (report.counterexample or {}).get("replay")
    if entry:
        return Task(entry["check"], entry["family"], entry["rank"], entry.get("nilradical"), entry.get("fault"))
    nilradical = report.nilradical.split(":m_", 1)[1] if report.nilradical else None
    return Task(report.check, report.family, report.rank, nilradical)


def replay(report_line: str) -> VerificationReport:
    """Re-run the check recorded in one JSON-lines report"""
    report = VerificationReport.model_validate(json.loads(report_line))
    task = task_from_report(report)
    logger.info(f"Replaying {task}")
    return execute(task)
