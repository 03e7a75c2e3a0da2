# structure.py
"""
Structure of a coalition family: MM-games, the MM matrix, full span,
hierarchies and semi-algebras.

MM matrix convention: rows and columns follow the family's canonical order and
column S is the MM-game w_S, so entry (T, S) is 1 iff S meets T.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from coalition_forge.config import Limits, resolve_limits
from coalition_forge.core import (
    Coalition,
    CoalitionFamily,
    Game,
    GuardExceeded,
    InvalidFamily,
    NotSemiAlgebra,
    require_valid,
)
from coalition_forge.exactlin import RationalMatrix, SolveStatus, is_invertible, rank, solve

logger = logging.getLogger(__name__)


def meets(s: Coalition, t: Coalition) -> bool:
    return s.meets(t)


def misses(s: Coalition, t: Coalition) -> bool:
    return s.misses(t)


def mm_game(family: CoalitionFamily, s: Coalition) -> Game:
    family.index_of(s)
    return Game(family, {t: Fraction(1 if s.meets(t) else 0) for t in family.coalitions})


def unanimity_game(family: CoalitionFamily, s: Coalition) -> Game:
    """The unanimity game u_S restricted to the family: 1 on supersets of S."""
    family.index_of(s)
    return Game(family, {t: Fraction(1 if s.issubset(t) else 0) for t in family.coalitions})


def _check_matrix_guard(family: CoalitionFamily, limits: Limits) -> None:
    if len(family) > limits.guard_matrix:
        raise GuardExceeded(f"|C|={len(family)} exceeds the matrix guard {limits.guard_matrix}")


def mm_matrix(family: CoalitionFamily, limits: Optional[Limits] = None) -> RationalMatrix:
    limits = resolve_limits(limits)
    _check_matrix_guard(family, limits)
    cs = family.coalitions
    return RationalMatrix(len(cs), len(cs), tuple(1 if s.meets(t) else 0 for t in cs for s in cs))


def unanimity_matrix(family: CoalitionFamily, limits: Optional[Limits] = None) -> RationalMatrix:
    """Columns are the restricted unanimity games v_S, rows the coalitions T."""
    limits = resolve_limits(limits)
    _check_matrix_guard(family, limits)
    cs = family.coalitions
    return RationalMatrix(len(cs), len(cs), tuple(1 if s.issubset(t) else 0 for t in cs for s in cs))


def has_full_span(family: CoalitionFamily, limits: Optional[Limits] = None) -> bool:
    return is_invertible(mm_matrix(family, limits))


def is_semi_algebra(family: CoalitionFamily) -> bool:
    full = family.full
    if full not in family:
        return False
    return all(c == full or (full - c) in family for c in family.coalitions)


@dataclass(frozen=True)
class Hierarchy:
    """
    An ordering S_1..S_l of the family. witnesses[k-2] is a coalition that
    misses S_k and meets S_1..S_{k-1}; it may be None (or the tuple empty)
    when the ordering came from outside and no witness was recorded.
    """
    sequence: Tuple[Coalition, ...]
    witnesses: Tuple[Optional[Coalition], ...] = ()

    @property
    def first(self) -> Coalition:
        return self.sequence[0]

    def __len__(self) -> int:
        return len(self.sequence)


def semi_algebra_hierarchy(family: CoalitionFamily) -> Hierarchy:
    if not is_semi_algebra(family):
        raise NotSemiAlgebra("family is not a semi-algebra")
    full = family.full
    rest = sorted((c for c in family.coalitions if c != full), key=lambda c: (-c.size, c.indices()))
    return Hierarchy((full,) + tuple(rest), tuple(full - c for c in rest))


def _meet_masks(coalitions: Tuple[Coalition, ...]) -> List[int]:
    # bit i of meet_masks[j] is set iff coalitions[j] meets coalitions[i]
    out = []
    for s in coalitions:
        m = 0
        for i, t in enumerate(coalitions):
            if s.meets(t):
                m |= 1 << i
        out.append(m)
    return out


def find_hierarchy(family: CoalitionFamily, limits: Optional[Limits] = None) -> Optional[Hierarchy]:
    """
    Find one hierarchy, or None when none exists. Semi-algebras take the
    constructive ordering; otherwise a depth-first search over positions picks
    S_k and its first valid witness in canonical order.
    """
    require_valid(family)
    if is_semi_algebra(family):
        return semi_algebra_hierarchy(family)
    limits = resolve_limits(limits)
    cs = family.coalitions
    size = len(cs)
    if size > limits.guard_hierarchy:
        raise GuardExceeded(f"|C|={size} exceeds the hierarchy search guard {limits.guard_hierarchy}")
    meet = _meet_masks(cs)
    everything = (1 << size) - 1
    failed: Optional[Set[int]] = set() if size <= limits.hierarchy_memo else None
    order: List[int] = []
    witnesses: List[int] = []

    def witness_for(k: int, placed: int) -> Optional[int]:
        for t in range(size):
            if not meet[t] >> k & 1 and meet[t] & placed == placed:
                return t
        return None

    # feasibility from here on depends only on the placed set
    def extend(placed: int) -> bool:
        if placed == everything:
            return True
        if failed is not None and placed in failed:
            return False
        for k in range(size):
            if placed >> k & 1:
                continue
            t = witness_for(k, placed)
            if t is None:
                continue
            order.append(k)
            witnesses.append(t)
            if extend(placed | 1 << k):
                return True
            order.pop()
            witnesses.pop()
        if failed is not None:
            failed.add(placed)
        return False

    for first in range(size):
        if meet[first] != everything:
            continue
        order[:] = [first]
        witnesses[:] = []
        if extend(1 << first):
            h = Hierarchy(tuple(cs[i] for i in order), tuple(cs[t] for t in witnesses))
            logger.debug("[structure] find_hierarchy: found ordering of %d coalitions", size)
            return h
    logger.debug("[structure] find_hierarchy: no hierarchy for %d coalitions", size)
    return None


def _resolve_witnesses(family: CoalitionFamily, h: Hierarchy) -> Optional[List[Coalition]]:
    """Witnesses T_2..T_l, preferring recorded ones; None if the ordering is not a hierarchy."""
    seq = h.sequence
    if len(seq) != len(family) or set(seq) != set(family.coalitions) or len(set(seq)) != len(seq):
        return None
    first = seq[0]
    if not all(first.meets(s) for s in seq[1:]):
        return None
    recorded = h.witnesses if len(h.witnesses) == len(seq) - 1 else (None,) * (len(seq) - 1)

    def valid(t: Coalition, k: int) -> bool:
        return t in family and t.misses(seq[k]) and all(t.meets(s) for s in seq[:k])

    out = []
    for k in range(1, len(seq)):
        t = recorded[k - 1]
        if t is None or not valid(t, k):
            t = next((c for c in family.coalitions if valid(c, k)), None)
            if t is None:
                return None
        out.append(t)
    return out


def validate_hierarchy(family: CoalitionFamily, h: Hierarchy) -> bool:
    return _resolve_witnesses(family, h) is not None


def hierarchy_inverse(family: CoalitionFamily, h: Hierarchy) -> RationalMatrix:
    """
    Inverse of the MM matrix built from a hierarchy instead of by elimination.
    Column U holds the MM-basis expansion of the unit game at U.
    """
    witnesses = _resolve_witnesses(family, h)
    if witnesses is None:
        raise InvalidFamily("ordering is not a hierarchy for this family")
    seq = h.sequence
    n = len(seq)
    idx = [family.index_of(s) for s in seq]
    eta: Dict[int, List[Fraction]] = {}
    for k in range(n - 1, 0, -1):
        t = witnesses[k - 1]
        vec = [Fraction(0)] * n
        vec[idx[0]] += 1
        vec[family.index_of(t)] -= 1
        for j in range(k + 1, n):
            if t.misses(seq[j]):
                vec = [a - b for a, b in zip(vec, eta[j])]
        eta[k] = vec
    vec = [Fraction(0)] * n
    vec[idx[0]] = Fraction(1)
    for j in range(1, n):
        vec = [a - b for a, b in zip(vec, eta[j])]
    eta[0] = vec
    columns: List[List[Fraction]] = [[]] * n
    for k in range(n):
        columns[idx[k]] = eta[k]
    return RationalMatrix.from_columns(columns)


def span_coefficients(game: Game, limits: Optional[Limits] = None) -> Optional[Dict[Coalition, Fraction]]:
    """
    Coefficients c_S with v = sum c_S w_S, or None when v is outside the span.
    Unique under full span; otherwise one particular solution (free coefficients 0).
    """
    family = game.family
    result = solve(mm_matrix(family, limits), game.vector())
    if result.status is SolveStatus.NONE:
        return None
    if result.status is SolveStatus.INFINITE:
        logger.debug("[structure] span_coefficients: MM system has nullity %d, returning a particular solution",
                     result.nullity)
    return dict(zip(family.coalitions, result.solution))


def has_uniform_deletions(family: CoalitionFamily) -> bool:
    """For every S in C, whether S minus {i} is in C does not depend on the choice of i in S."""
    for s in family.coalitions:
        if s.size < 2:
            continue
        outcomes = {(s - Coalition(1 << i)) in family for i in s.indices()}
        if len(outcomes) > 1:
            return False
    return True


@dataclass(frozen=True)
class FamilyReport:
    size: int
    semi_algebra: bool
    hierarchy: Optional[Hierarchy]
    hierarchy_searched: bool
    full_span: bool
    mm_rank: int
    uniform_deletions: bool


def classify(family: CoalitionFamily, limits: Optional[Limits] = None) -> FamilyReport:
    require_valid(family)
    limits = resolve_limits(limits)
    matrix = mm_matrix(family, limits)
    r = rank(matrix)
    try:
        hierarchy = find_hierarchy(family, limits)
        searched = True
    except GuardExceeded as e:
        logger.warning("[structure] classify: %s", e)
        hierarchy, searched = None, False
    return FamilyReport(
        size=len(family),
        semi_algebra=is_semi_algebra(family),
        hierarchy=hierarchy,
        hierarchy_searched=searched,
        full_span=r == len(family),
        mm_rank=r,
        uniform_deletions=has_uniform_deletions(family),
    )
