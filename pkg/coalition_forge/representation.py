# representation.py
"""
Game representations by user-blind facilities: build the minimal one,
induce games from assignments, and move between an assignment and its
trivial expansions.
"""
import logging
import random
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from coalition_forge.config import Limits
from coalition_forge.core import (
    Assignment,
    Coalition,
    CoalitionFamily,
    Facility,
    Game,
    InvalidAssignment,
    InvalidFamily,
    MeasurabilityViolation,
    NotRepresentable,
    Report,
    Violation,
)
from coalition_forge.exactlin import SolveStatus, null_space, solve
from coalition_forge.structure import mm_matrix, span_coefficients

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LocalGame:
    facility_id: str
    game: Game


def _assignment_from_coefficients(family: CoalitionFamily, coefficients: Mapping[Coalition, Fraction]) -> Assignment:
    facilities = tuple(
        Facility(family.label(s), s, coefficients[s])
        for s in family.coalitions
        if coefficients.get(s, 0) != 0
    )
    return Assignment(family.players, facilities)


def minimal_representation(game: Game, limits: Optional[Limits] = None) -> Assignment:
    """One facility per coalition S with a nonzero MM coefficient c_S, user-set S, cost c_S."""
    coefficients = span_coefficients(game, limits)
    if coefficients is None:
        raise NotRepresentable("game is not in the span of the MM-games of its family")
    return _assignment_from_coefficients(game.family, coefficients)


def _measurability_violations(assignment: Assignment, family: CoalitionFamily) -> List[Violation]:
    out = []
    if assignment.players != family.players:
        out.append(Violation("players", None, "assignment and family have different player sets"))
        return out
    for f in assignment.facilities:
        if f.users not in family:
            out.append(Violation(
                "measurability", f.users,
                f"facility {f.id}: user-set {family.players.describe(f.users)} is not in C",
            ))
    return out


def _require_measurable(assignment: Assignment, family: CoalitionFamily) -> None:
    violations = _measurability_violations(assignment, family)
    if violations:
        raise MeasurabilityViolation("; ".join(v.message for v in violations))


def induced_game(assignment: Assignment, family: CoalitionFamily) -> Game:
    """v(S) = total cost of the facilities visited by some member of S."""
    _require_measurable(assignment, family)
    return Game(family, {
        s: sum((f.cost for f in assignment.facilities if f.users.meets(s)), Fraction(0))
        for s in family.coalitions
    })


def local_games(assignment: Assignment, family: CoalitionFamily) -> List[LocalGame]:
    _require_measurable(assignment, family)
    zero = Fraction(0)
    return [
        LocalGame(f.id, Game(family, {s: f.cost if f.users.meets(s) else zero for s in family.coalitions}))
        for f in assignment.facilities
    ]


def validate_representation(assignment: Assignment, game: Game) -> Report:
    family = game.family
    violations = _measurability_violations(assignment, family)
    if violations:
        return Report(tuple(violations))
    induced = induced_game(assignment, family)
    for s in family.coalitions:
        if induced[s] != game[s]:
            return Report((Violation(
                "mismatch", s,
                f"mismatch at {family.players.describe(s)}: {induced[s]} != {game[s]}",
            ),))
    return Report()


def trivial_expansion(assignment: Assignment, seed: int, zero_facilities: int, max_replicas: int,
                      family: CoalitionFamily) -> Assignment:
    """
    Add zero_facilities zero-cost facilities with user-sets drawn from the
    family, then split every facility into 1..max_replicas replicas with
    integer costs (the last replica takes the remainder) and the same user-set.
    """
    if max_replicas < 1:
        raise ValueError("max_replicas must be at least 1")
    if zero_facilities < 0:
        raise ValueError("zero_facilities must be non-negative")
    if zero_facilities and not family.coalitions:
        raise InvalidFamily("no coalitions to draw zero-cost user-sets from")
    rng = random.Random(seed)
    taken = {f.id for f in assignment.facilities}

    def fresh(base: str) -> str:
        n = 1
        while f"{base}#{n}" in taken:
            n += 1
        name = f"{base}#{n}"
        taken.add(name)
        return name

    enlarged = list(assignment.facilities)
    for _ in range(zero_facilities):
        users = rng.choice(family.coalitions)
        enlarged.append(Facility(fresh(family.label(users) + "~zero"), users, Fraction(0)))

    out: List[Facility] = []
    for f in enlarged:
        replicas = rng.randint(1, max_replicas)
        if replicas == 1:
            out.append(f)
            continue
        spread = max(1, abs(f.cost.numerator) // f.cost.denominator + 5)
        parts = [Fraction(rng.randint(-spread, spread)) for _ in range(replicas - 1)]
        parts.append(f.cost - sum(parts, Fraction(0)))
        for part in parts:
            out.append(Facility(fresh(f.id), f.users, part))
    logger.debug("[representation] trivial_expansion: %d -> %d facilities (seed %d)",
                 len(assignment.facilities), len(out), seed)
    return Assignment(assignment.players, tuple(out))


def reduce_to_minimal(assignment: Assignment, family: CoalitionFamily) -> Assignment:
    """Group facilities by full user-set, sum their costs and drop zero groups."""
    _require_measurable(assignment, family)
    grouped: Dict[Coalition, Fraction] = OrderedDict()
    for f in assignment.facilities:
        grouped[f.users] = grouped.get(f.users, Fraction(0)) + f.cost
    return _assignment_from_coefficients(family, grouped)


def divergent_representations(game: Game, limits: Optional[Limits] = None) -> Optional[Tuple[Assignment, Assignment]]:
    """
    Two representations of the same game built from different MM expansions.
    Exists exactly when the game is representable and the family lacks full span.
    """
    family = game.family
    matrix = mm_matrix(family, limits)
    result = solve(matrix, game.vector())
    if result.status is not SolveStatus.INFINITE:
        return None
    shift = null_space(matrix)[0]
    first = dict(zip(family.coalitions, result.solution))
    second = {s: c + d for s, c, d in zip(family.coalitions, result.solution, shift)}
    a, b = _assignment_from_coefficients(family, first), _assignment_from_coefficients(family, second)
    if a == b:
        raise InvalidAssignment("null-space shift produced an identical representation")
    return a, b
