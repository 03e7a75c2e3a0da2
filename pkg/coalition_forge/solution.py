# solution.py
"""
Allocations and game diagnostics.

chi is the equitable solution of the minimal representation; on the family of
all coalitions it coincides with the Shapley value. The unanimity (Harsanyi)
split is kept as a separate, explicitly labeled allocation.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from coalition_forge.config import Limits, resolve_limits
from coalition_forge.core import (
    Allocation,
    Assignment,
    Coalition,
    CoalitionFamily,
    EmptyUserSet,
    Game,
    GuardExceeded,
    InvalidPartition,
    NoFullSpan,
    NotCanonical,
    NotSemiAlgebra,
    PlayerSet,
)
from coalition_forge.exactlin import SolveStatus, solve
from coalition_forge.representation import LocalGame, minimal_representation
from coalition_forge.structure import has_full_span, is_semi_algebra, span_coefficients, unanimity_game, unanimity_matrix

logger = logging.getLogger(__name__)


# --- equitable solution ---
def equitable_solution(assignment: Assignment) -> Allocation:
    players = assignment.players
    payoffs = {name: Fraction(0) for name in players.names}
    for f in assignment.facilities:
        if f.users.is_empty:
            raise EmptyUserSet(f"facility {f.id} has an empty user-set")
        share = f.cost / f.users.size
        for i in f.users.indices():
            payoffs[players.names[i]] += share
    return Allocation(players, payoffs, assignment.total_cost)


def _require_full_span(game: Game, limits: Optional[Limits]) -> None:
    if not has_full_span(game.family, limits):
        raise NoFullSpan("the MM-games of the family do not form a basis; representations may disagree")


def chi(game: Game, limits: Optional[Limits] = None) -> Allocation:
    _require_full_span(game, limits)
    return equitable_solution(minimal_representation(game, limits))


# --- canonical family ---
def _canonical_family(players: PlayerSet, limits: Limits) -> CoalitionFamily:
    return CoalitionFamily.canonical(players, guard_n=limits.guard_n)


def shapley(game: Game, limits: Optional[Limits] = None) -> Allocation:
    """phi_i = sum over S not containing i of |S|!(n-1-|S|)!/n! * (v(S+i) - v(S)), with v(empty) = 0."""
    limits = resolve_limits(limits)
    family = game.family
    n = family.players.size
    if n > limits.guard_n:
        raise GuardExceeded(f"|N|={n} exceeds the guard {limits.guard_n}")
    if not family.is_canonical:
        raise NotCanonical("the Shapley value needs every nonempty coalition in the family")
    value = [Fraction(0)] * (1 << n)
    for c, x in game.values.items():
        value[c.mask] = x
    weight = [Fraction(factorial(s) * factorial(n - 1 - s), factorial(n)) for s in range(n)]
    phi = [Fraction(0)] * n
    for mask in range((1 << n) - 1):
        w = weight[mask.bit_count()]
        for i in range(n):
            if not mask >> i & 1:
                phi[i] += w * (value[mask | 1 << i] - value[mask])
    names = family.players.names
    return Allocation(family.players, dict(zip(names, phi)), value[(1 << n) - 1])


def equivalent_game(game: Game, limits: Optional[Limits] = None) -> Game:
    """Extend v to every coalition by evaluating its MM expansion sum alpha_S w_S on all of 2^N."""
    limits = resolve_limits(limits)
    _require_full_span(game, limits)
    alpha = span_coefficients(game, limits)
    target = _canonical_family(game.family.players, limits)
    terms = [(s.mask, a) for s, a in alpha.items() if a != 0]
    return Game(target, {
        t: sum((a for m, a in terms if m & t.mask), Fraction(0)) for t in target.coalitions
    })


def naive_zero_extension(game: Game, limits: Optional[Limits] = None) -> Game:
    limits = resolve_limits(limits)
    target = _canonical_family(game.family.players, limits)
    zero = Fraction(0)
    return Game(target, {t: game.values.get(t, zero) for t in target.coalitions})


# --- unanimity decomposition ---
@dataclass(frozen=True)
class UnanimityDecomposition:
    family: CoalitionFamily
    coefficients: Mapping[Coalition, Fraction]
    # False when the restricted unanimity games are dependent and these are one choice among many
    unique: bool

    def game(self) -> Game:
        total = Game.zero(self.family)
        for s, d in self.coefficients.items():
            if d != 0:
                total = total + unanimity_game(self.family, s).scale(d)
        return total


def unanimity_decomposition(game: Game, limits: Optional[Limits] = None) -> Optional[UnanimityDecomposition]:
    family = game.family
    result = solve(unanimity_matrix(family, limits), game.vector())
    if result.status is SolveStatus.NONE:
        return None
    return UnanimityDecomposition(
        family, dict(zip(family.coalitions, result.solution)), result.status is SolveStatus.UNIQUE,
    )


def harsanyi_allocation(game: Game, limits: Optional[Limits] = None) -> Optional[Allocation]:
    """Equal split of every unanimity coefficient d_S over S. Not chi off the canonical family."""
    decomposition = unanimity_decomposition(game, limits)
    if decomposition is None:
        return None
    players = game.family.players
    payoffs = {name: Fraction(0) for name in players.names}
    total = Fraction(0)
    for s, d in decomposition.coefficients.items():
        total += d
        for i in s.indices():
            payoffs[players.names[i]] += d / s.size
    return Allocation(players, payoffs, total)


def unanimity_local_games(decomposition: UnanimityDecomposition) -> List[LocalGame]:
    family = decomposition.family
    return [
        LocalGame(family.label(s), unanimity_game(family, s).scale(d))
        for s, d in ((s, decomposition.coefficients.get(s, 0)) for s in family.coalitions)
        if d != 0
    ]


# --- duality ---
def dual_game(game: Game) -> Game:
    """v*(S) = v(N) - v(N minus S)."""
    family = game.family
    if not is_semi_algebra(family):
        raise NotSemiAlgebra("dual games need N in the family and every complement")
    full = family.full
    vn = game[full]
    return Game(family, {s: vn - game[full - s] for s in family.coalitions})


# --- diagnostics ---
def is_symmetric(game: Game, i: str, j: str) -> bool:
    """
    Players i and j are symmetric when T+i is in C exactly when T+j is, for
    every T avoiding both, and the two values agree whenever they exist.
    """
    if i == j:
        raise ValueError("symmetry needs two distinct players")
    players = game.family.players
    si, sj = players.singleton(i), players.singleton(j)
    # only coalitions holding exactly one of the two constrain anything
    for s in game.family.coalitions:
        for own, other in ((si, sj), (sj, si)):
            if own.issubset(s) and not other.issubset(s):
                swapped = (s - own) | other
                if swapped not in game.family or game[swapped] != game[s]:
                    return False
    return True


def is_dummy(game: Game, i: str) -> bool:
    family = game.family
    si = family.players.singleton(i)
    if si in family and game[si] != 0:
        return False
    for s in family.coalitions:
        if s == si:
            continue
        partner = s - si if si.issubset(s) else s | si
        if partner not in family or game[partner] != game[s]:
            return False
    return True


@dataclass(frozen=True)
class FacilityRoles:
    facility_id: str
    users: Coalition
    asymmetric_pairs: Tuple[Tuple[str, str], ...]
    non_dummies: Tuple[str, ...]

    @property
    def justified(self) -> bool:
        """Equal split over the users is backed by symmetry inside and dummies outside."""
        return not self.asymmetric_pairs and not self.non_dummies


def split_roles(local: LocalGame, users: Coalition) -> FacilityRoles:
    players = local.game.family.players
    inside = players.members(users)
    outside = [name for name in players.names if name not in inside]
    pairs = tuple((a, b) for a, b in combinations(inside, 2) if not is_symmetric(local.game, a, b))
    non_dummies = tuple(name for name in outside if not is_dummy(local.game, name))
    return FacilityRoles(local.facility_id, users, pairs, non_dummies)


def feasible_partitions(family: CoalitionFamily, s: Coalition, limits: Optional[Limits] = None) -> Iterator[Tuple[Coalition, ...]]:
    """
    Partitions of s into members of the family, in restricted-growth order:
    the block holding the lowest unplaced player is fixed first.
    """
    limits = resolve_limits(limits)
    if s.size > limits.guard_partition:
        raise GuardExceeded(f"|S|={s.size} exceeds the partition guard {limits.guard_partition}")
    inside = [c for c in family.coalitions if c.issubset(s)]

    def rec(rest: int, acc: List[Coalition]) -> Iterator[Tuple[Coalition, ...]]:
        if rest == 0:
            yield tuple(acc)
            return
        low = rest & -rest
        for c in inside:
            if c.mask & low and c.mask & rest == c.mask:
                acc.append(c)
                yield from rec(rest & ~c.mask, acc)
                acc.pop()

    yield from rec(s.mask, [])


def is_superadditive(game: Game, limits: Optional[Limits] = None) -> bool:
    limits = resolve_limits(limits)
    for s in game.family.coalitions:
        if s.size < 2:
            continue
        for blocks in feasible_partitions(game.family, s, limits):
            if len(blocks) < 2:
                continue
            if game[s] < sum((game[b] for b in blocks), Fraction(0)):
                logger.debug("[solution] is_superadditive: fails at %s", game.family.players.describe(s))
                return False
    return True


def is_cost_game(game: Game, limits: Optional[Limits] = None) -> bool:
    return all(x <= 0 for x in game.values.values()) and is_superadditive(game, limits)


# --- partition-function games ---
@dataclass(frozen=True)
class PartitionScenario:
    players: PlayerSet
    partitions: Tuple[Tuple[Coalition, ...], ...]
    atom_values: Tuple[Mapping[Coalition, Fraction], ...]

    def validate(self) -> None:
        if not self.partitions:
            raise InvalidPartition("scenario has no partitions")
        if len(self.partitions) != len(self.atom_values):
            raise InvalidPartition("every partition needs its own atom values")
        full = self.players.full.mask
        for k, (atoms, values) in enumerate(zip(self.partitions, self.atom_values), start=1):
            covered = 0
            for a in atoms:
                if a.is_empty:
                    raise InvalidPartition(f"partition {k}: empty atom")
                if a.mask & ~full:
                    raise InvalidPartition(f"partition {k}: atom outside the player set")
                if a.mask & covered:
                    raise InvalidPartition(f"partition {k}: atoms overlap at {self.players.describe(a)}")
                covered |= a.mask
            if covered != full:
                missing = self.players.describe(Coalition(full & ~covered))
                raise InvalidPartition(f"partition {k}: players {missing} uncovered")
            if set(values) != set(atoms):
                raise InvalidPartition(f"partition {k}: atom values do not match the atoms")


def _algebra_values(atoms: Sequence[Coalition], values: Mapping[Coalition, Fraction]) -> Dict[Coalition, Fraction]:
    """Every nonempty union of atoms with the additive value."""
    out: Dict[Coalition, Fraction] = {}
    for pick in range(1, 1 << len(atoms)):
        mask, total = 0, Fraction(0)
        for k, a in enumerate(atoms):
            if pick >> k & 1:
                mask |= a.mask
                total += Fraction(values[a])
        out[Coalition(mask)] = total
    return out


def partition_game(scenario: PartitionScenario, limits: Optional[Limits] = None) -> Game:
    """C is the union of the algebras generated by the partitions; v(S) is the least value among them."""
    limits = resolve_limits(limits)
    scenario.validate()
    best: Dict[Coalition, Fraction] = {}
    for atoms, values in zip(scenario.partitions, scenario.atom_values):
        if len(atoms) > limits.guard_n:
            raise GuardExceeded(f"partition with {len(atoms)} atoms exceeds the guard {limits.guard_n}")
        for c, x in _algebra_values(atoms, values).items():
            if c not in best or x < best[c]:
                best[c] = x
    family = CoalitionFamily(scenario.players, tuple(best))
    logger.debug("[solution] partition_game: %d partitions, %d coalitions", len(scenario.partitions), len(family))
    return Game(family, best)
