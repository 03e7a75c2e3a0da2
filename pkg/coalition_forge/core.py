# core.py
"""
Domain types shared by every other module: players, coalitions (bitsets),
coalition families, games, facilities, assignments and allocations.

All scalars are fractions.Fraction; nothing here touches floating point.
"""
import logging
import re
from collections import namedtuple
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

Rational = Fraction


# Exceptions
class GameError(Exception): pass


class InvalidPlayers(GameError): pass


class InvalidFamily(GameError): pass


class InvalidGame(GameError): pass


class InvalidAssignment(GameError): pass


class InvalidPartition(GameError): pass


class UnknownPlayer(GameError, KeyError): pass


class UnknownCoalition(GameError, KeyError): pass


class GuardExceeded(GameError): pass


class DimensionMismatch(GameError): pass


class NotRepresentable(GameError): pass


class NoFullSpan(NotRepresentable): pass


class MeasurabilityViolation(GameError): pass


class NotSemiAlgebra(GameError): pass


class NotCanonical(GameError): pass


class EmptyUserSet(GameError): pass


class AllocationMismatch(GameError): pass


class InvalidConfig(GameError): pass


class DocumentError(GameError):
    """Problem with an input document; line/column are set for syntax errors."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class DocumentSyntaxError(DocumentError): pass


class InvalidDocument(DocumentError): pass


class MalformedRational(DocumentError, ValueError): pass


# --- rationals ---
_RATIONAL_RE = re.compile(r"^(-?)(\d+)(?:/(\d+))?$")


def parse_rational(text: Union[str, int]) -> Fraction:
    """Parse "-18" or "-5/3"; fractions must be in lowest terms with a positive denominator."""
    if isinstance(text, bool):
        raise MalformedRational(f"malformed rational {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise MalformedRational(f"malformed rational {text!r}: expected a string or an integer")
    m = _RATIONAL_RE.match(text.strip().replace("\u2212", "-"))
    if not m:
        raise MalformedRational(f"malformed rational {text!r}")
    sign, num, den = m.group(1), int(m.group(2)), m.group(3)
    if den is None:
        return Fraction(-num if sign else num)
    den = int(den)
    if den == 0:
        raise MalformedRational(f"malformed rational {text!r}: zero denominator")
    if gcd(num, den) != 1:
        raise MalformedRational(f"malformed rational {text!r}: not in lowest terms")
    return Fraction(-num if sign else num, den)


def format_rational(q: Fraction) -> str:
    # Fraction.__str__ already drops "/1" and keeps lowest terms
    return str(Fraction(q))


# --- players and coalitions ---
@dataclass(frozen=True, slots=True)
class Coalition:
    """A set of player indices stored as a bitmask. The empty mask is representable but never a member of a valid family."""
    mask: int

    def __post_init__(self):
        if self.mask < 0:
            raise ValueError("coalition mask must be non-negative")

    @classmethod
    def of(cls, indices: Iterable[int]) -> "Coalition":
        mask = 0
        for i in indices:
            mask |= 1 << i
        return cls(mask)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    def indices(self) -> Tuple[int, ...]:
        out = []
        m, i = self.mask, 0
        while m:
            if m & 1:
                out.append(i)
            m >>= 1
            i += 1
        return tuple(out)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return self.size, self.indices()

    def meets(self, other: "Coalition") -> bool:
        return (self.mask & other.mask) != 0

    def misses(self, other: "Coalition") -> bool:
        return (self.mask & other.mask) == 0

    def issubset(self, other: "Coalition") -> bool:
        return (self.mask & ~other.mask) == 0

    def __contains__(self, index: int) -> bool:
        return bool(self.mask >> index & 1)

    def __and__(self, other: "Coalition") -> "Coalition":
        return Coalition(self.mask & other.mask)

    def __or__(self, other: "Coalition") -> "Coalition":
        return Coalition(self.mask | other.mask)

    def __sub__(self, other: "Coalition") -> "Coalition":
        return Coalition(self.mask & ~other.mask)


EMPTY = Coalition(0)


@dataclass(frozen=True)
class PlayerSet:
    names: Tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise InvalidPlayers("player set must be nonempty")
        for name in names:
            if not isinstance(name, str) or name == "":
                raise InvalidPlayers(f"player names must be nonempty strings, got {name!r}")
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise InvalidPlayers(f"duplicate player names: {dup}")

    @property
    def size(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownPlayer(f"unknown player {name!r}") from None

    @property
    def full(self) -> Coalition:
        return Coalition((1 << len(self.names)) - 1)

    def coalition(self, members: Iterable[str]) -> Coalition:
        return Coalition.of(self.index_of(m) for m in members)

    def singleton(self, name: str) -> Coalition:
        return Coalition(1 << self.index_of(name))

    def members(self, c: Coalition) -> Tuple[str, ...]:
        """Member names in player order."""
        return tuple(self.names[i] for i in c.indices())

    def label(self, c: Coalition) -> str:
        """Canonical coalition string: sorted member names joined by '+'."""
        return "+".join(sorted(self.members(c)))

    def describe(self, c: Coalition) -> str:
        return "{" + ",".join(self.members(c)) + "}"


def canonical_sorted(coalitions: Iterable[Coalition]) -> Tuple[Coalition, ...]:
    return tuple(sorted(coalitions, key=Coalition.sort_key))


@dataclass(frozen=True)
class CoalitionFamily:
    """
    A collection C of coalitions over a player set, kept in canonical order
    (ascending size, ties broken lexicographically on member indices).
    Construction does not enforce coverage or distinctness; see validate_family.
    """
    players: PlayerSet
    coalitions: Tuple[Coalition, ...]

    def __post_init__(self):
        object.__setattr__(self, "coalitions", canonical_sorted(self.coalitions))

    @classmethod
    def from_members(cls, players: Union[PlayerSet, Sequence[str]], members: Iterable[Iterable[str]]) -> "CoalitionFamily":
        if not isinstance(players, PlayerSet):
            players = PlayerSet(tuple(players))
        return cls(players, tuple(players.coalition(m) for m in members))

    @classmethod
    def canonical(cls, players: PlayerSet, guard_n: int = 20) -> "CoalitionFamily":
        """The family of all 2^|N|-1 nonempty coalitions."""
        if players.size > guard_n:
            raise GuardExceeded(f"|N|={players.size} exceeds the guard {guard_n} for enumerating all coalitions")
        return cls(players, tuple(Coalition(m) for m in range(1, 1 << players.size)))

    def __len__(self) -> int:
        return len(self.coalitions)

    def __iter__(self) -> Iterator[Coalition]:
        return iter(self.coalitions)

    def __contains__(self, c: Coalition) -> bool:
        return c in self._index

    @cached_property
    def _index(self) -> Dict[Coalition, int]:
        return {c: i for i, c in enumerate(self.coalitions)}

    def index_of(self, c: Coalition) -> int:
        try:
            return self._index[c]
        except KeyError:
            raise UnknownCoalition(f"coalition {self.players.describe(c)} is not in the family") from None

    @property
    def full(self) -> Coalition:
        return self.players.full

    @property
    def is_canonical(self) -> bool:
        n = self.players.size
        return len(self._index) == len(self.coalitions) == (1 << n) - 1 and all(
            0 < c.mask < (1 << n) for c in self.coalitions
        )

    def label(self, c: Coalition) -> str:
        return self.players.label(c)


# --- validation reports ---
Violation = namedtuple("Violation", ["kind", "coalition", "message"])


@dataclass(frozen=True)
class Report:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def messages(self) -> List[str]:
        return [v.message for v in self.violations]


def validate_family(family: CoalitionFamily) -> Report:
    players = family.players
    n = players.size
    violations: List[Violation] = []
    seen = set()
    covered = 0
    for c in family.coalitions:
        if c.is_empty:
            violations.append(Violation("empty", c, "empty coalition"))
            continue
        if c.mask >> n:
            violations.append(Violation("range", c, f"coalition mask {c.mask} references players outside N"))
            continue
        if c in seen:
            violations.append(Violation("duplicate", c, f"duplicate coalition {players.describe(c)}"))
        seen.add(c)
        covered |= c.mask
    for i, name in enumerate(players.names):
        if not covered >> i & 1:
            violations.append(Violation("uncovered", None, f"player {name} uncovered"))
    if violations:
        logger.debug("[core] validate_family: %d violations", len(violations))
    return Report(tuple(violations))


def require_valid(family: CoalitionFamily) -> None:
    report = validate_family(family)
    if not report.ok:
        raise InvalidFamily("; ".join(report.messages()))


def canonical_order(family: CoalitionFamily) -> Tuple[Coalition, ...]:
    return canonical_sorted(family.coalitions)


# --- games ---
@dataclass(frozen=True)
class Game:
    """A value v(S) for every S in the family; v(empty) is implicitly 0."""
    family: CoalitionFamily
    values: Mapping[Coalition, Fraction]

    def __post_init__(self):
        values = {c: Fraction(v) for c, v in dict(self.values).items()}
        expected = set(self.family.coalitions)
        if set(values) != expected:
            extra = [self.family.players.describe(c) for c in values if c not in expected]
            missing = [self.family.players.describe(c) for c in self.family.coalitions if c not in values]
            raise InvalidGame(f"game values do not match the family (missing {missing}, extra {extra})")
        object.__setattr__(self, "values", MappingProxyType(values))

    @classmethod
    def from_vector(cls, family: CoalitionFamily, vector: Sequence) -> "Game":
        if len(vector) != len(family):
            raise DimensionMismatch(f"vector of length {len(vector)} for a family of {len(family)} coalitions")
        return cls(family, dict(zip(family.coalitions, vector)))

    @classmethod
    def zero(cls, family: CoalitionFamily) -> "Game":
        return cls(family, {c: Fraction(0) for c in family.coalitions})

    def __getitem__(self, c: Coalition) -> Fraction:
        if c.is_empty:
            return Fraction(0)
        try:
            return self.values[c]
        except KeyError:
            raise UnknownCoalition(f"coalition {self.family.players.describe(c)} is not in the family") from None

    def vector(self) -> Tuple[Fraction, ...]:
        return tuple(self.values[c] for c in self.family.coalitions)

    def _check_same_family(self, other: "Game") -> None:
        if self.family != other.family:
            raise InvalidGame("games are defined on different families")

    def __add__(self, other: "Game") -> "Game":
        self._check_same_family(other)
        return Game(self.family, {c: self.values[c] + other.values[c] for c in self.family.coalitions})

    def __sub__(self, other: "Game") -> "Game":
        self._check_same_family(other)
        return Game(self.family, {c: self.values[c] - other.values[c] for c in self.family.coalitions})

    def scale(self, factor) -> "Game":
        factor = Fraction(factor)
        return Game(self.family, {c: factor * v for c, v in self.values.items()})


# --- facilities and assignments ---
@dataclass(frozen=True)
class Facility:
    id: str
    users: Coalition
    cost: Fraction

    def __post_init__(self):
        object.__setattr__(self, "cost", Fraction(self.cost))


@dataclass(frozen=True)
class Assignment:
    """The pair (psi, gamma): psi is recorded through each facility's full user-set."""
    players: PlayerSet
    facilities: Tuple[Facility, ...] = field(default_factory=tuple)

    def __post_init__(self):
        facilities = tuple(self.facilities)
        object.__setattr__(self, "facilities", facilities)
        ids = [f.id for f in facilities]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise InvalidAssignment(f"duplicate facility ids: {dup}")

    def __len__(self) -> int:
        return len(self.facilities)

    def psi(self, player: str) -> Tuple[str, ...]:
        """Ids of the facilities the player must use."""
        i = self.players.index_of(player)
        return tuple(f.id for f in self.facilities if i in f.users)

    @property
    def total_cost(self) -> Fraction:
        return sum((f.cost for f in self.facilities), Fraction(0))


# --- allocations ---
@dataclass(frozen=True)
class Allocation:
    players: PlayerSet
    payoffs: Mapping[str, Fraction]
    total: Fraction

    def __post_init__(self):
        if set(self.payoffs) != set(self.players.names):
            raise AllocationMismatch("payoffs must name every player exactly once")
        payoffs = {name: Fraction(self.payoffs[name]) for name in self.players.names}
        total = Fraction(self.total)
        observed = sum(payoffs.values(), Fraction(0))
        if observed != total:
            raise AllocationMismatch(f"payoffs sum to {observed}, declared total is {total}")
        object.__setattr__(self, "payoffs", MappingProxyType(payoffs))
        object.__setattr__(self, "total", total)

    @classmethod
    def from_payoffs(cls, players: PlayerSet, payoffs: Mapping[str, Fraction]) -> "Allocation":
        return cls(players, payoffs, sum((Fraction(v) for v in payoffs.values()), Fraction(0)))

    @classmethod
    def zero(cls, players: PlayerSet) -> "Allocation":
        return cls(players, {name: Fraction(0) for name in players.names}, Fraction(0))

    def __getitem__(self, name: str) -> Fraction:
        return self.payoffs[name]

    def as_tuple(self) -> Tuple[Fraction, ...]:
        return tuple(self.payoffs[name] for name in self.players.names)

    def __add__(self, other: "Allocation") -> "Allocation":
        if self.players != other.players:
            raise AllocationMismatch("allocations over different player sets")
        return Allocation(self.players, {n: self.payoffs[n] + other.payoffs[n] for n in self.players.names},
                          self.total + other.total)

    def scale(self, factor) -> "Allocation":
        factor = Fraction(factor)
        return Allocation(self.players, {n: factor * p for n, p in self.payoffs.items()}, factor * self.total)
