# documents.py
"""
JSON documents for games, assignments, partition scenarios, allocations and
family reports.

Rationals travel as strings ("-18", "-5/3"); plain integers are accepted on
input, floats are not. Player order in a document is authoritative and is
kept in every output.
"""
import json
import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional

from coalition_forge.core import (
    Allocation,
    Assignment,
    Coalition,
    CoalitionFamily,
    DocumentError,
    DocumentSyntaxError,
    Facility,
    Game,
    GameError,
    InvalidDocument,
    MalformedRational,
    PlayerSet,
    Report,
    format_rational,
    parse_rational,
    validate_family,
)
from coalition_forge.solution import PartitionScenario
from coalition_forge.structure import FamilyReport

logger = logging.getLogger(__name__)


def _load(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentSyntaxError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None


def _dump(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise InvalidDocument(message)


def _object(doc: Any, keys: List[str], where: str) -> Dict[str, Any]:
    _expect(isinstance(doc, dict), f"{where}: expected an object")
    for k in keys:
        _expect(k in doc, f"{where}: missing key {k!r}")
    return doc


def _rational(raw: Any, where: str) -> Fraction:
    if isinstance(raw, float):
        raise MalformedRational(f"{where}: malformed rational {raw!r}: write exact values as strings")
    try:
        return parse_rational(raw)
    except MalformedRational as e:
        raise MalformedRational(f"{where}: {e}") from None


def _players(doc: Dict[str, Any]) -> PlayerSet:
    raw = doc["players"]
    _expect(isinstance(raw, list), "players: expected a list of names")
    try:
        return PlayerSet(tuple(raw))
    except GameError as e:
        raise InvalidDocument(f"players: {e}") from None


def _members(players: PlayerSet, raw: Any, where: str) -> Coalition:
    _expect(isinstance(raw, list) and raw, f"{where}: expected a nonempty list of players")
    _expect(all(isinstance(m, str) for m in raw), f"{where}: player names must be strings")
    try:
        c = players.coalition(raw)
    except GameError as e:
        raise InvalidDocument(f"{where}: {e}") from None
    _expect(c.size == len(raw), f"{where}: repeated player")
    return c


# --- games ---
def parse_game(text: str) -> Game:
    doc = _object(_load(text), ["players", "coalitions"], "game")
    players = _players(doc)
    entries = doc["coalitions"]
    _expect(isinstance(entries, list), "coalitions: expected a list")
    coalitions, values = [], []
    for k, entry in enumerate(entries, start=1):
        where = f"coalition {k}"
        entry = _object(entry, ["members", "value"], where)
        coalitions.append(_members(players, entry["members"], where))
        values.append(_rational(entry["value"], where))
    family = CoalitionFamily(players, tuple(coalitions))
    report = validate_family(family)
    if not report.ok:
        raise InvalidDocument("; ".join(report.messages()))
    logger.debug("[documents] parse_game: %d players, %d coalitions", players.size, len(family))
    return Game(family, dict(zip(coalitions, values)))


def serialize_game(game: Game) -> str:
    players = game.family.players
    return _dump({
        "players": list(players.names),
        "coalitions": [
            {"members": list(players.members(c)), "value": format_rational(game[c])}
            for c in game.family.coalitions
        ],
    })


# --- assignments ---
def parse_assignment(text: str) -> Assignment:
    doc = _object(_load(text), ["players", "facilities"], "assignment")
    players = _players(doc)
    entries = doc["facilities"]
    _expect(isinstance(entries, list), "facilities: expected a list")
    facilities = []
    for k, entry in enumerate(entries, start=1):
        where = f"facility {k}"
        entry = _object(entry, ["id", "users", "cost"], where)
        _expect(isinstance(entry["id"], str) and entry["id"] != "", f"{where}: id must be a nonempty string")
        facilities.append(Facility(entry["id"], _members(players, entry["users"], where),
                                   _rational(entry["cost"], where)))
    try:
        return Assignment(players, tuple(facilities))
    except GameError as e:
        raise InvalidDocument(str(e)) from None


def serialize_assignment(assignment: Assignment) -> str:
    players = assignment.players
    return _dump({
        "players": list(players.names),
        "facilities": [
            {"id": f.id, "users": list(players.members(f.users)), "cost": format_rational(f.cost)}
            for f in assignment.facilities
        ],
    })


# --- partition scenarios ---
def parse_scenario(text: str) -> PartitionScenario:
    doc = _object(_load(text), ["players", "partitions"], "scenario")
    players = _players(doc)
    raw = doc["partitions"]
    _expect(isinstance(raw, list), "partitions: expected a list")
    partitions, atom_values = [], []
    for k, part in enumerate(raw, start=1):
        part = _object(part, ["atoms"], f"partition {k}")
        _expect(isinstance(part["atoms"], list), f"partition {k}: atoms must be a list")
        atoms, values = [], {}
        for a, atom in enumerate(part["atoms"], start=1):
            where = f"partition {k}, atom {a}"
            atom = _object(atom, ["members", "value"], where)
            c = _members(players, atom["members"], where)
            _expect(c not in values, f"{where}: repeated atom")
            atoms.append(c)
            values[c] = _rational(atom["value"], where)
        partitions.append(tuple(atoms))
        atom_values.append(values)
    return PartitionScenario(players, tuple(partitions), tuple(atom_values))


# --- outputs ---
def serialize_allocation(allocation: Allocation) -> str:
    doc = {}
    for name in allocation.players.names:
        if name == "total":
            raise DocumentError("a player named 'total' collides with the allocation total")
        doc[name] = format_rational(allocation[name])
    doc["total"] = format_rational(allocation.total)
    return _dump(doc)


def serialize_report(report: FamilyReport, family: CoalitionFamily) -> str:
    players = family.players
    hierarchy: Optional[Dict[str, Any]] = None
    if report.hierarchy is not None:
        hierarchy = {
            "sequence": [list(players.members(c)) for c in report.hierarchy.sequence],
            "witnesses": [list(players.members(c)) if c is not None else None for c in report.hierarchy.witnesses],
        }
    return _dump({
        "coalitions": report.size,
        "semi_algebra": report.semi_algebra,
        "hierarchy": hierarchy,
        "hierarchy_searched": report.hierarchy_searched,
        "full_span": report.full_span,
        "mm_rank": report.mm_rank,
        "uniform_deletions": report.uniform_deletions,
    })


def serialize_violations(report: Report) -> str:
    return _dump({"ok": report.ok, "violations": report.messages()})
