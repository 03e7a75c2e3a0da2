# tests/test_representation.py
import random
from fractions import Fraction

import pytest

from coalition_forge.core import Assignment, CoalitionFamily, Facility, Game, InvalidFamily, MeasurabilityViolation, NotRepresentable
from coalition_forge.representation import (
    divergent_representations,
    induced_game,
    local_games,
    minimal_representation,
    reduce_to_minimal,
    trivial_expansion,
    validate_representation,
)
from coalition_forge.solution import equitable_solution
from coalition_forge.structure import mm_game
from fuzz_support import example2, example3, no_span_game, random_semi_algebra, random_values


def costs(assignment):
    return [(f.id, f.cost) for f in assignment.facilities]


def test_minimal_representation_example2():
    rep = minimal_representation(example2())
    assert costs(rep) == [("a+b", -6), ("d+e", -4), ("b+c+d", -12)]
    assert [rep.players.members(f.users) for f in rep.facilities] == [("a", "b"), ("d", "e"), ("b", "c", "d")]


def test_minimal_representation_example3():
    rep = minimal_representation(example3())
    assert costs(rep) == [("1", -2), ("2+3", -3), ("1+2+3", 1)]
    assert rep.psi("1") == ("1", "1+2+3")
    assert rep.psi("2") == rep.psi("3") == ("2+3", "1+2+3")


def test_minimal_representation_of_zero_game_is_empty():
    assert minimal_representation(Game.zero(example2().family)).facilities == ()


def test_minimal_representation_not_representable():
    with pytest.raises(NotRepresentable):
        minimal_representation(no_span_game(0, 1))


def test_induced_game_examples():
    for g in (example2(), example3()):
        assert induced_game(minimal_representation(g), g.family) == g
    g = example3()
    assert induced_game(Assignment(g.family.players), g.family) == Game.zero(g.family)


def test_induced_game_measurability():
    g = example2()
    ps = g.family.players
    bad = Assignment(ps, (Facility("x", ps.coalition("ac"), 1),))
    with pytest.raises(MeasurabilityViolation):
        induced_game(bad, g.family)
    with pytest.raises(MeasurabilityViolation):
        local_games(bad, g.family)


def test_local_games_example3():
    g = example3()
    local = local_games(minimal_representation(g), g.family)
    assert [lg.game.vector() for lg in local] == [(-2, 0, -2), (0, -3, -3), (1, 1, 1)]
    assert [lg.facility_id for lg in local] == ["1", "2+3", "1+2+3"]
    total = Game.zero(g.family)
    for lg in local:
        total = total + lg.game
    assert total == g


def test_local_games_small_cases():
    g = example3()
    ps = g.family.players
    zero = local_games(Assignment(ps, (Facility("z", ps.full, 0),)), g.family)
    assert zero[0].game == Game.zero(g.family)
    full_only = Game(CoalitionFamily(ps, (ps.full,)), {ps.full: 5})
    only = local_games(Assignment(ps, (Facility("n", ps.full, 5),)), full_only.family)
    assert only[0].game == full_only


def test_local_game_is_cost_times_mm_game():
    rng = random.Random(3)
    for _ in range(20):
        family = random_semi_algebra(rng, rng.randint(1, 5))
        rep = minimal_representation(random_values(rng, family))
        for f, lg in zip(rep.facilities, local_games(rep, family)):
            assert lg.game == mm_game(family, f.users).scale(f.cost)


def test_validate_representation():
    g = example2()
    rep = minimal_representation(g)
    assert validate_representation(rep, g).ok

    ps = g.family.players
    perturbed = Assignment(ps, tuple(
        Facility(f.id, f.users, -5 if f.id == "a+b" else f.cost) for f in rep.facilities
    ))
    report = validate_representation(perturbed, g)
    assert not report.ok
    assert report.messages() == ["mismatch at {a,b}: -17 != -18"]

    bad = Assignment(ps, rep.facilities + (Facility("x", ps.coalition("ac"), 0),))
    report = validate_representation(bad, g)
    assert [v.kind for v in report.violations] == ["measurability"]


def test_trivial_expansion_identity():
    rep = minimal_representation(example2())
    assert trivial_expansion(rep, seed=1, zero_facilities=0, max_replicas=1, family=example2().family) == rep


def test_trivial_expansion_zero_facility_keeps_game():
    g = example3()
    rep = minimal_representation(g)
    out = trivial_expansion(rep, seed=5, zero_facilities=1, max_replicas=1, family=g.family)
    assert len(out) == 4
    assert out.facilities[-1].cost == 0
    assert induced_game(out, g.family) == g


def test_splitting_a_facility_keeps_game_and_solution():
    g = example2()
    rep = minimal_representation(g)
    ps = g.family.players
    ab = ps.coalition("ab")
    split = Assignment(ps, (Facility("ab1", ab, -2), Facility("ab2", ab, -4)) + rep.facilities[1:])
    assert induced_game(split, g.family) == g
    assert equitable_solution(split) == equitable_solution(rep)


def test_trivial_expansion_is_reproducible_and_cost_preserving():
    g = example2()
    rep = minimal_representation(g)
    a = trivial_expansion(rep, seed=42, zero_facilities=3, max_replicas=4, family=g.family)
    b = trivial_expansion(rep, seed=42, zero_facilities=3, max_replicas=4, family=g.family)
    assert a == b
    assert a.total_cost == rep.total_cost
    assert len({f.id for f in a.facilities}) == len(a)
    assert all(f.cost.denominator == 1 for f in a.facilities)


def test_trivial_expansion_argument_checks():
    g = example2()
    rep = minimal_representation(g)
    with pytest.raises(ValueError):
        trivial_expansion(rep, seed=0, zero_facilities=0, max_replicas=0, family=g.family)
    with pytest.raises(ValueError):
        trivial_expansion(rep, seed=0, zero_facilities=-1, max_replicas=1, family=g.family)
    empty = CoalitionFamily(g.family.players, ())
    with pytest.raises(InvalidFamily):
        trivial_expansion(rep, seed=0, zero_facilities=1, max_replicas=1, family=empty)


def test_reduce_to_minimal():
    g = example2()
    rep = minimal_representation(g)
    ps = g.family.players
    de = ps.coalition("de")
    doubled = Assignment(ps, tuple(f for f in rep.facilities if f.users != de)
                         + (Facility("x", de, -1), Facility("y", de, -3)))
    assert reduce_to_minimal(doubled, g.family) == rep
    only_zero = Assignment(ps, (Facility("z", ps.coalition("ab"), 0),))
    assert reduce_to_minimal(only_zero, g.family).facilities == ()
    for seed in range(10):
        expanded = trivial_expansion(rep, seed=seed, zero_facilities=2, max_replicas=3, family=g.family)
        assert reduce_to_minimal(expanded, g.family) == rep


def test_round_trip_on_random_semi_algebras():
    rng = random.Random(99)
    for _ in range(30):
        family = random_semi_algebra(rng, rng.randint(1, 6))
        g = random_values(rng, family)
        rep = minimal_representation(g)
        assert induced_game(rep, family) == g
        assert reduce_to_minimal(rep, family) == rep


def test_generic_game_uses_every_coalition():
    rng = random.Random(2024)
    family = example2().family
    full = 0
    for _ in range(1000):
        g = random_values(rng, family, -1000, 1000)
        if len(minimal_representation(g)) == len(family):
            full += 1
    assert full >= 950


def test_divergent_representations():
    g = no_span_game(1, 1)
    a, b = divergent_representations(g)
    assert induced_game(a, g.family) == g and induced_game(b, g.family) == g
    assert equitable_solution(a).as_tuple() == (1, 0)
    assert equitable_solution(b).as_tuple() == (Fraction(1, 2), Fraction(1, 2))
    assert divergent_representations(no_span_game(0, 1)) is None
    assert divergent_representations(example2()) is None
