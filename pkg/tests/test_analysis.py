import math
import random
from fractions import Fraction

import pytest

from stablemax.analysis import (
    hereditary_parameter,
    p_extendibility,
    p_system_parameter,
    profile_system,
    verify_hereditary_extendible_equivalence,
)
from stablemax.bits import mask_of
from stablemax.generators import GeneratorSpec, generate
from stablemax.objectives import AdditiveObjective
from stablemax.scenarios import (
    build_atsp_triangle,
    build_knapsack,
    build_matching_path,
    build_matroid_filmus,
)
from stablemax.solvers import exact_optimum, greedy
from stablemax.systems import (
    CapExceededError,
    ExplicitSystem,
    MatchingSystem,
    PartitionMatroid,
    TwoSystemCounterexample,
    UniformMatroid,
)


def test_p_system_uniform_matroid_is_one():
    assert p_system_parameter(UniformMatroid(5, 3)) == 1


def test_p_system_matching_path_is_two():
    # bases of the whole edge set: the middle edge alone vs the outer pair
    assert p_system_parameter(build_matching_path(Fraction(1, 10)).system) == 2


def test_p_system_knapsack_exact_value():
    # largest base has 6 elements (two heavy, decoy, three small),
    # smallest has 4 (three heavy plus decoy)
    assert p_system_parameter(build_knapsack(3, Fraction(1, 10)).system) == Fraction(3, 2)


def test_p_extendibility_matroids_are_one():
    assert p_extendibility(UniformMatroid(5, 2)) == 1
    assert p_extendibility(PartitionMatroid(4, [0b0011, 0b1100], [1, 1])) == 1
    assert p_extendibility(build_matroid_filmus(Fraction(1, 100)).system) == 1


def test_p_extendibility_matching_is_two():
    assert p_extendibility(build_matching_path(Fraction(1, 10)).system) == 2
    triangle_plus = MatchingSystem(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
    assert p_extendibility(triangle_plus) == 2


def test_p_extendibility_knapsack_and_atsp():
    assert p_extendibility(build_knapsack(3, Fraction(1, 10)).system) == 3
    assert p_extendibility(build_atsp_triangle(Fraction(1, 10)).system) == 3


def test_p_extendibility_two_system():
    assert p_extendibility(TwoSystemCounterexample(4)) == 2


def test_p_extendibility_cap_gives_none():
    system = build_knapsack(3, Fraction(1, 10)).system
    assert p_extendibility(system, cap=2) is None


def test_hereditary_parameters():
    assert hereditary_parameter(UniformMatroid(5, 2)) == 1
    assert hereditary_parameter(build_matching_path(Fraction(1, 10)).system) == 2
    # after contracting the heavy items, the decoy blocks all three small ones
    assert hereditary_parameter(build_knapsack(3, Fraction(1, 10)).system) == 3


def test_hereditary_cap():
    with pytest.raises(CapExceededError):
        hereditary_parameter(UniformMatroid(11, 2))
    assert hereditary_parameter(UniformMatroid(11, 2), cap=11) == 1


def test_p_system_at_most_hereditary():
    for system in (
        build_matching_path(Fraction(1, 10)).system,
        build_knapsack(3, Fraction(1, 10)).system,
        TwoSystemCounterexample(4),
    ):
        assert p_system_parameter(system) <= hereditary_parameter(system)


def test_equivalence_on_named_systems():
    for system in (
        UniformMatroid(5, 2),
        build_matching_path(Fraction(1, 10)).system,
        build_knapsack(3, Fraction(1, 10)).system,
        TwoSystemCounterexample(4),
        build_matroid_filmus(Fraction(1, 100)).system,
    ):
        assert verify_hereditary_extendible_equivalence(system)


def test_equivalence_on_random_explicit_systems():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(4, 6)
        sets = [
            mask_of(rng.sample(range(n), rng.randint(1, n - 1)))
            for _ in range(rng.randint(2, 4))
        ]
        system = ExplicitSystem(n, sets)
        hered = hereditary_parameter(system)
        assert math.floor(hered) == p_extendibility(system)


def test_greedy_ratio_bound_on_measured_extendibility():
    # additive greedy keeps a 1/p fraction on any p-extendible system
    rng = random.Random(11)
    systems = [
        build_matching_path(Fraction(1, 10)).system,
        MatchingSystem(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]),
        build_knapsack(3, Fraction(1, 10)).system,
    ]
    for system in systems:
        p = p_extendibility(system)
        for _ in range(10):
            weights = [Fraction(rng.randint(1, 1000), 7) for _ in range(system.ground_size)]
            objective = AdditiveObjective(weights)
            trace = greedy(system, objective)
            optimum = exact_optimum(system, objective)
            assert trace.final_value * p >= optimum.value


def test_generated_intersections_respect_p_bound():
    for seed in range(100):
        spec = GeneratorSpec(
            "partition-matroid-intersection",
            seed,
            {"ground_size": 7, "p": 2, "objective": "additive"},
        )
        system = generate(spec).system
        ext = p_extendibility(system)
        assert ext is not None and ext <= 2


def _literal_p_extendibility(system):
    # direct transcription of the definition, for cross-checking the DP:
    # for every independent A <= B and addable e, find the smallest Z
    from itertools import combinations

    from stablemax.bits import ids_of

    indep = list(system.independent_sets())
    indep_set = set(indep)
    full = (1 << system.ground_size) - 1
    worst = 1
    for b in indep:
        outside = full & ~b
        a = b
        while True:  # all submasks of b
            for e in range(system.ground_size):
                bit = 1 << e
                if not outside & bit or (a | bit) not in indep_set:
                    continue
                need = None
                free = b & ~a
                for size in range(free.bit_count() + 1):
                    for combo in combinations(ids_of(free), size):
                        z = mask_of(combo)
                        if ((b & ~z) | bit) in indep_set:
                            need = size
                            break
                    if need is not None:
                        break
                worst = max(worst, need)
            if a == 0:
                break
            a = (a - 1) & b
    return worst


def test_p_extendibility_matches_literal_definition():
    rng = random.Random(23)
    systems = [
        UniformMatroid(4, 2),
        build_matching_path(Fraction(1, 10)).system,
        TwoSystemCounterexample(4),
    ]
    for _ in range(8):
        n = rng.randint(3, 5)
        sets = [
            mask_of(rng.sample(range(n), rng.randint(1, n)))
            for _ in range(rng.randint(1, 3))
        ]
        systems.append(ExplicitSystem(n, sets))
    for system in systems:
        assert p_extendibility(system) == _literal_p_extendibility(system)


def test_hereditary_matches_literal_minor_scan():
    # spell out both loops of the definition: arbitrary deletions plus
    # contractions by independent sets
    def literal(system):
        best = Fraction(1)
        for y in range(1 << system.ground_size):
            best = max(best, p_system_parameter(system.deletion(y)))
        for y in system.independent_mask_list():
            if y:
                best = max(best, p_system_parameter(system.contraction(y)))
        return best

    rng = random.Random(29)
    systems = [build_matching_path(Fraction(1, 10)).system, TwoSystemCounterexample(4)]
    for _ in range(6):
        n = rng.randint(3, 5)
        sets = [
            mask_of(rng.sample(range(n), rng.randint(1, n)))
            for _ in range(rng.randint(1, 3))
        ]
        systems.append(ExplicitSystem(n, sets))
    for system in systems:
        assert hereditary_parameter(system) == literal(system)


def test_profile_system():
    profile = profile_system(build_matching_path(Fraction(1, 10)).system)
    assert profile.p_system == 2
    assert profile.p_extendible == 2
    assert profile.p_hereditary == 2
    assert profile.downward_closed


def test_p_system_cap():
    with pytest.raises(CapExceededError):
        p_system_parameter(UniformMatroid(21, 2))
