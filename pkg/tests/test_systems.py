from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablemax.bits import ids_of, iter_bits, mask_of
from stablemax.scenarios import (
    build_atsp_triangle,
    build_figure_counter1,
    build_knapsack,
    build_matroid_filmus,
    build_two_system,
)
from stablemax.systems import (
    AbLowerBoundSystem,
    AtspSystem,
    CapExceededError,
    DependentSetError,
    ExplicitSystem,
    KnapsackSystem,
    MatchingSystem,
    MatroidIntersection,
    PartitionMatroid,
    TwoSystemCounterexample,
    UniformMatroid,
    check_downward_closed,
)


def path_matching():
    return MatchingSystem(4, [(0, 1), (1, 2), (2, 3)])


def knapsack_system():
    return build_knapsack(3, Fraction(1, 10)).system


# -- membership --------------------------------------------------------------


def test_uniform_matroid_rank_bound():
    sys_ = UniformMatroid(3, 2)
    assert not sys_.is_independent(0b111)
    assert sys_.is_independent(0b011)
    assert sys_.is_independent(0)


def test_two_system_whole_a_side_is_independent():
    sys_ = TwoSystemCounterexample(6)
    assert sys_.is_independent(sys_.a_mask)
    # with the special element the A-side is capped at n/2
    assert sys_.is_independent(mask_of([6, 0, 1, 2]))
    assert not sys_.is_independent(mask_of([6, 0, 1, 2, 3]))


def test_ab_lower_bound_violates_both_inequalities():
    sys_ = AbLowerBoundSystem(4, 6, 2)
    # 3 of A plus 1 of B: 3 + 2*1 = 5 > 4 and 2*3 + 1 = 7 > 6
    assert not sys_.is_independent(mask_of([0, 1, 2, 4]))
    assert sys_.is_independent(mask_of([0, 1, 2, 3]))
    assert sys_.is_independent(mask_of(range(4, 10)))


def test_matching_membership():
    sys_ = path_matching()
    assert sys_.is_independent(mask_of([0, 2]))
    assert not sys_.is_independent(mask_of([0, 1]))


def test_atsp_membership_paths_and_tours():
    sys_ = AtspSystem(3)
    a = sys_.arc_id
    # a 2-cycle is not a tour
    assert not sys_.is_independent(mask_of([a(0, 1), a(1, 0)]))
    # either full triangle orientation is a Hamiltonian tour
    assert sys_.is_independent(mask_of([a(0, 1), a(1, 2), a(2, 0)]))
    # vertex-disjoint path fragments are fine
    assert sys_.is_independent(mask_of([a(0, 1), a(1, 2)]))
    assert not sys_.is_independent(mask_of([a(0, 1), a(0, 2)]))  # out-degree 2


def test_atsp_rejects_disjoint_small_cycles():
    sys_ = AtspSystem(6)
    a = sys_.arc_id
    two_triangles = mask_of(
        [a(0, 1), a(1, 2), a(2, 0), a(3, 4), a(4, 5), a(5, 3)]
    )
    assert not sys_.is_independent(two_triangles)
    big_cycle = mask_of([a(0, 1), a(1, 2), a(2, 3), a(3, 4), a(4, 5), a(5, 0)])
    assert sys_.is_independent(big_cycle)


def test_knapsack_membership_is_exact():
    sys_ = KnapsackSystem([Fraction(1, 3)] * 3, Fraction(1))
    assert sys_.is_independent(0b111)  # 3 * 1/3 == 1 exactly, no float fuzz
    sys_ = KnapsackSystem([Fraction(1, 3)] * 4, Fraction(1))
    assert not sys_.is_independent(0b1111)


def test_explicit_system_drops_dominated_sets():
    sys_ = ExplicitSystem(3, [0b011, 0b001, 0b100])
    assert sys_.maximal_sets == (0b011, 0b100)
    assert sys_.is_independent(0b001)
    assert not sys_.is_independent(0b101)


def test_explicit_system_empty_family_keeps_empty_set():
    sys_ = ExplicitSystem(3, [])
    assert sys_.is_independent(0)
    assert not sys_.is_independent(0b001)
    assert list(sys_.independent_sets()) == [0]


def test_mask_outside_ground_rejected():
    with pytest.raises(ValueError):
        UniformMatroid(3, 1).is_independent(0b1000)


# -- maximality and extensions ----------------------------------------------


def test_is_maximal():
    assert UniformMatroid(4, 2).is_maximal(0b0011)
    assert path_matching().is_maximal(0b010)  # the middle edge blocks both others
    two = TwoSystemCounterexample(6)
    assert two.is_maximal(mask_of([6, 0, 1, 2]))
    assert not two.is_maximal(mask_of([6, 0, 1]))


def test_maximality_requires_independence():
    with pytest.raises(DependentSetError):
        UniformMatroid(3, 1).is_maximal(0b011)


def test_feasible_extensions():
    sys_ = path_matching()
    assert sys_.feasible_extensions(0) == [0, 1, 2]
    assert sys_.feasible_extensions(0b010) == []
    exhausted = KnapsackSystem([Fraction(1)] * 3, Fraction(1))
    assert exhausted.feasible_extensions(0b001) == []
    with pytest.raises(DependentSetError):
        sys_.feasible_extensions(0b011)


def test_every_independent_set_extends_to_maximal():
    for system in (path_matching(), knapsack_system(), build_two_system(6).system):
        for mask in system.independent_sets():
            current = mask
            while not system.is_maximal(current):
                current |= 1 << system.feasible_extensions(current)[0]
            assert system.is_maximal(current)


# -- enumeration --------------------------------------------------------------


def test_enumerate_uniform_k1():
    assert list(UniformMatroid(3, 1).independent_sets()) == [0, 1, 2, 4]


def test_enumerate_matching_path_has_five_sets():
    got = list(path_matching().independent_sets())
    assert got == [0, 0b001, 0b010, 0b100, 0b101]


def test_enumerate_explicit_closure():
    got = list(ExplicitSystem(2, [0b11]).independent_sets())
    assert got == [0b00, 0b01, 0b10, 0b11]


def test_enumeration_cap_and_env_override(monkeypatch):
    big = UniformMatroid(21, 2)
    with pytest.raises(CapExceededError):
        list(big.independent_sets())
    monkeypatch.setenv("STABLEMAX_ENUM_CAP", "22")
    assert sum(1 for _ in big.independent_sets()) == 1 + 21 + 210


def test_enumeration_agrees_with_membership():
    for system in (path_matching(), knapsack_system(), build_matroid_filmus(Fraction(1, 100)).system):
        via_enum = set(system.independent_sets())
        via_oracle = {
            m for m in range(1 << system.ground_size) if system.is_independent(m)
        }
        assert via_enum == via_oracle


# -- minors -------------------------------------------------------------------


def test_deletion_of_nothing_is_identity():
    sys_ = path_matching()
    assert sys_.deletion(0) is sys_
    assert sys_.contraction(0) is sys_


def test_knapsack_deletion_frees_the_small_items():
    sys_ = knapsack_system()
    minor = sys_.deletion(mask_of([0, 1, 2, 3]))  # drop heavy items and the decoy
    assert minor.ground_size == 3
    assert minor.is_independent(0b111)  # 3 * 1/3 = 1 <= 4


def test_matching_deletion_splits_path():
    minor = path_matching().deletion(0b010)
    assert minor.ground_size == 2
    assert minor.is_independent(0b11)  # the two leftover edges are disjoint


def test_knapsack_contraction_shrinks_budget():
    sys_ = knapsack_system()
    minor = sys_.contraction(mask_of([0, 1, 2]))  # all heavy items: budget 1 left
    # minor ids: 0 = decoy (size 1), 1..3 = small items (size 1/3)
    assert minor.is_independent(0b0001)
    assert minor.is_independent(0b0010)
    assert not minor.is_independent(0b0011)  # decoy plus one small item: 4/3 > 1
    assert minor.is_independent(0b1110)


def test_uniform_contraction_drops_rank():
    minor = UniformMatroid(3, 2).contraction(0b001)
    reference = UniformMatroid(2, 1)
    assert list(minor.independent_sets()) == list(reference.independent_sets())


def test_contraction_requires_independence():
    with pytest.raises(DependentSetError):
        UniformMatroid(3, 1).contraction(0b011)


def test_minors_stay_downward_closed():
    sys_ = knapsack_system()
    assert check_downward_closed(sys_.deletion(0b0001011))
    assert check_downward_closed(sys_.contraction(0b0000011))


# -- downward closure over the registry families ------------------------------


@pytest.mark.parametrize(
    "system",
    [
        path_matching(),
        knapsack_system(),
        build_figure_counter1(Fraction(1, 100)).system,
        build_matroid_filmus(Fraction(1, 100)).system,
        build_atsp_triangle(Fraction(1, 10)).system,
        build_two_system(6).system,
        AbLowerBoundSystem(3, 4, 2),
        MatroidIntersection(
            [
                PartitionMatroid(4, [0b0011, 0b1100], [1, 1]),
                PartitionMatroid(4, [0b0101, 0b1010], [1, 1]),
            ]
        ),
    ],
    ids=lambda s: type(s).__name__,
)
def test_downward_closed_and_empty_in_family(system):
    assert system.is_independent(0)
    assert check_downward_closed(system)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=6),
    data=st.data(),
)
def test_random_explicit_systems_downward_closed(n, data):
    masks = data.draw(
        st.lists(st.integers(min_value=0, max_value=(1 << n) - 1), max_size=4)
    )
    system = ExplicitSystem(n, masks)
    assert check_downward_closed(system)
    for maximal in system.maximal_sets:
        assert system.is_maximal(maximal)


def test_partition_matroid_validates_partition():
    with pytest.raises(ValueError):
        PartitionMatroid(3, [0b011, 0b110], [1, 1])  # overlapping blocks
    with pytest.raises(ValueError):
        PartitionMatroid(3, [0b011], [1])  # does not cover element 2


def test_ids_roundtrip():
    mask = mask_of([0, 3, 5])
    assert ids_of(mask) == [0, 3, 5]
    assert list(iter_bits(mask)) == [0, 3, 5]
