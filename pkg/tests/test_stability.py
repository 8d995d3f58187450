import random
from fractions import Fraction

import pytest

from stablemax.bits import ids_of, iter_bits, mask_of
from stablemax.generators import GeneratorSpec, generate
from stablemax.objectives import (
    AdditiveObjective,
    BlockSumObjective,
    CoverageObjective,
    TableObjective,
    value_table,
)
from stablemax.scenarios import (
    build_ab_lower_bound,
    build_cardinality,
    build_figure_counter1,
    build_knapsack,
    build_matching_path,
    build_matroid_filmus,
    build_two_system,
)
from stablemax.solvers import (
    LocalSearchConfig,
    SolveTrace,
    exact_optimum,
    greedy,
    local_search,
)
from stablemax.stability import (
    AdditivePerturbation,
    NonUniqueOptimumError,
    SequencePerturbation,
    additive_stability_threshold,
    block_perturbation_certificate,
    build_sequence_perturbation,
    greedy_failure_certificate,
    local_search_failure_certificate,
    sequence_deltas,
    submodular_stability_upper_bound,
    validate_gamma_perturbation,
)
from stablemax.systems import ExplicitSystem, UniformMatroid


def brute_force_threshold(system, weights):
    """Independent oracle: smallest boost ratio over every independent
    competitor, computed directly from the definition."""
    best_value = max(
        sum((weights[e] for e in iter_bits(m)), Fraction(0))
        for m in system.independent_sets()
    )
    tops = [
        m
        for m in system.independent_sets()
        if sum((weights[e] for e in iter_bits(m)), Fraction(0)) == best_value
    ]
    assert len(tops) == 1
    s_star = tops[0]
    best = None
    for m in system.independent_sets():
        if m == s_star:
            continue
        gain = sum((weights[e] for e in iter_bits(m & ~s_star)), Fraction(0))
        if gain == 0:
            continue
        loss = sum((weights[e] for e in iter_bits(s_star & ~m)), Fraction(0))
        ratio = loss / gain
        if best is None or ratio < best:
            best = ratio
    return s_star, best


# -- additive thresholds -------------------------------------------------------


def test_threshold_matching_path():
    inst = build_matching_path(Fraction(1, 10))
    report = additive_stability_threshold(inst.system, inst.objective)
    assert report.kind == "additive-exact"
    assert report.gamma_star == Fraction(20, 11)
    assert report.competing_set == 0b010
    # the certificate realizes an exact tie against the optimum
    perturbed = report.certificate.apply(inst.objective)
    opt = exact_optimum(inst.system, inst.objective)
    assert perturbed.value(report.competing_set) == perturbed.value(opt.subset)


def test_threshold_knapsack_beats_the_greedy_competitor():
    # the unrestricted threshold (any competitor may drop one heavy item and
    # keep the small ones) is smaller than the boost needed to favour the
    # greedy set itself
    inst = build_knapsack(3, Fraction(1, 10))
    report = additive_stability_threshold(inst.system, inst.objective)
    assert report.gamma_star == Fraction(20, 11)
    assert ids_of(report.competing_set) == [0, 1, 3, 4, 5, 6]
    trace = greedy(inst.system, inst.objective)
    opt = exact_optimum(inst.system, inst.objective)
    cert = greedy_failure_certificate(inst.system, inst.objective, trace, opt.subset)
    assert cert.gamma == Fraction(30, 11)
    assert report.gamma_star < cert.gamma


def test_threshold_two_system_is_huge():
    inst = build_two_system(6)
    report = additive_stability_threshold(inst.system, inst.objective)
    assert report.gamma_star == Fraction(10**6, 3)


def test_threshold_unbounded_when_no_competitor_gains():
    system = UniformMatroid(2, 2)
    report = additive_stability_threshold(system, AdditiveObjective([Fraction(1), Fraction(2)]))
    assert report.gamma_star is None and not report.finite


def test_threshold_refuses_non_unique_optimum():
    system = UniformMatroid(2, 1)
    with pytest.raises(NonUniqueOptimumError):
        additive_stability_threshold(system, AdditiveObjective([Fraction(1), Fraction(1)]))


def test_threshold_matches_independent_oracle_on_random_instances():
    rng = random.Random(19)
    checked = 0
    for seed in range(30):
        spec = GeneratorSpec(
            "partition-matroid-intersection",
            400 + seed,
            {"ground_size": rng.randint(5, 8), "p": rng.choice((1, 2)), "objective": "additive"},
        )
        inst = generate(spec)
        opt = exact_optimum(inst.system, inst.objective)
        if not opt.unique:
            continue
        s_star, expected = brute_force_threshold(inst.system, inst.objective.weights)
        report = additive_stability_threshold(inst.system, inst.objective)
        assert s_star == opt.subset
        assert report.gamma_star == expected
        checked += 1
    assert checked >= 25


def test_additive_perturbation_rejects_bad_multipliers():
    with pytest.raises(ValueError):
        AdditivePerturbation((Fraction(1, 2),), Fraction(2))
    with pytest.raises(ValueError):
        AdditivePerturbation((Fraction(3),), Fraction(2))


# -- sequence perturbations ------------------------------------------------------


def test_sequence_perturbation_gamma_one_is_identity():
    inst = build_cardinality(2, Fraction(1, 100))
    perturbed = build_sequence_perturbation(inst.objective, [0, 1], Fraction(1))
    for mask in range(8):
        assert perturbed.value(mask) == inst.objective.value(mask)


def test_sequence_perturbation_additive_scales_weights():
    weights = [Fraction(3), Fraction(5), Fraction(7)]
    objective = AdditiveObjective(weights)
    gamma = Fraction(5, 3)
    perturbed = build_sequence_perturbation(objective, [2, 0], gamma)
    expected = AdditiveObjective([gamma * weights[0], weights[1], gamma * weights[2]])
    for mask in range(8):
        assert perturbed.value(mask) == expected.value(mask)


def test_sequence_perturbation_cardinality_example():
    eps = Fraction(1, 100)
    inst = build_cardinality(2, eps)
    perturbed = build_sequence_perturbation(inst.objective, [0], Fraction(3, 2))
    assert perturbed.value(0b110) == 1  # the optimum is untouched
    assert perturbed.value(0b011) == 1 + Fraction(3, 2) * eps


def test_sequence_deltas_reject_repeats():
    inst = build_matching_path(Fraction(1, 10))
    with pytest.raises(ValueError):
        sequence_deltas(inst.objective, [0, 0])


# -- gamma-perturbation validation ------------------------------------------------


def test_validate_identity_perturbation():
    obj = build_cardinality(2, Fraction(1, 100)).objective
    report = validate_gamma_perturbation(obj, obj, Fraction(3))
    assert report.valid


def test_validate_catches_envelope_violation():
    obj = AdditiveObjective([Fraction(1), Fraction(2)])
    gamma = Fraction(2)
    blown = AdditiveObjective([w * (gamma + 1) for w in obj.weights])
    report = validate_gamma_perturbation(obj, blown, gamma)
    assert not report.envelope and report.envelope_witness is not None
    assert not report.valid


def test_validate_catches_marginal_violation():
    obj = AdditiveObjective([Fraction(1), Fraction(1)])
    gamma = Fraction(3, 2)
    tweaked = TableObjective(
        2, {0: Fraction(0), 1: Fraction(1), 2: Fraction(1), 3: Fraction(3)}
    )
    report = validate_gamma_perturbation(obj, tweaked, gamma)
    assert report.envelope  # 3 <= gamma * 2
    assert not report.marginal_bounds
    mask, j = report.marginal_witness
    assert (mask, j) == (1, 1) or (mask, j) == (2, 0)


def test_validate_catches_submodularity_break():
    obj = AdditiveObjective([Fraction(2), Fraction(2)])
    bumped = TableObjective(
        2, {0: Fraction(0), 1: Fraction(2), 2: Fraction(2), 3: Fraction(5)}
    )
    report = validate_gamma_perturbation(obj, bumped, Fraction(2))
    assert not report.monotone_submodular


def random_monotone_submodular(rng, n):
    kind = rng.randrange(3)
    if kind == 0:
        return AdditiveObjective(
            [Fraction(rng.randint(0, 40), rng.randint(1, 5)) for _ in range(n)]
        )
    universe = n + rng.randint(1, 3)
    covers = []
    for _ in range(n):
        size = rng.randint(1, universe)
        covers.append(mask_of(rng.sample(range(universe), size)))
    weights = [Fraction(rng.randint(0, 30), 7) for _ in range(universe)]
    if kind == 1:
        return CoverageObjective(covers, weights)
    table = dict(enumerate(value_table(CoverageObjective(covers, weights))))
    return TableObjective(n, table)


def test_sequence_perturbations_always_validate():
    # oracle form of the construction's soundness, on random triples
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(2, 5)
        objective = random_monotone_submodular(rng, n)
        length = rng.randint(1, n)
        ordering = rng.sample(range(n), length)
        gamma = 1 + Fraction(rng.randint(0, 400), 100)
        perturbed = build_sequence_perturbation(objective, ordering, gamma)
        report = validate_gamma_perturbation(objective, perturbed, gamma)
        assert report.valid


# -- failure certificates ----------------------------------------------------------


def test_greedy_certificate_cardinality():
    eps = Fraction(1, 100)
    inst = build_cardinality(2, eps)
    trace = greedy(inst.system, inst.objective)
    opt = exact_optimum(inst.system, inst.objective)
    cert = greedy_failure_certificate(inst.system, inst.objective, trace, opt.subset)
    assert cert.ordering == [0]
    assert cert.gamma == 1 + (Fraction(1, 4) - eps) / (Fraction(1, 2) + eps)
    perturbed = cert.materialize(inst.objective)
    assert perturbed.value(trace.final_set) == perturbed.value(opt.subset)
    assert validate_gamma_perturbation(inst.objective, perturbed, cert.gamma).valid


def test_greedy_certificate_requires_failure():
    system = UniformMatroid(3, 2)
    objective = AdditiveObjective([Fraction(3), Fraction(2), Fraction(1)])
    trace = greedy(system, objective)
    opt = exact_optimum(system, objective)
    with pytest.raises(ValueError):
        greedy_failure_certificate(system, objective, trace, opt.subset)


def test_greedy_certificate_none_on_zero_delta_sum():
    # hand-built trace whose out-of-optimum picks carry no value
    objective = CoverageObjective([0, 0b1], [Fraction(1)])
    system = ExplicitSystem(2, [0b01, 0b10])
    trace = SolveTrace([0], [Fraction(0)], 0b01, Fraction(0), 1)
    assert greedy_failure_certificate(system, objective, trace, 0b10) is None


def test_local_search_certificate_examples():
    eps = Fraction(1, 100)
    inst = build_figure_counter1(eps)
    cfg = LocalSearchConfig(remove_cap=2, add_cap=1, initial=mask_of([0, 1]))
    trace = local_search(inst.system, inst.objective, cfg)
    opt = exact_optimum(inst.system, inst.objective)
    cert = local_search_failure_certificate(
        inst.system, inst.objective, trace, opt.subset, remove_cap=2,
        verify_local_optimality=True,
    )
    assert cert.gamma == Fraction(4) / (1 + eps)
    assert set(cert.ordering) == {0, 1}

    ab = build_ab_lower_bound(2, Fraction(1, 2), 8)
    cfg = LocalSearchConfig(remove_cap=2, add_cap=1, initial=ab.system.a_mask)
    trace = local_search(ab.system, ab.objective, cfg)
    opt = exact_optimum(ab.system, ab.objective)
    cert = local_search_failure_certificate(ab.system, ab.objective, trace, opt.subset, remove_cap=2)
    assert cert.gamma == Fraction(9, 4)


def test_local_search_certificate_filmus():
    eps = Fraction(1, 100)
    inst = build_matroid_filmus(eps)
    cfg = LocalSearchConfig(remove_cap=1, add_cap=1, initial=mask_of([0, 2]))
    trace = local_search(inst.system, inst.objective, cfg)
    opt = exact_optimum(inst.system, inst.objective)
    cert = local_search_failure_certificate(
        inst.system, inst.objective, trace, opt.subset, remove_cap=1
    )
    assert cert.gamma == Fraction(2) / (1 + 2 * eps)
    assert cert.gamma < 2
    perturbed = cert.materialize(inst.objective)
    assert validate_gamma_perturbation(inst.objective, perturbed, cert.gamma).valid
    assert perturbed.value(trace.final_set) == perturbed.value(opt.subset)


def test_local_search_certificate_verifies_optimality_when_asked():
    inst = build_figure_counter1(Fraction(1, 100))
    opt = exact_optimum(inst.system, inst.objective)
    bogus = SolveTrace([2], [Fraction(2)], 0b000100, Fraction(2), 1)
    with pytest.raises(ValueError):
        local_search_failure_certificate(
            inst.system, inst.objective, bogus, opt.subset,
            remove_cap=2, verify_local_optimality=True,
        )


# -- block certificates --------------------------------------------------------------


def test_block_certificate_single_additive_block_matches_greedy_certificate():
    inst = build_matching_path(Fraction(1, 10))
    weights = inst.objective.weights
    table = TableObjective(3, dict(enumerate(value_table(inst.objective))))
    block_obj = BlockSumObjective([0b111], [table])
    trace = greedy(inst.system, block_obj)
    opt = exact_optimum(inst.system, block_obj)
    block_cert = block_perturbation_certificate(inst.system, block_obj, trace, opt.subset)
    plain_cert = greedy_failure_certificate(inst.system, inst.objective, greedy(inst.system, inst.objective), opt.subset)
    assert block_cert.gamma == plain_cert.gamma == Fraction(20, 11)
    assert weights[1] * block_cert.gamma == block_cert.perturbed.value(0b010)


def test_block_certificate_on_seeded_welfare_failure():
    found = None
    for seed in range(120):
        spec = GeneratorSpec("random-block-sum", 70_000 + seed, {"ground_size": 8, "p": 1})
        inst = generate(spec)
        opt = exact_optimum(inst.system, inst.objective)
        if not opt.unique:
            continue
        trace = greedy(inst.system, inst.objective)
        if trace.final_set != opt.subset:
            found = (inst, trace, opt)
            break
    assert found is not None
    inst, trace, opt = found
    cert = block_perturbation_certificate(inst.system, inst.objective, trace, opt.subset)
    assert cert is not None and 1 < cert.gamma <= 2
    for table, perturbed in zip(inst.objective.tables, cert.block_perturbations):
        assert validate_gamma_perturbation(table, perturbed, cert.gamma).valid
    assert cert.perturbed.value(trace.final_set) >= cert.perturbed.value(opt.subset)


def test_block_certificate_requires_failure():
    t = TableObjective(1, {0: Fraction(0), 1: Fraction(1)})
    obj = BlockSumObjective([0b1], [t])
    system = UniformMatroid(1, 1)
    trace = greedy(system, obj)
    with pytest.raises(ValueError):
        block_perturbation_certificate(system, obj, trace, trace.final_set)


# -- certificate-family upper bound ----------------------------------------------------


def test_upper_bound_equals_threshold_for_additive():
    for seed in range(15):
        spec = GeneratorSpec(
            "partition-matroid-intersection",
            600 + seed,
            {"ground_size": 7, "p": 2, "objective": "additive"},
        )
        inst = generate(spec)
        if not exact_optimum(inst.system, inst.objective).unique:
            continue
        exact = additive_stability_threshold(inst.system, inst.objective)
        bound = submodular_stability_upper_bound(inst.system, inst.objective)
        assert bound.kind == "submodular-upper-bound"
        assert bound.gamma_star == exact.gamma_star


def test_tightness_witnesses_approach_thresholds():
    # shrinking the bump drives the certificates toward their thresholds
    def matching_gap(eps):
        inst = build_matching_path(eps)
        report = additive_stability_threshold(inst.system, inst.objective)
        return 2 - report.gamma_star

    def counter1_gap(eps):
        inst = build_figure_counter1(eps)
        cfg = LocalSearchConfig(remove_cap=2, add_cap=1, initial=mask_of([0, 1]))
        trace = local_search(inst.system, inst.objective, cfg)
        opt = exact_optimum(inst.system, inst.objective)
        cert = local_search_failure_certificate(
            inst.system, inst.objective, trace, opt.subset, remove_cap=2
        )
        return 4 - cert.gamma

    for gap in (matching_gap, counter1_gap):
        coarse = gap(Fraction(1, 10))
        fine = gap(Fraction(1, 1000))
        assert 0 < fine < coarse


def test_upper_bound_cardinality():
    inst = build_cardinality(2, Fraction(1, 100))
    bound = submodular_stability_upper_bound(inst.system, inst.objective)
    assert bound.gamma_star == Fraction(25, 17)
    cert = bound.certificate
    assert isinstance(cert, SequencePerturbation)
    perturbed = cert.materialize(inst.objective)
    assert validate_gamma_perturbation(inst.objective, perturbed, cert.gamma).valid
    opt = exact_optimum(inst.system, inst.objective)
    assert perturbed.value(bound.competing_set) >= perturbed.value(opt.subset)
