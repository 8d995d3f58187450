"""Per-seed sweep workers and the fan-out runner.

Each worker handles one seed end to end and returns a flat, JSON-able
record; the runner reduces records in seed order, so results are identical
whether a sweep runs serially or across a process pool.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial
from typing import Callable

from stablemax.analysis import p_extendibility, hereditary_parameter
from stablemax.bits import mask_of
from stablemax.generators import GeneratorSpec, generate
from stablemax.instances import Instance
from stablemax.objectives import AdditiveObjective
from stablemax.solvers import (
    SolveTrace,
    all_local_optima,
    exact_optimum,
    greedy,
    greedy_alpha,
    greedy_ordering,
)
from stablemax.stability import (
    additive_stability_threshold,
    greedy_failure_certificate,
    local_search_failure_certificate,
    validate_gamma_perturbation,
)
from stablemax.systems import (
    ExplicitSystem,
    KnapsackSystem,
    TwoSystemCounterexample,
)

import math


def run_sweep(worker: Callable, seeds: list[int], params: dict, workers: int = 1) -> list[dict]:
    """Run `worker(seed, params)` over all seeds, optionally fanning out
    across processes; reduction is by seed order either way."""
    if workers <= 1:
        return [worker(seed, params) for seed in seeds]
    bound = partial(worker, params=params)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(bound, seeds))


def _trace_for_set(objective, subset: int) -> SolveTrace:
    order, deltas = greedy_ordering(objective, subset)
    return SolveTrace(
        picks=order,
        deltas=deltas,
        final_set=subset,
        final_value=objective.value(subset),
        iterations=0,
    )


# ---------------------------------------------------------------------------
# greedy recovery, additive objectives, intersections of p partition matroids


def additive_recovery_seed(seed: int, params: dict) -> dict:
    ps: tuple[int, ...] = params.get("ps", (1, 2, 3))
    p = ps[seed % len(ps)]
    n = 6 + (seed % 7)
    spec = GeneratorSpec(
        "partition-matroid-intersection",
        params.get("base_seed", 0) + seed,
        {"ground_size": n, "p": p, "objective": "additive"},
    )
    instance = generate(spec)
    opt = exact_optimum(instance.system, instance.objective)
    record = {"seed": seed, "p": p, "n": n, "violations": []}
    if not opt.unique:
        record["skipped"] = "non-unique optimum"
        return record
    threshold = additive_stability_threshold(instance.system, instance.objective)
    trace = greedy(instance.system, instance.objective)
    failed = trace.final_set != opt.subset
    record["failed"] = failed
    record["ratio"] = str(trace.final_value / opt.value)
    record["gamma_star"] = str(threshold.gamma_star) if threshold.finite else "inf"
    if failed:
        if threshold.finite and threshold.gamma_star > p:
            record["violations"].append(
                f"greedy failed although gamma*={threshold.gamma_star} > p={p}"
            )
        cert = greedy_failure_certificate(
            instance.system, instance.objective, trace, opt.subset
        )
        if cert is None:
            record["violations"].append("no certificate for a greedy failure")
        else:
            record["cert_gamma"] = str(cert.gamma)
            if cert.gamma > p:
                record["violations"].append(
                    f"certificate gamma {cert.gamma} exceeds p={p}"
                )
    return record


# ---------------------------------------------------------------------------
# greedy recovery, monotone submodular objectives


def submodular_recovery_seed(seed: int, params: dict) -> dict:
    p = 1 + (seed % 2)
    kind = "random-block-sum" if (seed % 4) >= 2 else "random-coverage"
    n = 7 + (seed % 3)
    spec = GeneratorSpec(
        kind,
        params.get("base_seed", 10_000) + seed,
        {"ground_size": n, "p": p},
    )
    instance = generate(spec)
    opt = exact_optimum(instance.system, instance.objective)
    record = {"seed": seed, "p": p, "n": n, "kind": kind, "violations": []}
    if not opt.unique:
        record["skipped"] = "non-unique optimum"
        return record
    trace = greedy(instance.system, instance.objective)
    failed = trace.final_set != opt.subset
    record["failed"] = failed
    record["ratio"] = str(trace.final_value / opt.value) if opt.value else "1"
    if failed:
        cert = greedy_failure_certificate(
            instance.system, instance.objective, trace, opt.subset
        )
        if cert is None:
            record["violations"].append("no certificate for a greedy failure")
            return record
        record["cert_gamma"] = str(cert.gamma)
        if cert.gamma > p + 1:
            record["violations"].append(
                f"certificate gamma {cert.gamma} exceeds p+1={p + 1}"
            )
        perturbed = cert.materialize(instance.objective)
        check = validate_gamma_perturbation(instance.objective, perturbed, cert.gamma)
        if not check.valid:
            record["violations"].append("certificate failed perturbation validation")
        if perturbed.value(trace.final_set) < perturbed.value(opt.subset):
            record["violations"].append("perturbed objective does not tie the optimum")
    return record


# ---------------------------------------------------------------------------
# approximate-oracle greedy


def alpha_oracle_seed(seed: int, params: dict) -> dict:
    alphas = (Fraction(1, 2), Fraction(2, 3))
    alpha = alphas[seed % 2]
    p = 1 + ((seed // 2) % 2)
    additive = (seed % 4) < 2
    n = 6 + (seed % 5)
    spec = GeneratorSpec(
        "partition-matroid-intersection",
        params.get("base_seed", 20_000) + seed,
        {
            "ground_size": n,
            "p": p,
            "objective": "additive" if additive else "coverage",
        },
    )
    instance = generate(spec)
    opt = exact_optimum(instance.system, instance.objective)
    record = {
        "seed": seed,
        "p": p,
        "alpha": str(alpha),
        "n": n,
        "violations": [],
    }
    if not opt.unique:
        record["skipped"] = "non-unique optimum"
        return record
    trace = greedy_alpha(instance.system, instance.objective, alpha, seed=seed)
    failed = trace.final_set != opt.subset
    record["failed"] = failed
    bound = (p + alpha) / alpha
    if failed:
        cert = greedy_failure_certificate(
            instance.system, instance.objective, trace, opt.subset
        )
        if cert is None:
            record["violations"].append("no certificate for an alpha-greedy failure")
        else:
            record["cert_gamma"] = str(cert.gamma)
            if cert.gamma > bound:
                record["violations"].append(
                    f"certificate gamma {cert.gamma} exceeds (p+alpha)/alpha={bound}"
                )
    return record


# ---------------------------------------------------------------------------
# local search on 2-extendible systems: worst-case ratio and recovery


def _two_extendible_instance(seed: int, params: dict) -> Instance:
    additive = (seed % 4) < 2
    if seed % 2 == 0:
        spec = GeneratorSpec(
            "random-matching-graph",
            params.get("base_seed", 30_000) + seed,
            {
                "nodes": 6 + (seed % 2),
                "edge_prob": 0.5,
                "objective": "additive" if additive else "coverage",
                "max_edges": 11,
            },
        )
    else:
        spec = GeneratorSpec(
            "partition-matroid-intersection",
            params.get("base_seed", 30_000) + seed,
            {
                "ground_size": 7 + (seed % 5),
                "p": 2,
                "objective": "additive" if additive else "coverage",
            },
        )
    return generate(spec)


def ls_bound_seed(seed: int, params: dict) -> dict:
    instance = _two_extendible_instance(seed, params)
    additive = isinstance(instance.objective, AdditiveObjective)
    opt = exact_optimum(instance.system, instance.objective)
    record = {
        "seed": seed,
        "n": instance.system.ground_size,
        "objective": "additive" if additive else "coverage",
        "violations": [],
    }
    if opt.value == 0:
        record["skipped"] = "zero optimum"
        return record
    optima = all_local_optima(instance.system, instance.objective, 2, 1)
    bound = Fraction(1, 4) if additive else Fraction(1, 5)
    worst = Fraction(1)
    for mask, value in optima:
        ratio = value / opt.value
        if ratio < worst:
            worst = ratio
        if ratio < bound:
            record["violations"].append(
                f"local optimum {mask:#x} has ratio {ratio} below {bound}"
            )
    record["worst_ratio"] = str(worst)
    record["local_optima"] = len(optima)
    return record


def ls_recovery_seed(seed: int, params: dict) -> dict:
    instance = _two_extendible_instance(seed, params)
    additive = isinstance(instance.objective, AdditiveObjective)
    opt = exact_optimum(instance.system, instance.objective)
    record = {
        "seed": seed,
        "n": instance.system.ground_size,
        "objective": "additive" if additive else "coverage",
        "violations": [],
    }
    if not opt.unique:
        record["skipped"] = "non-unique optimum"
        return record
    bound = Fraction(4) if additive else Fraction(5)
    max_gamma = None
    for mask, _value in all_local_optima(instance.system, instance.objective, 2, 1):
        if mask == opt.subset:
            continue
        cert = local_search_failure_certificate(
            instance.system,
            instance.objective,
            _trace_for_set(instance.objective, mask),
            opt.subset,
            remove_cap=2,
        )
        if cert is None:
            record["violations"].append(f"no certificate for local optimum {mask:#x}")
            continue
        if max_gamma is None or cert.gamma > max_gamma:
            max_gamma = cert.gamma
        if cert.gamma > bound:
            record["violations"].append(
                f"certificate gamma {cert.gamma} exceeds {bound}"
            )
        if instance.system.ground_size <= 8:
            perturbed = cert.materialize(instance.objective)
            check = validate_gamma_perturbation(
                instance.objective, perturbed, cert.gamma
            )
            if not check.valid:
                record["violations"].append(
                    "certificate failed perturbation validation"
                )
    if max_gamma is not None:
        record["max_cert_gamma"] = str(max_gamma)
    return record


def ls_matroid_seed(seed: int, params: dict) -> dict:
    p = 3 if seed % 10 == 9 else 1 + (seed % 2)
    additive = (seed % 4) < 2
    n = (6 + (seed % 4)) if p < 3 else 6
    spec = GeneratorSpec(
        "partition-matroid-intersection",
        params.get("base_seed", 40_000) + seed,
        {
            "ground_size": n,
            "p": p,
            "objective": "additive" if additive else "coverage",
        },
    )
    instance = generate(spec)
    opt = exact_optimum(instance.system, instance.objective)
    record = {
        "seed": seed,
        "p": p,
        "n": n,
        "objective": "additive" if additive else "coverage",
        "violations": [],
    }
    if not opt.unique:
        record["skipped"] = "non-unique optimum"
        return record
    bound = Fraction(p) if additive else Fraction(p + 1)
    max_gamma = None
    for mask, _value in all_local_optima(instance.system, instance.objective, p, 1):
        if mask == opt.subset:
            continue
        cert = local_search_failure_certificate(
            instance.system,
            instance.objective,
            _trace_for_set(instance.objective, mask),
            opt.subset,
            remove_cap=p,
        )
        if cert is None:
            record["violations"].append(f"no certificate for local optimum {mask:#x}")
            continue
        if max_gamma is None or cert.gamma > max_gamma:
            max_gamma = cert.gamma
        if cert.gamma > bound:
            record["violations"].append(
                f"certificate gamma {cert.gamma} exceeds {bound}"
            )
    if max_gamma is not None:
        record["max_cert_gamma"] = str(max_gamma)
    return record


# ---------------------------------------------------------------------------
# hereditary parameter vs extendibility


def _random_small_system(seed: int, params: dict):
    rng = random.Random(params.get("base_seed", 50_000) + seed)
    family = seed % 5
    if family == 0:
        n = 4 + (seed % 4)
        count = rng.randint(2, 4)
        sets = [
            mask_of(rng.sample(range(n), rng.randint(1, max(2, n - 2))))
            for _ in range(count)
        ]
        return ExplicitSystem(n, sets), f"explicit(n={n})"
    if family == 1:
        n = 5 + (seed % 4)
        spec = GeneratorSpec(
            "partition-matroid-intersection",
            params.get("base_seed", 50_000) + seed,
            {"ground_size": n, "p": 2, "objective": "additive"},
        )
        return generate(spec).system, f"2-matroid-intersection(n={n})"
    if family == 2:
        spec = GeneratorSpec(
            "random-matching-graph",
            params.get("base_seed", 50_000) + seed,
            {"nodes": 4 + (seed % 2), "edge_prob": 0.6, "max_edges": 8},
        )
        return generate(spec).system, "matching"
    if family == 3:
        n = 5 + (seed % 3)
        sizes = [Fraction(rng.randint(1, 4), rng.choice((1, 2, 3))) for _ in range(n)]
        budget = Fraction(rng.randint(3, 6))
        return KnapsackSystem(sizes, budget), f"knapsack(n={n})"
    return TwoSystemCounterexample(4), "two-system(n=4)"


def hereditary_seed(seed: int, params: dict) -> dict:
    system, label = _random_small_system(seed, params)
    record = {"seed": seed, "family": label, "n": system.ground_size, "violations": []}
    hered = hereditary_parameter(system)
    ext = p_extendibility(system)
    record["hereditary"] = str(hered)
    record["extendible"] = "none" if ext is None else str(ext)
    if ext is None or math.floor(hered) != ext:
        record["violations"].append(
            f"floor({hered}) != extendibility {ext} for {label}"
        )
    return record
