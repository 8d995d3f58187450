"""Greedy, approximate-oracle greedy, (p,q)-local search, and the exact
brute-force optimum, all emitting traces rich enough to build perturbation
certificates from.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from stablemax.bits import ids_of, iter_bits, mask_of
from stablemax.objectives import AdditiveObjective, Objective
from stablemax.systems import DependentSetError, IndependenceSystem

ZERO = Fraction(0)


@dataclass
class SolveTrace:
    """Ordered element picks with per-step marginal gains.

    For greedy runs the picks are the actual selection order. Local search
    reports the greedy ordering of its final set (the ordering its
    certificates are built from), so in both cases prefixes are independent
    and the deltas telescope to the final value.
    """

    picks: list[int]
    deltas: list[Fraction]
    final_set: int
    final_value: Fraction
    iterations: int
    hit_iteration_cap: bool = False


@dataclass
class OptimumResult:
    subset: int
    value: Fraction
    unique: bool


@dataclass
class LocalSearchConfig:
    remove_cap: int
    add_cap: int
    max_iterations: int | None = None
    initial: int | str = "greedy-seeded"

    def __post_init__(self):
        if self.remove_cap < 1 or self.add_cap < 1:
            raise ValueError("remove_cap and add_cap must be >= 1")


def _pick(candidates: Sequence[int], gains: dict[int, Fraction], rng) -> int:
    best = max(gains[e] for e in candidates)
    tied = [e for e in candidates if gains[e] == best]
    if rng is None or len(tied) == 1:
        return tied[0]
    return rng.choice(tied)


def greedy(
    system: IndependenceSystem, objective: Objective, tie_break: int | str | None = "lex"
) -> SolveTrace:
    """Repeatedly add the feasible element of maximum marginal gain until the
    set is maximal. Zero-marginal elements are still added. Ties go to the
    lowest element id by default; pass an int seed for seeded-random ties."""
    rng = None
    if isinstance(tie_break, int) and not isinstance(tie_break, bool):
        rng = random.Random(tie_break)
    elif isinstance(tie_break, random.Random):
        rng = tie_break
    current = 0
    picks: list[int] = []
    deltas: list[Fraction] = []
    while True:
        exts = system.feasible_extensions(current)
        if not exts:
            break
        gains = {e: objective.marginal(current, e) for e in exts}
        chosen = _pick(exts, gains, rng)
        picks.append(chosen)
        deltas.append(gains[chosen])
        current |= 1 << chosen
    return SolveTrace(
        picks=picks,
        deltas=deltas,
        final_set=current,
        final_value=objective.value(current),
        iterations=len(picks),
    )


def greedy_alpha(
    system: IndependenceSystem,
    objective: Objective,
    alpha: Fraction,
    seed: int = 0,
) -> SolveTrace:
    """Greedy with an approximate selection oracle: each step picks some
    feasible element whose marginal is at least alpha times the best one,
    chosen by a seeded RNG. alpha = 1 degenerates to greedy with
    seed-determined tie-breaks."""
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise ValueError("alpha must be in (0, 1]")
    rng = random.Random(seed)
    current = 0
    picks: list[int] = []
    deltas: list[Fraction] = []
    while True:
        exts = system.feasible_extensions(current)
        if not exts:
            break
        gains = {e: objective.marginal(current, e) for e in exts}
        best = max(gains.values())
        admissible = [e for e in exts if gains[e] >= alpha * best]
        chosen = rng.choice(admissible)
        picks.append(chosen)
        deltas.append(gains[chosen])
        current |= 1 << chosen
    return SolveTrace(
        picks=picks,
        deltas=deltas,
        final_set=current,
        final_value=objective.value(current),
        iterations=len(picks),
    )


def greedy_ordering(objective: Objective, subset: int) -> tuple[list[int], list[Fraction]]:
    """Order the elements of `subset` greedily by marginal gain (ties to the
    lowest id) and return the ordering with its prefix deltas."""
    remaining = set(iter_bits(subset))
    prefix = 0
    order: list[int] = []
    deltas: list[Fraction] = []
    while remaining:
        gains = {e: objective.marginal(prefix, e) for e in remaining}
        best = max(gains.values())
        chosen = min(e for e in remaining if gains[e] == best)
        order.append(chosen)
        deltas.append(gains[chosen])
        prefix |= 1 << chosen
        remaining.remove(chosen)
    return order, deltas


def _maximalize(system: IndependenceSystem, objective: Objective, current: int) -> tuple[int, int]:
    """Add feasible extensions (best marginal first, even if zero) until maximal."""
    steps = 0
    while True:
        exts = system.feasible_extensions(current)
        if not exts:
            return current, steps
        gains = {e: objective.marginal(current, e) for e in exts}
        chosen = _pick(exts, gains, None)
        current |= 1 << chosen
        steps += 1


def _best_improving_swap(
    system: IndependenceSystem,
    objective: Objective,
    current: int,
    remove_cap: int,
    add_cap: int,
) -> int | None:
    """Best-improvement (p,q)-swap; among equal-value improvements the
    neighbor with the smallest (removed mask, added mask) pair wins, making
    the move deterministic. Returns None when the set is swap-stable."""
    current_ids = ids_of(current)
    comp_ids = [e for e in range(system.ground_size) if not (current >> e) & 1]
    current_value = objective.value(current)
    best: tuple[Fraction, tuple[int, int], int] | None = None
    for r_size in range(min(remove_cap, len(current_ids)) + 1):
        for r_combo in itertools.combinations(current_ids, r_size):
            removed = mask_of(r_combo)
            base = current & ~removed
            for a_size in range(min(add_cap, len(comp_ids)) + 1):
                if r_size == 0 and a_size == 0:
                    continue
                for a_combo in itertools.combinations(comp_ids, a_size):
                    added = mask_of(a_combo)
                    candidate = base | added
                    if candidate == current:
                        continue
                    if not system.is_independent(candidate):
                        continue
                    value = objective.value(candidate)
                    if value <= current_value:
                        continue
                    key = (removed, added)
                    if best is None or value > best[0] or (value == best[0] and key < best[1]):
                        best = (value, key, candidate)
    return best[2] if best else None


def local_search(
    system: IndependenceSystem, objective: Objective, config: LocalSearchConfig
) -> SolveTrace:
    """(p,q)-local search with best-improvement moves in exact arithmetic.

    Swaps remove up to `remove_cap` and add up to `add_cap` elements; pure
    additions are always applied (even at zero marginal gain), so the output
    is maximal as well as swap-stable. Values strictly increase over a finite
    lattice, so termination is guaranteed; `max_iterations` is a safety
    budget whose exhaustion is flagged, not fatal.
    """
    if config.initial in ("greedy-seeded", "greedy"):
        current = greedy(system, objective).final_set
    elif config.initial == "empty-maximal":
        current = 0
    elif isinstance(config.initial, int):
        current = config.initial
        if not system.is_independent(current):
            raise DependentSetError("initial set is not independent")
    else:
        raise ValueError(f"unrecognized initial set spec: {config.initial!r}")

    budget = config.max_iterations
    if budget is None:
        budget = 10 * (1 << system.ground_size)

    iterations = 0
    hit_cap = False
    while True:
        current, steps = _maximalize(system, objective, current)
        iterations += steps
        if iterations >= budget:
            hit_cap = True
            break
        improved = _best_improving_swap(
            system, objective, current, config.remove_cap, config.add_cap
        )
        if improved is None:
            break
        current = improved
        iterations += 1
        if iterations >= budget:
            hit_cap = True
            break

    order, deltas = greedy_ordering(objective, current)
    return SolveTrace(
        picks=order,
        deltas=deltas,
        final_set=current,
        final_value=objective.value(current),
        iterations=iterations,
        hit_iteration_cap=hit_cap,
    )


def _additive_int_table(objective: AdditiveObjective, n: int) -> tuple[list[int], int]:
    denominator = math.lcm(*(w.denominator for w in objective.weights)) if n else 1
    scaled = [int(w * denominator) for w in objective.weights]
    table = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        table[mask] = table[mask ^ low] + scaled[low.bit_length() - 1]
    return table, denominator


def exact_optimum(system: IndependenceSystem, objective: Objective) -> OptimumResult:
    """Global maximizer by full enumeration of the independence family.
    `unique` is False when a different independent set ties the maximum."""
    n = system.ground_size
    if isinstance(objective, AdditiveObjective):
        table, denom = _additive_int_table(objective, n)
        best_val: int | None = None
        best_mask = 0
        ties = 0
        for mask in system.independent_sets():
            v = table[mask]
            if best_val is None or v > best_val:
                best_val, best_mask, ties = v, mask, 1
            elif v == best_val:
                ties += 1
        assert best_val is not None  # the empty set is always independent
        return OptimumResult(best_mask, Fraction(best_val, denom), ties == 1)
    best: Fraction | None = None
    best_mask = 0
    ties = 0
    for mask in system.independent_sets():
        v = objective.value(mask)
        if best is None or v > best:
            best, best_mask, ties = v, mask, 1
        elif v == best:
            ties += 1
    assert best is not None
    return OptimumResult(best_mask, best, ties == 1)


def is_local_optimum(
    system: IndependenceSystem,
    objective: Objective,
    subset: int,
    remove_cap: int,
    add_cap: int,
) -> bool:
    """Post-hoc verifier: maximal and admitting no improving (p,q)-swap."""
    if not system.is_maximal(subset):
        return False
    return (
        _best_improving_swap(system, objective, subset, remove_cap, add_cap) is None
    )


def all_local_optima(
    system: IndependenceSystem,
    objective: Objective,
    remove_cap: int,
    add_cap: int,
) -> list[tuple[int, Fraction]]:
    """Every (p,q)-swap-stable maximal independent set, by exhaustive scan."""
    indep = set(system.independent_mask_list())
    out: list[tuple[int, Fraction]] = []
    for mask in system.independent_mask_list():
        maximal = True
        for e in range(system.ground_size):
            bit = 1 << e
            if not mask & bit and (mask | bit) in indep:
                maximal = False
                break
        if not maximal:
            continue
        if (
            _best_improving_swap(system, objective, mask, remove_cap, add_cap)
            is None
        ):
            out.append((mask, objective.value(mask)))
    return out
