"""Perturbation-stability machinery: exact additive stability thresholds,
construction and validation of bounded perturbations of submodular
objectives, and non-stability certificates extracted from solver failures.

A certificate here is always a concrete perturbation within the allowed
family under which some other feasible set ties or beats the nominal
optimum, proving the instance is not gamma-stable at the certificate's
gamma.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from stablemax.bits import enumeration_cap, iter_bits
from stablemax.objectives import (
    AdditiveObjective,
    BlockSumObjective,
    Objective,
    ObjectiveValidation,
    TableObjective,
    validate_objective,
    value_table,
)
from stablemax.solvers import (
    SolveTrace,
    exact_optimum,
    greedy_ordering,
    is_local_optimum,
)
from stablemax.systems import CapExceededError, IndependenceSystem

ONE = Fraction(1)


class NonUniqueOptimumError(Exception):
    """Stability is undefined when the optimum is not unique (the instance is
    not even 1-stable); callers must disambiguate the instance first."""


@dataclass
class AdditivePerturbation:
    """Per-element weight multipliers, each in [1, gamma]."""

    multipliers: tuple[Fraction, ...]
    gamma: Fraction

    def __post_init__(self):
        self.multipliers = tuple(Fraction(m) for m in self.multipliers)
        self.gamma = Fraction(self.gamma)
        for m in self.multipliers:
            if not ONE <= m <= self.gamma:
                raise ValueError(f"multiplier {m} outside [1, {self.gamma}]")

    def apply(self, objective: AdditiveObjective) -> AdditiveObjective:
        if len(self.multipliers) != objective.ground_size:
            raise ValueError("multiplier count does not match the ground size")
        return AdditiveObjective(
            [w * m for w, m in zip(objective.weights, self.multipliers)]
        )


@dataclass
class SequencePerturbation:
    """Ordering with prefix deltas inducing
    f~(S) = f(S) + (gamma - 1) * sum of deltas over ordering elements in S."""

    ordering: list[int]
    deltas: list[Fraction]
    gamma: Fraction

    def materialize(self, objective: Objective) -> TableObjective:
        return build_sequence_perturbation(objective, self.ordering, self.gamma)


@dataclass
class StabilityReport:
    kind: str  # "additive-exact" | "submodular-upper-bound"
    gamma_star: Fraction | None  # None means no finite value (unbounded)
    competing_set: int | None
    certificate: AdditivePerturbation | SequencePerturbation | None

    @property
    def finite(self) -> bool:
        return self.gamma_star is not None


@dataclass
class PerturbationValidation:
    """Per-property verdicts for the three conditions a gamma-perturbation
    must satisfy, with the first violating witness of each."""

    monotone_submodular: bool
    envelope: bool  # f <= f~ <= gamma * f pointwise
    marginal_bounds: bool  # 0 <= f~_S(j) - f_S(j) <= (gamma-1) * f({j})
    shape_report: ObjectiveValidation
    envelope_witness: int | None = None
    marginal_witness: tuple[int, int] | None = None

    @property
    def valid(self) -> bool:
        return self.monotone_submodular and self.envelope and self.marginal_bounds


@dataclass
class BlockCertificate:
    """Per-block perturbations of a welfare objective witnessing that the
    nominal optimum can be tied by scaling each block's function by at most
    `gamma`."""

    gamma: Fraction
    boosted: list[int]
    boosts: dict[int, Fraction]
    block_perturbations: list[TableObjective]
    perturbed: BlockSumObjective


def additive_stability_threshold(
    system: IndependenceSystem,
    objective: AdditiveObjective | Sequence[Fraction],
) -> StabilityReport:
    """Exact additive stability threshold by brute force.

    gamma* = min over independent S != S* with w(S \\ S*) > 0 of
    w(S* \\ S) / w(S \\ S*). Boosting elements of S* or of neither set never
    helps a competitor, so multiplying exactly S \\ S* by gamma is the
    adversary's optimal move and this minimum is the true threshold: the
    instance is gamma-stable iff gamma < gamma*.
    """
    if not isinstance(objective, AdditiveObjective):
        objective = AdditiveObjective(list(objective))
    opt = exact_optimum(system, objective)
    if not opt.unique:
        raise NonUniqueOptimumError(
            "optimal solution is not unique, the instance is not even 1-stable"
        )
    s_star = opt.subset
    weights = objective.weights
    best_ratio: Fraction | None = None
    best_set: int | None = None
    for mask in system.independent_sets():
        if mask == s_star:
            continue
        outside = mask & ~s_star
        if outside == 0:
            continue
        gain = sum((weights[e] for e in iter_bits(outside)), Fraction(0))
        if gain == 0:
            continue  # boosting zero weight can never catch the optimum
        loss = sum((weights[e] for e in iter_bits(s_star & ~mask)), Fraction(0))
        ratio = loss / gain
        if best_ratio is None or ratio < best_ratio:
            best_ratio, best_set = ratio, mask
    if best_ratio is None:
        return StabilityReport("additive-exact", None, None, None)
    boosted = best_set & ~s_star
    multipliers = tuple(
        best_ratio if (boosted >> e) & 1 else ONE
        for e in range(system.ground_size)
    )
    certificate = AdditivePerturbation(multipliers, max(best_ratio, ONE))
    return StabilityReport("additive-exact", best_ratio, best_set, certificate)


def sequence_deltas(objective: Objective, ordering: Sequence[int]) -> list[Fraction]:
    """Prefix deltas of an ordered sequence: delta_i = f(e_1..e_i) - f(e_1..e_{i-1})."""
    prefix = 0
    out: list[Fraction] = []
    for e in ordering:
        if (prefix >> e) & 1:
            raise ValueError("ordering has repeated elements")
        out.append(objective.marginal(prefix, e))
        prefix |= 1 << e
    return out


def build_sequence_perturbation(
    objective: Objective, ordering: Sequence[int], gamma: Fraction
) -> TableObjective:
    """Materialize f~(S) = f(S) + (gamma-1) * sum_{i: e_i in S} delta_i over
    the full power set, with the deltas taken along `ordering`'s prefixes."""
    gamma = Fraction(gamma)
    if gamma < 1:
        raise ValueError("gamma must be at least 1")
    n = objective.ground_size
    cap = enumeration_cap()
    if n > cap:
        raise CapExceededError(f"ground size {n} exceeds enumeration cap {cap}")
    deltas = sequence_deltas(objective, ordering)
    base = value_table(objective)
    scale = gamma - 1
    values: dict[int, Fraction] = {}
    for mask in range(1 << n):
        boost = sum(
            (d for e, d in zip(ordering, deltas) if (mask >> e) & 1), Fraction(0)
        )
        values[mask] = base[mask] + scale * boost
    return TableObjective(n, values)


def validate_gamma_perturbation(
    f: Objective, f_tilde: Objective, gamma: Fraction
) -> PerturbationValidation:
    """Exhaustively check the three defining properties of a
    gamma-perturbation; returns the first violating witness per property."""
    gamma = Fraction(gamma)
    if f.ground_size != f_tilde.ground_size:
        raise ValueError("objectives live on different ground sets")
    n = f.ground_size
    cap = enumeration_cap()
    if n > cap:
        raise CapExceededError(f"ground size {n} exceeds enumeration cap {cap}")

    shape = validate_objective(f_tilde)
    monotone_submodular = shape.monotone and shape.submodular

    base = value_table(f)
    pert = value_table(f_tilde)

    envelope = True
    envelope_witness = None
    for mask in range(1 << n):
        if not base[mask] <= pert[mask] <= gamma * base[mask]:
            envelope, envelope_witness = False, mask
            break

    singleton_caps = [(gamma - 1) * base[1 << j] for j in range(n)]
    marginal_bounds = True
    marginal_witness = None
    for mask in range(1 << n):
        for j in range(n):
            bit = 1 << j
            if mask & bit:
                continue
            diff = (pert[mask | bit] - pert[mask]) - (base[mask | bit] - base[mask])
            if diff < 0 or diff > singleton_caps[j]:
                marginal_bounds, marginal_witness = False, (mask, j)
                break
        if not marginal_bounds:
            break

    return PerturbationValidation(
        monotone_submodular=monotone_submodular,
        envelope=envelope,
        marginal_bounds=marginal_bounds,
        shape_report=shape,
        envelope_witness=envelope_witness,
        marginal_witness=marginal_witness,
    )


def _restricted_certificate(
    objective: Objective,
    ordering_source: list[int],
    found_set: int,
    found_value: Fraction,
    s_star: int,
    s_star_value: Fraction,
) -> SequencePerturbation | None:
    """Boost the out-of-optimum elements of a solver's set, in the given
    order, by the smallest gamma that makes the set tie the optimum.

    The deltas are the prefix deltas of the restricted ordering itself (so
    the boosted function is a valid perturbation by construction and the
    delta sum telescopes to f of the boosted set)."""
    ordering = [e for e in ordering_source if not (s_star >> e) & 1]
    deltas = sequence_deltas(objective, ordering)
    denom = sum(deltas, Fraction(0))
    if denom == 0:
        return None
    gamma = 1 + (s_star_value - found_value) / denom
    return SequencePerturbation(ordering=ordering, deltas=deltas, gamma=gamma)


def greedy_failure_certificate(
    system: IndependenceSystem,
    objective: Objective,
    trace: SolveTrace,
    s_star: int,
) -> SequencePerturbation | None:
    """Non-stability certificate from a failed greedy run: boost the greedy
    picks outside the optimum (in pick order) by
    gamma = 1 + (f(S*) - f(S)) / sum of their restricted-chain deltas.

    Returns None when that delta sum is zero (the out-of-optimum picks carry
    no value, so this family cannot certify)."""
    if trace.final_set == s_star:
        raise ValueError("greedy recovered the optimum; there is nothing to certify")
    return _restricted_certificate(
        objective,
        trace.picks,
        trace.final_set,
        trace.final_value,
        s_star,
        objective.value(s_star),
    )


def local_search_failure_certificate(
    system: IndependenceSystem,
    objective: Objective,
    trace: SolveTrace,
    s_star: int,
    remove_cap: int = 1,
    verify_local_optimality: bool = False,
) -> SequencePerturbation | None:
    """Certificate from a swap-stable set A != S*: boost A \\ S* along the
    greedy ordering of A. `remove_cap` is the p of the (p,1)-search that
    produced A; with verify_local_optimality the stability of A is re-checked
    by exhaustive neighbor scan before certifying."""
    a_set = trace.final_set
    if a_set == s_star:
        raise ValueError("local search recovered the optimum; there is nothing to certify")
    if verify_local_optimality and not is_local_optimum(
        system, objective, a_set, remove_cap, 1
    ):
        raise ValueError("trace's final set is not a local optimum for the given swap size")
    order, _ = greedy_ordering(objective, a_set)
    return _restricted_certificate(
        objective,
        order,
        a_set,
        objective.value(a_set),
        s_star,
        objective.value(s_star),
    )


def block_perturbation_certificate(
    system: IndependenceSystem,
    objective: BlockSumObjective,
    trace: SolveTrace,
    s_star: int,
) -> BlockCertificate | None:
    """Welfare certificate: boost, inside each block's own function, the
    marginals the greedy run realized for its out-of-optimum picks, scaled
    by the smallest factor that makes the greedy allocation tie the optimum.

    On a matroid the unscaled boosts already close the gap, so the resulting
    per-block gamma is at most 2."""
    found = trace.final_set
    if found == s_star:
        raise ValueError("greedy recovered the optimum; there is nothing to certify")
    boosted: list[int] = []
    boosts: dict[int, Fraction] = {}
    for e, delta in zip(trace.picks, trace.deltas):
        if not (s_star >> e) & 1:
            boosted.append(e)
            boosts[e] = delta  # marginal at the moment greedy added e
    denom = sum(boosts.values(), Fraction(0))
    if denom == 0:
        return None
    scale = (objective.value(s_star) - objective.value(found)) / denom
    gamma = 1 + scale

    block_perturbations: list[TableObjective] = []
    for i, block in enumerate(objective.blocks):
        table = objective.tables[i]
        local_boosts = [
            (objective.localize(i, 1 << e), boosts[e])
            for e in boosted
            if (block >> e) & 1
        ]
        values: dict[int, Fraction] = {}
        for mask in range(1 << table.ground_size):
            bump = sum(
                (d for local_bit, d in local_boosts if mask & local_bit),
                Fraction(0),
            )
            values[mask] = table.value(mask) + scale * bump
        block_perturbations.append(TableObjective(table.ground_size, values))

    perturbed = BlockSumObjective(list(objective.blocks), block_perturbations)
    return BlockCertificate(
        gamma=gamma,
        boosted=boosted,
        boosts=boosts,
        block_perturbations=block_perturbations,
        perturbed=perturbed,
    )


def submodular_stability_upper_bound(
    system: IndependenceSystem, objective: Objective
) -> StabilityReport:
    """Best non-stability certificate over the sequence-perturbation family,
    one candidate per independent set T != S* (boosting T \\ S* along the
    greedy ordering of T). The instance is provably NOT gamma-stable for any
    gamma at or above the reported bound; for additive objectives the bound
    coincides with the exact threshold."""
    opt = exact_optimum(system, objective)
    if not opt.unique:
        raise NonUniqueOptimumError(
            "optimal solution is not unique, the instance is not even 1-stable"
        )
    s_star = opt.subset
    best_gamma: Fraction | None = None
    best_set: int | None = None
    for mask in system.independent_sets():
        if mask == s_star:
            continue
        outside = mask & ~s_star
        if outside == 0:
            continue
        denom = objective.value(outside)  # restricted-chain deltas telescope
        if denom == 0:
            continue
        gamma = 1 + (opt.value - objective.value(mask)) / denom
        if best_gamma is None or gamma < best_gamma:
            best_gamma, best_set = gamma, mask
    if best_gamma is None:
        return StabilityReport("submodular-upper-bound", None, None, None)
    order, _ = greedy_ordering(objective, best_set)
    certificate = _restricted_certificate(
        objective,
        order,
        best_set,
        objective.value(best_set),
        s_star,
        opt.value,
    )
    return StabilityReport("submodular-upper-bound", best_gamma, best_set, certificate)
