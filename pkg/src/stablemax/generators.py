"""Seeded instance generators. Deterministic given the spec: the same seed
always produces bit-identical instances, so sweeps are reproducible."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from stablemax.bits import mask_of
from stablemax.instances import Instance
from stablemax.objectives import (
    AdditiveObjective,
    BlockSumObjective,
    CoverageObjective,
    TableObjective,
    value_table,
)
from stablemax.systems import (
    IndependenceSystem,
    MatchingSystem,
    MatroidIntersection,
    PartitionMatroid,
)

FAMILIES = (
    "partition-matroid-intersection",
    "random-matching-graph",
    "random-coverage",
    "random-block-sum",
)


@dataclass
class GeneratorSpec:
    family: str
    seed: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown generator family {self.family!r}")


def _random_weight(rng: random.Random) -> Fraction:
    # large numerators keep subset sums generic, so optima are almost
    # always unique; callers still guard against ties
    return Fraction(rng.randint(1, 10**9), 1000)


def _random_partition(rng: random.Random, n: int, max_block: int = 3) -> list[int]:
    ids = list(range(n))
    rng.shuffle(ids)
    blocks: list[int] = []
    i = 0
    while i < n:
        size = min(rng.randint(2, max_block), n - i)
        blocks.append(mask_of(ids[i : i + size]))
        i += size
    return blocks


def _partition_matroid_intersection(
    rng: random.Random, n: int, p: int, capacity: int
) -> IndependenceSystem:
    members = []
    for _ in range(p):
        blocks = _random_partition(rng, n)
        members.append(PartitionMatroid(n, blocks, [capacity] * len(blocks)))
    return MatroidIntersection(members)


def _random_coverage_objective(
    rng: random.Random, n: int, universe: int, density: float
) -> CoverageObjective:
    # each element also covers a private item of tiny distinct weight, so
    # distinct sets get distinct values and optima are generically unique
    covers = []
    for i in range(n):
        cover = [u for u in range(universe) if rng.random() < density]
        if not cover:
            cover = [rng.randrange(universe)]
        cover.append(universe + i)
        covers.append(mask_of(cover))
    weights = [_random_weight(rng) for _ in range(universe)]
    weights += [Fraction(rng.randint(1, 10**6), 10**15) for _ in range(n)]
    return CoverageObjective(covers, weights)


def generate(spec: GeneratorSpec) -> Instance:
    """Build the instance described by `spec`; pure function of the spec."""
    rng = random.Random(spec.seed)
    params = dict(spec.params)
    meta = {"family": spec.family, "seed": spec.seed, "params": dict(params)}

    if spec.family == "partition-matroid-intersection":
        n = int(params.get("ground_size", 10))
        p = int(params.get("p", 2))
        capacity = int(params.get("capacity", 1))
        objective_kind = params.get("objective", "additive")
        system = _partition_matroid_intersection(rng, n, p, capacity)
        if objective_kind == "additive":
            objective = AdditiveObjective([_random_weight(rng) for _ in range(n)])
        elif objective_kind == "coverage":
            universe = int(params.get("universe", n))
            density = float(params.get("density", 0.4))
            objective = _random_coverage_objective(rng, n, universe, density)
        else:
            raise ValueError(f"unknown objective kind {objective_kind!r}")
        return Instance(system, objective, meta)

    if spec.family == "random-matching-graph":
        nodes = int(params.get("nodes", 6))
        edge_prob = float(params.get("edge_prob", 0.5))
        objective_kind = params.get("objective", "additive")
        edges = [
            (u, v)
            for u in range(nodes)
            for v in range(u + 1, nodes)
            if rng.random() < edge_prob
        ]
        if len(edges) < 2:  # keep the instance nontrivial, deterministically
            edges = [(0, 1), (1, 2)]
        max_edges = int(params.get("max_edges", 12))
        edges = edges[:max_edges]
        system = MatchingSystem(nodes, edges)
        n = len(edges)
        if objective_kind == "additive":
            objective = AdditiveObjective([_random_weight(rng) for _ in range(n)])
        elif objective_kind == "coverage":
            universe = int(params.get("universe", n))
            objective = _random_coverage_objective(
                rng, n, universe, float(params.get("density", 0.4))
            )
        else:
            raise ValueError(f"unknown objective kind {objective_kind!r}")
        return Instance(system, objective, meta)

    if spec.family == "random-coverage":
        n = int(params.get("ground_size", 8))
        p = int(params.get("p", 1))
        universe = int(params.get("universe", n + 2))
        density = float(params.get("density", 0.4))
        system = _partition_matroid_intersection(rng, n, p, 1)
        objective = _random_coverage_objective(rng, n, universe, density)
        return Instance(system, objective, meta)

    if spec.family == "random-block-sum":
        n = int(params.get("ground_size", 8))
        system = _partition_matroid_intersection(rng, n, int(params.get("p", 1)), 1)
        block_masks = _random_partition(rng, n, max_block=int(params.get("max_block", 4)))
        tables = []
        for b in block_masks:
            size = b.bit_count()
            local = _random_coverage_objective(
                rng, size, max(size, 2), float(params.get("density", 0.5))
            )
            tables.append(
                TableObjective(size, dict(enumerate(value_table(local))))
            )
        objective = BlockSumObjective(block_masks, tables)
        return Instance(system, objective, meta)

    raise ValueError(f"unknown generator family {spec.family!r}")
