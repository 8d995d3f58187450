"""Versioned on-disk format for instances and reports.

Structured JSON, human-diffable: rationals are "num/den" strings, subsets
are sorted id arrays, systems are a kind tag plus a parameters object, and
explicit tables are keyed by bitmask integer. parse(serialize(x)) round-trips
bit-exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from stablemax.bits import ids_of, mask_of
from stablemax.instances import Instance
from stablemax.objectives import (
    AdditiveObjective,
    BlockSumObjective,
    CoverageObjective,
    Objective,
    TableObjective,
)
from stablemax.systems import (
    AbLowerBoundSystem,
    AtspSystem,
    ExplicitSystem,
    IndependenceSystem,
    KnapsackSystem,
    MatchingSystem,
    MatroidIntersection,
    PartitionMatroid,
    TwoSystemCounterexample,
    UniformMatroid,
)

INSTANCE_FORMAT = "stablemax-instance/1"
REPORT_FORMAT = "stablemax-report/1"


def rat(value: Fraction) -> str:
    return str(Fraction(value))


def unrat(text: str) -> Fraction:
    return Fraction(text)


def system_to_doc(system: IndependenceSystem) -> dict[str, Any]:
    if isinstance(system, UniformMatroid):
        return {
            "kind": "uniform-matroid",
            "params": {"ground_size": system.ground_size, "rank": system.rank},
        }
    if isinstance(system, PartitionMatroid):
        return {
            "kind": "partition-matroid",
            "params": {
                "ground_size": system.ground_size,
                "blocks": [ids_of(b) for b in system.blocks],
                "capacities": list(system.capacities),
            },
        }
    if isinstance(system, MatroidIntersection):
        return {
            "kind": "intersection",
            "params": {"members": [system_to_doc(m) for m in system.members]},
        }
    if isinstance(system, MatchingSystem):
        return {
            "kind": "matching",
            "params": {
                "num_vertices": system.num_vertices,
                "edges": [list(e) for e in system.edges],
            },
        }
    if isinstance(system, AtspSystem):
        return {"kind": "atsp", "params": {"num_nodes": system.num_nodes}}
    if isinstance(system, KnapsackSystem):
        return {
            "kind": "knapsack",
            "params": {
                "sizes": [rat(s) for s in system.sizes],
                "budget": rat(system.budget),
            },
        }
    if isinstance(system, TwoSystemCounterexample):
        return {"kind": "two-system", "params": {"n": system.n}}
    if isinstance(system, AbLowerBoundSystem):
        return {
            "kind": "ab-lower-bound",
            "params": {
                "size_a": system.size_a,
                "size_b": system.size_b,
                "p": system.p,
            },
        }
    if isinstance(system, ExplicitSystem):
        return {
            "kind": "explicit",
            "params": {
                "ground_size": system.ground_size,
                "maximal_sets": [ids_of(m) for m in system.maximal_sets],
            },
        }
    raise TypeError(f"cannot serialize system of type {type(system).__name__}")


def system_from_doc(doc: dict[str, Any]) -> IndependenceSystem:
    kind = doc["kind"]
    params = doc["params"]
    if kind == "uniform-matroid":
        return UniformMatroid(params["ground_size"], params["rank"])
    if kind == "partition-matroid":
        return PartitionMatroid(
            params["ground_size"],
            [mask_of(b) for b in params["blocks"]],
            list(params["capacities"]),
        )
    if kind == "intersection":
        return MatroidIntersection([system_from_doc(m) for m in params["members"]])
    if kind == "matching":
        return MatchingSystem(
            params["num_vertices"], [tuple(e) for e in params["edges"]]
        )
    if kind == "atsp":
        return AtspSystem(params["num_nodes"])
    if kind == "knapsack":
        return KnapsackSystem(
            [unrat(s) for s in params["sizes"]], unrat(params["budget"])
        )
    if kind == "two-system":
        return TwoSystemCounterexample(params["n"])
    if kind == "ab-lower-bound":
        return AbLowerBoundSystem(params["size_a"], params["size_b"], params["p"])
    if kind == "explicit":
        return ExplicitSystem.from_id_lists(
            params["ground_size"], params["maximal_sets"]
        )
    raise ValueError(f"unknown system kind {kind!r}")


def objective_to_doc(objective: Objective) -> dict[str, Any]:
    if isinstance(objective, AdditiveObjective):
        return {
            "kind": "additive",
            "params": {
                "weights": {str(i): rat(w) for i, w in enumerate(objective.weights)}
            },
        }
    if isinstance(objective, CoverageObjective):
        return {
            "kind": "coverage",
            "params": {
                "covers": {str(i): ids_of(c) for i, c in enumerate(objective.covers)},
                "universe_weights": {
                    str(u): rat(w) for u, w in enumerate(objective.universe_weights)
                },
            },
        }
    if isinstance(objective, BlockSumObjective):
        return {
            "kind": "block-sum",
            "params": {
                "blocks": [ids_of(b) for b in objective.blocks],
                "tables": [
                    {str(mask): rat(v) for mask, v in sorted(t.values.items())}
                    if isinstance(t, TableObjective)
                    else {
                        str(mask): rat(t.value(mask))
                        for mask in range(1 << t.ground_size)
                    }
                    for t in objective.tables
                ],
            },
        }
    if isinstance(objective, TableObjective):
        return {
            "kind": "table",
            "params": {
                "ground_size": objective.ground_size,
                "values": {str(mask): rat(v) for mask, v in sorted(objective.values.items())},
            },
        }
    raise TypeError(f"cannot serialize objective of type {type(objective).__name__}")


def _weights_from_map(weight_map: dict[str, str]) -> list[Fraction]:
    n = len(weight_map)
    out = [Fraction(0)] * n
    for key, value in weight_map.items():
        out[int(key)] = unrat(value)
    return out


def objective_from_doc(doc: dict[str, Any]) -> Objective:
    kind = doc["kind"]
    params = doc["params"]
    if kind == "additive":
        return AdditiveObjective(_weights_from_map(params["weights"]))
    if kind == "coverage":
        covers_map = params["covers"]
        covers = [0] * len(covers_map)
        for key, ids in covers_map.items():
            covers[int(key)] = mask_of(ids)
        return CoverageObjective(covers, _weights_from_map(params["universe_weights"]))
    if kind == "block-sum":
        blocks = [mask_of(b) for b in params["blocks"]]
        tables = [
            TableObjective(
                blocks[i].bit_count(),
                {int(k): unrat(v) for k, v in table.items()},
            )
            for i, table in enumerate(params["tables"])
        ]
        return BlockSumObjective(blocks, tables)
    if kind == "table":
        return TableObjective(
            params["ground_size"],
            {int(k): unrat(v) for k, v in params["values"].items()},
        )
    raise ValueError(f"unknown objective kind {kind!r}")


def trace_to_doc(trace) -> dict[str, Any]:
    """SolveTrace in report form: ordered picks, rational deltas, final set."""
    return {
        "picks": list(trace.picks),
        "deltas": [rat(d) for d in trace.deltas],
        "final_set": ids_of(trace.final_set),
        "final_value": rat(trace.final_value),
        "iterations": trace.iterations,
        "hit_iteration_cap": trace.hit_iteration_cap,
    }


def certificate_to_doc(certificate) -> dict[str, Any] | None:
    """Full multiplier/ordering payload so third parties can re-validate."""
    if certificate is None:
        return None
    if hasattr(certificate, "multipliers"):
        return {
            "kind": "additive",
            "gamma": rat(certificate.gamma),
            "multipliers": [rat(m) for m in certificate.multipliers],
        }
    return {
        "kind": "sequence",
        "gamma": rat(certificate.gamma),
        "ordering": list(certificate.ordering),
        "deltas": [rat(d) for d in certificate.deltas],
    }


def stability_to_doc(report) -> dict[str, Any]:
    return {
        "kind": report.kind,
        "gamma_star": rat(report.gamma_star) if report.gamma_star is not None else "unbounded",
        "competing_set": ids_of(report.competing_set)
        if report.competing_set is not None
        else None,
        "certificate": certificate_to_doc(report.certificate),
    }


def profile_to_doc(profile) -> dict[str, Any]:
    return {
        "p_system": rat(profile.p_system),
        "p_extendible": profile.p_extendible if profile.p_extendible is not None else "none",
        "p_hereditary": rat(profile.p_hereditary)
        if profile.p_hereditary is not None
        else "skipped",
        "downward_closed": profile.downward_closed,
    }


def instance_to_doc(instance: Instance, name: str | None = None) -> dict[str, Any]:
    return {
        "format": INSTANCE_FORMAT,
        "name": name or instance.metadata.get("name", ""),
        "system": system_to_doc(instance.system),
        "objective": objective_to_doc(instance.objective),
        "metadata": instance.metadata,
    }


def instance_from_doc(doc: dict[str, Any]) -> Instance:
    if doc.get("format") != INSTANCE_FORMAT:
        raise ValueError(f"unsupported instance format {doc.get('format')!r}")
    return Instance(
        system_from_doc(doc["system"]),
        objective_from_doc(doc["objective"]),
        doc.get("metadata", {}),
    )


def serialize_instance(instance: Instance, name: str | None = None) -> str:
    return json.dumps(instance_to_doc(instance, name), indent=2, sort_keys=True) + "\n"


def parse_instance(text: str) -> Instance:
    return instance_from_doc(json.loads(text))


def load_instance(path: str) -> Instance:
    with open(path) as fh:
        return parse_instance(fh.read())


def save_instance(instance: Instance, path: str, name: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(serialize_instance(instance, name))
