"""Exact set-function oracles: additive, coverage, explicit-table, and
block-sum (welfare) objectives, plus validators for monotonicity and
submodularity.

All values are `fractions.Fraction`. Objectives are immutable after
construction; evaluation is pure (an internal memo cache only stores already
computed exact values).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from stablemax.bits import enumeration_cap, ids_of, iter_bits
from stablemax.systems import CapExceededError, _require_within_ground

ZERO = Fraction(0)


class TableEntryMissingError(Exception):
    """An explicit table was queried for a subset it has no entry for."""


class Objective:
    ground_size: int

    def __init__(self, ground_size: int):
        self.ground_size = ground_size
        self._cache: dict[int, Fraction] = {}

    def _value(self, mask: int) -> Fraction:
        raise NotImplementedError

    def value(self, subset: int) -> Fraction:
        _require_within_ground(subset, self.ground_size)
        got = self._cache.get(subset)
        if got is None:
            got = self._value(subset)
            self._cache[subset] = got
        return got

    def marginal(self, subset: int, j: int) -> Fraction:
        """f(S+j) - f(S); requires j not in S."""
        if (subset >> j) & 1:
            raise ValueError(f"element {j} already in the set")
        return self.value(subset | (1 << j)) - self.value(subset)


class AdditiveObjective(Objective):
    """f(S) = sum of per-element weights."""

    def __init__(self, weights: Sequence[Fraction]):
        super().__init__(len(weights))
        self.weights = tuple(Fraction(w) for w in weights)

    def _value(self, mask: int) -> Fraction:
        return sum((self.weights[e] for e in iter_bits(mask)), ZERO)

    def marginal(self, subset: int, j: int) -> Fraction:
        if (subset >> j) & 1:
            raise ValueError(f"element {j} already in the set")
        return self.weights[j]


class CoverageObjective(Objective):
    """Each element covers a subset of a weighted universe; f(S) is the weight
    of the union of the covered subsets."""

    def __init__(self, covers: Sequence[int], universe_weights: Sequence[Fraction]):
        super().__init__(len(covers))
        self.universe_size = len(universe_weights)
        for c in covers:
            _require_within_ground(c, self.universe_size)
        self.covers = tuple(covers)
        self.universe_weights = tuple(Fraction(w) for w in universe_weights)
        if any(w < 0 for w in self.universe_weights):
            raise ValueError("universe weights must be nonnegative")

    def _value(self, mask: int) -> Fraction:
        covered = 0
        for e in iter_bits(mask):
            covered |= self.covers[e]
        return sum((self.universe_weights[u] for u in iter_bits(covered)), ZERO)


class TableObjective(Objective):
    """Explicit table over the power set, keyed by bitmask. Missing entries
    are an error, not zero; malformed scenario files should fail loudly."""

    def __init__(self, ground_size: int, values: Mapping[int, Fraction]):
        super().__init__(ground_size)
        self.values = {int(k): Fraction(v) for k, v in values.items()}
        for k in self.values:
            _require_within_ground(k, ground_size)

    def _value(self, mask: int) -> Fraction:
        try:
            return self.values[mask]
        except KeyError:
            raise TableEntryMissingError(
                f"no table entry for subset {sorted(ids_of(mask))}"
            ) from None


class BlockSumObjective(Objective):
    """f(S) = sum over blocks of f_i(S ∩ B_i), with each f_i an objective on
    the dense relabeling of its block (welfare form)."""

    def __init__(self, blocks: Sequence[int], tables: Sequence[Objective]):
        if len(blocks) != len(tables):
            raise ValueError("one table per block required")
        union = 0
        for b in blocks:
            if union & b:
                raise ValueError("blocks must be disjoint")
            union |= b
        ground_size = union.bit_length()
        if union != (1 << ground_size) - 1:
            raise ValueError("blocks must partition a dense ground set")
        super().__init__(ground_size)
        self.blocks = tuple(blocks)
        self.tables = tuple(tables)
        self._block_ids = [ids_of(b) for b in blocks]
        for ids, t in zip(self._block_ids, tables):
            if t.ground_size != len(ids):
                raise ValueError("table ground size must match its block size")

    def localize(self, block_index: int, subset: int) -> int:
        """Global subset -> local mask within block `block_index`."""
        local = 0
        for pos, g in enumerate(self._block_ids[block_index]):
            if (subset >> g) & 1:
                local |= 1 << pos
        return local

    def block_value(self, block_index: int, subset: int) -> Fraction:
        return self.tables[block_index].value(self.localize(block_index, subset))

    def _value(self, mask: int) -> Fraction:
        return sum(
            (self.block_value(i, mask & b) for i, b in enumerate(self.blocks)),
            ZERO,
        )


@dataclass
class ObjectiveValidation:
    nonnegative: bool
    zero_at_empty: bool
    monotone: bool
    submodular: bool
    nonnegative_witness: int | None = None
    monotone_witness: tuple[int, int] | None = None
    submodular_witness: tuple[int, int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.nonnegative and self.zero_at_empty and self.monotone and self.submodular


def value_table(obj: Objective, ground_size: int | None = None) -> list[Fraction]:
    """Materialize f over the whole power set, indexed by mask.

    Uses an incremental recurrence for additive objectives; generic
    objectives are evaluated mask by mask.
    """
    n = obj.ground_size if ground_size is None else ground_size
    size = 1 << n
    if isinstance(obj, AdditiveObjective):
        table = [ZERO] * size
        for mask in range(1, size):
            low = mask & -mask
            table[mask] = table[mask ^ low] + obj.weights[low.bit_length() - 1]
        return table
    return [obj.value(mask) for mask in range(size)]


def validate_objective(obj: Objective, cap: int | None = None) -> ObjectiveValidation:
    """Exhaustively check nonnegativity, f(∅)=0, monotonicity, and
    submodularity, returning the first violating witness per property.

    Submodularity is checked through the pairwise condition
    f(S+i) + f(S+j) >= f(S+i+j) + f(S) for all S and i != j outside S,
    which is equivalent to the marginal form over all nested pairs; a
    violation at (S, i, j) is reported as the triple (S, S+i, j).
    """
    cap = enumeration_cap() if cap is None else cap
    n = obj.ground_size
    if n > cap:
        raise CapExceededError(f"ground size {n} exceeds validation cap {cap}")
    f = value_table(obj)

    zero_at_empty = f[0] == 0
    nonnegative = True
    nonnegative_witness = None
    for mask in range(1 << n):
        if f[mask] < 0:
            nonnegative, nonnegative_witness = False, mask
            break

    monotone = True
    monotone_witness = None
    for mask in range(1 << n):
        for j in range(n):
            bit = 1 << j
            if mask & bit:
                continue
            if f[mask | bit] < f[mask]:
                monotone, monotone_witness = False, (mask, j)
                break
        if not monotone:
            break

    submodular = True
    submodular_witness = None
    for mask in range(1 << n):
        for i in range(n):
            bi = 1 << i
            if mask & bi:
                continue
            for j in range(i + 1, n):
                bj = 1 << j
                if mask & bj:
                    continue
                if f[mask | bi] + f[mask | bj] < f[mask | bi | bj] + f[mask]:
                    # marginal of j shrank going from S to S+i
                    submodular, submodular_witness = False, (mask, mask | bi, j)
                    break
            if not submodular:
                break
        if not submodular:
            break

    return ObjectiveValidation(
        nonnegative=nonnegative,
        zero_at_empty=zero_at_empty,
        monotone=monotone,
        submodular=submodular,
        nonnegative_witness=nonnegative_witness,
        monotone_witness=monotone_witness,
        submodular_witness=submodular_witness,
    )
