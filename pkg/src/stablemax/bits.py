"""Bitmask helpers for subsets of a dense ground set {0, ..., n-1}."""

from __future__ import annotations

import os
from typing import Iterable, Iterator

DEFAULT_ENUM_CAP = 20
ENUM_CAP_ENV = "STABLEMAX_ENUM_CAP"


def enumeration_cap() -> int:
    """Ground-size cap for enumeration-heavy operations (env-overridable)."""
    raw = os.environ.get(ENUM_CAP_ENV)
    if raw is None:
        return DEFAULT_ENUM_CAP
    return int(raw)


def mask_of(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def ids_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All submasks of `mask`, descending, ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def subsets_of_size_at_most(mask: int, k: int) -> Iterator[int]:
    """Submasks of `mask` with at most k bits, smallest masks first per size."""
    elems = ids_of(mask)
    yield 0
    if k <= 0:
        return
    # iterative combinations by size keeps the scan order deterministic
    import itertools

    for size in range(1, min(k, len(elems)) + 1):
        for combo in itertools.combinations(elems, size):
            yield mask_of(combo)
