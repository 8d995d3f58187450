"""Structural parameters of independence systems.

Everything here is definition-faithful brute force over desk-scale grounds:
base ratios for the p-system parameter, the exchange-style p-extendibility
parameter, and the hereditary parameter (worst p-system ratio over minors).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from stablemax.bits import enumeration_cap, iter_bits, popcount, submasks
from stablemax.systems import (
    CapExceededError,
    IndependenceSystem,
    check_downward_closed,
)

_INF = math.inf

HEREDITARY_CAP_DEFAULT = 10


@dataclass
class SystemProfile:
    p_system: Fraction
    p_extendible: int | None
    p_hereditary: Fraction | None
    downward_closed: bool


def p_system_parameter(system: IndependenceSystem, cap: int | None = None) -> Fraction:
    """Largest ratio (max base size)/(min base size) over all subsets Y.

    A subset J of Y is a base iff it is independent and no element of Y\\J
    extends it. Subsets whose only base is empty contribute nothing (the
    ratio is undefined there); matroids come out as exactly 1.
    """
    cap = enumeration_cap() if cap is None else cap
    n = system.ground_size
    if n > cap:
        raise CapExceededError(f"ground size {n} exceeds cap {cap}")
    indep = set(system.independent_mask_list())
    best = Fraction(1)
    for y in range(1 << n):
        biggest = 0
        smallest: int | None = None
        for j in submasks(y):
            if j not in indep:
                continue
            rest = y & ~j
            maximal = True
            for e in iter_bits(rest):
                if (j | (1 << e)) in indep:
                    maximal = False
                    break
            if maximal:
                c = popcount(j)
                if c > biggest:
                    biggest = c
                if smallest is None or c < smallest:
                    smallest = c
        if biggest == 0 or smallest is None or smallest == 0:
            continue  # only the empty base exists
        ratio = Fraction(biggest, smallest)
        if ratio > best:
            best = ratio
    return best


def p_extendibility(system: IndependenceSystem, cap: int | None = None) -> int | None:
    """Smallest integer p such that whenever A ⊆ B are independent and A+e is
    independent, at most p elements of B\\A must be dropped so that B still
    accepts e. Returns None if no p up to `cap` works.

    Computed as the max over witness triples (A, B, e) of the minimum
    removal size, via a superset DP per (B, e); equivalent to searching
    p = 1, 2, ... with a violated-triple early exit, but one pass.
    """
    n = system.ground_size
    enum_cap = enumeration_cap()
    if n > enum_cap:
        raise CapExceededError(f"ground size {n} exceeds enumeration cap {enum_cap}")
    cap = n if cap is None else cap
    indep_list = system.independent_mask_list()
    indep = set(indep_list)
    full = (1 << n) - 1
    required = 1  # plain extendibility only makes sense for p >= 1
    for b_mask in indep_list:
        nb = popcount(b_mask)
        for e in iter_bits(full & ~b_mask):
            ebit = 1 << e
            if ebit not in indep:
                continue  # A+e can never be independent
            # h[W] = min removals |B \ W'| over W ⊆ W' ⊆ B with W'+e independent
            h: dict[int, float] = {}
            for w in submasks(b_mask):  # descending: supersets seen first
                best: float = nb - popcount(w) if (w | ebit) in indep else _INF
                for extra in iter_bits(b_mask & ~w):
                    cand = h[w | (1 << extra)]
                    if cand < best:
                        best = cand
                h[w] = best
            for a_mask in submasks(b_mask):
                if (a_mask | ebit) not in indep:
                    continue
                need = h[a_mask]  # finite: W' = A itself always qualifies
                if need > required:
                    required = int(need)
    return required if required <= cap else None


def hereditary_parameter(
    system: IndependenceSystem, cap: int = HEREDITARY_CAP_DEFAULT
) -> Fraction:
    """Worst p-system parameter over all deletion and contraction minors.

    Deleting elements never changes the bases of the surviving subsets, so
    the deletion side is already covered by the undeleted system's own
    p_system_parameter (which maximizes over every subset); only contractions
    by independent sets can push the ratio up.
    """
    n = system.ground_size
    if n > cap:
        raise CapExceededError(f"ground size {n} exceeds hereditary cap {cap}")
    best = p_system_parameter(system)
    for y in system.independent_mask_list():
        if y == 0:
            continue
        minor = system.contraction(y)
        ratio = p_system_parameter(minor)
        if ratio > best:
            best = ratio
    return best


def verify_hereditary_extendible_equivalence(
    system: IndependenceSystem, hereditary_cap: int = HEREDITARY_CAP_DEFAULT
) -> bool:
    """floor(hereditary parameter) == p-extendibility, both computed here."""
    hered = hereditary_parameter(system, cap=hereditary_cap)
    ext = p_extendibility(system)
    return ext is not None and math.floor(hered) == ext


def profile_system(
    system: IndependenceSystem, include_hereditary: bool | None = None
) -> SystemProfile:
    """Compute the full structural profile; the hereditary parameter is
    skipped automatically on grounds past its cap unless forced (forcing
    lifts the cap and accepts the doubly exponential cost)."""
    if include_hereditary is None:
        include_hereditary = system.ground_size <= HEREDITARY_CAP_DEFAULT
        cap = HEREDITARY_CAP_DEFAULT
    else:
        cap = max(HEREDITARY_CAP_DEFAULT, system.ground_size)
    hered = hereditary_parameter(system, cap=cap) if include_hereditary else None
    return SystemProfile(
        p_system=p_system_parameter(system),
        p_extendible=p_extendibility(system),
        p_hereditary=hered,
        downward_closed=check_downward_closed(system),
    )
