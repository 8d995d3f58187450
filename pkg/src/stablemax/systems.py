"""Downward-closed independence systems as uniform membership oracles.

Ground sets are {0, ..., ground_size-1}; subsets are int bitmasks. Every
concrete family used by the scenario registry lives here, plus deletion and
contraction minors. Systems are immutable after construction and all
operations are pure, so they are safe to share across threads or processes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Sequence

from stablemax.bits import enumeration_cap, ids_of, iter_bits, mask_of, popcount


class CapExceededError(Exception):
    """Raised when an enumeration op is asked to run past the ground-size cap."""


class DependentSetError(Exception):
    """Raised when an operation requires an independent set but got a dependent one."""


def _require_within_ground(mask: int, ground_size: int) -> None:
    if mask < 0 or mask >> ground_size:
        raise ValueError(
            f"subset mask {mask:#x} has bits outside ground set of size {ground_size}"
        )


class IndependenceSystem:
    """Base oracle. Subclasses implement `_independent` for masks already
    validated to lie within the ground set."""

    ground_size: int

    def __init__(self, ground_size: int):
        if ground_size < 0:
            raise ValueError("ground_size must be nonnegative")
        self.ground_size = ground_size
        self._indep_cache: list[int] | None = None

    # -- membership -------------------------------------------------------

    def _independent(self, mask: int) -> bool:
        raise NotImplementedError

    def is_independent(self, subset: int) -> bool:
        _require_within_ground(subset, self.ground_size)
        return self._independent(subset)

    def is_maximal(self, subset: int) -> bool:
        """True iff no single element can be added feasibly. Requires subset in I."""
        return not self.feasible_extensions(subset)

    def feasible_extensions(self, subset: int) -> list[int]:
        """Elements e not in `subset` with subset+e independent, ascending ids."""
        if not self.is_independent(subset):
            raise DependentSetError(f"set {sorted(ids_of(subset))} is not independent")
        out = []
        for e in range(self.ground_size):
            bit = 1 << e
            if subset & bit:
                continue
            if self._independent(subset | bit):
                out.append(e)
        return out

    # -- enumeration ------------------------------------------------------

    def independent_sets(self) -> Iterator[int]:
        """Every independent set exactly once, in bitmask order."""
        cap = enumeration_cap()
        if self.ground_size > cap:
            raise CapExceededError(
                f"ground size {self.ground_size} exceeds enumeration cap {cap}"
            )
        for mask in range(1 << self.ground_size):
            if self._independent(mask):
                yield mask

    def independent_mask_list(self) -> list[int]:
        """Cached list(self.independent_sets()); systems are immutable so this is pure."""
        if self._indep_cache is None:
            self._indep_cache = list(self.independent_sets())
        return self._indep_cache

    # -- minors -----------------------------------------------------------

    def deletion(self, removed: int) -> "IndependenceSystem":
        """Restriction to X \\ removed: independent sets of I avoiding `removed`,
        relabeled onto a dense ground set."""
        _require_within_ground(removed, self.ground_size)
        if removed == 0:
            return self
        return MinorSystem(self, removed=removed, contracted=0)

    def contraction(self, contracted: int) -> "IndependenceSystem":
        """Contraction by an independent set Y: Z independent iff Z ∪ Y ∈ I,
        on the dense relabeling of X \\ Y."""
        if not self.is_independent(contracted):
            raise DependentSetError(
                f"cannot contract dependent set {sorted(ids_of(contracted))}"
            )
        if contracted == 0:
            return self
        return MinorSystem(self, removed=0, contracted=contracted)


class MinorSystem(IndependenceSystem):
    """Deletion/contraction minor answering membership through the parent oracle."""

    def __init__(self, parent: IndependenceSystem, removed: int, contracted: int):
        if removed & contracted:
            raise ValueError("removed and contracted sets overlap")
        gone = removed | contracted
        keep = [e for e in range(parent.ground_size) if not (gone >> e) & 1]
        super().__init__(len(keep))
        self.parent = parent
        self.contracted = contracted
        self._lift = keep  # minor id -> parent id

    def lift_mask(self, mask: int) -> int:
        out = 0
        for e in iter_bits(mask):
            out |= 1 << self._lift[e]
        return out

    def _independent(self, mask: int) -> bool:
        return self.parent.is_independent(self.lift_mask(mask) | self.contracted)


class UniformMatroid(IndependenceSystem):
    """Independent iff |S| <= rank."""

    def __init__(self, ground_size: int, rank: int):
        super().__init__(ground_size)
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        self.rank = rank

    def _independent(self, mask: int) -> bool:
        return popcount(mask) <= self.rank


class PartitionMatroid(IndependenceSystem):
    """Disjoint blocks covering the ground set, with a capacity per block."""

    def __init__(self, ground_size: int, blocks: Sequence[int], capacities: Sequence[int]):
        super().__init__(ground_size)
        if len(blocks) != len(capacities):
            raise ValueError("one capacity per block required")
        union = 0
        for b in blocks:
            _require_within_ground(b, ground_size)
            if union & b:
                raise ValueError("blocks must be disjoint")
            union |= b
        if union != (1 << ground_size) - 1:
            raise ValueError("blocks must cover the ground set")
        if any(c < 0 for c in capacities):
            raise ValueError("capacities must be nonnegative")
        self.blocks = tuple(blocks)
        self.capacities = tuple(capacities)

    def _independent(self, mask: int) -> bool:
        return all(
            popcount(mask & b) <= c for b, c in zip(self.blocks, self.capacities)
        )


class MatroidIntersection(IndependenceSystem):
    """Common independent sets of several systems on the same ground set."""

    def __init__(self, members: Sequence[IndependenceSystem]):
        if not members:
            raise ValueError("need at least one member system")
        sizes = {m.ground_size for m in members}
        if len(sizes) != 1:
            raise ValueError("member systems must share a ground set")
        super().__init__(members[0].ground_size)
        self.members = tuple(members)

    def _independent(self, mask: int) -> bool:
        return all(m._independent(mask) for m in self.members)


class MatchingSystem(IndependenceSystem):
    """Edges of an undirected graph as elements; independent sets are matchings."""

    def __init__(self, num_vertices: int, edges: Sequence[tuple[int, int]]):
        super().__init__(len(edges))
        self.num_vertices = num_vertices
        for u, v in edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError("edge endpoint outside vertex range")
        self.edges = tuple((u, v) for u, v in edges)

    def _independent(self, mask: int) -> bool:
        used = 0
        for e in iter_bits(mask):
            u, v = self.edges[e]
            pair = (1 << u) | (1 << v)
            if used & pair:
                return False
            used |= pair
        return True


class AtspSystem(IndependenceSystem):
    """Arcs of the complete digraph on `num_nodes` nodes (no self-loops).

    Independent sets are arc sets forming vertex-disjoint directed paths, or
    one Hamiltonian cycle covering every node.
    """

    def __init__(self, num_nodes: int):
        if num_nodes < 2:
            raise ValueError("need at least two nodes")
        arcs = [
            (u, v) for u in range(num_nodes) for v in range(num_nodes) if u != v
        ]
        super().__init__(len(arcs))
        self.num_nodes = num_nodes
        self.arcs = tuple(arcs)
        self._arc_id = {a: i for i, a in enumerate(arcs)}

    def arc_id(self, u: int, v: int) -> int:
        return self._arc_id[(u, v)]

    def _independent(self, mask: int) -> bool:
        succ: dict[int, int] = {}
        indeg: set[int] = set()
        count = 0
        for e in iter_bits(mask):
            u, v = self.arcs[e]
            if u in succ or v in indeg:
                return False
            succ[u] = v
            indeg.add(v)
            count += 1
        if count == 0:
            return True
        # with in/out degrees <= 1 the arcs split into simple paths and cycles;
        # any cycle must be Hamiltonian, which forces count == num_nodes
        if count < self.num_nodes:
            # must be acyclic: follow successors from every source-free start
            starts = [u for u in succ if u not in indeg]
            reached = 0
            for s in starts:
                node = s
                while node in succ:
                    node = succ[node]
                    reached += 1
            return reached == count  # leftover arcs would form a cycle
        if count == self.num_nodes:
            # every node now has out-degree exactly 1; a single Hamiltonian
            # cycle is the unique way the walk from 0 visits n distinct nodes
            node = 0
            visited: set[int] = set()
            for _ in range(count):
                node = succ.get(node, -1)
                if node < 0 or node in visited:
                    return False
                visited.add(node)
            return node == 0
        return False


class KnapsackSystem(IndependenceSystem):
    """Exact-rational knapsack: independent iff total size fits the budget."""

    def __init__(self, sizes: Sequence[Fraction], budget: Fraction):
        super().__init__(len(sizes))
        self.sizes = tuple(Fraction(s) for s in sizes)
        if any(s < 0 for s in self.sizes):
            raise ValueError("sizes must be nonnegative")
        self.budget = Fraction(budget)

    def _independent(self, mask: int) -> bool:
        total = Fraction(0)
        for e in iter_bits(mask):
            total += self.sizes[e]
            if total > self.budget:
                return False
        return True


class TwoSystemCounterexample(IndependenceSystem):
    """2-system on A ∪ {e*}: any subset of A, or e* plus at most n/2 of A.

    Elements 0..n-1 are A; element n is the special one. n must be even.
    """

    def __init__(self, n: int):
        if n <= 0 or n % 2:
            raise ValueError("n must be a positive even integer")
        super().__init__(n + 1)
        self.n = n
        self.special = n
        self.a_mask = (1 << n) - 1

    def _independent(self, mask: int) -> bool:
        if not (mask >> self.special) & 1:
            return True
        return popcount(mask & self.a_mask) <= self.n // 2


class AbLowerBoundSystem(IndependenceSystem):
    """Two-sided counting system: S ∈ I iff |S∩A| + p|S∩B| <= |A|
    or p|S∩A| + |S∩B| <= |B|. Elements 0..size_a-1 are A, the rest B."""

    def __init__(self, size_a: int, size_b: int, p: int):
        if size_a <= 0 or size_b <= 0 or p < 1:
            raise ValueError("need positive side sizes and p >= 1")
        super().__init__(size_a + size_b)
        self.size_a = size_a
        self.size_b = size_b
        self.p = p
        self.a_mask = (1 << size_a) - 1
        self.b_mask = ((1 << size_b) - 1) << size_a

    def _independent(self, mask: int) -> bool:
        na = popcount(mask & self.a_mask)
        nb = popcount(mask & self.b_mask)
        return na + self.p * nb <= self.size_a or self.p * na + nb <= self.size_b


class ExplicitSystem(IndependenceSystem):
    """Downward closure of a stored list of maximal sets.

    Membership is a subset test against the maximal sets; dominated input
    sets are dropped on construction. An empty list encodes I = {∅}.
    """

    def __init__(self, ground_size: int, maximal_sets: Sequence[int]):
        super().__init__(ground_size)
        kept: list[int] = []
        for m in sorted(set(maximal_sets), key=popcount, reverse=True):
            _require_within_ground(m, ground_size)
            if not any(m & k == m for k in kept):
                kept.append(m)
        self.maximal_sets = tuple(sorted(kept))

    @classmethod
    def from_id_lists(cls, ground_size: int, sets: Sequence[Sequence[int]]) -> "ExplicitSystem":
        return cls(ground_size, [mask_of(s) for s in sets])

    def _independent(self, mask: int) -> bool:
        if mask == 0:
            return True
        return any(mask & m == mask for m in self.maximal_sets)


def check_downward_closed(system: IndependenceSystem) -> bool:
    """Exhaustive single-element-removal check; valid for desk-scale grounds."""
    for mask in system.independent_sets():
        for e in iter_bits(mask):
            if not system._independent(mask ^ (1 << e)):
                return False
    return system._independent(0)
