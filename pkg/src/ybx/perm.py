"""Small-degree permutations and permutation groups.

Everything downstream (orbits, block systems, normal subgroups, coset
actions, subgroup lattices) is built on the two classes here.  All the
intended workloads have degree below ~40 and group order within the
materialization cap, so groups are stored as explicit element sets and
there is no stabilizer-chain machinery.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

DEFAULT_MAX_GROUP_ELEMS = 10**6
CAP_ENV_VAR = "YBX_MAX_GROUP_ELEMS"


class CapExceededError(Exception):
    """Raised when materializing a group would exceed the element cap.

    This signals resource exhaustion, never a mathematical failure;
    callers may degrade (e.g. skip brace-level checks) on catching it.
    """


def max_group_elems() -> int:
    value = os.environ.get(CAP_ENV_VAR)
    return int(value) if value else DEFAULT_MAX_GROUP_ELEMS


class Permutation:
    """A permutation of {0, ..., n-1}, stored as its tuple of images."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection on 0..{len(images)-1}: {images!r}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> "Permutation":
        """Build a permutation from disjoint cycles; omitted points are fixed."""
        images = list(range(degree))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + type(cycle)([cycle[0]])):
                if images[a] != a:
                    raise ValueError(f"cycles are not disjoint at point {a}")
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition self∘other: first apply other, then self."""
        if len(self.images) != len(other.images):
            raise ValueError("degree mismatch")
        s = self.images
        return Permutation(s[i] for i in other.images)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self, include_fixed: bool = True) -> list[tuple[int, ...]]:
        """Disjoint cycles, each rotated to start at its minimum, sorted by it."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cur, cycle = start, []
            while not seen[cur]:
                seen[cur] = True
                cycle.append(cur)
                cur = self.images[cur]
            if include_fixed or len(cycle) > 1:
                out.append(tuple(cycle))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Multiset of cycle lengths (ascending), length-1 cycles included."""
        return tuple(sorted(len(c) for c in self.cycles()))

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __le__(self, other: "Permutation") -> bool:
        return self.images <= other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        nontrivial = [c for c in self.cycles() if len(c) > 1]
        if not nontrivial:
            return f"Permutation.identity({self.degree})"
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in nontrivial)
        return f"Permutation[{body}]"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """p∘q, mapping y to p(q(y))."""
    return p * q


def cycle_decomposition(p: Permutation) -> tuple[int, ...]:
    """Cycle lengths of p as an ascending tuple, fixed points included."""
    return p.cycle_type()


def _close_rows(gen_rows: Sequence[tuple[int, ...]], degree: int, cap: int) -> np.ndarray:
    """BFS closure of generator rows under right multiplication.

    Rows are image tuples; row p composed with generator g is p[g], so the
    closure is the full subgroup generated.  Returns the elements as a
    lexicographically sorted uint8 array.
    """
    if degree > 255:
        raise CapExceededError(f"degree {degree} above uint8 element encoding")
    gens = np.array(sorted(set(gen_rows)), dtype=np.uint8)
    identity = np.arange(degree, dtype=np.uint8)
    seen = {identity.tobytes()}
    rows = [identity]
    frontier = identity.reshape(1, degree)
    while frontier.shape[0]:
        batches = [frontier[:, g] for g in gens]
        fresh = []
        for batch in batches:
            for row in batch:
                key = row.tobytes()
                if key not in seen:
                    seen.add(key)
                    fresh.append(row)
        if len(seen) > cap:
            raise CapExceededError(f"group order exceeds cap of {cap} elements")
        rows.extend(fresh)
        frontier = np.array(fresh, dtype=np.uint8) if fresh else np.empty((0, degree), np.uint8)
    table = np.array(rows, dtype=np.uint8)
    order = np.lexsort(table.T[::-1])
    return table[order]


def _chain_order(gen_rows: Sequence[tuple[int, ...]], degree: int) -> int:
    """Exact order from orbit sizes of an iterated point-stabilizer chain."""

    def _compose(p, q):
        return tuple(p[i] for i in q)

    def _invert(p):
        inv = [0] * len(p)
        for i, j in enumerate(p):
            inv[j] = i
        return tuple(inv)

    identity = tuple(range(degree))
    gens = sorted({tuple(g) for g in gen_rows} - {identity})
    order = 1
    point = 0
    while gens:
        while point < degree and all(g[point] == point for g in gens):
            point += 1
        if point == degree:
            break
        transversal = {point: identity}
        queue = [point]
        while queue:
            x = queue.pop()
            tx = transversal[x]
            for g in gens:
                y = g[x]
                if y not in transversal:
                    transversal[y] = _compose(g, tx)
                    queue.append(y)
        order *= len(transversal)
        schreier = set()
        for x, tx in transversal.items():
            for g in gens:
                s = _compose(_invert(transversal[g[x]]), _compose(g, tx))
                if s != identity:
                    schreier.add(s)
        gens = sorted(schreier)
    return order


class PermutationGroup:
    """Permutation group of fixed degree, given by generators.

    The full element set is materialized lazily (sorted, deterministic) and
    capped; most queries that only need orbits work straight off the
    generators.
    """

    def __init__(self, generators: Sequence[Permutation], degree: Optional[int] = None):
        generators = tuple(generators)
        if degree is None:
            if not generators:
                raise ValueError("degree required for an empty generating set")
            degree = generators[0].degree
        if not generators:
            generators = (Permutation.identity(degree),)
        for g in generators:
            if g.degree != degree:
                raise ValueError("generator degree mismatch")
        self.degree = degree
        self.generators = generators
        self._rows: Optional[np.ndarray] = None
        self._order: Optional[int] = None
        self._elements: Optional[tuple[Permutation, ...]] = None
        self._element_keys: Optional[frozenset] = None

    @classmethod
    def trivial(cls, degree: int) -> "PermutationGroup":
        return cls((Permutation.identity(degree),), degree)

    def _materialize(self) -> np.ndarray:
        if self._rows is None:
            self._rows = _close_rows(
                [g.images for g in self.generators], self.degree, max_group_elems()
            )
        return self._rows

    def order(self) -> int:
        """Group order via an orbit-stabilizer chain; never materializes.

        Orders well beyond the element cap stay cheap this way (the chain
        multiplies orbit lengths and recurses into point stabilizers through
        Schreier generators), which some degree-32 workloads need.
        """
        if self._rows is not None:
            return len(self._rows)
        if self._order is None:
            self._order = _chain_order(
                [g.images for g in self.generators], self.degree
            )
        return self._order

    def elements(self) -> tuple[Permutation, ...]:
        """All elements, lexicographically sorted by image sequence."""
        if self._elements is None:
            self._elements = tuple(
                Permutation(map(int, row)) for row in self._materialize()
            )
        return self._elements

    def element_keys(self) -> frozenset:
        if self._element_keys is None:
            self._element_keys = frozenset(
                row.tobytes() for row in self._materialize()
            )
        return self._element_keys

    def __contains__(self, p: Permutation) -> bool:
        key = np.array(p.images, dtype=np.uint8).tobytes()
        return key in self.element_keys()

    def __le__(self, other: "PermutationGroup") -> bool:
        """Subgroup test on materialized elements."""
        return self.element_keys() <= other.element_keys()

    def same_group(self, other: "PermutationGroup") -> bool:
        return self.element_keys() == other.element_keys()

    # -- orbit machinery (generators only, no materialization) --

    def orbits(self) -> list[tuple[int, ...]]:
        """Partition of the points into orbits, blocks sorted by minimum."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            orbit = [start]
            seen[start] = True
            queue = [start]
            while queue:
                x = queue.pop()
                for g in self.generators:
                    y = g(x)
                    if not seen[y]:
                        seen[y] = True
                        orbit.append(y)
                        queue.append(y)
            out.append(tuple(sorted(orbit)))
        return out

    def orbit_of(self, point: int) -> tuple[int, ...]:
        for orbit in self.orbits():
            if point in orbit:
                return orbit
        raise ValueError(f"point {point} out of range")

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def minimal_block(self, a: int, b: int) -> list[tuple[int, ...]]:
        """Finest block system whose block containing a also contains b.

        Classic union-find merge: identify a with b, then propagate through
        every generator until classes are stable.
        """
        parent = list(range(self.degree))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x: int, y: int) -> bool:
            rx, ry = find(x), find(y)
            if rx == ry:
                return False
            if rx > ry:
                rx, ry = ry, rx
            parent[ry] = rx
            return True

        union(a, b)
        queue = [(a, b)]
        while queue:
            x, y = queue.pop()
            for g in self.generators:
                gx, gy = g(x), g(y)
                if union(gx, gy):
                    queue.append((gx, gy))
        blocks: dict[int, list[int]] = {}
        for x in range(self.degree):
            blocks.setdefault(find(x), []).append(x)
        return sorted(tuple(sorted(v)) for v in blocks.values())

    def is_primitive(self) -> bool:
        """Transitive with no non-trivial block system.

        Searches the minimal block through every pair (0, k); degree is
        small enough that this beats anything cleverer.
        """
        if not self.is_transitive():
            return False
        for k in range(1, self.degree):
            blocks = self.minimal_block(0, k)
            if 1 < len(blocks) < self.degree:
                return False
        return True

    # -- subgroup machinery (materialized) --

    def conjugate_subgroup_keys(self, sub: "PermutationGroup", g: Permutation) -> frozenset:
        ginv = g.inverse()
        return frozenset(
            np.array((g * h * ginv).images, dtype=np.uint8).tobytes()
            for h in sub.elements()
        )

    def core_is_trivial(self, sub: "PermutationGroup") -> bool:
        """True iff the intersection of all G-conjugates of sub is trivial."""
        if not sub <= self:
            raise ValueError("sub is not a subgroup of this group")
        core = set(sub.element_keys())
        identity_key = np.arange(self.degree, dtype=np.uint8).tobytes()
        for g in self.elements():
            core &= self.conjugate_subgroup_keys(sub, g)
            if core == {identity_key}:
                return True
        return core == {identity_key}

    def normal_structure(self, sub: "PermutationGroup") -> "NormalStructure":
        """Normality of sub in self, its index, and cyclicity of the quotient."""
        if not sub <= self:
            raise ValueError("sub is not a subgroup of this group")
        sub_keys = sub.element_keys()
        sub_elems = sub.elements()
        is_normal = True
        for g in self.generators:
            ginv = g.inverse()
            for h in sub_elems:
                key = np.array((g * h * ginv).images, dtype=np.uint8).tobytes()
                if key not in sub_keys:
                    is_normal = False
                    break
            if not is_normal:
                break
        index = self.order() // sub.order()
        quotient_is_cyclic = None
        if is_normal:
            quotient_is_cyclic = self._quotient_is_cyclic(sub, index)
        return NormalStructure(is_normal, index, quotient_is_cyclic)

    def _quotient_is_cyclic(self, sub: "PermutationGroup", index: int) -> bool:
        coset_of: dict[Permutation, Permutation] = {}

        def coset_rep(g: Permutation) -> Permutation:
            if g not in coset_of:
                rep = min(g * h for h in sub.elements())
                for h in sub.elements():
                    coset_of[g * h] = rep
            return coset_of[g]

        reps = sorted({coset_rep(g) for g in self.elements()})
        if len(reps) != index:
            raise AssertionError("coset count disagrees with index")
        for rep in reps:
            power = rep
            generated = {coset_rep(Permutation.identity(self.degree))}
            for _ in range(index):
                generated.add(coset_rep(power))
                power = power * rep
            if len(generated) == index:
                return True
        return index == 1

    def subgroup_closure(self, elems: Iterable[Permutation]) -> tuple[Permutation, ...]:
        """Closure of elems under composition and inverse, sorted."""
        closed = {Permutation.identity(self.degree)}
        frontier = list(closed)
        gens = sorted(set(elems) | {e.inverse() for e in elems})
        for g in gens:
            if g not in closed:
                closed.add(g)
                frontier.append(g)
        while frontier:
            p = frontier.pop()
            for g in gens:
                q = p * g
                if q not in closed:
                    closed.add(q)
                    frontier.append(q)
        return tuple(sorted(closed))

    def intermediate_subgroups(
        self, lower: "PermutationGroup", upper: "PermutationGroup"
    ) -> list["PermutationGroup"]:
        """Every subgroup H with lower < H <= upper.

        Breadth-first closure over single-element extensions: any such H is
        reached from lower by repeatedly adjoining one element of H, and each
        intermediate closure is itself a subgroup in the interval.
        """
        if not lower <= upper or not upper <= self:
            raise ValueError("expected lower <= upper <= self")
        upper_elems = upper.elements()
        base = frozenset(lower.elements())
        found: dict[frozenset, tuple[Permutation, ...]] = {}
        queue = [(base, tuple(sorted(lower.generators)))]
        seen = {base}
        while queue:
            elems, gens = queue.pop()
            for extra in upper_elems:
                if extra in elems:
                    continue
                new_gens = gens + (extra,)
                closed = frozenset(self.subgroup_closure(new_gens))
                if closed not in seen:
                    seen.add(closed)
                    found[closed] = new_gens
                    queue.append((closed, new_gens))
        out = []
        for elems in sorted(found, key=lambda s: (len(s), sorted(p.images for p in s))):
            out.append(PermutationGroup(found[elems], self.degree))
        return out


@dataclass(frozen=True)
class NormalStructure:
    """Result of a normality query: H normal in G, [G:H], G/H cyclic.

    quotient_is_cyclic is None when H is not normal (no quotient group).
    """

    is_normal: bool
    index: int
    quotient_is_cyclic: Optional[bool]
