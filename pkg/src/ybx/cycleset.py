"""Finite cycle sets and their invariants.

A cycle set is a finite set with one binary operation whose left
multiplications sigma_x : y -> x*y are bijections satisfying

    (x*y)*(x*z) = (y*x)*(y*z)      for all x, y, z,

equivalently sigma_{x*y} o sigma_x = sigma_{y*x} o sigma_y as permutations.
All cycle sets here are non-degenerate: the squaring map q(x) = x*x is a
bijection.  These structures are in one-to-one correspondence with the
involutive left non-degenerate set-theoretic solutions of the Yang-Baxter
equation, and every question about such a solution is answered through its
cycle set below.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import canon
from .perm import CapExceededError, Permutation, PermutationGroup

CONGRUENCE_CAP = 40


class CycleSetError(Exception):
    """A cycle-set axiom or precondition failed.

    axiom names the first violated requirement; witness carries the points
    exhibiting the failure (e.g. the triple breaking the defining law).
    """

    def __init__(self, axiom: str, witness: Optional[tuple] = None, message: str = ""):
        self.axiom = axiom
        self.witness = witness
        text = message or axiom
        if witness is not None:
            text = f"{text} at {witness}"
        super().__init__(text)


class CycleSet:
    """A validated cycle set, stored as its n x n multiplication table."""

    __slots__ = ("table", "n", "_rows", "_row_invs", "_group", "_dis",
                 "_canonical", "_congruences")

    def __init__(self, table: Sequence[Sequence[int]]):
        table = tuple(tuple(row) for row in table)
        n = len(table)
        for x, row in enumerate(table):
            if len(row) != n or sorted(row) != list(range(n)):
                raise CycleSetError("row-bijectivity", (x,),
                                    f"row {x} is not a permutation of 0..{n-1}")
        for x in range(n):
            rx = table[x]
            for y in range(n):
                ry = table[y]
                lhs_row = table[rx[y]]
                rhs_row = table[ry[x]]
                for z in range(n):
                    if lhs_row[rx[z]] != rhs_row[ry[z]]:
                        raise CycleSetError("law", (x, y, z),
                                            "(x*y)*(x*z) != (y*x)*(y*z)")
        diagonal = [table[x][x] for x in range(n)]
        if sorted(diagonal) != list(range(n)):
            dupes = [x for x in range(n) if diagonal.count(diagonal[x]) > 1]
            raise CycleSetError("non-degeneracy", tuple(dupes[:2]),
                                "squaring map x -> x*x is not bijective")
        self.table = table
        self.n = n
        self._rows: Optional[tuple[Permutation, ...]] = None
        self._row_invs: Optional[tuple[tuple[int, ...], ...]] = None
        self._group: Optional[PermutationGroup] = None
        self._dis: Optional[PermutationGroup] = None
        self._canonical: Optional[tuple] = None
        self._congruences: Optional[list["Congruence"]] = None

    @classmethod
    def from_rows(cls, rows: Iterable[Permutation]) -> "CycleSet":
        return cls([p.images for p in rows])

    def __eq__(self, other) -> bool:
        return isinstance(other, CycleSet) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"CycleSet(n={self.n})"

    def op(self, x: int, y: int) -> int:
        return self.table[x][y]

    def rows(self) -> tuple[Permutation, ...]:
        if self._rows is None:
            self._rows = tuple(Permutation(row) for row in self.table)
        return self._rows

    def sigma(self, x: int) -> Permutation:
        return self.rows()[x]

    def row_invs(self) -> tuple[tuple[int, ...], ...]:
        if self._row_invs is None:
            out = []
            for row in self.table:
                inv = [0] * self.n
                for i, j in enumerate(row):
                    inv[j] = i
                out.append(tuple(inv))
            self._row_invs = tuple(out)
        return self._row_invs

    # -- associated permutation groups --

    def permutation_group(self) -> PermutationGroup:
        """G(X), generated by all left multiplications."""
        if self._group is None:
            gens = sorted(set(self.rows()))
            self._group = PermutationGroup(gens, self.n)
        return self._group

    def displacement_group(self) -> PermutationGroup:
        """Dis(X), generated by all sigma_x o sigma_y^-1."""
        if self._dis is None:
            rows = self.rows()
            invs = [r.inverse() for r in rows]
            gens = sorted({rows[x] * invs[y] for x in range(self.n) for y in range(self.n)})
            self._dis = PermutationGroup(gens, self.n)
        return self._dis

    # -- elementary predicates --

    def is_indecomposable(self) -> bool:
        return self.permutation_group().is_transitive()

    def is_primitive_cycle_set(self) -> bool:
        return self.permutation_group().is_primitive()

    def is_trivial(self) -> bool:
        """All left multiplications coincide (x*y depends only on y)."""
        return all(row == self.table[0] for row in self.table)

    def is_latin(self) -> bool:
        """Every right multiplication y -> y*x is bijective."""
        for x in range(self.n):
            if len({self.table[y][x] for y in range(self.n)}) != self.n:
                return False
        return True

    def squaring_map(self) -> Permutation:
        return Permutation(self.table[x][x] for x in range(self.n))

    # -- retraction and multipermutation level --

    def retraction(self) -> tuple["CycleSet", "CycleSetHom"]:
        """Quotient identifying points with equal rows, with its class map."""
        classes: dict[tuple, int] = {}
        mapping = []
        for row in self.table:
            if row not in classes:
                classes[row] = len(classes)
            mapping.append(classes[row])
        k = len(classes)
        reps = [0] * k
        for x in reversed(range(self.n)):
            reps[mapping[x]] = x
        quot = CycleSet(
            [[mapping[self.table[reps[a]][reps[b]]] for b in range(k)] for a in range(k)]
        )
        return quot, CycleSetHom(self, quot, tuple(mapping))

    def mpl(self) -> Optional[int]:
        """Multipermutation level, or None when retraction never reaches a point."""
        current = self
        level = 0
        while current.n > 1:
            quot, _ = current.retraction()
            if quot.n == current.n:
                return None
            current = quot
            level += 1
        return level

    # -- congruences and quotients --

    def is_congruence(self, partition: Sequence[Sequence[int]]) -> bool:
        cong = Congruence.from_classes(self.n, partition)
        cls = cong.point_class
        for a in range(self.n):
            for b in range(a + 1, self.n):
                if cls[a] != cls[b]:
                    continue
                for u in range(self.n):
                    if cls[self.table[a][u]] != cls[self.table[b][u]]:
                        return False
                    if cls[self.table[u][a]] != cls[self.table[u][b]]:
                        return False
        return True

    def principal_congruence(self, a: int, b: int) -> "Congruence":
        """Smallest congruence relating a and b.

        Union-find merging alternated with propagation of
        x~y and u~v  =>  x*u ~ y*v  until a fixpoint.
        """
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        queue = [(a, b)]
        while queue:
            x, y = queue.pop()
            rx, ry = find(x), find(y)
            if rx == ry:
                continue
            if rx > ry:
                rx, ry = ry, rx
            parent[ry] = rx
            for u in range(self.n):
                queue.append((self.table[x][u], self.table[y][u]))
                queue.append((self.table[u][x], self.table[u][y]))
        return Congruence.from_labels(tuple(find(x) for x in range(self.n)))

    def all_congruences(self) -> list["Congruence"]:
        """The full congruence lattice.

        Every congruence is the join of the principal congruences it
        contains, and the join of two congruences is the transitive closure
        of their union, so closing the principal congruences under pairwise
        join is exhaustive.
        """
        if self.n > CONGRUENCE_CAP:
            raise CapExceededError(
                f"congruence lattice capped at size {CONGRUENCE_CAP}, got {self.n}")
        if self._congruences is not None:
            return list(self._congruences)
        discrete = Congruence.from_labels(tuple(range(self.n)))
        found = {discrete}
        principals = set()
        for a in range(self.n):
            for b in range(a + 1, self.n):
                principals.add(self.principal_congruence(a, b))
        found |= principals
        frontier = list(principals)
        while frontier:
            cong = frontier.pop()
            for other in list(found):
                joined = cong.join(other)
                if joined not in found:
                    found.add(joined)
                    frontier.append(joined)
        self._congruences = sorted(found, key=lambda c: (len(c.classes), c.classes))
        return list(self._congruences)

    def quotient(self, cong: "Congruence") -> tuple["CycleSet", "CycleSetHom"]:
        """Cycle set on the congruence classes with the canonical class map."""
        if not self.is_congruence(cong.classes):
            raise CycleSetError("congruence", None, "partition is not a congruence")
        cls = cong.point_class
        reps = [c[0] for c in cong.classes]
        k = len(reps)
        quot = CycleSet(
            [[cls[self.table[reps[a]][reps[b]]] for b in range(k)] for a in range(k)]
        )
        return quot, CycleSetHom(self, quot, tuple(cls))

    def quotient_by_group(self, group: PermutationGroup) -> tuple["CycleSet", "CycleSetHom"]:
        """Quotient by the orbit partition of a permutation group on the points.

        The orbit partition must be a congruence; for the permutation image
        of an ideal of the associated permutation brace it always is.
        """
        if group.degree != self.n:
            raise CycleSetError("degree", None, "group degree differs from cycle set size")
        orbits = group.orbits()
        if not self.is_congruence(orbits):
            raise CycleSetError("orbit-congruence", None,
                                "orbit partition is not a congruence")
        return self.quotient(Congruence.from_classes(self.n, orbits))

    # -- finite primitive level --

    def has_finite_primitive_level(self) -> bool:
        """Dis(X) intransitive, the group-theoretic finiteness criterion."""
        if not self.is_indecomposable():
            raise CycleSetError("indecomposable", None,
                                "finite primitive level is defined for indecomposable cycle sets")
        return not self.displacement_group().is_transitive()

    def fpl(self) -> Optional[int]:
        """Exact primitive level via the epimorphic-image recursion.

        The level is 1 plus the largest finite level of a proper non-trivial
        epimorphic image, or 1 for a primitive cycle set; None means no
        chain of images ever reaches a primitive cycle set.  By finiteness
        every epimorphic image is a congruence quotient, which makes the
        recursion exhaustive.  Memoized on canonical forms.
        """
        if self.n == 1:
            return 0
        if not self.is_indecomposable():
            raise CycleSetError("indecomposable", None,
                                "primitive level is defined for indecomposable cycle sets")
        key = self.canonical_form().table
        if key in _FPL_MEMO:
            return _FPL_MEMO[key]
        candidates = []
        if self.is_primitive_cycle_set():
            candidates.append(1)
        for cong in self.all_congruences():
            if len(cong.classes) in (1, self.n):
                continue
            image, _ = self.quotient(cong)
            sub = image.fpl()
            if sub is not None:
                candidates.append(1 + sub)
        result = max(candidates) if candidates else None
        _FPL_MEMO[key] = result
        return result

    # -- cycle-structure criteria --

    def common_cycle_primes(self) -> frozenset[int]:
        """Primes dividing |X| and the length of every cycle of every row."""
        lengths = set()
        for row in self.rows():
            lengths.update(row.cycle_type())
        return frozenset(
            p for p in _prime_divisors(self.n)
            if all(length % p == 0 for length in lengths)
        )

    def is_fixed_point_free(self) -> bool:
        """No row has a fixed point, i.e. x*y = y never holds."""
        return all(self.table[x][y] != y for x in range(self.n) for y in range(self.n))

    def decomposability_hint(self) -> Optional["DecomposabilityHint"]:
        """Witness that X is decomposable, when the coprime-cycle test applies.

        Fires only for multipermutation X containing a non-trivial cycle of
        length coprime to |X|; returns None when no conclusion is possible.
        """
        if self.n <= 1 or self.mpl() is None:
            return None
        for x, row in enumerate(self.rows()):
            for cycle in row.cycles(include_fixed=False):
                if _gcd(len(cycle), self.n) == 1:
                    hint = DecomposabilityHint(point=x, cycle=cycle)
                    assert not self.is_indecomposable(), \
                        "coprime-cycle criterion contradicts transitivity"
                    return hint
        return None

    def singular_primes(self) -> frozenset[int]:
        """Primes dividing |G(X)| but not |X|; non-empty certifies X singular."""
        order = self.permutation_group().order()
        return frozenset(p for p in _prime_divisors(order) if self.n % p != 0)

    # -- solubility --

    def is_soluble(self) -> bool:
        """Search for a soluble chain of subsets down to a point.

        A step from a subset S picks a congruence under which every a*b with
        a, b in S is congruent to b (so the image of S is a projection
        sub-cycle set of the quotient) and descends into one of its classes
        inside S.  Chains of strictly shrinking subsets suffice, so the
        search is exhaustive.
        """
        if self.n == 1:
            return True
        congs = self.all_congruences()
        tables = self.table
        dead: set[frozenset] = set()

        def descend(subset: frozenset) -> bool:
            if len(subset) == 1:
                return True
            if subset in dead:
                return False
            for cong in congs:
                cls = cong.point_class
                if any(cls[tables[a][b]] != cls[b] for a in subset for b in subset):
                    continue
                for block in cong.classes:
                    block_set = frozenset(block)
                    if block_set < subset and descend(block_set):
                        return True
            dead.add(subset)
            return False

        return descend(frozenset(range(self.n)))

    # -- canonical forms --

    def canonical_form(self) -> "CycleSet":
        if self._canonical is None:
            self._canonical = canon.canonical_table(self.table)
        return CycleSet(self._canonical[0])

    def canonical_relabeling(self) -> Permutation:
        """A point relabeling pi with pi(x*y) = pi(x) . pi(y) in the canonical form."""
        if self._canonical is None:
            self._canonical = canon.canonical_table(self.table)
        return Permutation(self._canonical[1])


_FPL_MEMO: dict[tuple, Optional[int]] = {}
# CPython dict operations are atomic under the GIL, so the memo behaves as a
# single logical map for concurrent readers within a process.


@dataclass(frozen=True)
class Congruence:
    """A partition of the points compatible with the operation.

    classes are sorted by minimum element; point_class[x] is the index of
    x's class.  Compatibility with a particular cycle set is checked where
    the congruence is used.
    """

    classes: tuple[tuple[int, ...], ...]
    point_class: tuple[int, ...]

    @classmethod
    def from_classes(cls, n: int, classes: Sequence[Sequence[int]]) -> "Congruence":
        normalized = sorted(tuple(sorted(block)) for block in classes if len(block))
        point_class = [-1] * n
        for index, block in enumerate(normalized):
            for x in block:
                if not 0 <= x < n or point_class[x] != -1:
                    raise ValueError("classes do not partition the points")
                point_class[x] = index
        if -1 in point_class:
            raise ValueError("classes do not cover the points")
        return cls(tuple(normalized), tuple(point_class))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Congruence":
        blocks: dict[int, list[int]] = {}
        for x, label in enumerate(labels):
            blocks.setdefault(label, []).append(x)
        return cls.from_classes(len(labels), list(blocks.values()))

    def join(self, other: "Congruence") -> "Congruence":
        """Partition join; for two congruences the result is a congruence."""
        n = len(self.point_class)
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for block in list(self.classes) + list(other.classes):
            root = find(block[0])
            for x in block[1:]:
                rx = find(x)
                if rx != root:
                    if rx < root:
                        root, rx = rx, root
                    parent[rx] = root
        return Congruence.from_labels(tuple(find(x) for x in range(n)))

    def is_discrete(self) -> bool:
        return all(len(block) == 1 for block in self.classes)

    def is_full(self) -> bool:
        return len(self.classes) == 1


@dataclass(frozen=True)
class DecomposabilityHint:
    """Witness for decomposability: a non-trivial cycle coprime to |X|."""

    point: int
    cycle: tuple[int, ...]


class CycleSetHom:
    """A map of cycle sets with p(x*y) = p(x)*p(y), checked on construction."""

    __slots__ = ("source", "target", "mapping")

    def __init__(self, source: CycleSet, target: CycleSet, mapping: Sequence[int]):
        mapping = tuple(mapping)
        if len(mapping) != source.n or any(not 0 <= v < target.n for v in mapping):
            raise CycleSetError("hom-domain", None, "mapping does not land in the target")
        for x in range(source.n):
            for y in range(source.n):
                if mapping[source.table[x][y]] != target.table[mapping[x]][mapping[y]]:
                    raise CycleSetError("hom", (x, y), "map is not a homomorphism")
        self.source = source
        self.target = target
        self.mapping = mapping

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def is_epimorphism(self) -> bool:
        return len(set(self.mapping)) == self.target.n

    def is_isomorphism(self) -> bool:
        return self.source.n == self.target.n and self.is_epimorphism()

    def then(self, other: "CycleSetHom") -> "CycleSetHom":
        if other.source is not self.target and other.source != self.target:
            raise CycleSetError("hom-compose", None, "homomorphisms do not compose")
        return CycleSetHom(self.source, other.target,
                           tuple(other.mapping[v] for v in self.mapping))


# -- the solution dictionary --

def to_solution(X: CycleSet) -> dict[tuple[int, int], tuple[int, int]]:
    """The involutive solution r(x,y) = (sigma_x^-1(y), sigma_x^-1(y)*x)."""
    invs = X.row_invs()
    out = {}
    for x in range(X.n):
        for y in range(X.n):
            u = invs[x][y]
            out[(x, y)] = (u, X.table[u][x])
    return out


def from_solution(n: int, r: dict[tuple[int, int], tuple[int, int]]) -> CycleSet:
    """Reconstruct the cycle set from an involutive solution map on pairs."""
    for pair, image in r.items():
        if r.get(image) != pair:
            raise CycleSetError("involutivity", pair, "r o r is not the identity")
    table = [[-1] * n for _ in range(n)]
    for (x, y), (u, v) in r.items():
        if table[x][u] not in (-1, y):
            raise CycleSetError("solution-shape", (x, y), "first components are not left quotients")
        table[x][u] = y
    X = CycleSet(table)
    for (x, y), (u, v) in r.items():
        if X.table[u][x] != v:
            raise CycleSetError("solution-shape", (x, y), "second component mismatch")
    return X


# -- epimorphism factorization --

@dataclass(frozen=True)
class EpiFactorization:
    """Factorization p = residual o class_map through the orbit quotient.

    ideal_part is the subgroup of G(source) acting trivially on the fibers
    of p; residual maps the quotient by its orbits onto the target and is a
    covering exactly when it induces a bijection of permutation groups.
    """

    ideal_part: PermutationGroup
    quotient: CycleSet
    class_map: CycleSetHom
    residual: CycleSetHom
    residual_is_covering: bool


def factor_epimorphism(p: CycleSetHom) -> EpiFactorization:
    """Split an epimorphism into an orbit quotient followed by a covering."""
    if not p.is_epimorphism():
        raise CycleSetError("epimorphism", None, "map is not surjective")
    X, Y = p.source, p.target
    group = X.permutation_group()
    fixing = [g for g in group.elements()
              if all(p.mapping[g(x)] == p.mapping[x] for x in range(X.n))]
    ideal_part = PermutationGroup(fixing, X.n)
    quotient, class_map = X.quotient_by_group(ideal_part)
    residual_map = [0] * quotient.n
    for x in range(X.n):
        residual_map[class_map.mapping[x]] = p.mapping[x]
    residual = CycleSetHom(quotient, Y, residual_map)
    covering = quotient.permutation_group().order() == Y.permutation_group().order()
    return EpiFactorization(ideal_part, quotient, class_map, residual, covering)


# -- isomorphism --

def are_isomorphic(A: CycleSet, B: CycleSet) -> Optional[tuple[int, ...]]:
    """A point bijection f with f(x*y) = f(x)*f(y), or None."""
    if A.n != B.n:
        return None
    if A.canonical_form().table != B.canonical_form().table:
        return None
    pa = A.canonical_relabeling()
    pb = B.canonical_relabeling()
    f = pb.inverse() * pa
    return f.images


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
