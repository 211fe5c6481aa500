"""Finite left braces.

A left brace is a set with an abelian group (B,+), a group (B,o) sharing
the identity, and a o (b + c) + a = a o b + a o c.  Elements here are the
indices 0..n-1 with 0 the shared identity; both operations live in Cayley
tables.  The module covers validation, the lambda action, socle and B^2,
ideal enumeration, quotients, the coset construction of indecomposable
cycle sets from a brace, the level-2 criterion, the permutation brace
carried by the left-multiplication group of a cycle set, and a holomorph
search recovering all small braces with a prescribed additive group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .cycleset import CycleSet, CycleSetError
from .perm import CapExceededError, Permutation, PermutationGroup

IDEAL_CAP = 512
PERMUTATION_BRACE_TABLE_CAP = 512
WELLDEF_EXHAUSTIVE_CAP = 256


class BraceError(Exception):
    """A brace axiom or precondition failed, with the first witness found."""

    def __init__(self, axiom: str, witness: Optional[tuple] = None, message: str = ""):
        self.axiom = axiom
        self.witness = witness
        text = message or axiom
        if witness is not None:
            text = f"{text} at {witness}"
        super().__init__(text)


def _check_group_table(t: np.ndarray, n: int, name: str) -> None:
    rng = np.arange(n)
    if not (t[0] == rng).all() or not (t[:, 0] == rng).all():
        bad = int(np.argwhere((t[0] != rng) | (t[:, 0] != rng))[0][0])
        raise BraceError(f"{name}-identity", (bad,), f"0 is not the identity of {name}")
    if not (np.sort(t, axis=1) == rng).all() or not (np.sort(t, axis=0) == rng[:, None]).all():
        raise BraceError(f"{name}-latin", None, f"{name} table is not a group table")
    left = t[t, :]
    right = t[:, t]
    if not (left == right).all():
        a, b, c = map(int, np.argwhere(left != right)[0])
        raise BraceError(f"{name}-associativity", (a, b, c))


class FiniteBrace:
    """A validated left brace of order n on elements 0..n-1 (0 = identity)."""

    __slots__ = ("n", "add", "mul", "_add_np", "_mul_np", "neg", "inv",
                 "_lam", "perms")

    def __init__(self, add: Sequence[Sequence[int]], mul: Sequence[Sequence[int]],
                 perms: Optional[tuple[Permutation, ...]] = None):
        add_np = np.asarray(add, dtype=np.int32)
        mul_np = np.asarray(mul, dtype=np.int32)
        n = add_np.shape[0]
        for t, name in ((add_np, "additive"), (mul_np, "multiplicative")):
            if t.shape != (n, n) or (n and (t.min() < 0 or t.max() >= n)):
                raise BraceError(f"{name}-shape", None, f"{name} table is not square over 0..{n-1}")
        _check_group_table(add_np, n, "additive")
        if not (add_np == add_np.T).all():
            a, b = map(int, np.argwhere(add_np != add_np.T)[0])
            raise BraceError("additive-abelian", (a, b))
        _check_group_table(mul_np, n, "multiplicative")
        # a o (b+c) + a == a o b + a o c
        m1 = np.take(mul_np, add_np, axis=1)          # m1[a,b,c] = a o (b+c)
        lhs = add_np[m1, np.arange(n)[:, None, None]]  # lhs[a,b,c] = m1 + a
        rhs = add_np[mul_np[:, :, None], mul_np[:, None, :]]
        if not (lhs == rhs).all():
            a, b, c = map(int, np.argwhere(lhs != rhs)[0])
            raise BraceError("compatibility", (a, b, c),
                             "a o (b+c) + a != a o b + a o c")
        self.n = n
        self._add_np = add_np
        self._mul_np = mul_np
        self.add = tuple(tuple(map(int, row)) for row in add_np)
        self.mul = tuple(tuple(map(int, row)) for row in mul_np)
        self.neg = tuple(int(np.argwhere(add_np[a] == 0)[0][0]) for a in range(n))
        self.inv = tuple(int(np.argwhere(mul_np[a] == 0)[0][0]) for a in range(n))
        self._lam: Optional[tuple[tuple[int, ...], ...]] = None
        self.perms = perms

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteBrace) and self.add == other.add and self.mul == other.mul

    def __hash__(self) -> int:
        return hash((self.add, self.mul))

    def __repr__(self) -> str:
        return f"FiniteBrace(n={self.n})"

    def lam_table(self) -> tuple[tuple[int, ...], ...]:
        """lam[a][b] = -a + a o b, each row an automorphism of (B,+)."""
        if self._lam is None:
            add, mul, neg = self._add_np, self._mul_np, self.neg
            self._lam = tuple(
                tuple(map(int, add[neg[a]][mul[a]])) for a in range(self.n)
            )
        return self._lam

    def lam(self, a: int) -> Permutation:
        return Permutation(self.lam_table()[a])

    def star(self, a: int, b: int) -> int:
        """a*b = -a + a o b - b = lam_a(b) - b."""
        return self.add[self.lam_table()[a][b]][self.neg[b]]

    def is_trivial(self) -> bool:
        return self.add == self.mul

    # -- subgroup helpers on the multiplicative group --

    def mult_closure(self, elems: Iterable[int]) -> tuple[int, ...]:
        closed = {0}
        frontier = [0]
        gens = sorted(set(elems) | {self.inv[e] for e in elems})
        for g in gens:
            if g not in closed:
                closed.add(g)
                frontier.append(g)
        while frontier:
            a = frontier.pop()
            for g in gens:
                b = self.mul[a][g]
                if b not in closed:
                    closed.add(b)
                    frontier.append(b)
        return tuple(sorted(closed))

    def is_mult_subgroup(self, elems: Sequence[int]) -> bool:
        s = set(elems)
        return 0 in s and all(self.mul[a][self.inv[b]] in s for a in s for b in s)

    def conjugate_set(self, elems: Iterable[int], g: int) -> frozenset:
        gi = self.inv[g]
        return frozenset(self.mul[self.mul[g][a]][gi] for a in elems)

    def core_is_trivial(self, subgroup: Sequence[int]) -> bool:
        core = set(subgroup)
        for g in range(self.n):
            core &= self.conjugate_set(subgroup, g)
            if core == {0}:
                return True
        return core == {0}

    def additive_closure(self, elems: Iterable[int]) -> tuple[int, ...]:
        closed = {0}
        frontier = [0]
        gens = sorted(set(elems))
        for g in gens:
            if g not in closed:
                closed.add(g)
                frontier.append(g)
        while frontier:
            a = frontier.pop()
            for g in gens:
                b = self.add[a][g]
                if b not in closed:
                    closed.add(b)
                    frontier.append(b)
        return tuple(sorted(closed))

    # -- distinguished ideals --

    def b_squared(self) -> tuple[int, ...]:
        """Additive closure of all a*b; always an ideal."""
        stars = {self.star(a, b) for a in range(self.n) for b in range(self.n)}
        return self.additive_closure(stars)

    def socle(self) -> tuple[int, ...]:
        lam = self.lam_table()
        identity = tuple(range(self.n))
        return tuple(a for a in range(self.n) if lam[a] == identity)

    def is_ideal(self, elems: Sequence[int]) -> bool:
        """Multiplicative subgroup, normal, and lambda-invariant."""
        s = set(elems)
        if not self.is_mult_subgroup(elems):
            return False
        lam = self.lam_table()
        for g in range(self.n):
            if self.conjugate_set(s, g) != s:
                return False
            if any(lam[g][a] not in s for a in s):
                return False
        return True

    def ideals(self) -> list[tuple[int, ...]]:
        """All ideals, via normal subgroups filtered by lambda-invariance."""
        if self.n > IDEAL_CAP:
            raise CapExceededError(f"ideal enumeration capped at order {IDEAL_CAP}")
        classes = self._conjugacy_classes()
        found = {frozenset([0])}
        queue = [frozenset([0])]
        while queue:
            base = queue.pop()
            for cls in classes:
                if cls <= base:
                    continue
                closed = frozenset(self.mult_closure(base | cls))
                if closed not in found:
                    found.add(closed)
                    queue.append(closed)
        lam = self.lam_table()
        out = []
        for sub in found:
            if all(lam[g][a] in sub for g in range(self.n) for a in sub):
                out.append(tuple(sorted(sub)))
        return sorted(out, key=lambda s: (len(s), s))

    def _conjugacy_classes(self) -> list[frozenset]:
        seen = set()
        classes = []
        for a in range(self.n):
            if a in seen:
                continue
            cls = {self.mul[self.mul[g][a]][self.inv[g]] for g in range(self.n)}
            seen |= cls
            classes.append(frozenset(cls))
        return classes

    def quotient(self, ideal: Sequence[int]) -> tuple["FiniteBrace", tuple[int, ...]]:
        """Quotient brace modulo an ideal, with the element-to-class map."""
        if not self.is_ideal(ideal):
            raise BraceError("ideal", tuple(ideal)[:4], "subset is not an ideal")
        ideal_set = set(ideal)
        class_of = [-1] * self.n
        reps = []
        for a in range(self.n):
            if class_of[a] != -1:
                continue
            coset = sorted(self.mul[a][j] for j in ideal_set)
            index = len(reps)
            reps.append(coset[0])
            for b in coset:
                class_of[b] = index
        # 0's coset is the ideal itself and contains 0, so it is class 0
        k = len(reps)
        qadd = [[class_of[self.add[reps[i]][reps[j]]] for j in range(k)] for i in range(k)]
        qmul = [[class_of[self.mul[reps[i]][reps[j]]] for j in range(k)] for i in range(k)]
        return FiniteBrace(qadd, qmul), tuple(class_of)

    # -- transitive cycle bases and the coset construction --

    def lambda_orbits(self) -> list[tuple[int, ...]]:
        lam = self.lam_table()
        seen = [False] * self.n
        orbits = []
        for start in range(self.n):
            if seen[start]:
                continue
            orbit = {start}
            queue = [start]
            seen[start] = True
            while queue:
                a = queue.pop()
                for g in range(self.n):
                    b = lam[g][a]
                    if not seen[b]:
                        seen[b] = True
                        orbit.add(b)
                        queue.append(b)
            orbits.append(tuple(sorted(orbit)))
        return orbits

    def transitive_cycle_bases(self) -> list[tuple[tuple[int, ...], int]]:
        """Lambda-orbits that generate (B,o), each with its least element."""
        out = []
        for orbit in self.lambda_orbits():
            if len(self.mult_closure(orbit)) == self.n:
                out.append((orbit, orbit[0]))
        return out

    def lambda_stabilizer(self, a: int) -> tuple[int, ...]:
        lam = self.lam_table()
        return tuple(g for g in range(self.n) if lam[g][a] == a)


def validate_brace(add: Sequence[Sequence[int]], mul: Sequence[Sequence[int]]) -> FiniteBrace:
    """Validate Cayley tables into a FiniteBrace (the constructor checks all axioms)."""
    return FiniteBrace(add, mul)


def trivial_brace(orders: Sequence[int]) -> FiniteBrace:
    """The trivial brace (o = +) on a direct product of cyclic groups."""
    add = _cyclic_product_table(orders)
    return FiniteBrace(add, add)


def _cyclic_product_table(orders: Sequence[int]) -> list[list[int]]:
    n = 1
    for o in orders:
        n *= o
    elems = list(itertools.product(*[range(o) for o in orders]))
    index = {e: i for i, e in enumerate(elems)}
    return [
        [index[tuple((a + b) % o for a, b, o in zip(ea, eb, orders))] for eb in elems]
        for ea in elems
    ]


def direct_product_brace(B1: FiniteBrace, B2: FiniteBrace) -> FiniteBrace:
    """Componentwise brace on pairs, indexed as a*|B2| + b."""
    n1, n2 = B1.n, B2.n
    size = n1 * n2
    add = [[0] * size for _ in range(size)]
    mul = [[0] * size for _ in range(size)]
    for a1 in range(n1):
        for a2 in range(n2):
            a = a1 * n2 + a2
            for b1 in range(n1):
                for b2 in range(n2):
                    b = b1 * n2 + b2
                    add[a][b] = B1.add[a1][b1] * n2 + B2.add[a2][b2]
                    mul[a][b] = B1.mul[a1][b1] * n2 + B2.mul[a2][b2]
    return FiniteBrace(add, mul)


# -- the coset construction --

def cosmod(B: FiniteBrace, subgroup: Sequence[int], a1: int) -> CycleSet:
    """Indecomposable cycle set on the left cosets B/K.

    Requires a1 to lie in a transitive cycle base, K core-free in (B,o) and
    inside the lambda-stabilizer of a1; the operation is
    (x o K) * (y o K) = lam_x(a1)^- o y o K.  The output is revalidated and,
    for |B| <= 128, its permutation brace is checked isomorphic to B.
    """
    K = tuple(sorted(set(subgroup) | {0}))
    if not B.is_mult_subgroup(K):
        raise BraceError("subgroup", K[:4], "K is not a multiplicative subgroup")
    if not B.core_is_trivial(K):
        raise BraceError("core-free", K[:4], "K has a non-trivial core")
    stab = set(B.lambda_stabilizer(a1))
    if not set(K) <= stab:
        raise BraceError("stabilizer", (a1,), "K does not stabilize the base point")
    base_orbit = next((o for o in B.lambda_orbits() if a1 in o), None)
    if base_orbit is None or len(B.mult_closure(base_orbit)) != B.n:
        raise BraceError("cycle-base", (a1,),
                         "base point is not in a transitive cycle base")
    coset_of, reps = _left_cosets(B, K)
    k = len(reps)
    lam = B.lam_table()
    table = [[0] * k for _ in range(k)]
    for i, x in enumerate(reps):
        t = B.inv[lam[x][a1]]
        row = B.mul[t]
        for j, y in enumerate(reps):
            table[i][j] = coset_of[row[y]]
    X = CycleSet(table)
    if not X.is_indecomposable():
        raise BraceError("indecomposable", None, "coset cycle set is decomposable")
    if B.n <= 128:
        PB = permutation_brace(X)
        if PB.n != B.n or not braces_isomorphic(PB, B):
            raise BraceError("permutation-brace", None,
                             "coset cycle set does not recover the brace")
    return X


def _left_cosets(B: FiniteBrace, K: Sequence[int]) -> tuple[list[int], list[int]]:
    """Coset index per element and sorted least representatives."""
    coset_of = [-1] * B.n
    reps = []
    for a in range(B.n):
        if coset_of[a] != -1:
            continue
        coset = sorted(B.mul[a][j] for j in K)
        for b in coset:
            coset_of[b] = len(reps)
        reps.append(coset[0])
    return coset_of, reps


# -- the level-2 criterion --

@dataclass(frozen=True)
class Liv2Report:
    """Outcome of the three level-2 conditions for a coset cycle set.

    holds is the conjunction; p is the index of <B^2, K> when prime.  The
    witness fields list the subgroups or ideals breaking conditions 2/3.
    """

    holds: bool
    p: Optional[int]
    index_condition: bool
    subgroup_condition: bool
    ideal_condition: bool
    failing_subgroups: tuple[tuple[int, ...], ...] = ()
    failing_ideals: tuple[tuple[int, ...], ...] = ()


def liv2_check(B: FiniteBrace, subgroup: Sequence[int], a1: int) -> Liv2Report:
    """Decide whether the coset cycle set C(B, K, a1) has primitive level 2.

    1) the subgroup generated by B^2 and the coset stabilizer has prime
       index p; 2) B^2 is transitive on B/H for every core-free H strictly
       between K and the lambda-stabilizer of a1; 3) every ideal J with more
       than p orbits on B/K leaves B^2 transitive on its orbits.
    """
    if B.is_trivial():
        raise BraceError("non-trivial", None,
                         "the level-2 criterion applies to non-trivial braces only")
    K = tuple(sorted(set(subgroup) | {0}))
    b2 = B.b_squared()
    # stabilizer of the identity coset under left multiplication is K itself
    generated = B.mult_closure(set(b2) | set(K))
    index = B.n // len(generated)
    index_condition = _is_prime(index)
    p = index if index_condition else None

    coset_of, reps = _left_cosets(B, K)
    failing_subgroups = []
    subgroup_condition = True
    for H in _intermediate_subgroups(B, K, B.lambda_stabilizer(a1)):
        if not B.core_is_trivial(H):
            continue
        if not _transitive_on_cosets(B, b2, H):
            subgroup_condition = False
            failing_subgroups.append(H)
    failing_ideals = []
    ideal_condition = True
    if index_condition:
        for J in B.ideals():
            if len(J) == 1:
                # the trivial ideal corresponds to coverings, which condition
                # 2 already covers; on it the orbit test would always fail
                continue
            orbit_of = _coset_orbits(B, J, coset_of, len(reps))
            o_j = max(orbit_of) + 1
            if o_j <= p:
                continue
            if not _transitive_on_orbit_classes(B, b2, coset_of, orbit_of, len(reps)):
                ideal_condition = False
                failing_ideals.append(J)
    holds = index_condition and subgroup_condition and ideal_condition
    return Liv2Report(holds, p, index_condition, subgroup_condition, ideal_condition,
                      tuple(failing_subgroups), tuple(failing_ideals))


def _intermediate_subgroups(B: FiniteBrace, lower: Sequence[int],
                            upper: Sequence[int]) -> list[tuple[int, ...]]:
    """Subgroups strictly between lower and upper, through the regular action.

    Left-multiplication rows of the Cayley table are the regular permutation
    representation, and L_a(0) = a maps subgroups back to element sets.
    """
    upper_elems = B.mult_closure(upper)
    reg = PermutationGroup([Permutation(B.mul[a]) for a in range(B.n)], B.n)
    low = PermutationGroup([Permutation(B.mul[a]) for a in lower], B.n)
    up = PermutationGroup([Permutation(B.mul[a]) for a in upper_elems], B.n)
    out = []
    for H in reg.intermediate_subgroups(low, up):
        out.append(tuple(sorted(h(0) for h in H.elements())))
    return out


def _transitive_on_cosets(B: FiniteBrace, actors: Sequence[int], H: Sequence[int]) -> bool:
    coset_of, reps = _left_cosets(B, H)
    orbit = {0}
    queue = [0]
    while queue:
        i = queue.pop()
        x = reps[i]
        for g in actors:
            j = coset_of[B.mul[g][x]]
            if j not in orbit:
                orbit.add(j)
                queue.append(j)
    return len(orbit) == len(reps)


def _coset_orbits(B: FiniteBrace, actors: Sequence[int], coset_of: list[int],
                  count: int) -> list[int]:
    """Orbit index per coset of the left-multiplication action of actors."""
    reps_of = [-1] * count
    for a in range(B.n):
        if reps_of[coset_of[a]] == -1:
            reps_of[coset_of[a]] = a
    orbit_of = [-1] * count
    next_orbit = 0
    for start in range(count):
        if orbit_of[start] != -1:
            continue
        orbit_of[start] = next_orbit
        queue = [start]
        while queue:
            i = queue.pop()
            x = reps_of[i]
            for g in actors:
                j = coset_of[B.mul[g][x]]
                if orbit_of[j] == -1:
                    orbit_of[j] = next_orbit
                    queue.append(j)
        next_orbit += 1
    return orbit_of


def _transitive_on_orbit_classes(B: FiniteBrace, actors: Sequence[int],
                                 coset_of: list[int], orbit_of: list[int],
                                 count: int) -> bool:
    reps_of = [-1] * count
    for a in range(B.n):
        if reps_of[coset_of[a]] == -1:
            reps_of[coset_of[a]] = a
    classes = {orbit_of[0]}
    queue = [0]
    seen_cosets = {0}
    while queue:
        i = queue.pop()
        x = reps_of[i]
        for g in actors:
            j = coset_of[B.mul[g][x]]
            if j not in seen_cosets:
                seen_cosets.add(j)
                classes.add(orbit_of[j])
                queue.append(j)
    return len(classes) == max(orbit_of) + 1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- the permutation brace of a cycle set --

class PermutationBrace:
    """Left-brace structure on G(X), evaluated through integer-vector tags.

    The generators embed as x -> sigma_x^-1; every group element g carries a
    non-negative vector a(g) found breadth-first from the identity, where
    stepping the vector by e_y multiplies on the right:

        f_{b+e_y} = f_b o sigma^-1_{f_b^-1(y)}
        f_{b-e_y} = f_b o sigma_{q^-1(f_b^-1(y))}     (q the squaring map)

    and g + h = f_{a(g)+a(h)}.  Independence of the representative vectors
    is checked by exhaustive confluence of increments up to order 256 and by
    deterministic spot checks above.
    """

    def __init__(self, X: CycleSet):
        self.X = X
        group = X.permutation_group()
        self.elements = group.elements()
        self.index = {p: i for i, p in enumerate(self.elements)}
        self.sigma = X.rows()
        self.sigma_inv = tuple(p.inverse() for p in self.sigma)
        self.q_inv = X.squaring_map().inverse()
        identity = Permutation.identity(X.n)
        vectors = {identity: (0,) * X.n}
        layer = [identity]
        while layer:
            nxt = []
            for g in sorted(layer):
                base = vectors[g]
                for y in range(X.n):
                    h = self.increment(g, y)
                    if h not in vectors:
                        vec = list(base)
                        vec[y] += 1
                        vectors[h] = tuple(vec)
                        nxt.append(h)
            layer = nxt
        if len(vectors) != len(self.elements):
            raise BraceError("reachability", None,
                             "vector tagging did not reach the whole group")
        self.vectors = vectors
        self._check_welldefinedness()

    def increment(self, g: Permutation, y: int) -> Permutation:
        return g * self.sigma_inv[g.images.index(y)]

    def decrement(self, g: Permutation, y: int) -> Permutation:
        return g * self.sigma[self.q_inv(g.images.index(y))]

    def _check_welldefinedness(self) -> None:
        n = self.X.n
        if len(self.elements) <= WELLDEF_EXHAUSTIVE_CAP:
            sample = self.elements
            pairs = [(y, z) for y in range(n) for z in range(y + 1, n)]
        else:
            step = max(1, len(self.elements) // 64)
            sample = self.elements[::step]
            pairs = [(y, z) for y in range(min(n, 4)) for z in range(y + 1, min(n, 4))]
        for g in sample:
            for y, z in pairs:
                if self.increment(self.increment(g, y), z) != \
                        self.increment(self.increment(g, z), y):
                    raise BraceError("well-definedness", (self.index[g], y, z),
                                     "increment order changes the sum")

    def eval_vector(self, vec: Sequence[int]) -> Permutation:
        g = Permutation.identity(self.X.n)
        for y, count in enumerate(vec):
            for _ in range(count):
                g = self.increment(g, y)
        for y, count in enumerate(vec):
            for _ in range(-count):
                g = self.decrement(g, y)
        return g

    def add(self, g: Permutation, h: Permutation) -> Permutation:
        out = g
        for y, count in enumerate(self.vectors[h]):
            for _ in range(count):
                out = self.increment(out, y)
        return out

    def neg(self, g: Permutation) -> Permutation:
        return self.eval_vector([-c for c in self.vectors[g]])

    def star(self, g: Permutation, h: Permutation) -> Permutation:
        vg, vh, vgh = self.vectors[g], self.vectors[h], self.vectors[g * h]
        return self.eval_vector([a - b - c for a, b, c in zip(vgh, vg, vh)])

    def lam_value(self, g: Permutation, h: Permutation) -> Permutation:
        vg, vgh = self.vectors[g], self.vectors[g * h]
        return self.eval_vector([a - b for a, b in zip(vgh, vg)])

    def b_squared_elements(self) -> tuple[Permutation, ...]:
        """Additive closure of the stars of the generators.

        a*b is additive in b and twisted-additive in a, so stars of the
        multiplicative-and-additive generators sigma_x^-1 generate all of
        B^2 additively.
        """
        gens = sorted({self.star(s, t) for s in self.sigma_inv for t in self.sigma_inv})
        closed = {Permutation.identity(self.X.n)}
        frontier = list(closed)
        while frontier:
            g = frontier.pop()
            for s in gens:
                h = self.add(g, s)
                if h not in closed:
                    closed.add(h)
                    frontier.append(h)
        return tuple(sorted(closed))

    def socle_elements(self) -> tuple[Permutation, ...]:
        out = []
        for g in self.elements:
            if all(self.lam_value(g, t) == t for t in set(self.sigma_inv)):
                out.append(g)
        return tuple(out)

    def to_finite_brace(self) -> FiniteBrace:
        size = len(self.elements)
        if size > PERMUTATION_BRACE_TABLE_CAP:
            raise CapExceededError(
                f"permutation brace tables capped at order {PERMUTATION_BRACE_TABLE_CAP}")
        index = self.index
        add = [[0] * size for _ in range(size)]
        mul = [[0] * size for _ in range(size)]
        for i, g in enumerate(self.elements):
            for j, h in enumerate(self.elements):
                add[i][j] = index[self.add(g, h)]
                mul[i][j] = index[g * h]
        return FiniteBrace(add, mul, perms=self.elements)


def permutation_brace(X: CycleSet) -> FiniteBrace:
    """The left brace carried by G(X), as explicit Cayley tables.

    Element i corresponds to .perms[i]; the identity permutation is element
    0 because elements are sorted by image sequence.
    """
    return PermutationBrace(X).to_finite_brace()


# -- brace isomorphism --

def braces_isomorphic(B1: FiniteBrace, B2: FiniteBrace) -> bool:
    """Backtracking over additive isomorphisms with multiplicative pruning."""
    if B1.n != B2.n:
        return False
    n = B1.n
    if n > 128:
        raise CapExceededError("brace isomorphism testing capped at order 128")
    add_order1 = _additive_orders(B1)
    add_order2 = _additive_orders(B2)
    if sorted(add_order1) != sorted(add_order2):
        return False

    psi = [-1] * n
    used = [False] * n
    psi[0] = 0
    used[0] = True

    def span_and_check(assigned: list[int]) -> Optional[list[tuple[int, int]]]:
        """Extend psi additively from newly assigned elements; None on clash."""
        added = []
        queue = list(assigned)
        while queue:
            a = queue.pop()
            for b in range(n):
                if psi[b] == -1:
                    continue
                c = B1.add[a][b]
                img = B2.add[psi[a]][psi[b]]
                if psi[c] == -1:
                    if used[img]:
                        for x, _ in added:
                            used[psi[x]] = False
                            psi[x] = -1
                        return None
                    psi[c] = img
                    used[img] = True
                    added.append((c, img))
                    queue.append(c)
                elif psi[c] != img:
                    for x, _ in added:
                        used[psi[x]] = False
                        psi[x] = -1
                    return None
        for a in range(n):
            if psi[a] == -1:
                continue
            for b in range(n):
                if psi[b] == -1:
                    continue
                if psi[B1.mul[a][b]] != -1 and psi[B1.mul[a][b]] != B2.mul[psi[a]][psi[b]]:
                    for x, _ in added:
                        used[psi[x]] = False
                        psi[x] = -1
                    return None
        return added

    def undo(added: list[tuple[int, int]]) -> None:
        for x, _ in added:
            used[psi[x]] = False
            psi[x] = -1

    def extend() -> bool:
        pivot = next((a for a in range(n) if psi[a] == -1), None)
        if pivot is None:
            return all(
                psi[B1.mul[a][b]] == B2.mul[psi[a]][psi[b]]
                for a in range(n) for b in range(n)
            )
        for img in range(n):
            if used[img] or add_order2[img] != add_order1[pivot]:
                continue
            psi[pivot] = img
            used[img] = True
            added = span_and_check([pivot])
            if added is not None:
                if extend():
                    return True
                undo(added)
            psi[pivot] = -1
            used[img] = False
        return False

    return extend()


def _additive_orders(B: FiniteBrace) -> list[int]:
    orders = []
    for a in range(B.n):
        k, x = 1, a
        while x != 0:
            x = B.add[x][a]
            k += 1
        orders.append(k)
    return orders


# -- holomorph search for braces with a prescribed additive group --

def _abelian_automorphisms(add: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """All automorphisms of a small abelian group, by brute force."""
    n = len(add)
    out = []
    for images in itertools.permutations(range(1, n)):
        phi = (0,) + images
        if all(phi[add[a][b]] == add[phi[a]][phi[b]] for a in range(n) for b in range(n)):
            out.append(phi)
    return sorted(out)


def holomorph_brace_search(orders: Sequence[int]) -> list[FiniteBrace]:
    """All left braces with additive group Z/o1 x ... x Z/ok, up to isomorphism.

    Braces with that additive group correspond to regular subgroups of its
    holomorph: the multiplication is a o b = a + lam_a(b) for a map
    lam : B -> Aut(B,+) with lam_0 = id and lam_{a o b} = lam_a lam_b, found
    by backtracking with product propagation.
    """
    n = 1
    for o in orders:
        n *= o
    if n > 8:
        raise CapExceededError("holomorph search capped at order 8")
    add = _cyclic_product_table(orders)
    auts = _abelian_automorphisms(add)
    aut_index = {phi: i for i, phi in enumerate(auts)}
    comp = {}

    def compose(i: int, j: int) -> int:
        key = (i, j)
        if key not in comp:
            pi, pj = auts[i], auts[j]
            comp[key] = aut_index[tuple(pi[pj[x]] for x in range(n))]
        return comp[key]

    identity_aut = aut_index[tuple(range(n))]
    found: list[FiniteBrace] = []

    lam = [-1] * n
    lam[0] = identity_aut

    def propagate(newly: list[int]) -> Optional[list[int]]:
        added = []
        queue = list(newly)
        while queue:
            a = queue.pop()
            partners = [b for b in range(n) if lam[b] != -1]
            for b in partners:
                for x, y in ((a, b), (b, a)):
                    if lam[x] == -1 or lam[y] == -1:
                        continue
                    c = add[x][auts[lam[x]][y]]
                    want = compose(lam[x], lam[y])
                    if lam[c] == -1:
                        lam[c] = want
                        added.append(c)
                        queue.append(c)
                    elif lam[c] != want:
                        for d in added:
                            lam[d] = -1
                        return None
        return added

    def search() -> None:
        pivot = next((a for a in range(n) if lam[a] == -1), None)
        if pivot is None:
            mul = [[add[a][auts[lam[a]][b]] for b in range(n)] for a in range(n)]
            try:
                brace = FiniteBrace(add, mul)
            except BraceError:
                return
            if not any(braces_isomorphic(brace, kept) for kept in found):
                found.append(brace)
            return
        for phi in range(len(auts)):
            lam[pivot] = phi
            added = propagate([pivot])
            if added is not None:
                search()
                for d in added:
                    lam[d] = -1
            lam[pivot] = -1

    search()
    return found


def mult_group_is_dihedral8(B: FiniteBrace) -> bool:
    """(B,o) is dihedral of order 8: non-abelian with more than one involution."""
    if B.n != 8:
        return False
    if all(B.mul[a][b] == B.mul[b][a] for a in range(8) for b in range(8)):
        return False
    involutions = sum(1 for a in range(1, 8) if B.mul[a][a] == 0)
    return involutions > 1


def dihedral8_base_brace() -> tuple[FiniteBrace, int, tuple[int, ...]]:
    """The order-8 brace with dihedral multiplicative group behind the
    level-2 family: searched from the holomorphs of the order-8 abelian
    groups, it carries a size-4 transitive cycle base whose points have
    core-free stabilizers of order 2.  Returns (brace, base point, K)."""
    for orders in ((2, 2, 2), (4, 2), (8,)):
        for brace in holomorph_brace_search(orders):
            if not mult_group_is_dihedral8(brace):
                continue
            for orbit, rep in brace.transitive_cycle_bases():
                if len(orbit) != 4:
                    continue
                stab = brace.lambda_stabilizer(rep)
                if len(stab) == 2 and brace.core_is_trivial(stab):
                    return brace, rep, stab
    raise BraceError("search", None, "no dihedral order-8 brace with a size-4 base found")


def level2_family(p: int) -> tuple[FiniteBrace, tuple[int, ...], int]:
    """Brace data (B, K, a1) whose coset cycle set has size 4p and level 2.

    B is the product of the dihedral order-8 brace with the trivial brace of
    odd prime order p; K pairs the base point's order-2 stabilizer with 0.
    """
    if p == 2 or not _is_prime(p):
        raise ValueError("the second factor needs an odd prime order")
    b1, rep, stab = dihedral8_base_brace()
    B = direct_product_brace(b1, trivial_brace((p,)))
    a1 = rep * p + 1
    K = tuple(k * p for k in stab)
    return B, K, a1
