import itertools

import pytest
from hypothesis import given, strategies as st

from ybx.construct import builtin
from ybx.perm import (CapExceededError, Permutation, PermutationGroup,
                      compose, cycle_decomposition)


def perm_strategy(n):
    return st.permutations(range(n)).map(Permutation)


def test_compose_identity_and_involution():
    c4 = Permutation.from_cycles(4, (0, 1, 2, 3))
    assert compose(c4, Permutation.identity(4)) == c4
    swap = Permutation.from_cycles(2, (0, 1))
    assert compose(swap, swap) == Permutation.identity(2)


def test_compose_rump_rows_against_direct_table_composition():
    X = builtin("rump_singular8")
    s1, s4 = X.sigma(1), X.sigma(4)
    # independent oracle: evaluate the image list point by point
    expected = tuple(s1.images[s4.images[y]] for y in range(8))
    assert compose(s1, s4).images == expected


def test_compose_degree_mismatch():
    with pytest.raises(ValueError):
        compose(Permutation.identity(3), Permutation.identity(4))


def test_cycle_decomposition_examples():
    assert cycle_decomposition(Permutation.identity(4)) == (1, 1, 1, 1)
    X = builtin("rump_singular8")
    assert cycle_decomposition(X.sigma(0)) == (2, 2, 2, 2)
    assert cycle_decomposition(X.sigma(1)) == (4, 4)


@given(st.integers(2, 8).flatmap(lambda n: st.tuples(perm_strategy(n), perm_strategy(n))))
def test_compose_cycle_lengths_sum_to_degree(pq):
    p, q = pq
    assert sum(cycle_decomposition(p * q)) == p.degree


def test_group_elements_counts_and_order():
    five = PermutationGroup([Permutation.from_cycles(5, (0, 1, 2, 3, 4))])
    assert five.order() == 5
    assert builtin("rump_singular8").permutation_group().order() == 24
    assert PermutationGroup.trivial(3).order() == 1


def test_group_elements_sorted_deterministically():
    G = PermutationGroup([Permutation.from_cycles(3, (0, 1)),
                          Permutation.from_cycles(3, (0, 1, 2))])
    elems = G.elements()
    assert len(elems) == 6
    assert list(elems) == sorted(elems)
    assert elems[0].is_identity()


def test_group_cap(monkeypatch):
    monkeypatch.setenv("YBX_MAX_GROUP_ELEMS", "3")
    G = PermutationGroup([Permutation.from_cycles(5, (0, 1, 2, 3, 4))])
    with pytest.raises(CapExceededError):
        G.elements()
    # order never materializes and stays exact past the cap
    assert G.order() == 5


def test_orbits_examples():
    X = builtin("rump_singular8")
    assert X.displacement_group().orbits() == [(0, 3, 5, 6), (1, 2, 4, 7)]
    assert PermutationGroup.trivial(4).orbits() == [(0,), (1,), (2,), (3,)]
    cyc = PermutationGroup([Permutation.from_cycles(4, (0, 1, 2, 3))])
    assert cyc.orbits() == [(0, 1, 2, 3)]
    assert cyc.is_transitive()
    assert not PermutationGroup.trivial(2).is_transitive()
    assert not builtin("rump_singular8").displacement_group().is_transitive()


def _invariant_partitions(n, generators):
    """Oracle: all non-trivial block systems by brute force over partitions."""
    def partitions(points):
        if not points:
            yield []
            return
        first, rest = points[0], points[1:]
        for sub in partitions(rest):
            for i in range(len(sub)):
                yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]
            yield [[first]] + sub

    out = []
    for blocks in partitions(list(range(n))):
        if len(blocks) in (1, n):
            continue
        if len({len(b) for b in blocks}) != 1:
            continue  # blocks of a transitive group are equal-sized
        index = {}
        for i, block in enumerate(blocks):
            for x in block:
                index[x] = i
        ok = True
        for g in generators:
            seen = {}
            for x in range(n):
                i, j = index[x], index[g(x)]
                if seen.setdefault(i, j) != j:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(blocks)
    return out


def test_is_primitive_examples_and_oracle():
    assert PermutationGroup([Permutation.from_cycles(5, (0, 1, 2, 3, 4))]).is_primitive()
    four = PermutationGroup([Permutation.from_cycles(4, (0, 1, 2, 3))])
    assert not four.is_primitive()
    assert four.minimal_block(0, 2) == [(0, 2), (1, 3)]
    G = builtin("rump_singular8").permutation_group()
    assert not G.is_primitive()
    assert _invariant_partitions(8, G.generators), "oracle found no block system"


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_transitive_prime_degree_is_primitive(p):
    G = PermutationGroup([Permutation((i + 1) % p for i in range(p))])
    assert G.is_primitive()


def test_normal_structure_examples():
    X = builtin("rump_singular8")
    ns = X.permutation_group().normal_structure(X.displacement_group())
    assert ns.is_normal and ns.index == 2 and ns.quotient_is_cyclic
    pair = PermutationGroup([Permutation.from_cycles(4, (0, 1), (2, 3))])
    ns = pair.normal_structure(PermutationGroup.trivial(4))
    assert ns.is_normal and ns.index == 2 and ns.quotient_is_cyclic
    s3 = PermutationGroup([Permutation.from_cycles(3, (0, 1)),
                           Permutation.from_cycles(3, (0, 1, 2))])
    ns = s3.normal_structure(PermutationGroup([Permutation.from_cycles(3, (0, 1))]))
    assert not ns.is_normal and ns.quotient_is_cyclic is None


def test_normal_structure_rejects_non_subgroup():
    s3 = PermutationGroup([Permutation.from_cycles(3, (0, 1)),
                           Permutation.from_cycles(3, (0, 1, 2))])
    other = PermutationGroup([Permutation.from_cycles(4, (0, 1))], 4)
    with pytest.raises(ValueError):
        PermutationGroup([Permutation.from_cycles(3, (0, 1))]).normal_structure(s3)
    del other


def _all_subgroups_oracle(U):
    """Exhaustive closure of every subset: the complete subgroup list."""
    elems = U.elements()
    out = set()
    for r in range(len(elems) + 1):
        for subset in itertools.combinations(elems, r):
            out.add(frozenset(U.subgroup_closure(subset)))
    return out


def test_intermediate_subgroups_klein():
    klein = PermutationGroup([Permutation.from_cycles(4, (0, 1)),
                              Permutation.from_cycles(4, (2, 3))])
    trivial = PermutationGroup.trivial(4)
    found = klein.intermediate_subgroups(trivial, klein)
    assert sorted(H.order() for H in found) == [2, 2, 2, 4]
    assert klein.intermediate_subgroups(trivial, trivial) == []


def test_intermediate_subgroups_dihedral_oracle():
    dihedral = PermutationGroup([Permutation.from_cycles(4, (0, 1, 2, 3)),
                                 Permutation.from_cycles(4, (1, 3))])
    assert dihedral.order() == 8
    K = PermutationGroup([Permutation.from_cycles(4, (1, 3))])
    found = dihedral.intermediate_subgroups(K, dihedral)
    oracle = {frozenset(H.elements()) for H in [dihedral]}
    base = frozenset(K.elements())
    oracle = {S for S in _all_subgroups_oracle(dihedral) if base < S}
    assert {frozenset(H.elements()) for H in found} == oracle


def test_core_is_trivial_examples():
    s3 = PermutationGroup([Permutation.from_cycles(3, (0, 1)),
                           Permutation.from_cycles(3, (0, 1, 2))])
    assert s3.core_is_trivial(PermutationGroup.trivial(3))
    # point stabilizer of a transitive faithful action is core-free
    assert s3.core_is_trivial(PermutationGroup([Permutation.from_cycles(3, (1, 2))]))
    a3 = PermutationGroup([Permutation.from_cycles(3, (0, 1, 2))])
    assert not s3.core_is_trivial(a3)
