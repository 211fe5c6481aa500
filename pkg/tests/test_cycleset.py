import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ybx.construct import builtin, trivial_cycle_set, trivial_shift
from ybx.cycleset import (Congruence, CycleSet, CycleSetError, CycleSetHom,
                          are_isomorphic, factor_epimorphism, from_solution,
                          to_solution)
from ybx.perm import Permutation


def test_validate_trivial_shift():
    X = trivial_shift(5)
    assert X.n == 5 and X.is_trivial()


def test_validate_esfin3_table():
    X = builtin("esfin3_I")
    assert X.n == 4
    assert [row.cycle_type() for row in X.rows()] == [(1, 1, 2), (4,), (1, 1, 2), (4,)]


def test_validate_rejects_repeated_row_entry():
    with pytest.raises(CycleSetError) as err:
        CycleSet([[0, 0], [1, 1]])
    assert err.value.axiom == "row-bijectivity"


def test_validate_rejects_law_violation_with_witness():
    # x*y = 2x - y fails the law for any size coprime to 2 (here 5)
    with pytest.raises(CycleSetError) as err:
        CycleSet([[(2 * x - y) % 5 for y in range(5)] for x in range(5)])
    assert err.value.axiom == "law"
    x, y, z = err.value.witness
    assert 0 <= x < 5 and 0 <= y < 5 and 0 <= z < 5


# -- solutions --

def test_to_solution_formula_on_two_points():
    # direct evaluation of r(x,y) = (s, s*x) with s = sigma_x^-1(y):
    # for the shift on Z/2, s = y+1 and s*x = x+1, so r(0,0) = (1,1)
    r = to_solution(trivial_shift(2))
    assert r[(0, 0)] == (1, 1)
    assert r[(1, 1)] == (0, 0)


def test_solution_round_trip_and_involutivity():
    for X in [trivial_shift(3), builtin("esfin3_I")]:
        r = to_solution(X)
        assert from_solution(X.n, r) == X
        assert all(r[r[pair]] == pair for pair in r)


def test_from_solution_rejects_non_involutive():
    r = to_solution(trivial_shift(3))
    bad = dict(r)
    # redirect one pair so r o r is no longer the identity
    (k1, v1), (k2, v2) = list(r.items())[:2]
    bad[k1], bad[k2] = v2, v1
    with pytest.raises(CycleSetError):
        from_solution(3, bad)


def braid_holds(X):
    """Oracle: r1 r2 r1 = r2 r1 r2 on all triples."""
    r = to_solution(X)

    def r1(t):
        a, b = r[(t[0], t[1])]
        return (a, b, t[2])

    def r2(t):
        a, b = r[(t[1], t[2])]
        return (t[0], a, b)

    triples = itertools.product(range(X.n), repeat=3)
    return all(r1(r2(r1(t))) == r2(r1(r2(t))) for t in triples)


def test_braid_relation_small():
    assert braid_holds(builtin("esfin3_I"))
    assert braid_holds(trivial_shift(4))


# -- groups --

def test_group_examples():
    assert builtin("rump_singular8").permutation_group().order() == 24
    assert trivial_shift(6).displacement_group().order() == 1
    assert builtin("esfin3_I").displacement_group().is_transitive()


def test_predicates_trivial_shift():
    X = trivial_shift(6)
    assert X.is_indecomposable() and X.is_trivial()
    assert not X.is_primitive_cycle_set() and not X.is_latin()


def test_esfin3_is_latin_and_esfin4_indecomposable():
    assert builtin("esfin3_I").is_latin()
    assert builtin("esfin4").is_indecomposable()


# -- retraction --

def test_retraction_of_product_is_esfin3():
    P = builtin("esfin3_product", 3)
    R, hom = P.retraction()
    assert hom.is_epimorphism()
    assert are_isomorphic(R, builtin("esfin3_I")) is not None


def test_mpl_examples():
    assert trivial_shift(5).mpl() == 1
    I = builtin("esfin3_I")
    R, _ = I.retraction()
    assert R.n == I.n  # irretractable
    assert I.mpl() is None
    assert CycleSet([[0]]).mpl() == 0


# -- congruences --

def all_partitions(points):
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for sub in all_partitions(rest):
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]
        yield [[first]] + sub


def congruences_brute_force(X):
    out = []
    for partition in all_partitions(list(range(X.n))):
        if X.is_congruence(partition):
            out.append(tuple(sorted(tuple(sorted(b)) for b in partition)))
    return sorted(out)


def test_all_congruences_against_brute_force():
    for X in [trivial_shift(4), builtin("esfin3_I"), trivial_shift(5)]:
        mine = sorted(c.classes for c in X.all_congruences())
        assert mine == congruences_brute_force(X)


def test_trivial_shift_4_congruence_count():
    congs = trivial_shift(4).all_congruences()
    assert len(congs) == 3
    assert {len(c.classes) for c in congs} == {1, 2, 4}


def test_esfin3_is_simple():
    assert len(builtin("esfin3_I").all_congruences()) == 2


def test_quotient_examples():
    X = trivial_shift(4)
    full = Congruence.from_classes(4, [[0, 1, 2, 3]])
    Q, _ = X.quotient(full)
    assert Q.n == 1
    discrete = Congruence.from_classes(4, [[0], [1], [2], [3]])
    Q, hom = X.quotient(discrete)
    assert Q == X and hom.is_isomorphism()
    halves = Congruence.from_classes(4, [[0, 2], [1, 3]])
    Q, _ = X.quotient(halves)
    assert Q == trivial_shift(2)


def test_quotient_rejects_non_congruence():
    I = builtin("esfin3_I")
    with pytest.raises(CycleSetError):
        I.quotient(Congruence.from_classes(4, [[0, 1], [2, 3]]))


def test_quotient_by_group_examples():
    X = builtin("rump_singular8")
    Q, hom = X.quotient_by_group(X.displacement_group())
    assert Q.n == 2 and hom.is_epimorphism()
    from ybx.perm import PermutationGroup
    Q, _ = X.quotient_by_group(PermutationGroup.trivial(8))
    assert Q == X
    Q, _ = X.quotient_by_group(X.permutation_group())
    assert Q.n == 1


def test_quotient_kernel_reproduces_congruence():
    X = trivial_shift(4)
    halves = Congruence.from_classes(4, [[0, 2], [1, 3]])
    _, hom = X.quotient(halves)
    kernel = {}
    for x in range(4):
        kernel.setdefault(hom(x), []).append(x)
    assert Congruence.from_classes(4, list(kernel.values())) == halves


# -- finite primitive level --

def test_has_finite_primitive_level_examples():
    assert builtin("rump_singular8").has_finite_primitive_level()
    assert not builtin("esfin3_I").has_finite_primitive_level()
    assert trivial_shift(5).has_finite_primitive_level()
    with pytest.raises(CycleSetError):
        trivial_cycle_set(4, Permutation.from_cycles(4, (0, 1))).has_finite_primitive_level()


def test_fpl_examples():
    assert trivial_shift(4).fpl() == 2
    assert builtin("esfin3_I").fpl() is None
    assert CycleSet([[0]]).fpl() == 0
    with pytest.raises(CycleSetError):
        trivial_cycle_set(4, Permutation.from_cycles(4, (0, 1))).fpl()


def test_common_cycle_primes_examples():
    assert builtin("rump_singular8").common_cycle_primes() == {2}
    assert trivial_shift(6).common_cycle_primes() == {2, 3}
    assert builtin("esfin3_I").common_cycle_primes() == frozenset()


def test_decomposability_hint():
    # multipermutation with a 3-cycle coprime to size 4: provably decomposable
    X = trivial_cycle_set(4, Permutation.from_cycles(4, (1, 2, 3)))
    hint = X.decomposability_hint()
    assert hint is not None and len(hint.cycle) == 3
    assert not X.is_indecomposable()
    assert trivial_shift(6).decomposability_hint() is None
    assert builtin("esfin3_I").decomposability_hint() is None


def test_singular_primes_examples():
    assert builtin("rump_singular8").singular_primes() == {3}
    assert trivial_shift(6).singular_primes() == frozenset()


def test_is_soluble_examples():
    projection2 = trivial_cycle_set(2, Permutation.identity(2))
    projection3 = trivial_cycle_set(3, Permutation.identity(3))
    assert projection2.is_soluble()
    assert projection3.is_soluble()
    assert not builtin("rump_singular8").is_soluble()


# -- factorization --

def test_factor_epimorphism_identity():
    X = builtin("esfin3_I")
    ident = CycleSetHom(X, X, tuple(range(4)))
    fact = factor_epimorphism(ident)
    assert fact.ideal_part.order() == 1
    assert fact.residual_is_covering
    assert fact.quotient == X


def test_factor_epimorphism_rump_class_map():
    X = builtin("rump_singular8")
    Q, hom = X.quotient_by_group(X.displacement_group())
    fact = factor_epimorphism(hom)
    assert X.displacement_group() <= fact.ideal_part
    assert fact.quotient.n == 2
    assert fact.residual.is_isomorphism()


def test_factor_epimorphism_retraction_of_product():
    P = builtin("esfin3_product", 3)
    _, hom = P.retraction()
    fact = factor_epimorphism(hom)
    assert fact.ideal_part.order() > 1
    assert fact.residual.is_epimorphism()
    # the factorization composes back to the original map
    composite = fact.class_map.then(fact.residual)
    assert composite.mapping == hom.mapping


def test_factor_epimorphism_rejects_non_epi():
    X = trivial_shift(2)
    Y = trivial_shift(2)
    hom = CycleSetHom(X, Y, (0, 1))
    bad = CycleSetHom.__new__(CycleSetHom)
    bad.source, bad.target, bad.mapping = X, Y, (0, 0)
    with pytest.raises(CycleSetError):
        factor_epimorphism(bad)
    del hom


# -- isomorphism --

def test_are_isomorphic_examples():
    X = builtin("esfin3_I")
    pi = (2, 0, 3, 1)
    relabeled = CycleSet(
        [[pi[X.table[x][y]] for y in _inv(pi)] for x in _inv(pi)]
    )
    table = [[0] * 4 for _ in range(4)]
    for x in range(4):
        for y in range(4):
            table[pi[x]][pi[y]] = pi[X.table[x][y]]
    relabeled = CycleSet(table)
    f = are_isomorphic(X, relabeled)
    assert f is not None
    assert all(f[X.table[x][y]] == relabeled.table[f[x]][f[y]]
               for x in range(4) for y in range(4))
    assert are_isomorphic(trivial_shift(4), X) is None


def _inv(pi):
    inv = [0] * len(pi)
    for i, j in enumerate(pi):
        inv[j] = i
    return inv


def test_canonical_form_idempotent():
    X = builtin("rump_singular8")
    C = X.canonical_form()
    assert C.canonical_form() == C


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(4)))
def test_law_invariant_under_relabeling(pi):
    X = builtin("esfin3_I")
    table = [[0] * 4 for _ in range(4)]
    for x in range(4):
        for y in range(4):
            table[pi[x]][pi[y]] = pi[X.table[x][y]]
    CycleSet(table)  # constructor re-validates the law
