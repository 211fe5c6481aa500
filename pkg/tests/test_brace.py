import pytest

from ybx.brace import (BraceError, FiniteBrace, PermutationBrace,
                       braces_isomorphic, cosmod, dihedral8_base_brace,
                       direct_product_brace, holomorph_brace_search,
                       level2_family, liv2_check, mult_group_is_dihedral8,
                       permutation_brace, trivial_brace, validate_brace)
from ybx.construct import builtin, trivial_shift
from ybx.cycleset import are_isomorphic


def test_validate_trivial_brace():
    B = trivial_brace((4,))
    assert B.n == 4 and B.is_trivial()


def test_validate_rejects_non_abelian_addition():
    s3_mul = [
        [0, 1, 2, 3, 4, 5],
        [1, 0, 4, 5, 2, 3],
        [2, 3, 0, 1, 5, 4],
        [3, 2, 5, 4, 0, 1],
        [4, 5, 1, 0, 3, 2],
        [5, 4, 3, 2, 1, 0],
    ]
    with pytest.raises(BraceError) as err:
        validate_brace(s3_mul, s3_mul)
    assert "abelian" in err.value.axiom


def test_validate_direct_product():
    B = direct_product_brace(trivial_brace((2,)), trivial_brace((3,)))
    assert B.n == 6 and B.is_trivial()


def test_permutation_brace_of_trivial_shift():
    for n in (3, 4, 6):
        B = permutation_brace(trivial_shift(n))
        assert B.n == n and B.is_trivial()


def test_permutation_brace_rump_recovers_displacements():
    X = builtin("rump_singular8")
    B = permutation_brace(X)
    assert B.n == 24
    b2 = B.b_squared()
    dis_perms = set(X.displacement_group().elements())
    assert {B.perms[i] for i in b2} == dis_perms


def test_permutation_brace_socle_of_irretractable_is_trivial():
    B = permutation_brace(builtin("esfin3_I"))
    assert B.n == 8
    assert B.socle() == (0,)


def test_lambda_star_examples():
    T = trivial_brace((2, 2))
    assert all(T.star(a, b) == 0 for a in range(4) for b in range(4))
    assert T.b_squared() == (0,)
    assert T.socle() == (0, 1, 2, 3)
    B = permutation_brace(builtin("rump_singular8"))
    lam = B.lam_table()
    for a in range(B.n):
        for b in range(B.n):
            composed = tuple(lam[a][x] for x in lam[b])
            assert lam[B.mul[a][b]] == composed


def test_b_squared_and_socle_are_ideals():
    B = permutation_brace(builtin("rump_singular8"))
    assert B.is_ideal(B.b_squared())
    assert B.is_ideal(B.socle())
    ideals = B.ideals()
    assert tuple(B.b_squared()) in ideals
    assert tuple(B.socle()) in ideals


def test_ideals_of_prime_trivial_brace():
    B = trivial_brace((5,))
    assert B.ideals() == [(0,), (0, 1, 2, 3, 4)]


def test_ideals_of_level2_product_brace():
    B, K, a1 = level2_family(3)
    ideals = B.ideals()
    assert [len(i) for i in ideals] == [1, 3, 4, 8, 12, 24]
    b1_part = tuple(range(0, 24, 3))          # B1 x {0} under (i,j) -> 3i+j
    b2_part = tuple(range(3))                 # {0} x B2
    assert b1_part in ideals
    assert b2_part in ideals
    b1sq = [i for i in ideals if len(i) == 4][0]
    assert all(e % 3 == 0 for e in b1sq)      # B1^2 x {0}
    b1sq_b2 = [i for i in ideals if len(i) == 12][0]
    assert set(b1sq_b2) == {e + j for e in b1sq for j in range(3)}


def test_quotient_brace_examples():
    B = permutation_brace(builtin("rump_singular8"))
    whole, _ = B.quotient(tuple(range(B.n)))
    assert whole.n == 1
    same, _ = B.quotient((0,))
    assert same.add == B.add and same.mul == B.mul
    Q, _ = B.quotient(B.b_squared())
    assert Q.n == 2 and Q.is_trivial()


def test_quotient_rejects_non_ideal():
    B = permutation_brace(builtin("rump_singular8"))
    with pytest.raises(BraceError):
        B.quotient((0, 1))


def test_transitive_cycle_bases():
    B = trivial_brace((5,))
    bases = B.transitive_cycle_bases()
    assert len(bases) == 4 and all(len(orbit) == 1 for orbit, _ in bases)
    klein = trivial_brace((2, 2))
    assert klein.transitive_cycle_bases() == []
    prod, _, a1 = level2_family(3)
    sizes = [len(orbit) for orbit, _ in prod.transitive_cycle_bases()]
    assert 4 in sizes
    assert any(a1 in orbit for orbit, _ in prod.transitive_cycle_bases())


def test_cosmod_trivial_prime():
    X = cosmod(trivial_brace((5,)), (0,), 1)
    assert are_isomorphic(X, trivial_shift(5)) is not None


def test_cosmod_level2_family():
    for p in (3, 5):
        B, K, a1 = level2_family(p)
        X = cosmod(B, K, a1)
        assert X.n == 4 * p
        assert X.is_indecomposable()
        assert X.fpl() == 2


def test_cosmod_rejects_bad_subgroup():
    B, K, a1 = level2_family(3)
    with pytest.raises(BraceError):
        cosmod(B, tuple(range(B.n)), a1)  # not core-free


def test_liv2_examples():
    for p in (3, 5):
        B, K, a1 = level2_family(p)
        report = liv2_check(B, K, a1)
        assert report.holds and report.p == p
        assert report.index_condition and report.subgroup_condition and report.ideal_condition
    with pytest.raises(BraceError):
        liv2_check(trivial_brace((4,)), (0,), 1)


def test_liv2_agrees_with_fpl():
    B, K, a1 = level2_family(3)
    assert liv2_check(B, K, a1).holds == (cosmod(B, K, a1).fpl() == 2)


def test_holomorph_search_small_orders():
    for p in (2, 3, 5, 7):
        braces = holomorph_brace_search((p,))
        assert len(braces) == 1 and braces[0].is_trivial()


def test_holomorph_search_order_eight():
    by_group = {orders: holomorph_brace_search(orders)
                for orders in ((8,), (4, 2), (2, 2, 2))}
    counts = {orders: len(bs) for orders, bs in by_group.items()}
    # 27 braces of order 8 in total, split by additive group
    assert sum(counts.values()) == 27
    dihedral = [b for bs in by_group.values() for b in bs if mult_group_is_dihedral8(b)]
    assert dihedral
    found = []
    for b in dihedral:
        for orbit, rep in b.transitive_cycle_bases():
            if len(orbit) == 4:
                stab = b.lambda_stabilizer(rep)
                if len(stab) == 2 and b.core_is_trivial(stab):
                    found.append(b)
                    break
    assert found, "no dihedral brace with a size-4 base and core-free stabilizer"


def test_dihedral_base_brace():
    B1, rep, stab = dihedral8_base_brace()
    assert B1.n == 8 and mult_group_is_dihedral8(B1)
    assert len(stab) == 2 and B1.core_is_trivial(stab)


def test_braces_isomorphic():
    B1 = trivial_brace((2,))
    B2 = trivial_brace((3,))
    left = direct_product_brace(B1, B2)
    right = direct_product_brace(B2, B1)
    assert braces_isomorphic(left, right)
    assert not braces_isomorphic(trivial_brace((4,)), trivial_brace((2, 2)))


def test_welldefinedness_check_is_exhaustive_for_small_groups():
    # constructing the vector tagging runs the confluence check
    for X in [builtin("rump_singular8"), builtin("esfin3_I"), trivial_shift(6)]:
        PermutationBrace(X)


def test_compatibility_axiom_on_validated_brace():
    B = permutation_brace(builtin("rump_singular8"))
    for a in range(0, B.n, 5):
        for b in range(B.n):
            for c in range(B.n):
                lhs = B.add[B.mul[a][B.add[b][c]]][a]
                rhs = B.add[B.mul[a][b]][B.mul[a][c]]
                assert lhs == rhs
