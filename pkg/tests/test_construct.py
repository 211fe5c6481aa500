import pytest

from ybx.construct import (DynamicalCocycle, builtin, direct_product,
                           dynamical_extension, extension_is_indecomposable,
                           extension_projection, product_projections,
                           rump_singular_cocycle, trivial_cycle_set,
                           trivial_shift)
from ybx.cycleset import CycleSetError, are_isomorphic
from ybx.perm import Permutation


def test_trivial_builders():
    X = trivial_cycle_set(5)
    assert X.is_indecomposable()
    Y = trivial_cycle_set(4, Permutation.from_cycles(4, (0, 1), (2, 3)))
    assert not Y.is_indecomposable()
    assert trivial_cycle_set(1).n == 1


def test_direct_product_examples():
    P = builtin("esfin3_product", 3)
    assert P.n == 12
    R, _ = P.retraction()
    assert are_isomorphic(R, builtin("esfin3_I")) is not None
    X = builtin("esfin3_I")
    single = direct_product(X, trivial_cycle_set(1))
    assert are_isomorphic(single, X) is not None
    prod = direct_product(trivial_shift(2), trivial_shift(3))
    assert are_isomorphic(prod, trivial_shift(6)) is not None


def test_product_projections_are_epimorphisms():
    S, I = trivial_shift(3), builtin("esfin3_I")
    P = direct_product(S, I)
    left, right = product_projections(S, I, P)
    assert left.is_epimorphism() and right.is_epimorphism()


def test_constant_cocycle_extension_is_product():
    base = trivial_shift(3)
    cocycle = DynamicalCocycle(base, 2, lambda x, y, s, t: (t + 1) % 2)
    ext = dynamical_extension(cocycle)
    expected = direct_product(trivial_shift(3), trivial_shift(2))
    assert are_isomorphic(ext, expected) is not None


def test_cocycle_validation_rejects_corruption():
    base = builtin("rump_singular8")
    k = 2

    def alpha(x, y, s, t):
        a, b = divmod(s, k)
        c, d = divmod(t, k)
        if x == y:
            return c * k + (d + (1 if a != c else 0)) % k
        return ((c - b) % k) * k + d  # drops the -1 twist: breaks the identity

    with pytest.raises(CycleSetError) as err:
        DynamicalCocycle(base, k * k, alpha)
    assert err.value.axiom in ("cocycle", "cocycle-bijectivity")
    if err.value.axiom == "cocycle":
        assert len(err.value.witness) == 6


def test_singular_extension_family():
    ext = builtin("rump_singular_ext", 2)
    assert ext.n == 32
    assert ext.is_indecomposable()
    R, _ = ext.retraction()
    assert R.n == 32  # irretractable
    assert not ext.displacement_group().is_transitive()
    assert ext.singular_primes() == {3}
    # closure under indecomposable dynamical extension: the base has finite
    # primitive level and so does the extension
    assert builtin("rump_singular8").has_finite_primitive_level()
    assert ext.has_finite_primitive_level()


def test_extension_projection_is_epimorphism():
    cocycle = rump_singular_cocycle(2)
    ext = dynamical_extension(cocycle)
    hom = extension_projection(cocycle, ext)
    assert hom.is_epimorphism()


def test_fiber_criterion_matches_orbit_test_on_small_extension():
    base = trivial_shift(3)
    cocycle = DynamicalCocycle(base, 2, lambda x, y, s, t: (t + 1) % 2)
    ext = dynamical_extension(cocycle)
    assert extension_is_indecomposable(cocycle, ext) == ext.is_indecomposable()


def test_builtin_errors():
    with pytest.raises(ValueError):
        builtin("nonsense")
    with pytest.raises(ValueError):
        builtin("esfin3_product", 2)  # even shift size
    with pytest.raises(ValueError):
        builtin("rump_singular_ext", 3)  # fiber parameter divisible by 3
    with pytest.raises(ValueError):
        builtin("esfin4", 6)  # takes no parameter
    # x*y = 2x - y violates the defining law for sizes coprime to 2
    with pytest.raises(CycleSetError):
        builtin("latin_2x_minus_y", 5)


def test_builtin_validation_facts():
    X = builtin("rump_singular8")
    assert X.permutation_group().order() == 24
    E = builtin("esfin4")
    assert E.n == 36 and E.is_indecomposable()
    # the displacement orbits of esfin4 yield a trivial size-2 image
    Q, _ = E.quotient_by_group(E.displacement_group())
    assert Q.n == 2 and Q.is_trivial() and Q.is_indecomposable()
    I = builtin("esfin3_I")
    assert I.n == 4 and I.mpl() is None


def test_odd_products_retract_onto_esfin3():
    for k in (1, 3, 5):
        P = builtin("esfin3_product", k)
        R, _ = P.retraction()
        assert are_isomorphic(R, builtin("esfin3_I")) is not None


def test_singular_extension_rows_distinct_and_dis_split():
    for k in (1, 2):
        ext = builtin("rump_singular_ext", k)
        assert len(set(ext.table)) == ext.n
        if k > 1:
            assert not ext.displacement_group().is_transitive()
