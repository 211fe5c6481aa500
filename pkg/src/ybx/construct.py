"""Builders: trivial cycle sets, products, dynamical extensions, built-ins.

The built-ins reproduce specific published tables used throughout the test
suite: the irretractable size-4 cycle set I, its odd direct products with a
shift, a size-36 indecomposable example over Z/6 x Z/6, the size-8 singular
cycle set whose associated group has order 24, and the dynamical extension
family over it.  Every builder revalidates its output.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

from .cycleset import CycleSet, CycleSetError, CycleSetHom
from .perm import Permutation, PermutationGroup


def trivial_cycle_set(n: int, alpha: Optional[Permutation] = None) -> CycleSet:
    """x*y = alpha(y); indecomposable exactly when alpha is an n-cycle."""
    if alpha is None:
        alpha = Permutation((i + 1) % n for i in range(n))
    if alpha.degree != n:
        raise ValueError("permutation degree differs from n")
    return CycleSet([alpha.images] * n)


def trivial_shift(n: int) -> CycleSet:
    """The trivial cycle set x*y = y+1 on Z/n."""
    return trivial_cycle_set(n)


def direct_product(X: CycleSet, Y: CycleSet) -> CycleSet:
    """Componentwise operation on pairs, indexed as x*|Y| + y."""
    m = Y.n
    size = X.n * m

    def op(a: int, b: int) -> int:
        xa, ya = divmod(a, m)
        xb, yb = divmod(b, m)
        return X.table[xa][xb] * m + Y.table[ya][yb]

    return CycleSet([[op(a, b) for b in range(size)] for a in range(size)])


def product_projections(X: CycleSet, Y: CycleSet, prod: CycleSet) -> tuple[CycleSetHom, CycleSetHom]:
    m = Y.n
    left = CycleSetHom(prod, X, tuple(a // m for a in range(prod.n)))
    right = CycleSetHom(prod, Y, tuple(a % m for a in range(prod.n)))
    return left, right


class DynamicalCocycle:
    """Data alpha[x][y] : S x S -> S with each alpha[x][y][s] a permutation of S.

    Validated against the cocycle identity

        alpha[x*y][x*z](alpha[x][y](r,s), alpha[x][z](r,t))
            = alpha[y*x][y*z](alpha[y][x](s,r), alpha[y][z](s,t))

    for all x,y,z in the base and r,s,t in the fiber.
    """

    def __init__(self, base: CycleSet, fiber_size: int,
                 alpha: Callable[[int, int, int, int], int]):
        n, m = base.n, fiber_size
        table = [[[[alpha(x, y, s, t) for t in range(m)] for s in range(m)]
                  for y in range(n)] for x in range(n)]
        for x in range(n):
            for y in range(n):
                for s in range(m):
                    if sorted(table[x][y][s]) != list(range(m)):
                        raise CycleSetError(
                            "cocycle-bijectivity", (x, y, s),
                            "alpha[x][y](s,-) is not a permutation of the fiber")
        T = base.table
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    a_l = table[T[x][y]][T[x][z]]
                    a_r = table[T[y][x]][T[y][z]]
                    xy, xz = table[x][y], table[x][z]
                    yx, yz = table[y][x], table[y][z]
                    for r in range(m):
                        for s in range(m):
                            row_l = a_l[xy[r][s]]
                            row_r = a_r[yx[s][r]]
                            xz_r = xz[r]
                            yz_s = yz[s]
                            for t in range(m):
                                if row_l[xz_r[t]] != row_r[yz_s[t]]:
                                    raise CycleSetError(
                                        "cocycle", (x, y, z, r, s, t),
                                        "dynamical cocycle identity fails")
        self.base = base
        self.fiber_size = m
        self.table = table

    def value(self, x: int, y: int, s: int, t: int) -> int:
        return self.table[x][y][s][t]


def dynamical_extension(cocycle: DynamicalCocycle) -> CycleSet:
    """Cycle set on base x fiber with (x,s)*(y,t) = (x*y, alpha[x][y](s,t))."""
    X, m = cocycle.base, cocycle.fiber_size
    size = X.n * m

    def op(a: int, b: int) -> int:
        x, s = divmod(a, m)
        y, t = divmod(b, m)
        return X.table[x][y] * m + cocycle.table[x][y][s][t]

    return CycleSet([[op(a, b) for b in range(size)] for a in range(size)])


def extension_projection(cocycle: DynamicalCocycle, ext: CycleSet) -> CycleSetHom:
    return CycleSetHom(ext, cocycle.base, tuple(a // cocycle.fiber_size for a in range(ext.n)))


def extension_is_indecomposable(cocycle: DynamicalCocycle, ext: CycleSet) -> bool:
    """Fiber-transitivity criterion for indecomposability of an extension.

    The extension is indecomposable iff the base is and the stabilizer of
    one fiber inside the extension's permutation group moves that fiber
    transitively.  Materializes the whole group; prefer is_indecomposable
    for large extensions.
    """
    if not cocycle.base.is_indecomposable():
        return False
    m = cocycle.fiber_size
    group = ext.permutation_group()
    stabilizer = [g for g in group.elements() if all(g(p) < m for p in range(m))]
    orbit = {0}
    frontier = [0]
    while frontier:
        p = frontier.pop()
        for g in stabilizer:
            q = g(p)
            if q not in orbit:
                orbit.add(q)
                frontier.append(q)
    return len(orbit) == m


# -- built-in tables --

def _esfin3_I() -> CycleSet:
    rows = [
        Permutation.from_cycles(4, (0, 3)),
        Permutation.from_cycles(4, (0, 2, 3, 1)),
        Permutation.from_cycles(4, (1, 2)),
        Permutation.from_cycles(4, (0, 1, 3, 2)),
    ]
    return CycleSet.from_rows(rows)


def _esfin3_product(k: int) -> CycleSet:
    if k < 1 or k % 2 == 0:
        raise ValueError("the shift factor must have odd size")
    return direct_product(trivial_shift(k), _esfin3_I())


def _esfin4() -> CycleSet:
    # (i,j)*(k,l) = (k-j, l+t[k-i]) on Z/6 x Z/6 with t[0]=1 and t[x]=3 otherwise
    def t(x: int) -> int:
        return 1 if x % 6 == 0 else 3

    def op(a: int, b: int) -> int:
        i, j = divmod(a, 6)
        k, l = divmod(b, 6)
        return ((k - j) % 6) * 6 + (l + t(k - i)) % 6

    return CycleSet([[op(a, b) for b in range(36)] for a in range(36)])


def _rump_singular8() -> CycleSet:
    rows = [
        Permutation.from_cycles(8, (0, 7), (1, 3), (2, 5), (4, 6)),
        Permutation.from_cycles(8, (0, 2, 6, 4), (1, 3, 7, 5)),
        Permutation.from_cycles(8, (0, 1), (2, 5), (3, 4), (6, 7)),
        Permutation.from_cycles(8, (0, 2), (1, 6), (3, 4), (5, 7)),
        Permutation.from_cycles(8, (0, 4, 6, 2), (1, 5, 7, 3)),
        Permutation.from_cycles(8, (0, 4, 5, 1), (2, 6, 7, 3)),
        Permutation.from_cycles(8, (0, 1, 5, 4), (2, 3, 7, 6)),
        Permutation.from_cycles(8, (0, 7), (1, 6), (2, 3), (4, 5)),
    ]
    return CycleSet.from_rows(rows)


def rump_singular_cocycle(k: int) -> DynamicalCocycle:
    """The dynamical cocycle over the size-8 singular cycle set.

    The fiber is Z/k x Z/k with k coprime to 3; on pairs (a,b) -> (c,d) it
    acts as (c,d+1) when x = y and a != c, identically when x = y and a = c,
    and as (c-b-1, d) when x != y.
    """
    if k < 1 or k % 3 == 0:
        raise ValueError("the fiber parameter must be coprime to 3")
    base = _rump_singular8()

    def alpha(x: int, y: int, s: int, t: int) -> int:
        a, b = divmod(s, k)
        c, d = divmod(t, k)
        if x == y:
            if a != c:
                return c * k + (d + 1) % k
            return c * k + d
        return ((c - b - 1) % k) * k + d

    return DynamicalCocycle(base, k * k, alpha)


def _rump_singular_ext(k: int) -> CycleSet:
    return dynamical_extension(rump_singular_cocycle(k))


def _latin_2x_minus_y(n: int) -> CycleSet:
    # x*y = 2x - y (mod n); CycleSet rejects it whenever the law fails
    return CycleSet([[(2 * x - y) % n for y in range(n)] for x in range(n)])


BUILTIN_NAMES = (
    "esfin3_I",
    "esfin3_product",
    "esfin4",
    "rump_singular8",
    "rump_singular_ext",
    "latin_2x_minus_y",
    "trivial_shift",
)


def builtin(name: str, param: Optional[int] = None) -> CycleSet:
    """Construct a named built-in cycle set, revalidated on construction.

    esfin3_product takes an odd k, rump_singular_ext a k coprime to 3, and
    latin_2x_minus_y / trivial_shift a size n.
    """
    plain = {
        "esfin3_I": _esfin3_I,
        "esfin4": _esfin4,
        "rump_singular8": _rump_singular8,
    }
    parametrized = {
        "esfin3_product": _esfin3_product,
        "rump_singular_ext": _rump_singular_ext,
        "latin_2x_minus_y": _latin_2x_minus_y,
        "trivial_shift": trivial_shift,
    }
    if name in plain:
        if param is not None:
            raise ValueError(f"{name} takes no parameter")
        return plain[name]()
    if name in parametrized:
        if param is None:
            raise ValueError(f"{name} needs a parameter")
        return parametrized[name](param)
    raise ValueError(f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
