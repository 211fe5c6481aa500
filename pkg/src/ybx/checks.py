"""Cross-check harness: run every applicable structural law on a cycle set.

Each check pairs two independently computed quantities; a failure carries a
minimal witness and is a mathematical event, not an I/O error.  Checks that
would exceed a resource cap are skipped, never silently weakened.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .brace import PermutationBrace
from .cycleset import CONGRUENCE_CAP, CycleSet
from .perm import CapExceededError

PRELDIS_GROUP_CAP = 5000


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    skipped: bool = False
    witness: str = ""

    def line(self) -> str:
        if self.skipped:
            return f"SKIP {self.name}: {self.witness}"
        if self.passed:
            return f"PASS {self.name}"
        return f"FAIL {self.name}: {self.witness}"


def _prime_factor_count(n: int) -> tuple[int, bool]:
    """(number of prime factors with multiplicity, is square-free)."""
    count, square_free, d = 0, True, 2
    while d * d <= n:
        mult = 0
        while n % d == 0:
            n //= d
            mult += 1
        if mult:
            count += mult
            square_free = square_free and mult == 1
        d += 1
    if n > 1:
        count += 1
    return count, square_free


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def run_checks(X: CycleSet) -> list[CheckResult]:
    out: list[CheckResult] = []
    indecomposable = X.is_indecomposable()

    if X.is_latin() and X.n > 1:
        out.append(CheckResult("latin-implies-indecomposable", indecomposable,
                               witness="latin but G(X) intransitive"))

    if not indecomposable:
        return out

    dis_transitive = X.displacement_group().is_transitive()
    fpl_finite_by_group = not dis_transitive

    fpl: Optional[int] = None
    fpl_known = False
    if X.n <= CONGRUENCE_CAP:
        try:
            fpl = X.fpl()
            fpl_known = True
        except CapExceededError:
            pass
    if fpl_known:
        out.append(CheckResult(
            "finite-level-iff-dis-intransitive",
            (fpl is not None) == fpl_finite_by_group,
            witness=f"fpl={fpl} but Dis {'in' if not dis_transitive else ''}transitive"))
    else:
        out.append(CheckResult("finite-level-iff-dis-intransitive", True, skipped=True,
                               witness=f"size {X.n} above congruence cap"))

    order = X.permutation_group().order()
    if order <= PRELDIS_GROUP_CAP:
        pb = PermutationBrace(X)
        b2 = set(pb.b_squared_elements())
        dis = set(X.displacement_group().elements())
        out.append(CheckResult(
            "brace-square-equals-displacements", b2 == dis,
            witness=f"|B^2|={len(b2)} |Dis|={len(dis)}"))
        ns = X.permutation_group().normal_structure(X.displacement_group())
        out.append(CheckResult(
            "displacements-normal-cyclic-quotient",
            ns.is_normal and bool(ns.quotient_is_cyclic),
            witness=str(ns)))
    else:
        out.append(CheckResult("brace-square-equals-displacements", True, skipped=True,
                               witness=f"|G|={order} above cap {PRELDIS_GROUP_CAP}"))

    factors, square_free = _prime_factor_count(X.n)
    if square_free and fpl_known:
        out.append(CheckResult(
            "square-free-level", fpl == factors,
            witness=f"fpl={fpl}, {factors} prime factors"))

    if fpl_finite_by_group:
        out.append(CheckResult(
            "finite-level-fixed-point-free", X.is_fixed_point_free(),
            witness="some x*y = y"))
        out.append(CheckResult(
            "finite-level-common-cycle-prime", bool(X.common_cycle_primes()),
            witness="no prime divides every cycle length"))

    if X.is_latin() and X.n > 1:
        out.append(CheckResult(
            "latin-implies-dis-transitive", dis_transitive,
            witness="latin with intransitive displacements"))

    mpl = X.mpl()
    if mpl is not None and fpl_known and fpl is not None:
        out.append(CheckResult(
            "multipermutation-level-below-primitive-level", mpl <= fpl,
            witness=f"mpl={mpl} > fpl={fpl}"))

    if fpl_known and fpl == 2 and not X.is_trivial():
        orbit_count = len(X.displacement_group().orbits())
        out.append(CheckResult(
            "level-2-prime-orbit-count", _is_prime(orbit_count),
            witness=f"{orbit_count} displacement orbits"))

    if fpl_known and X.n <= CONGRUENCE_CAP:
        orbit_count = len(X.displacement_group().orbits())
        bad = None
        for cong in X.all_congruences():
            k = len(cong.classes)
            if k in (1, X.n):
                continue
            image, _ = X.quotient(cong)
            if image.is_trivial() and image.is_indecomposable():
                if orbit_count % image.n != 0:
                    bad = image.n
                    break
        out.append(CheckResult(
            "trivial-image-size-divides-orbit-count", bad is None,
            witness=f"trivial image of size {bad} vs {orbit_count} orbits"))

    return out
