"""Command-line surface.

Exit codes: 0 success, 1 mathematical or validation failure, 2 resource
cap exceeded.  Every command is deterministic given its flags and input
bytes, including under --jobs > 1.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import checks, formats
from .brace import BraceError, cosmod, level2_family, liv2_check
from .construct import BUILTIN_NAMES, builtin, direct_product, trivial_cycle_set
from .cycleset import CONGRUENCE_CAP, CycleSet, CycleSetError
from .enumeration import enumerate_indecomposable
from .perm import CapExceededError, Permutation

EXIT_MATH = 1
EXIT_CAP = 2


def _read(path: str) -> str:
    with open(path, "r", encoding="ascii") as fh:
        return fh.read()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_invariants(args) -> int:
    X = formats.parse_cycle_set(_read(args.path))
    lines = [f"n: {X.n}", "valid: true"]
    indec = X.is_indecomposable()
    lines.append(f"indecomposable: {str(indec).lower()}")
    lines.append(f"trivial: {str(X.is_trivial()).lower()}")
    lines.append(f"latin: {str(X.is_latin()).lower()}")
    lines.append(f"group_order: {X.permutation_group().order()}")
    dis = X.displacement_group()
    lines.append(f"displacement_order: {dis.order()}")
    lines.append(f"displacement_orbit_sizes: {'+'.join(str(len(o)) for o in dis.orbits())}")
    lines.append(f"primitive: {str(X.is_primitive_cycle_set()).lower()}")
    mpl = X.mpl()
    lines.append(f"mpl: {mpl if mpl is not None else 'not multipermutation'}")
    capped = False
    if not indec:
        lines.append("fpl: n/a (decomposable)")
    elif X.n > CONGRUENCE_CAP:
        lines.append("fpl: cap-exceeded")
        capped = True
    else:
        fpl = X.fpl()
        lines.append(f"fpl: {fpl if fpl is not None else 'infinite'}")
    lines.append(f"fixed_point_free: {str(X.is_fixed_point_free()).lower()}")
    lines.append("common_cycle_primes: " +
                 (",".join(map(str, sorted(X.common_cycle_primes()))) or "none"))
    if indec:
        lines.append("singular_primes: " +
                     (",".join(map(str, sorted(X.singular_primes()))) or "none"))
    else:
        lines.append("singular_primes: n/a (decomposable)")
    if X.n > CONGRUENCE_CAP:
        lines.append("soluble: cap-exceeded")
        capped = True
    else:
        lines.append(f"soluble: {str(X.is_soluble()).lower()}")
    print("\n".join(lines))
    return EXIT_CAP if capped else 0


def cmd_enumerate(args) -> int:
    if not 2 <= args.size <= 9:
        raise ValueError("size must be between 2 and 9")
    if args.size == 9 and not args.allow_slow:
        raise ValueError("size 9 runs for a long time; pass --allow-slow to confirm")
    classes = enumerate_indecomposable(args.size, jobs=args.jobs)
    m = sum(1 for X in classes if X.mpl() is not None)
    fp = sum(1 for X in classes if not X.displacement_group().is_transitive())
    if args.filter == "fpl-finite":
        kept = [X for X in classes if not X.displacement_group().is_transitive()]
    elif args.filter == "mpl-finite":
        kept = [X for X in classes if X.mpl() is not None]
    else:
        kept = classes
    if args.out:
        _emit(formats.serialize_corpus(kept), args.out)
    print(f"n={args.size} c={len(classes)} m={m} fp={fp}")
    return 0


def cmd_check(args) -> int:
    text = _read(args.path)
    if text.startswith(formats.CORPUS_HEADER):
        records = formats.parse_corpus(text)
    else:
        records = [formats.parse_cycle_set(text)]
    failures = 0
    for index, X in enumerate(records):
        for result in checks.run_checks(X):
            print(f"[{index}] {result.line()}")
            if not result.passed and not result.skipped:
                failures += 1
    print(f"records={len(records)} failures={failures}")
    return EXIT_MATH if failures else 0


def _parse_alpha(spec: str, n: int) -> Permutation:
    images = [int(tok) for tok in spec.replace(",", " ").split()]
    if len(images) != n:
        raise ValueError(f"permutation needs {n} images")
    return Permutation(images)


def cmd_construct(args) -> int:
    if args.builder == "trivial":
        alpha = _parse_alpha(args.alpha, args.n) if args.alpha else None
        X = trivial_cycle_set(args.n, alpha)
    elif args.builder == "builtin":
        X = builtin(args.name, args.param)
    elif args.builder == "product":
        left = formats.parse_cycle_set(_read(args.left))
        right = formats.parse_cycle_set(_read(args.right))
        X = direct_product(left, right)
    elif args.builder == "level2-brace":
        B, K, a1 = level2_family(args.p)
        _emit(formats.serialize_brace(B), args.out)
        print(f"subgroup: {','.join(map(str, K))}", file=sys.stderr)
        print(f"base: {a1}", file=sys.stderr)
        return 0
    else:
        raise ValueError(f"unknown builder {args.builder!r}")
    _emit(formats.serialize_cycle_set(X), args.out)
    return 0


def _parse_subgroup(spec: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in spec.replace(",", " ").split())


def cmd_cosmod(args) -> int:
    B = formats.parse_brace(_read(args.brace))
    X = cosmod(B, _parse_subgroup(args.subgroup), args.base)
    _emit(formats.serialize_cycle_set(X), args.out)
    return 0


def cmd_liv2(args) -> int:
    B = formats.parse_brace(_read(args.brace))
    K = _parse_subgroup(args.subgroup)
    report = liv2_check(B, K, args.base)
    X = cosmod(B, K, args.base)
    fpl = X.fpl()
    print(f"index_condition: {str(report.index_condition).lower()}")
    print(f"subgroup_condition: {str(report.subgroup_condition).lower()}")
    print(f"ideal_condition: {str(report.ideal_condition).lower()}")
    print(f"p: {report.p if report.p is not None else 'none'}")
    print(f"holds: {str(report.holds).lower()}")
    print(f"coset_cycle_set_size: {X.n}")
    print(f"independent_fpl: {fpl if fpl is not None else 'infinite'}")
    agree = report.holds == (fpl == 2)
    print(f"agreement: {str(agree).lower()}")
    return 0 if agree else EXIT_MATH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ybx",
        description="Finite cycle sets, left braces, and enumeration of "
                    "indecomposable involutive Yang-Baxter solutions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="report all invariants of a cycle-set file")
    p.add_argument("path")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("enumerate", help="enumerate indecomposable cycle sets of a size")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--filter", choices=["all", "fpl-finite", "mpl-finite"], default="all")
    p.add_argument("--allow-slow", action="store_true",
                   help="unlock size 9, which has no runtime guarantee")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("check", help="run the theorem cross-check suite on a file or corpus")
    p.add_argument("--suite", choices=["theorems"], default="theorems")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("construct", help="build a cycle set (or the level-2 brace)")
    psub = p.add_subparsers(dest="builder", required=True)
    q = psub.add_parser("trivial", help="trivial cycle set x*y = alpha(y)")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--alpha", help="comma-separated images, default the +1 shift")
    q.add_argument("--out")
    q = psub.add_parser("builtin", help="a named built-in table")
    q.add_argument("name", choices=sorted(BUILTIN_NAMES))
    q.add_argument("--param", type=int, help="size/shift parameter where applicable")
    q.add_argument("--out")
    q = psub.add_parser("product", help="direct product of two cycle-set files")
    q.add_argument("left")
    q.add_argument("right")
    q.add_argument("--out")
    q = psub.add_parser("level2-brace",
                        help="brace of order 8p behind the level-2 coset family")
    q.add_argument("--p", type=int, default=3)
    q.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("cosmod", help="coset cycle set of a brace file")
    p.add_argument("--brace", required=True)
    p.add_argument("--subgroup", required=True, help="comma-separated element indices")
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cosmod)

    p = sub.add_parser("liv2", help="level-2 criterion report for a brace file")
    p.add_argument("--brace", required=True)
    p.add_argument("--subgroup", required=True)
    p.add_argument("--base", type=int, required=True)
    p.set_defaults(func=cmd_liv2)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (CycleSetError, BraceError, formats.FormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
