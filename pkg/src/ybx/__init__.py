"""Finite cycle sets, left braces, and exhaustive enumeration of
indecomposable involutive set-theoretic Yang-Baxter solutions."""

from .brace import (
    BraceError,
    FiniteBrace,
    PermutationBrace,
    braces_isomorphic,
    cosmod,
    dihedral8_base_brace,
    direct_product_brace,
    holomorph_brace_search,
    level2_family,
    liv2_check,
    permutation_brace,
    trivial_brace,
    validate_brace,
)
from .construct import (
    BUILTIN_NAMES,
    DynamicalCocycle,
    builtin,
    direct_product,
    dynamical_extension,
    rump_singular_cocycle,
    trivial_cycle_set,
    trivial_shift,
)
from .cycleset import (
    CONGRUENCE_CAP,
    Congruence,
    CycleSet,
    CycleSetError,
    CycleSetHom,
    EpiFactorization,
    are_isomorphic,
    factor_epimorphism,
    from_solution,
    to_solution,
)
from .enumeration import EnumerationReport, enumerate_indecomposable, tabulate
from .perm import CapExceededError, NormalStructure, Permutation, PermutationGroup

__version__ = "0.1.0"
