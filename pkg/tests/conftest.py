import pytest

from ybx.construct import builtin, trivial_shift
from ybx.enumeration import enumerate_indecomposable


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the size-8 enumeration acceptance check")
    parser.addoption("--runveryslow", action="store_true", default=False,
                     help="run the size-9 enumeration acceptance check")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running (size-8 table reproduction)")
    config.addinivalue_line("markers", "veryslow: very long-running (size-9 table reproduction)")


def pytest_collection_modifyitems(config, items):
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    skip_veryslow = pytest.mark.skip(reason="needs --runveryslow")
    for item in items:
        if "slow" in item.keywords and not config.getoption("--runslow"):
            item.add_marker(skip_slow)
        if "veryslow" in item.keywords and not config.getoption("--runveryslow"):
            item.add_marker(skip_veryslow)


@pytest.fixture(scope="session")
def small_corpus():
    """All indecomposable classes of sizes 2..6, keyed by size."""
    return {n: enumerate_indecomposable(n) for n in range(2, 7)}


@pytest.fixture(scope="session")
def builtin_instances():
    """Every constructible built-in used in corpus-wide property checks.

    x*y = 2x - y violates the defining law for every size not dividing 4,
    so that name contributes no instance.
    """
    return {
        "esfin3_I": builtin("esfin3_I"),
        "esfin3_product_3": builtin("esfin3_product", 3),
        "esfin4": builtin("esfin4"),
        "rump_singular8": builtin("rump_singular8"),
        "rump_singular_ext_2": builtin("rump_singular_ext", 2),
        "trivial_shift_4": trivial_shift(4),
        "trivial_shift_6": trivial_shift(6),
    }
