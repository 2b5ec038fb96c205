import os
from pathlib import Path

import pytest

from argzeta.explicit_formula import von_mangoldt_sieve
from argzeta.zeros import find_zeros, import_zeros, load_table, save_table

DATA = Path(__file__).parent / "data"
CACHE = Path(os.environ.get("ARGZETA_TEST_CACHE", Path(__file__).parent / ".cache"))
REFERENCE = DATA / "reference_zeros_1e4.txt"


@pytest.fixture(scope="session")
def zeros_7000():
    # reaches t + L + 1000 for every explicit-formula grid point up to t = 5000
    return find_zeros(10.0, 7000.0)


@pytest.fixture(scope="session")
def reference_table():
    if not REFERENCE.exists():
        pytest.skip("reference table missing; run tools/make_reference_zeros.py")
    return import_zeros(REFERENCE, skip=1)


@pytest.fixture(scope="session")
def mangoldt():
    return von_mangoldt_sieve(20000)


@pytest.fixture(scope="session")
def zeros_1e6():
    """All zeros below 1e6, cached across sessions as a ZTAB1 file."""
    path = CACHE / "zeros_1e6.ztab"
    if path.exists():
        tab = load_table(path)
        if tab.t_max >= 1e6 and tab.verified:
            return tab
    tab = find_zeros(10.0, 1e6)
    CACHE.mkdir(parents=True, exist_ok=True)
    save_table(tab, path)
    return tab
