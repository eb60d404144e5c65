import time
from contextlib import contextmanager

import pytest

from cubeperc.critical import solve_pc
from cubeperc.cube import CubeDim

ACCEPTANCE_MASTER_SEED = 2026


@contextmanager
def criterion(number: int, name: str):
    """Prints the one pass/fail line each acceptance criterion owes."""
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"[FAIL] criterion {number}: {name} ({time.perf_counter() - t0:.1f}s)")
        raise
    print(f"[PASS] criterion {number}: {name} ({time.perf_counter() - t0:.1f}s)")


@pytest.fixture(scope="session")
def pc12():
    return solve_pc(CubeDim(12), 1.0, master_seed=ACCEPTANCE_MASTER_SEED)


@pytest.fixture(scope="session")
def pc14():
    return solve_pc(CubeDim(14), 1.0, master_seed=ACCEPTANCE_MASTER_SEED)


@pytest.fixture(scope="session")
def pc16():
    return solve_pc(CubeDim(16), 1.0, master_seed=ACCEPTANCE_MASTER_SEED)
