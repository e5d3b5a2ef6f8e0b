import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
primes = st.sampled_from([2, 3, 5, 7])
small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)
nonzero_q = small_q.filter(lambda x: x != 0)


def rng_of(seed: int) -> random.Random:
    return random.Random(seed)


def Fr(s) -> Fraction:
    return Fraction(s)


@pytest.fixture
def fixtures_dir():
    from pathlib import Path
    return Path(__file__).resolve().parent.parent / "fixtures"


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
