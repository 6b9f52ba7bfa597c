import itertools
from collections import Counter

import pytest
from hypothesis import HealthCheck, settings

from rllseq.constraints import make_runset, naturals

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NAMED = {
    "N": "interval:1:inf",
    "12": "1,2",
    "23": "2,3",
    "13": "1,3",
    "2to5": "interval:2:5",
}


@pytest.fixture(params=sorted(NAMED), ids=sorted(NAMED))
def named_runset(request):
    return make_runset(NAMED[request.param])


@pytest.fixture
def N():
    return naturals()


def brute_counts(allowed, n):
    """Tally ``(weight, runs)`` over all binary strings of length n with runs in ``allowed``."""
    out = Counter()
    for bits in itertools.product((0, 1), repeat=n):
        runs = []
        for b in bits:
            if runs and runs[-1][0] == b:
                runs[-1][1] += 1
            else:
                runs.append([b, 1])
        if all(length in allowed for _, length in runs):
            out[(sum(bits), len(runs))] += 1
    return out


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
