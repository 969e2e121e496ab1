from __future__ import annotations

import itertools

import pytest

from advnet.channel import Channel

# 8-input channel whose largest unambiguous code is {3, 5, 6}
SMALL_CHANNEL = {
    0: {0, 2},
    1: {0, 1, 4, 6},
    2: {2, 3, 5},
    3: {2, 3, 4, 7},
    4: {2, 3, 4, 6},
    5: {0, 1, 5},
    6: {6},
    7: {0, 1, 5, 7},
}


@pytest.fixture
def small_channel() -> Channel:
    return Channel(range(8), SMALL_CHANNEL, range(8))


def brute_max_code(ch: Channel) -> int:
    """Largest pairwise-disjoint family of fan-outs by subset enumeration."""
    best = 1
    xs = list(ch.inputs)
    for k in range(2, len(xs) + 1):
        found = False
        for combo in itertools.combinations(xs, k):
            fans = [ch.fanout(x) for x in combo]
            if sum(len(f) for f in fans) == len(frozenset().union(*fans)):
                found = True
                break
        if not found:
            break
        best = k
    return best


# ---------------------------------------------------------------- acceptance summary

_CRITERIA: dict[str, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or report.outcome != "passed":
        _CRITERIA[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        num, label = name[len("test_criterion_"):].split("_", 1)
        status = "PASS" if _CRITERIA[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {int(num):2d} {status}  {label.replace('_', ' ')}")
