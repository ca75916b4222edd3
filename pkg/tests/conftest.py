import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from splinehom import load_corpus, random_triangulation  # noqa: E402


@lru_cache(maxsize=None)
def model(name, r=None, s=None):
    spec = load_corpus(name)
    if r is not None or s is not None:
        spec = spec.with_smoothness(r, s)
    return spec.build()


@lru_cache(maxsize=None)
def random_model(seed, ntets):
    return random_triangulation(seed, ntets).build()


@pytest.fixture
def get_model():
    return model


# ------------------------------------------------ acceptance bookkeeping

_CRITERIA: dict[int, list[tuple[str, str]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        state = "xfail" if hasattr(rep, "wasxfail") else rep.outcome
        _CRITERIA.setdefault(mark.args[0], []).append((item.name, state))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        checks = _CRITERIA[n]
        bad = [name for name, state in checks if state != "passed"]
        verdict = "PASS" if not bad else "FAIL"
        line = f"criterion {n}: {verdict} ({len(checks) - len(bad)}/{len(checks)} checks)"
        if bad:
            line += " failing: " + ", ".join(bad)
        tr.write_line(line)
