import os
import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("campo", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("campo")

DEFAULT_SEED = 20240611


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=None, help="seed for randomized tests (default: CAMPO_SEED or fixed)")


def _seed(config) -> int:
    s = config.getoption("--seed")
    if s is None:
        s = int(os.environ.get("CAMPO_SEED", DEFAULT_SEED))
    return s


def pytest_configure(config):
    config._campo_seed = _seed(config)


def pytest_report_header(config):
    return f"campo seed: {config._campo_seed}"


def pytest_collection_modifyitems(config, items):
    seed = config._campo_seed
    for item in items:
        fn = getattr(item, "obj", None)
        inner = getattr(getattr(fn, "hypothesis", None), "inner_test", None)
        if inner is not None:
            # same mechanism as @hypothesis.seed
            fn._hypothesis_internal_use_seed = seed


@pytest.fixture
def rng(request):
    return random.Random(request.config._campo_seed)


# acceptance report -----------------------------------------------------------
_ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """``record(number, ok, detail, expected_failure=False)``; echoes one line."""
    def record(number, ok, detail, expected_failure=False):
        status = ("PASS" if ok else "FAIL") if not expected_failure else ("XPASS" if ok else "XFAIL")
        _ACCEPTANCE.setdefault(number, []).append((status, detail))
        print(f"ACCEPTANCE {number:>2} {status:<5} {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        rows = _ACCEPTANCE[number]
        statuses = {s for s, _ in rows}
        overall = next(s for s in ("FAIL", "XPASS", "XFAIL", "PASS") if s in statuses)
        detail = "; ".join(d if len(statuses) == 1 else f"[{s}] {d}" for s, d in rows)
        terminalreporter.write_line(f"criterion {number:>2}: {overall:<5} {detail}")
