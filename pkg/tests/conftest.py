import functools

import pytest
from hypothesis import HealthCheck, settings

from cayley_auto.pipeline import injectivized_reference_spec
from cayley_auto.semidirect import build_structure, sanov_spec, unipotent_spec

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def structure_for(spec):
    return build_structure(spec)


REFERENCE_SPECS = {
    "unipotent": unipotent_spec(),
    "sanov": sanov_spec(),
    "injectivized": injectivized_reference_spec(),
}


@pytest.fixture(scope="session")
def unipotent():
    return unipotent_spec()


@pytest.fixture(scope="session")
def sanov():
    return sanov_spec()


@pytest.fixture(scope="session")
def uni_structure(unipotent):
    return structure_for(unipotent)


@pytest.fixture(scope="session")
def sanov_structure(sanov):
    return structure_for(sanov)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
