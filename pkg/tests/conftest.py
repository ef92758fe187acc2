import functools
import sys

import pytest

from qtilt.cli import load_algebra


@functools.lru_cache(maxsize=None)
def fixture_algebra(name: str):
    return load_algebra(name)


@pytest.fixture(scope="session")
def ex22():
    return fixture_algebra("ex2.2")


@pytest.fixture(scope="session")
def ex49():
    return fixture_algebra("ex4.9")


@pytest.fixture(scope="session")
def ex69():
    return fixture_algebra("ex6.9")


@pytest.fixture(scope="session")
def ist():
    return fixture_algebra("ist")


@pytest.fixture(scope="session")
def merged():
    return fixture_algebra("merge-demo")


@functools.lru_cache(maxsize=None)
def tilt(name: str, e: tuple):
    from qtilt.tilting import strong_tilting
    return strong_tilting(fixture_algebra(name), e)


@functools.lru_cache(maxsize=None)
def endo(name: str, e: tuple):
    from qtilt.tilting import endo_presentation
    return endo_presentation(tilt(name, e))


@functools.lru_cache(maxsize=None)
def verified(name: str, e: tuple):
    from qtilt.tilting import verify_tilting
    return verify_tilting(tilt(name, e))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
