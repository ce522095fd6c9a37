import functools

import pytest

from order3 import groupfactory as gf

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(autouse=True, scope="session")
def _isolated_cache(tmp_path_factory):
    mp = pytest.MonkeyPatch()
    mp.setenv(gf.CACHE_ENV, str(tmp_path_factory.mktemp("order3-cache")))
    yield
    mp.undo()


@functools.lru_cache(maxsize=None)
def group(name):
    return gf.construct(name)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {text}")
