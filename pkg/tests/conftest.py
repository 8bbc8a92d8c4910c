import os

import pytest

from bottgit import invariants as inv

ACCEPTANCE_LINES = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_LINES] = {}


@pytest.fixture(scope="session", autouse=True)
def basis_cache(tmp_path_factory):
    """Disk cache for invariant bases: $BOTTGIT_CACHE_DIR if set, else a per-session temp dir."""
    path = os.environ.get(inv.CACHE_ENV) or tmp_path_factory.mktemp("bases")
    inv.set_cache_dir(path)
    yield path
    inv.set_cache_dir(None)


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for a numbered criterion, then assert it."""
    lines = request.config.stash[ACCEPTANCE_LINES]

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_LINES, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
