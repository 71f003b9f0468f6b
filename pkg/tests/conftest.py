from __future__ import annotations

import os
import time
from contextlib import contextmanager

import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


def pytest_collection_modifyitems(config, items):
    if os.environ.get("SIDONLAB_EXTENDED"):
        return
    skip = pytest.mark.skip(reason="extended run; set SIDONLAB_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def criterion(request):
    """Context manager recording one PASS/FAIL line per acceptance criterion."""
    lines = request.config.stash[_LINES]

    @contextmanager
    def run(label: str):
        t0 = time.monotonic()
        try:
            yield
        except BaseException as exc:
            lines.append(f"FAIL  {label}  ({time.monotonic() - t0:.1f}s): {exc!s:.200}")
            raise
        lines.append(f"PASS  {label}  ({time.monotonic() - t0:.1f}s)")

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash[_LINES]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
