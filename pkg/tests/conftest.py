from __future__ import annotations

import os

import pytest
from hypothesis import settings

settings.register_profile("qtrace", max_examples=40, deadline=None)
settings.load_profile("qtrace")


@pytest.fixture(scope="session", autouse=True)
def _cache_dir(tmp_path_factory):
    """Keep stored Weingarten matrices out of the working tree."""
    old = os.environ.get("QTRACE_CACHE")
    os.environ["QTRACE_CACHE"] = str(tmp_path_factory.mktemp("wg-cache"))
    yield
    if old is None:
        os.environ.pop("QTRACE_CACHE", None)
    else:
        os.environ["QTRACE_CACHE"] = old


class _CriterionLog:
    def __init__(self) -> None:
        self.lines: dict[int, str] = {}

    def record(self, number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        self.lines[number] = line
        print(line)


_LOG = _CriterionLog()


@pytest.fixture
def criterion():
    """Context manager that records one pass/fail line for an acceptance criterion."""
    import contextlib
    import time

    @contextlib.contextmanager
    def run(number: int, title: str):
        start = time.perf_counter()
        notes: list[str] = []
        try:
            yield notes
        except BaseException as e:
            _LOG.record(number, title, False, f"{type(e).__name__}: {e}"[:300])
            raise
        notes.append(f"{time.perf_counter() - start:.1f}s")
        _LOG.record(number, title, True, ", ".join(notes))

    return run


def pytest_terminal_summary(terminalreporter):
    if _LOG.lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_LOG.lines):
            terminalreporter.write_line(_LOG.lines[k])
