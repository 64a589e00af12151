"""Shared fixtures and the acceptance summary printed at the end of a run."""

from __future__ import annotations

import pytest

_RESULTS: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion tracked in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _RESULTS.setdefault(number, {"title": title, "ok": True, "ran": False, "notes": []})
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        entry["ran"] = True
        if not rep.passed:
            entry["ok"] = False
    entry["notes"] = getattr(item, "_acceptance_notes", entry["notes"])


@pytest.fixture
def report(request):
    """Attach a short measurement to the acceptance summary line of this test."""
    notes = []
    request.node._acceptance_notes = notes

    def add(text: str) -> None:
        notes.append(str(text))

    return add


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        entry = _RESULTS[number]
        if not entry["ran"]:
            status = "SKIP"
        else:
            status = "PASS" if entry["ok"] else "FAIL"
        line = f"criterion {number:2d}: {status}  {entry['title']}"
        if entry["notes"]:
            line += "  [" + "; ".join(entry["notes"]) + "]"
        tr.write_line(line)
