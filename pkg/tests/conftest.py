from contextlib import contextmanager

import pytest

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def criterion(request):
    """Context manager recording one acceptance verdict; a raised exception marks it FAIL."""
    results = request.config.stash[_RESULTS]

    @contextmanager
    def _criterion(number, part):
        notes = []
        ok = False
        try:
            yield notes
            ok = True
        finally:
            prev_ok, prev_notes = results.get(number, (True, []))
            tag = f"{part}: {'ok' if ok else 'FAILED'}" + (f" ({', '.join(notes)})" if notes else "")
            results[number] = (prev_ok and ok, prev_notes + [tag])

    return _criterion


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[_RESULTS]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        ok, notes = results[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} | " + " | ".join(notes))
