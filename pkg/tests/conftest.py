import pytest

_VERDICTS = []


@pytest.fixture
def verdict():
    """Record one acceptance line; ``report(ok, label, detail)`` returns ``ok``."""

    def report(ok: bool, label: str, detail: str = "") -> bool:
        _VERDICTS.append(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else ""))
        print(_VERDICTS[-1])
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
