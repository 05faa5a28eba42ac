import pytest

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record():
    """record(n, ok, detail) stores the one-line verdict for criterion n."""

    def _record(n: int, ok: bool, detail: str) -> bool:
        _ACCEPTANCE[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(_ACCEPTANCE[n])
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[n])
