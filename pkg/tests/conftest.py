import pytest

# Populated by the acceptance tests; printed after the run so the verdict
# lines survive pytest's output capture.
_ACCEPTANCE = {}


@pytest.fixture(scope="session")
def acceptance():
    def record(number: int, name: str, passed: bool, detail: str):
        _ACCEPTANCE[number] = (name, bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance summary")
    for number in sorted(_ACCEPTANCE):
        name, passed, detail = _ACCEPTANCE[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{number:>2}. {name:<36} {verdict}  {detail}")
