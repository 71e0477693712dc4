import pytest

# criterion number -> (status, title, detail); filled in by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, title, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}  {status:<4}  {title}  [{detail}]")


@pytest.fixture
def acceptance():
    return ACCEPTANCE
