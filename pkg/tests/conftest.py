import pytest

from brailletext.translate import default_table


@pytest.fixture(scope="session")
def table():
    return default_table()


@pytest.fixture(scope="session")
def alphabet(table):
    """Graphemes whose code is not shared with another grapheme."""
    shared = {c for c in table.entries if sum(1 for g in table.graphemes() if table.code_for(g) == c) > 1}
    return [g for g in table.graphemes() if table.code_for(g) not in shared]


def pangram(alphabet, lines=5, cols=8, start=0):
    out = []
    for i in range(lines):
        out.append("".join(alphabet[(start + i * cols + j) % len(alphabet)] for j in range(cols)))
    return "\n".join(out)


# acceptance results, filled in by tests/test_acceptance.py
CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, title, seconds = CRITERIA[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n:2d}  {title}  ({seconds:.2f} s)")
