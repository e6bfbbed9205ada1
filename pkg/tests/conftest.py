import pytest
from hypothesis import settings

# Field tables and geometries are built lazily on first use, so the first
# example of a property can be slow; deadlines would make that flaky.
settings.register_profile("pircodes", deadline=None)
settings.load_profile("pircodes")

# criterion number -> list of (ok, detail) recorded by the acceptance tests
_ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


@pytest.fixture
def criterion():
    def record(number: int, ok: bool, detail: str):
        _ACCEPTANCE.setdefault(number, []).append((ok, detail))

    return record


def acceptance_lines(results) -> list[str]:
    lines = []
    for number in sorted(results):
        rows = results[number]
        bad = [d for ok, d in rows if not ok]
        if bad:
            lines.append(f"criterion {number}: FAIL ({len(rows) - len(bad)}/{len(rows)} checks pass; {'; '.join(bad)})")
        else:
            lines.append(f"criterion {number}: PASS ({rows[-1][1]})")
    return lines


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_lines(_ACCEPTANCE):
        terminalreporter.write_line(line)
