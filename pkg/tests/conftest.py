import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# Acceptance tests append one line per criterion here; they are echoed in the
# terminal summary so they survive output capturing.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
