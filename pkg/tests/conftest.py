import sys

from hypothesis import settings

# fixed example sequence so that every run checks the same cases
settings.register_profile("repo", derandomize=True)
settings.load_profile("repo")


def pytest_terminal_summary(terminalreporter):
    verdicts = getattr(sys.modules.get("test_acceptance"), "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for line in sorted(verdicts):
            terminalreporter.write_line(line)
