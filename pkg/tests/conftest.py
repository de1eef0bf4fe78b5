import test_acceptance_results as results


def pytest_terminal_summary(terminalreporter):
    if results.LINES:
        terminalreporter.section("acceptance criteria")
        for line in results.report():
            terminalreporter.write_line(line)
