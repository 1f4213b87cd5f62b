import helpers


def pytest_terminal_summary(terminalreporter):
    if helpers.ACCEPTANCE_LINES:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance checks:")
        for line in helpers.ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
    if helpers.FINDINGS:
        terminalreporter.write_line("")
        terminalreporter.write_line("findings (reported, not asserted):")
        for line in helpers.FINDINGS:
            terminalreporter.write_line(f"  {line}")
