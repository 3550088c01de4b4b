from hypothesis import settings

settings.register_profile("repetend", derandomize=True, max_examples=100, deadline=None, print_blob=True)
settings.load_profile("repetend")


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    lines = test_acceptance.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
