from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

# criterion number -> (verdict, summary, seconds); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        verdict, summary, seconds = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {verdict}  {summary}  [{seconds:.1f}s]")
