import os
import sys
import time

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def pytest_sessionstart(session):
    import acceptance_report
    acceptance_report.SESSION["start"] = time.perf_counter()


def pytest_collection_modifyitems(session, config, items):
    import acceptance_report
    modules = {item.path.name for item in items}
    acceptance_report.SESSION["full"] = len(modules - {"test_acceptance.py"}) > 0
    # the runtime criterion measures everything else, so it runs last
    last = [i for i in items if i.name == "test_criterion_9_suite_runtime"]
    items[:] = [i for i in items if i not in last] + last


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
