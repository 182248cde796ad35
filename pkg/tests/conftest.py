import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    # One visible verdict line per acceptance criterion, including fixture
    # failures that keep the test body from ever running.
    match = _CRITERION.search(report.nodeid)
    if match is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        verdict = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {match.group(1)}: {verdict}", flush=True)
