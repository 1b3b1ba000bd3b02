import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--reference-counts",
        default=None,
        help="JSON file mapping n to the expected number of geometry classes (used for n = 5)",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    if call.when == "call":
        item.rep_call = outcome.get_result()
