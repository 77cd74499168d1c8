import time


def pytest_configure(config):
    config._suite_started = time.perf_counter()


def pytest_collection_modifyitems(config, items):
    # The acceptance module asserts on whole-suite runtime, so it runs last.
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")
