import pytest
from hypothesis import settings

from cyclopoly.model_sets import ModelSetDescriptor, generate_patch

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def gauss_patch():
    """Gaussian integers of modulus at most 3."""
    return generate_patch(ModelSetDescriptor.lattice(4), 3)


@pytest.fixture(scope="session")
def gauss_patch_small():
    return generate_patch(ModelSetDescriptor.lattice(4), 2)


@pytest.fixture(scope="session")
def octagonal_patch():
    return generate_patch(ModelSetDescriptor.default(8), 12)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k])
