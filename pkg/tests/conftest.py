import pytest

from contlattice._backend import compiled_kernels, python_kernels

BACKENDS = [pytest.param(python_kernels, id="python")]
if compiled_kernels is not None:
    BACKENDS.append(pytest.param(compiled_kernels, id="compiled"))


@pytest.fixture(params=BACKENDS)
def kernels(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
