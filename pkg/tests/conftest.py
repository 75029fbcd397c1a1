import pytest

from liouville_disk import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # JIT compilation happens once here so timed acceptance criteria measure
    # the algorithms, not the compiler
    _kernels.warmup()
