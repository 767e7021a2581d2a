import pytest
from hypothesis import settings

settings.register_profile("ci", deadline=None, max_examples=60)
settings.load_profile("ci")


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # jit-compile every hot kernel once so timed sections stay honest
    from frachardy.kernels import warmup

    warmup()
