import warnings

import pytest
from hypothesis import settings

settings.register_profile("levygeo", max_examples=40, deadline=None)
settings.load_profile("levygeo")


@pytest.fixture(autouse=True)
def _quiet_integration_warnings():
    from scipy.integrate import IntegrationWarning

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        yield
