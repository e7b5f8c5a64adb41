import pytest

from mmmvol import ModelParams


@pytest.fixture(scope="session")
def params():
    """S&P 500 calibration of 27 January 2009."""
    return ModelParams(S=1362.18, r=0.0011154, alpha=43.307, eta=0.089896)
