import pytest

from uavcov.core import load_config


@pytest.fixture(scope="session")
def table1():
    """The default parameter profile, in SI."""
    return load_config("paper-table-1")


def with_(params, **sections):
    return params.replace(**sections)
