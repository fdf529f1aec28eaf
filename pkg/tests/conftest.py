import pytest

from fpcavity import build_bottom_mirror
from fpcavity.tmm import CavityTemplate


@pytest.fixture(scope="session")
def bottom_bonded():
    return build_bottom_mirror(0.0)


@pytest.fixture(scope="session")
def bottom_gap22():
    return build_bottom_mirror(22.0)


@pytest.fixture(scope="session")
def template_bonded(bottom_bonded):
    return CavityTemplate.with_dbr_top(bottom_bonded)


@pytest.fixture(scope="session")
def template_gap22(bottom_gap22):
    return CavityTemplate.with_dbr_top(bottom_gap22)
