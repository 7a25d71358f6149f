import logging

import pytest

import rigidcol
from rigidcol.model import build_profile
from rigidcol.solver import solve_system
from rigidcol.types import ModelParams

HEADLINE_C = 2.468155


@pytest.fixture(scope="session")
def headline_params():
    return ModelParams(c=HEADLINE_C, x_max=60)


@pytest.fixture(scope="session")
def headline_profile(headline_params):
    return build_profile(headline_params)


@pytest.fixture(scope="session")
def headline_solution(headline_params, headline_profile):
    return solve_system(headline_params, profile=headline_profile)


@pytest.fixture(scope="session")
def headline_report(headline_params, headline_profile, headline_solution):
    return rigidcol.bound_per_vertex(headline_params, headline_solution, headline_profile)


@pytest.fixture
def clean_logger():
    """Restore the rigidcol logger after a test that turns debug output on."""
    logger = logging.getLogger("rigidcol")
    handlers, level = list(logger.handlers), logger.level
    yield logger
    logger.handlers[:] = handlers
    logger.setLevel(level)
