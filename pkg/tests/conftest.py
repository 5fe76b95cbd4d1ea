"""PyTest fixtures for the starlab package.

This defines the PyTest fixtures that can be used by all starlab tests.

:Module: starlab.tests.conftest
"""
# pylint: disable=redefined-outer-name,unused-argument
from typing import Any, Dict, Generator
from unittest import mock

import numpy as np
import pytest

import tests
from starlab.cli.components import StarlabCliLoader
from starlab.experiments.loader import StarlabExperimentLoader


@pytest.fixture
def test_configuration() -> Generator[Dict[str, Any], None, None]:
    """Fixture with a test configuration loader for use in unit tests."""
    from starlab.utils.configuration import STARLAB_CONFIGURATION

    old_value = STARLAB_CONFIGURATION._configuration_path
    STARLAB_CONFIGURATION._configuration_path = f"{tests.__path__[0]}/test_configuration_files"  # noqa
    STARLAB_CONFIGURATION._app_config = None
    STARLAB_CONFIGURATION._settings = None

    yield STARLAB_CONFIGURATION.config

    STARLAB_CONFIGURATION._app_config = None
    STARLAB_CONFIGURATION._settings = None
    STARLAB_CONFIGURATION._configuration_path = old_value


@pytest.fixture
def test_experiment_loader(test_configuration: Dict[str, Any]) -> StarlabExperimentLoader:
    """A fresh StarlabExperimentLoader that reads the test configuration."""
    return StarlabExperimentLoader()


@pytest.fixture
def test_cli_loader(test_experiment_loader: StarlabExperimentLoader) -> Generator[StarlabCliLoader, None, None]:
    """Mocks out the CLI loader -- this also sets up the test experiment loader"""
    with mock.patch("starlab.cli.components.STARLAB_EXPERIMENTS", test_experiment_loader):
        with mock.patch("starlab.startup.STARLAB_EXPERIMENTS", test_experiment_loader):
            new_cli_loader = StarlabCliLoader()

            # Need to mock out the CLI:
            with mock.patch("starlab.cli.components.STARLAB_CLI_LOADER", new_cli_loader):
                yield new_cli_loader


@pytest.fixture
def rng() -> np.random.Generator:
    """A seeded generator so that the randomized tests are reproducible."""
    return np.random.default_rng(20240601)
