"""Tests for Starlab's utility features

This is where tests go for Starlab's utility components, like loggers, the configuration manager and the parallel blocks to name a few.

:Module: starlab.tests.test_utils
"""
# pylint: disable=unused-argument
import logging
import threading
from typing import Any, Dict

import numpy as np
import pytest
import yaml
from marshmallow import ValidationError

import tests
from starlab.utils.configuration import StarlabConfigurationLoader


def test_load_base_configuration(test_configuration: Dict[str, Any]) -> None:
    """This tests that the configuration loader is working properly."""
    assert test_configuration["STARLAB"] == {
        "LogLevel": "DEBUG",
        "ThirdPartyLoggerLevels": {"pybnb": "CRITICAL", "pybnb.solver": "CRITICAL"},
        "Threads": 1,
    }
    assert test_configuration["SOMEOTHER"] == {"TestFile": "has been loaded properly"}
    assert test_configuration["SmallballExperiment"]["Defaults"] == {"Restarts": 4}


def test_settings_fill_in_the_budgets(test_configuration: Dict[str, Any]) -> None:
    """The settings are the STARLAB section in snake_case with every budget defaulted."""
    from starlab.utils.configuration import STARLAB_CONFIGURATION

    settings = STARLAB_CONFIGURATION.settings
    assert settings["log_level"] == "DEBUG"
    assert settings["grid_budget_bits"] == 26
    assert settings["star_discrepancy_cell_budget"] == 2**25
    assert settings["pair_budget"] == 2**26
    assert settings["exhaustive_max_rectangles"] == 24
    assert settings["debug_grid_checks"] is False


def test_settings_override(test_configuration: Dict[str, Any]) -> None:
    """Overrides apply to known settings and reject unknown ones."""
    from starlab.utils.configuration import STARLAB_CONFIGURATION, BadConfigurationError

    STARLAB_CONFIGURATION.override(threads=4)
    assert STARLAB_CONFIGURATION.settings["threads"] == 4

    with pytest.raises(BadConfigurationError):
        STARLAB_CONFIGURATION.override(warp_factor=9)


def test_configuration_exceptions() -> None:
    """This tests that the exceptions are properly raised."""
    from starlab.utils.configuration import BadConfigurationError

    config_loader = StarlabConfigurationLoader()

    # First test is to try it without a proper directory path:
    config_loader._configuration_path = "LOLNO"

    with pytest.raises(Exception) as exc:
        config_loader.load_base_configuration()

    assert exc.typename == "FileNotFoundError"

    # Next, let's load a configuration that's missing the required sections:
    config_loader._configuration_path = f"{tests.__path__[0]}/bad_configuration_files"

    with pytest.raises(BadConfigurationError) as exc:
        config_loader.load_base_configuration()

    assert exc.value.args[0] == {"STARLAB": ["Missing data for required field."]}


def test_starlab_configuration_schema() -> None:
    """This mostly just tests that the budgets are range checked."""
    from starlab.utils.config_schema import StarlabSchema

    template = """
        LogLevel: WARNING
        GridBudgetBits: 20
    """
    loaded = StarlabSchema().load(yaml.safe_load(template))
    assert loaded["log_level"] == "WARNING"
    assert loaded["grid_budget_bits"] == 20

    template = """
        LogLevel: LOUD
        GridBudgetBits: 99
        Threads: 0
    """
    with pytest.raises(ValidationError) as exc:
        StarlabSchema().load(yaml.safe_load(template))
    assert exc.value.messages_dict["LogLevel"][0].startswith("Must be one of: ")
    assert "GridBudgetBits" in exc.value.messages_dict
    assert "Threads" in exc.value.messages_dict


def test_base_logging() -> None:
    """This tests that the base logger is configured and has the correct format."""
    from starlab.utils.logging import LOGGER

    assert len(LOGGER.handlers) == 1
    assert LOGGER.name == "starlab"
    assert not LOGGER.propagate
    assert LOGGER.handlers[0].formatter._fmt == "%(asctime)s - %(levelname)s - %(message)s - %(pathname)s - %(funcName)s:%(lineno)i"


def test_configuration_logging_levels(test_configuration: Dict[str, Any]) -> None:
    """This tests that the logger is configured properly after the configuration loads."""
    # Test that the 3rd party logger levels are configured right:
    assert logging.getLogger("pybnb").level == 50  # 50 is CRITICAL
    assert logging.getLogger("pybnb.solver").level == 50

    # And that ours is correct:
    assert logging.getLogger("starlab").level == 10  # 10 is DEBUG


def test_plugin_loader_rejects_bad_plugins() -> None:
    """The plugin finder rejects a plugin attribute that is not a list, and entries that are not of the right class."""
    from starlab.utils.plugin_loader import InvalidPluginClassException, InvalidPluginListException, find_plugins
    import starlab.experiments.plugins

    plugins = find_plugins(starlab.experiments.plugins.__path__, starlab.experiments.plugins.__name__ + ".", "EXPERIMENT_PLUGINS", object)
    assert len(plugins) == 9

    # `__doc__` exists on every module but isn't a list:
    with pytest.raises(InvalidPluginListException):
        find_plugins(starlab.experiments.plugins.__path__, starlab.experiments.plugins.__name__ + ".", "__doc__", object)

    with pytest.raises(InvalidPluginClassException):
        find_plugins(starlab.experiments.plugins.__path__, starlab.experiments.plugins.__name__ + ".", "EXPERIMENT_PLUGINS", Exception)


def test_seeded_blocks_ignore_the_worker_count(test_configuration: Dict[str, Any]) -> None:
    """The same seed gives the same blocks in the same order with one worker or several."""
    from starlab.utils.parallel import run_seeded_blocks, worker_count

    def block(index: int, generator: np.random.Generator) -> float:
        return index + float(generator.standard_normal(16).sum())

    serial = run_seeded_blocks(block, 8, seed=99, threads=1)
    threaded = run_seeded_blocks(block, 8, seed=99, threads=4)
    assert serial == threaded
    assert run_seeded_blocks(block, 8, seed=100, threads=1) != serial

    assert worker_count() == 1
    assert worker_count(3) == 3


def test_seeded_blocks_use_the_pool(test_configuration: Dict[str, Any]) -> None:
    """With several workers the blocks really run on the pool."""
    from starlab.utils.parallel import run_seeded_blocks

    names = run_seeded_blocks(lambda index, generator: threading.current_thread().name, 4, seed=1, threads=2)
    assert len(names) == 4
    assert all(name != threading.main_thread().name for name in names)
