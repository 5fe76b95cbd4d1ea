"""Tests the experiment plugin base classes and loaders.

:Module: starlab.tests.experiments.test_loader
"""
# pylint: disable=unused-argument
from typing import Any, Dict
from unittest.mock import MagicMock

import pytest

from starlab.experiments.loader import StarlabExperimentLoader

ALL_EXPERIMENTS = {
    "BeckExperiment",
    "ChainExperiment",
    "DiscExperiment",
    "GenExperiment",
    "HaarExperiment",
    "McExperiment",
    "RieszExperiment",
    "SmallballExperiment",
    "SuiteExperiment",
}


def verify_logger(mocked: MagicMock, log_entry: str) -> bool:
    """Utility function to verify that a given log entry appeared in the mocked logger calls."""
    found = False
    for log_call in mocked.method_calls:
        if str(log_call.args[0]) == log_entry:
            found = True
            break

    return found


def test_good_plugin_loader(mock_loader_logger: MagicMock, test_configuration: Dict[str, Any], test_experiment_loader: StarlabExperimentLoader) -> None:
    """This tests that every shipped experiment plugin loads with the test configuration."""
    from starlab.experiments.experiment_schematics import StarlabExperiment

    experiments = test_experiment_loader.get_experiments()

    assert set(experiments) == ALL_EXPERIMENTS
    assert all(isinstance(experiment, StarlabExperiment) for experiment in experiments.values())
    assert experiments["GenExperiment"].experiment_name == "GenExperiment"
    assert verify_logger(mock_loader_logger, f"[🚀] Completed loading {len(ALL_EXPERIMENTS)} experiments")

    # Loaded once:
    assert test_experiment_loader.get_experiments() is experiments


def test_plugin_loader_with_disabled_plugins(
    mock_loader_logger: MagicMock, test_configuration: Dict[str, Any], test_experiment_loader: StarlabExperimentLoader
) -> None:
    """This tests that the loader skips disabled experiments and experiments without a configuration section."""
    test_configuration["GenExperiment"]["Enabled"] = False
    test_configuration.pop("SuiteExperiment")

    experiments = test_experiment_loader.get_experiments()
    assert set(experiments) == ALL_EXPERIMENTS - {"GenExperiment", "SuiteExperiment"}
    assert verify_logger(mock_loader_logger, "[⏭️] Experiment: GenExperiment is DISABLED in its configuration. Skipping...")
    assert verify_logger(mock_loader_logger, "[⏭️] Experiment: SuiteExperiment has no discovered configuration. Skipping... ")

    # Remove everything:
    mock_loader_logger.reset_mock()
    for name in ALL_EXPERIMENTS - {"SuiteExperiment"}:
        test_configuration.pop(name)
    test_experiment_loader.reset()
    assert not test_experiment_loader.get_experiments()
    assert verify_logger(mock_loader_logger, "[🤷] There were no properly enabled experiments to load")


def test_plugin_loader_invalid_configuration(
    mock_loader_logger: MagicMock, test_configuration: Dict[str, Any], test_experiment_loader: StarlabExperimentLoader
) -> None:
    """This tests that the plugin loader's exception handling logic is correct when handling an experiment with an invalid configuration."""
    from starlab.utils.configuration import BadConfigurationError

    test_configuration["DiscExperiment"].pop("Enabled")  # Required field -- this will result in a Marshmallow ValidationError
    with pytest.raises(BadConfigurationError) as exc:
        test_experiment_loader.get_experiments()

    assert str(exc.value) == "[💥] Experiment: DiscExperiment has an invalid configuration. {'Enabled': ['Missing data for required field.']}"
    assert verify_logger(mock_loader_logger, "[💥] Major exception encountered configuring the Starlab experiment plugins. See the stacktrace for details.")


def test_base_experiment_execute_is_abstract() -> None:
    """The base class names itself and has no execute."""
    from starlab.experiments.experiment_schematics import StarlabExperiment

    experiment = StarlabExperiment()
    assert experiment.experiment_name == "StarlabExperiment"
    experiment.load_payload({"Seed": 3})
    assert experiment.payload["seed"] == 3
    with pytest.raises(NotImplementedError):
        experiment.execute()
