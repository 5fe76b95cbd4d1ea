"""Starlab's experiment loader.

This does all the logic required to discover, validate and instantiate the experiment plugins.

:Module: starlab.experiments.loader
"""
from typing import Dict

import starlab.experiments.plugins
from starlab.utils.logging import LOGGER
from starlab.utils.configuration import BadConfigurationError, STARLAB_CONFIGURATION
from starlab.utils.plugin_loader import find_plugins
from starlab.experiments.experiment_schematics import StarlabExperiment, StarlabExperimentInstance


class StarlabExperimentLoader:
    """This will load all the Starlab experiment plugins."""

    # These are defined here for easy testability:
    _experiment_path: str = starlab.experiments.plugins.__path__
    _experiment_prefix: str = starlab.experiments.plugins.__name__ + "."

    def __init__(self):
        self._experiments: Dict[str, StarlabExperimentInstance] = None  # noqa

    def reset(self) -> None:
        """This resets the loader. This is only used as a convenience for unit testing."""
        self._experiments = None

    def load_all_plugins(self):
        """Loads every experiment plugin that has a valid, enabled configuration section."""
        self._experiments = {}

        LOGGER.debug("[📦] Loading experiment plugins...")
        try:
            for _, plugin_classes in find_plugins(self._experiment_path, self._experiment_prefix, "EXPERIMENT_PLUGINS", StarlabExperiment).items():
                for plugin in plugin_classes:
                    name = plugin.get_experiment_name()
                    LOGGER.debug(f"[🔧] Configuring experiment: {name}")

                    experiment_config = STARLAB_CONFIGURATION.config.get(name)
                    if not experiment_config:
                        LOGGER.debug(f"[⏭️] Experiment: {name} has no discovered configuration. Skipping... ")
                        continue

                    errors = plugin.configuration_template_class().validate(experiment_config)
                    if errors:
                        raise BadConfigurationError(f"[💥] Experiment: {name} has an invalid configuration. {str(errors)}")

                    if not experiment_config["Enabled"]:
                        LOGGER.debug(f"[⏭️] Experiment: {name} is DISABLED in its configuration. Skipping...")
                        continue

                    self._experiments[name] = plugin()
                    LOGGER.debug(f"[👍] Experiment: {name} is properly configured and ENABLED.")

        except Exception as exc:
            LOGGER.error("[💥] Major exception encountered configuring the Starlab experiment plugins. See the stacktrace for details.")
            LOGGER.exception(exc)
            raise

        if not self._experiments:
            LOGGER.debug("[🤷] There were no properly enabled experiments to load")
        else:
            LOGGER.debug(f"[🚀] Completed loading {len(self._experiments)} experiments")

    def get_experiments(self) -> Dict[str, StarlabExperimentInstance]:
        """Returns the enabled experiment instances, loading them on first use."""
        if self._experiments is None:
            self.load_all_plugins()

        return self._experiments


STARLAB_EXPERIMENTS = StarlabExperimentLoader()
