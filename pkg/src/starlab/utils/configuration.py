"""Starlab's configuration loader and manager

This loads all YAML files in the configuration directory into one dictionary that is used throughout the application.
The STARLAB section is normalized through the Marshmallow schema so that every budget has a value.

:Module: starlab.utils.configuration
"""
import logging
import os
from typing import Any, Dict

import yaml

from starlab.utils.config_schema import BaseConfigurationSchema, StarlabSchema
from starlab.utils.logging import LOGGER
import starlab

CONFIGURATION_FILE_DIR_NAME = "configuration_files"
PRE_LOGGER_LEVEL = os.environ.get("PRE_LOGGER_LEVEL", "WARNING")


class BadConfigurationError(Exception):
    """Exception for bad Starlab configuration"""


class StarlabConfigurationLoader:
    """Class that loads Starlab configuration files."""

    # Defined here for testability purposes:
    _configuration_path = f"{starlab.__path__[0]}/{CONFIGURATION_FILE_DIR_NAME}"

    def __init__(self):
        self._app_config: Dict[str, Any] = None  # noqa
        self._settings: Dict[str, Any] = None  # noqa

    def load_base_configuration(self) -> None:
        """This will load the base configuration for the application."""
        self._app_config = {}

        # The pre-logger exists before we have loaded a configuration:
        LOGGER.setLevel(PRE_LOGGER_LEVEL)
        LOGGER.debug(f"[📄] Loading the base configuration from {self._configuration_path}...")

        try:
            for file in sorted(os.listdir(self._configuration_path)):
                if file.endswith(".yaml"):
                    LOGGER.debug(f"[⚙️] Processing configuration file: {file}...")

                    with open(f"{self._configuration_path}/{file}", "r", encoding="utf-8") as stream:
                        loaded = yaml.safe_load(stream)

                    self._app_config.update(loaded or {})

        except Exception as exc:
            LOGGER.error("[💥] Major error encountered loading configuration. Cannot proceed.")
            LOGGER.exception(exc)
            raise

        try:
            errors = BaseConfigurationSchema().validate(self._app_config)
            if errors:
                raise BadConfigurationError(errors)

        except BadConfigurationError as bce:
            LOGGER.error("[💥] The Starlab configuration is invalid. See the stacktrace for more details.")
            LOGGER.exception(bce)
            raise

        self._settings = StarlabSchema().load(self._app_config["STARLAB"])

        LOGGER.setLevel(self._settings["log_level"])
        for logger_name, level in self._settings.get("third_party_logger_levels", {}).items():
            logging.getLogger(logger_name).setLevel(level)

        LOGGER.debug("[🆗️] Base configuration loaded successfully")

    @property
    def config(self) -> Dict[str, Any]:
        """Lazy-loads the raw application configuration (UpperCamelCase keys, as written in the YAML files)."""
        if not self._app_config:
            self.load_base_configuration()

        return self._app_config

    @property
    def settings(self) -> Dict[str, Any]:
        """The validated STARLAB section with defaults filled in (snake_case keys)."""
        if not self._app_config:
            self.load_base_configuration()

        return self._settings

    def override(self, **kwargs: Any) -> None:
        """Overrides individual settings for the rest of the run (used by CLI flags such as `--threads`)."""
        for key, value in kwargs.items():
            if key not in self.settings:
                raise BadConfigurationError(f"[💥] Unknown setting: {key}")
            self._settings[key] = value


STARLAB_CONFIGURATION = StarlabConfigurationLoader()
