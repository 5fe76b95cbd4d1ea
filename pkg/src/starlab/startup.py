"""The main module for Starlab's startup.

Every CLI invocation executes this before any experiment runs.

:Module: starlab.startup
"""
from starlab.utils.logging import LOGGER  # noqa pylint: disable=W0611
from starlab.utils.configuration import STARLAB_CONFIGURATION
from starlab.experiments.loader import STARLAB_EXPERIMENTS


def base_start_up() -> None:
    """Loads the base configuration, which also sets up the logger levels."""
    STARLAB_CONFIGURATION.config  # noqa pylint: disable=pointless-statement


def experiments_start_up() -> None:
    """The base start up, then the discovery and validation of the enabled experiment plugins."""
    base_start_up()
    STARLAB_EXPERIMENTS.get_experiments()  # noqa pylint: disable=pointless-statement
