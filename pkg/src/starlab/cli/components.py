"""Components for the CLI to make it function properly.

These are pulled out here to make it easy to test and avoid circular dependencies.

:Module: starlab.cli.components
"""
import sys
from typing import Any, List

import click
from click import ClickException

import starlab.experiments.plugins
from starlab.experiments.cli_utils import CriterionFailedError
from starlab.experiments.loader import STARLAB_EXPERIMENTS
from starlab.startup import experiments_start_up
from starlab.utils.logging import LOGGER
from starlab.utils.plugin_loader import find_plugins


LOGO = r"""
         __             __      __
   _____/ /_____ ______/ /___ _/ /_
  / ___/ __/ __ `/ ___/ / __ `/ __ \
 (__  ) /_/ /_/ / /  / / /_/ / /_/ /
/____/\__/\__,_/_/  /_/\__,_/_.___/
"""


class StarlabCliLoader:
    """This will locate the commands of all the experiment plugins."""

    # These are defined here for easy testability -- this is the same path to the experiment plugins:
    _experiment_path: str = starlab.experiments.plugins.__path__
    _experiment_prefix: str = starlab.experiments.plugins.__name__ + "."

    def __init__(self):
        self._commands: List[click.Command] = None  # noqa

    def load_commands(self):
        """Loads the CLICK_COMMANDS of every experiment plugin whose experiment is enabled in the configuration."""
        LOGGER.debug("[🖥️] Loading commands (which are just plugins)...")
        enabled = STARLAB_EXPERIMENTS.get_experiments()

        self._commands = []
        for _, command_list in find_plugins(self._experiment_path, self._experiment_prefix, "CLICK_COMMANDS", click.Command, verify_class=False).items():
            for command in command_list:
                experiment_class = getattr(command, "experiment_class", None)
                if experiment_class is not None and experiment_class.get_experiment_name() not in enabled:
                    LOGGER.debug(f"[⏭️] Command: {command.name} belongs to a disabled experiment. Skipping...")
                    continue
                self._commands.append(command)

        LOGGER.debug(f"[🖥️] Completed loading {len(self._commands)} commands")

    @property
    def commands(self) -> List[click.Command]:
        """Gets the commands and lazy-loads them if not already set."""
        if self._commands is None:
            self.load_commands()

        return self._commands


STARLAB_CLI_LOADER = StarlabCliLoader()


class StarlabClickGroup(click.Group):
    """The Starlab Click Group. This prints the logo, runs the start up and maps failures to the exit codes."""

    def __init__(self, **attrs: Any):
        super().__init__(**attrs)

        # The logo goes to stderr so that stdout holds nothing but results:
        click.echo(LOGO, err=True)

        # Loads the configuration and the enabled experiments (makes sure everything is all good):
        experiments_start_up()

        for command in STARLAB_CLI_LOADER.commands:
            self.add_command(command)

    def main(self, *args: Any, **kwargs: Any) -> Any:  # pylint: disable=arguments-differ
        """Exits with 0 on success, 2 when a criterion or certificate fails, and 1 on usage, validation and budget errors."""
        if not kwargs.pop("standalone_mode", True):
            return super().main(*args, standalone_mode=False, **kwargs)

        try:
            result = super().main(*args, standalone_mode=False, **kwargs)
        except CriterionFailedError as exc:
            exc.show()
            sys.exit(CriterionFailedError.exit_code)
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)
        except ClickException as exc:
            exc.show()
            sys.exit(1)

        sys.exit(result if isinstance(result, int) else 0)
