"""The main CLI entrypoint for Starlab.

:Module: starlab.cli.entrypoint
"""

import click

from starlab.cli.components import StarlabClickGroup


@click.group(cls=StarlabClickGroup)
def cli() -> None:
    """Starlab is a lab for discrepancy theory and the Small Ball inequality."""
