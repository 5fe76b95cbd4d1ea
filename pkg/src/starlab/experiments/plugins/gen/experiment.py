"""Starlab's point-set generator

Emits a point set in the point-file format (one point per line, coordinates to 17 significant digits), so the output reads back
through `--set file` unchanged. With `--json` the points come wrapped in a JSON document with the run's provenance.

:Module: starlab.experiments.plugins.gen.experiment
"""
import click
from click import Context

from starlab.experiments.base_payload_schemas import PointSetPayloadTemplate
from starlab.experiments.cli_utils import StarlabExperimentCommand, point_set_options, run_experiment
from starlab.experiments.experiment_schematics import ExperimentOutcome, StarlabExperiment
from starlab.experiments.resolvers import resolve_point_set
from starlab.point_sets import format_points
from starlab.utils.logging import LOGGER


class GenExperiment(StarlabExperiment):
    """Generates a point set."""

    payload_template_class = PointSetPayloadTemplate
    csv_columns = ["label", "n_points", "dimension"]

    def execute(self) -> ExperimentOutcome:
        """Resolves the point set and renders its file text."""
        pointset = resolve_point_set(self.payload)
        LOGGER.info(f"[✨] Generated {pointset.label}: {pointset.n_points} points in dimension {pointset.dimension}")
        record = {"label": pointset.label, "n_points": pointset.n_points, "dimension": pointset.dimension, "points": pointset.points}
        return ExperimentOutcome(records=[record], text=format_points(pointset))


@click.command(cls=StarlabExperimentCommand, experiment_class=GenExperiment)
@point_set_options
@click.pass_context
def gen(ctx: Context, **kwargs) -> None:  # noqa # pylint: disable=unused-argument
    """Emit a point set (van der Corput, shifted, random or from a file) as a point file."""
    run_experiment(ctx)
