"""Starlab's experiment CLI utility functions

Every subcommand is a `StarlabExperimentCommand`. It adds the common flags, merges the `--config` file with the flags given on the
command line (flags win), validates the merged payload with the experiment's schema, and hands the experiment to the command's
callback, which calls `run_experiment` to execute it and persist the records.

:Module: starlab.experiments.cli_utils
"""
import csv
import io
import json
from typing import Any, Dict, List, Optional, Type

import click
import numpy as np
import yaml
from click import Context, Option, ClickException, Command
from click.core import ParameterSource
from marshmallow import ValidationError

import starlab
from starlab.certificates import CertificateViolationError
from starlab.discrepancy import PairBudgetError, StarDiscrepancyBudgetError
from starlab.dyadic import GridBudgetExceededError
from starlab.experiments.experiment_schematics import ExperimentOutcome, StarlabExperiment, StarlabExperimentInstance
from starlab.smallball import SearchBudgetError
from starlab.utils.configuration import STARLAB_CONFIGURATION
from starlab.utils.logging import LOGGER

# Failures of the inputs or of a budget (exit 1), as opposed to failed criteria (exit 2):
USAGE_FAILURES = (ValueError, OverflowError, OSError, GridBudgetExceededError, PairBudgetError, StarDiscrepancyBudgetError, SearchBudgetError)


class BadExperimentError(Exception):
    """This is raised if a command was set up without a StarlabExperiment subclass to run."""


class CriterionFailedError(ClickException):
    """Raised when an asserted criterion or certificate fails; the CLI exits with 2."""

    exit_code = 2


def load_config(ctx: Context, param: Option, value: Optional[io.TextIOWrapper]) -> Dict[str, Any]:  # pylint: disable=W0613  # noqa
    """Click callback that loads the `--config` file. The file is JSON (YAML is read as well, JSON being a subset of it)."""
    if value is None:
        return {}

    try:
        loaded = yaml.safe_load(value.read())
    except yaml.YAMLError as exc:
        raise click.BadParameter(f"[💥] Cannot parse the config file: {exc}") from exc

    if not loaded:
        return {}
    if not isinstance(loaded, dict):
        raise click.BadParameter("[💥] The config file must hold a single object of parameters")
    return loaded


def _json_default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset, tuple)):
        return list(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dumps(record: Any, indent: Optional[int] = None) -> str:
    """Deterministic JSON: sorted keys, numpy scalars and arrays converted."""
    return json.dumps(record, sort_keys=True, default=_json_default, indent=indent)


def format_value(value: Any) -> str:
    """A CSV cell: floats to 17 significant digits, None as an empty cell, lists and dicts as JSON."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if isinstance(value, (list, tuple, dict, np.ndarray)):
        return dumps(value)
    return str(value)


def provenance(experiment: StarlabExperimentInstance, raw_payload: Dict[str, Any]) -> Dict[str, Any]:
    """The header embedded in every output: experiment, code version and the merged configuration."""
    config = {key: value for key, value in raw_payload.items() if key not in ("Out", "Json", "Format", "Threads")}
    return {"experiment": experiment.experiment_name, "version": starlab.__version__, "config": config}


def render_outcome(experiment: StarlabExperimentInstance, outcome: ExperimentOutcome, raw_payload: Dict[str, Any]) -> str:
    """The text of the run's output in the payload's format."""
    header = provenance(experiment, raw_payload)
    payload = experiment.payload

    if payload["json_output"]:
        document = {"provenance": header, "passed": outcome.passed, "records": outcome.records}
        if outcome.text is not None:
            document["text"] = outcome.text
        return dumps(document, indent=2) + "\n"

    if outcome.text is not None:
        return outcome.text

    if payload["output_format"] == "csv":
        stream = io.StringIO()
        stream.write(f"# {dumps(header)}\n")
        columns = experiment.csv_columns or sorted({key for record in outcome.records for key in record})
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for record in outcome.records:
            writer.writerow([format_value(record.get(column)) for column in columns])
        return stream.getvalue()

    lines = [dumps({"provenance": header})]
    lines.extend(dumps(record) for record in outcome.records)
    return "\n".join(lines) + "\n"


def run_experiment(ctx: Context) -> ExperimentOutcome:
    """Executes the experiment loaded by the command, writes its output to `--out` (or stdout), and raises CriterionFailedError (exit 2) if a
    criterion failed. Input and budget errors become ClickExceptions (exit 1)."""
    experiment: StarlabExperimentInstance = ctx.obj
    raw_payload = ctx.meta["starlab.raw_payload"]

    try:
        outcome = experiment.execute()
    except CertificateViolationError as exc:
        raise CriterionFailedError(str(exc)) from exc
    except USAGE_FAILURES as exc:
        LOGGER.debug(f"[💥] {experiment.experiment_name} stopped on {type(exc).__name__}")
        raise ClickException(f"{type(exc).__name__}: {exc}") from exc

    rendered = render_outcome(experiment, outcome, raw_payload)
    if experiment.payload["out"]:
        with open(experiment.payload["out"], "w", encoding="utf-8") as stream:
            stream.write(rendered)
        LOGGER.info(f"[💾] Wrote {len(outcome.records)} record(s) to {experiment.payload['out']}")
    else:
        click.echo(rendered, nl=False)

    if not outcome.passed:
        raise CriterionFailedError(outcome.summary or f"[❌] {experiment.experiment_name} failed one or more criteria")

    return outcome


class StarlabExperimentCommand(Command):
    """
    This is a Click command class for Starlab experiments. It adds the common flags and does the payload merging and validation before the
    callback runs.

    This is used as follows:
    ```
        import click
        from click import Context

        from starlab.experiments.experiment_schematics import StarlabExperiment


        class MyExperiment(StarlabExperiment):
            ...


        @click.command(cls=StarlabExperimentCommand, experiment_class=MyExperiment)
        @click.option("--k", type=int, help="Some experiment parameter")
        @click.pass_context
        def my_experiment(ctx: Context, **kwargs) -> None:
            run_experiment(ctx)
    ```
    The option names must match the snake_case attribute names of the payload schema's fields.
    """

    def __init__(self, name, callback, experiment_class: Optional[Type[StarlabExperiment]] = None, **kwargs):
        """This is the overridden __init__ that will set up the parameters that we need."""
        params: List[click.Parameter] = kwargs.pop("params", [])

        params += [
            click.Option(["--config", "config"], type=click.File("r"), callback=load_config, help="JSON file of parameters; flags override it"),
            click.Option(["--seed"], type=int, default=None, help="64-bit seed for stochastic steps"),
            click.Option(["--out", "out"], type=click.Path(dir_okay=False, writable=True), default=None, help="Write the output to this file"),
            click.Option(["--json", "json_output"], is_flag=True, default=False, help="Emit one machine-readable JSON document"),
            click.Option(["--threads"], type=int, default=None, help="Worker cap for parallel reductions"),
            click.Option(["--format", "output_format"], type=click.Choice(["jsonl", "csv"]), default=None, help="Record output format (default jsonl)"),
        ]
        super().__init__(name, callback=callback, params=params, **kwargs)
        self.experiment_class = experiment_class

    def merged_payload(self, ctx: Context, experiment: StarlabExperimentInstance) -> Dict[str, Any]:
        """Configuration defaults, then the `--config` file, then the flags that were given on the command line."""
        section = STARLAB_CONFIGURATION.config.get(experiment.experiment_name) or {}
        raw = dict(section.get("Defaults") or {})
        raw.update(ctx.params.get("config") or {})

        schema_fields = experiment.payload_template_class().fields
        for name, value in ctx.params.items():
            if name == "config" or ctx.get_parameter_source(name) is not ParameterSource.COMMANDLINE:
                continue
            schema_field = schema_fields.get(name)
            if schema_field is None:
                continue
            raw[schema_field.data_key or name] = value

        return raw

    def invoke(self, ctx: Context) -> Any:
        """
        Wrap the invocation with our own code to:
            1. Merge the configuration defaults, the config file and the flags
            2. Validate the merged payload with the experiment's schema
            3. Apply the `--threads` cap
        """
        if self.experiment_class is None or not issubclass(self.experiment_class, StarlabExperiment):
            click.echo("[⛔] The CLI for this is not set up properly. The command needs `experiment_class=` set to a StarlabExperiment subclass.", err=True)
            raise BadExperimentError()

        experiment = self.experiment_class()
        raw_payload = self.merged_payload(ctx, experiment)

        LOGGER.debug(f"[🛃] Validating the parameters of {experiment.experiment_name}...")
        try:
            experiment.load_payload(raw_payload)
        except ValidationError as exc:
            raise click.UsageError(f"[💥] Invalid parameters: {dumps(exc.messages)}", ctx=ctx) from exc

        if experiment.payload.get("threads"):
            STARLAB_CONFIGURATION.override(threads=experiment.payload["threads"])

        ctx.obj = experiment
        ctx.meta["starlab.raw_payload"] = raw_payload
        LOGGER.debug(f"[🆗] Parameters OK: Executing experiment: {experiment.experiment_name}...")
        return super().invoke(ctx)


POINT_SET_OPTIONS = [
    click.option("--set", "point_set", type=click.Choice(["vdc", "vdc-shifted", "random", "file"]), default=None, help="Point-set source (default vdc)"),
    click.option("--k", type=int, default=None, help="Van der Corput size exponent: N = 2^k"),
    click.option("--N", "n_points", type=int, default=None, help="Number of random points"),
    click.option("--d", "dimension", type=int, default=None, help="Dimension of random points (default 2)"),
    click.option("--shift", type=int, default=None, help="Digit-shift mask of a shifted van der Corput set"),
    click.option("--best-of", "best_of", type=int, default=None, help="Pick the best (smallest exact L2 norm) of this many random shift masks"),
    click.option("--points", "--file", "points_file", type=click.Path(exists=True, dir_okay=False), default=None, help="Point-set file for `--set file`"),
]


def point_set_options(func):
    """Decorator that adds the point-set source flags of a PointSetPayloadTemplate."""
    for option in reversed(POINT_SET_OPTIONS):
        func = option(func)
    return func
