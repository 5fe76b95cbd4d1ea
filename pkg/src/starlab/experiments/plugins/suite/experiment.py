"""Starlab's acceptance suite

Runs the named acceptance checks and emits one row per check with the measured value, the tolerance and whether it passed. Any
failed check fails the run (exit 2). Tolerances can be overridden per check with `--tol NAME=VALUE`, and `--only NAME` runs a subset.

:Module: starlab.experiments.plugins.suite.experiment
"""
import math
import time
from typing import Any, Dict, Optional, Tuple

import click
from click import Context, Option
from marshmallow import ValidationError, fields, validate, validates_schema

from starlab.experiments.base_payload_schemas import MAX_SEED, ExperimentPayloadBaseTemplate
from starlab.experiments.cli_utils import USAGE_FAILURES, StarlabExperimentCommand, run_experiment
from starlab.experiments.experiment_schematics import ExperimentOutcome, StarlabExperiment
from starlab.experiments.plugins.suite.checks import CHECKS_BY_NAME, SUITE_CHECKS, SuiteCheck, SuiteContext
from starlab.smallball import DegenerateFitError, FloorViolationError
from starlab.utils.logging import LOGGER

DEFAULT_SUITE_SEED = 2024


def parse_tolerances(ctx: Context, param: Option, value: Tuple[str, ...]) -> Optional[Dict[str, float]]:  # pylint: disable=W0613  # noqa
    """Click callback for the repeatable `--tol NAME=VALUE`."""
    if not value:
        return None

    tolerances = {}
    for item in value:
        name, separator, number = item.partition("=")
        if not separator:
            raise click.BadParameter(f"Expected NAME=VALUE, got {item!r}")
        try:
            tolerances[name.strip()] = float(number)
        except ValueError as exc:
            raise click.BadParameter(f"The tolerance of {name.strip()!r} is not a number: {number!r}") from exc
    return tolerances


class SuitePayloadTemplate(ExperimentPayloadBaseTemplate):
    """
    The payload for SuiteExperiment. This looks like:
        Quick: true
        Only: [parseval, riesz]
        Tolerances:
            riesz: 1e-10
    """

    seed = fields.Integer(required=False, load_default=DEFAULT_SUITE_SEED, validate=validate.Range(min=0, max=MAX_SEED), data_key="Seed")
    quick = fields.Boolean(required=False, load_default=False, data_key="Quick")
    only = fields.List(fields.String(), required=False, load_default=None, allow_none=True, data_key="Only")
    tolerances = fields.Dict(keys=fields.String(), values=fields.Float(), required=False, load_default=dict, data_key="Tolerances")

    @validates_schema()
    def validate_names(self, data: Dict[str, Any], **kwargs) -> None:  # pylint: disable=unused-argument  # noqa
        """Every named check exists."""
        errors = {}
        unknown = [name for name in data.get("only") or [] if name not in CHECKS_BY_NAME]
        if unknown:
            errors["Only"] = [f"Unknown check(s): {', '.join(unknown)}. Pick from {', '.join(CHECKS_BY_NAME)}"]
        unknown = [name for name in data.get("tolerances") or {} if name not in CHECKS_BY_NAME]
        if unknown:
            errors["Tolerances"] = [f"Unknown check(s): {', '.join(unknown)}. Pick from {', '.join(CHECKS_BY_NAME)}"]

        if errors:
            raise ValidationError(errors)


class SuiteExperiment(StarlabExperiment):
    """Runs the acceptance checks."""

    payload_template_class = SuitePayloadTemplate
    csv_columns = ["check", "kind", "measured", "tolerance", "passed", "seconds", "error", "description"]

    def run_check(self, check: SuiteCheck, context: SuiteContext) -> Dict[str, Any]:
        """Measures one check. A check that cannot finish (a budget, a degenerate fit, a failed floor) fails with its error."""
        tolerance = (self.payload["tolerances"] or {}).get(check.name, check.tolerance)
        record = {"check": check.name, "kind": check.kind, "tolerance": tolerance, "description": check.description, "error": None}

        start = time.perf_counter()
        try:
            measured = float(check.measure(context))
        except (DegenerateFitError, FloorViolationError) + USAGE_FAILURES as exc:
            LOGGER.error(f"[💥] Check {check.name} stopped on {type(exc).__name__}: {exc}")
            measured = math.nan
            record["error"] = f"{type(exc).__name__}: {exc}"

        record.update(measured=measured, passed=check.passes(measured, tolerance), seconds=round(time.perf_counter() - start, 3))
        verdict = "✅" if record["passed"] else "❌"
        LOGGER.info(f"[{verdict}] {check.name:<15} {check.kind} {tolerance:<8g} measured {measured:.6g} ({record['seconds']}s)")
        return record

    def execute(self) -> ExperimentOutcome:
        """Runs the selected checks in suite order."""
        payload = self.payload
        context = SuiteContext(quick=payload["quick"], seed=payload["seed"])
        selected = [check for check in SUITE_CHECKS if not payload["only"] or check.name in payload["only"]]

        LOGGER.info(f"[🧪] Running {len(selected)} acceptance check(s){' in quick mode' if context.quick else ''}...")
        records = [self.run_check(check, context) for check in selected]

        failed = [record["check"] for record in records if not record["passed"]]
        if failed:
            return ExperimentOutcome(records=records, passed=False, summary=f"[❌] {len(failed)} check(s) failed: {', '.join(failed)}")

        LOGGER.info(f"[✅] All {len(records)} check(s) passed")
        return ExperimentOutcome(records=records)


@click.command(cls=StarlabExperimentCommand, experiment_class=SuiteExperiment)
@click.option("--quick", is_flag=True, default=False, help="Fewer and smaller cases per check")
@click.option("--only", multiple=True, default=None, help="Run only this check (repeatable)")
@click.option("--tol", "tolerances", multiple=True, callback=parse_tolerances, help="Override a tolerance: NAME=VALUE (repeatable)")
@click.pass_context
def suite(ctx: Context, **kwargs) -> None:  # noqa # pylint: disable=unused-argument
    """The acceptance suite: a pass/fail row per check."""
    run_experiment(ctx)
