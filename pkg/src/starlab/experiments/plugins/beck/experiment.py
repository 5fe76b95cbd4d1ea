"""Starlab's Beck-gain coincidence sums

`gain` evaluates sum f_r f_s over r != s with r_1 = s_1 and reports its L^p norms against p^(d-1) n^((2d-3)/2). `pattern` evaluates a
general coincidence pattern over k-tuples of shapes and fits the growth of its L2 norm against the predicted n^(M/2).

Patterns are written as `i-j:axis` entries separated by commas, e.g. `0-1:0,1-2:2` (members 0 and 1 share axis 0, 1 and 2 axis 2).

:Module: starlab.experiments.plugins.beck.experiment
"""
import re
from typing import Any, Dict, List, Optional, Tuple

import click
import numpy as np
from click import Context
from marshmallow import ValidationError, fields, validate, validates_schema

from starlab.certificates import beck_gain_sum, pattern_growth, sign_expansion, validate_pattern
from starlab.certificates.beck import SIGN_MODES
from starlab.experiments.base_payload_schemas import ExperimentPayloadBaseTemplate, IntegerSequence
from starlab.experiments.cli_utils import StarlabExperimentCommand, run_experiment
from starlab.experiments.experiment_schematics import ExperimentOutcome, StarlabExperiment
from starlab.utils.logging import LOGGER

MODES = ("gain", "pattern")
COINCIDENCE = re.compile(r"^\s*(\d+)\s*-\s*(\d+)\s*:\s*(\d+)\s*$")


class PatternField(fields.Field):
    """A coincidence pattern: `0-1:0,1-2:2`, or a list of [i, j, axis] triples. Loads as a list of (i, j, axis)."""

    def _deserialize(self, value: Any, attr: Optional[str], data: Any, **kwargs) -> List[Tuple[int, int, int]]:
        if isinstance(value, (list, tuple)):
            try:
                return [tuple(int(item) for item in entry) for entry in value]
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"Not a list of [i, j, axis] triples: {value!r}") from exc

        coincidences = []
        for entry in str(value).split(","):
            if not entry.strip():
                continue
            matched = COINCIDENCE.match(entry)
            if not matched:
                raise ValidationError(f"Expected coincidences like '0-1:0', got {entry!r}")
            coincidences.append((int(matched.group(1)), int(matched.group(2)), int(matched.group(3))))
        return coincidences


class BeckPayloadTemplate(ExperimentPayloadBaseTemplate):
    """
    The payload for BeckExperiment. This looks like:
        Mode: gain
        Dimension: 3
        Scale: 1..4
        Ladder: [2, 4, 8]
    """

    mode = fields.String(required=False, load_default="gain", validate=validate.OneOf(MODES), data_key="Mode")
    dimension = fields.Integer(required=False, load_default=3, validate=validate.Range(min=3), data_key="Dimension")
    scales = IntegerSequence(required=True, data_key="Scale")
    signs = fields.String(required=False, load_default="plus", validate=validate.OneOf(SIGN_MODES), data_key="Signs")
    ladder = fields.List(fields.Float(validate=validate.Range(min=1)), required=False, load_default=[2.0, 4.0, 8.0], data_key="Ladder")
    k = fields.Integer(required=False, load_default=2, data_key="K")
    pattern = PatternField(required=False, load_default=None, allow_none=True, data_key="Pattern")

    @validates_schema()
    def validate_mode(self, data: Dict[str, Any], **kwargs) -> None:  # pylint: disable=unused-argument  # noqa
        """Random signs need a seed, and a pattern has to fit its k-tuples."""
        errors = {}
        if any(scale < 0 for scale in data.get("scales", [])):
            errors["Scale"] = ["Scales must be non-negative."]
        if data.get("signs") == "random" and data.get("seed") is None:
            errors["Seed"] = ["A `Seed` is required for random signs."]
        if data.get("mode") == "pattern":
            if data.get("pattern") is None:
                errors["Pattern"] = ["A `Pattern` is required for `Mode: pattern`."]
            else:
                try:
                    validate_pattern(data.get("k", 2), data.get("dimension", 3), data["pattern"])
                except ValueError as exc:
                    errors["Pattern"] = [str(exc)]

        if errors:
            raise ValidationError(errors)


class BeckExperiment(StarlabExperiment):
    """Evaluates coincidence sums exactly on the grid and reports their growth."""

    payload_template_class = BeckPayloadTemplate
    csv_columns = ["mode", "n", "d", "pairs", "tuples", "M", "p", "norm", "ratio"]

    def gain(self) -> List[Dict[str, Any]]:
        """One row per scale and exponent of the ladder."""
        payload = self.payload
        d = payload["dimension"]
        rng = np.random.default_rng(payload["seed"])

        records = []
        for n in payload["scales"]:
            report = beck_gain_sum(n, d, sign_expansion(n, d, payload["signs"], rng), ladder=payload["ladder"])
            for row in report.rows:
                records.append({"mode": "gain", "n": n, "d": d, "pairs": len(report.pairs), **row._asdict()})

        if records:
            l2_ratios = [record["ratio"] for record in records if record["p"] == 2.0]
            if l2_ratios:
                LOGGER.info(f"[🎯] ||sum||_2 / n^((2d-3)/2) stays within [{min(l2_ratios):.4g}, {max(l2_ratios):.4g}] over the scales")
        return records

    def pattern(self) -> List[Dict[str, Any]]:
        """One row per scale with the L2 norm against n^(M/2), then the growth fit."""
        payload = self.payload
        growth = pattern_growth(payload["scales"], payload["dimension"], payload["k"], payload["pattern"], payload["signs"], payload["seed"])

        records = []
        for report in growth.reports:
            row = report.rows[0]
            records.append({"mode": "pattern", "n": report.n, "d": report.d, "tuples": report.tuples, "M": report.free_parameters, **row._asdict()})
        records.append({"mode": "pattern", "fit": growth.fit.to_dict() if growth.fit else None, "predicted_exponent": growth.predicted})
        return records

    def execute(self) -> ExperimentOutcome:
        """Runs the requested mode."""
        LOGGER.info(f"[🎯] Beck {self.payload['mode']} sums in d={self.payload['dimension']} at n = {self.payload['scales']}...")
        records = self.gain() if self.payload["mode"] == "gain" else self.pattern()
        return ExperimentOutcome(records=records)


@click.command(cls=StarlabExperimentCommand, experiment_class=BeckExperiment)
@click.option("--mode", type=click.Choice(MODES), default=None, help="gain (r_1 = s_1 pairs) or a general coincidence pattern")
@click.option("--d", "dimension", type=int, default=None, help="Dimension, at least 3 (default 3)")
@click.option("--n", "scales", type=str, default=None, help="Scales: '2', '1,3' or '1..4'")
@click.option("--signs", type=click.Choice(SIGN_MODES), default=None, help="All plus or random signs")
@click.option("--ladder", type=float, multiple=True, default=None, help="Exponents p of the norm table (repeatable)")
@click.option("--k", type=int, default=None, help="Tuple size of a pattern (2 or 3)")
@click.option("--pattern", type=str, default=None, help="Coincidences like '0-1:0,1-2:2'")
@click.pass_context
def beck(ctx: Context, **kwargs) -> None:  # noqa # pylint: disable=unused-argument
    """Beck-gain coincidence sums."""
    run_experiment(ctx)
