"""Starlab's experiment definitions

This defines the base classes for all of Starlab's experiment plugins. Every CLI subcommand is one experiment: a payload schema for
its parameters, a configuration schema for its section of the configuration, and an `execute()` that turns the loaded payload into
result records.

All experiment plugins *must* implement the components defined here. The plugins under `starlab.experiments.plugins` are the
best reference for writing a new one.

:Module: starlab.experiments.experiment_schematics
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Type, TypeVar

from marshmallow import Schema, fields, INCLUDE

from starlab.experiments.base_payload_schemas import ExperimentPayloadBaseTemplate


class ExperimentBaseConfigurationTemplate(Schema):
    """The base configuration template of an experiment's section in the configuration. This is _only_ used for validation purposes.

    Note: All configuration file YAMLs are written in UpperCamelCase, and referenced in snake_case in the marshmallow objects.
    """

    # All experiments must define an `Enabled: True` for the plugin to be registered on the CLI:
    enabled = fields.Bool(required=True, data_key="Enabled")

    # Payload values (UpperCamelCase, as in a `--config` file) to use when neither the config file nor a flag sets them:
    defaults = fields.Dict(keys=fields.String(), required=False, load_default={}, data_key="Defaults")

    class Meta:
        """By default, we will include unknown values without raising an error."""

        unknown = INCLUDE


@dataclass
class ExperimentOutcome:
    """What an experiment hands back to the CLI: result records, whether every asserted criterion passed, and an optional raw text
    artifact (such as a point file) that replaces the record output."""

    records: List[Dict[str, Any]] = field(default_factory=list)
    passed: bool = True
    summary: Optional[str] = None
    text: Optional[str] = None


ExperimentPayloadBaseTemplateInstance = TypeVar("ExperimentPayloadBaseTemplateInstance", bound=ExperimentPayloadBaseTemplate)


class StarlabExperiment:
    """The base class for Starlab experiment plugins. All the attributes here should either be defined statically or in the __init__ of the subclass."""

    payload_template_class: Type[ExperimentPayloadBaseTemplate] = ExperimentPayloadBaseTemplate
    payload: Dict[str, Any]
    configuration_template_class: Type[ExperimentBaseConfigurationTemplate] = ExperimentBaseConfigurationTemplate

    # The columns of the CSV output, in order. Records are flattened onto these; missing values are left empty.
    csv_columns: List[str] = []

    @classmethod
    def get_experiment_name(cls: Type["StarlabExperiment"]) -> str:
        """The experiment name, which is also the name of its configuration section."""
        return cls.__name__

    @property
    def experiment_name(self) -> str:
        """Returns the name of the experiment, which is by default the name of the class."""
        return self.get_experiment_name()

    def load_payload(self, raw_payload: Dict[str, Any]) -> None:
        """Validates and loads the payload. This raises marshmallow's ValidationError on bad input."""
        self.payload = self.payload_template_class().load(raw_payload)

    def execute(self) -> ExperimentOutcome:
        """Runs the experiment on the loaded payload."""
        raise NotImplementedError("pew pew pew")  # pragma: no cover


StarlabExperimentInstance = TypeVar("StarlabExperimentInstance", bound=StarlabExperiment)
