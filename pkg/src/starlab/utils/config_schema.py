"""Starlab's configuration schema

This defines the Marshmallow schema for the Starlab configuration. This will ensure that the base configuration file
has the correct components on it, and fills in the defaults for the computational budgets.

:Module: starlab.utils.config_schema
"""
from marshmallow import Schema, fields, INCLUDE, validate

LOG_LEVELS = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG", "NOTSET"}


class StarlabSchema(Schema):
    """This is the main schema for the STARLAB section: logging and the budgets that keep exact computations at desk scale."""

    log_level = fields.String(required=False, load_default="INFO", validate=validate.OneOf(LOG_LEVELS), data_key="LogLevel")
    # Dictionary to override log levels for 3rd party loggers. This is the name of the log and the level.
    third_party_logger_levels = fields.Dict(
        keys=fields.String(), values=fields.String(validate=validate.OneOf(LOG_LEVELS)), required=False, data_key="ThirdPartyLoggerLevels"
    )

    # Cap on the total resolution (sum of per-axis levels) of any dyadic grid. 26 bits is 64M cells:
    grid_budget_bits = fields.Integer(required=False, load_default=26, validate=validate.Range(min=1, max=34), data_key="GridBudgetBits")

    # Cap on the number of critical-grid corners visited by the exact star discrepancy:
    star_discrepancy_cell_budget = fields.Integer(required=False, load_default=2**25, validate=validate.Range(min=1), data_key="StarDiscrepancyCellBudget")

    # Cap on N^2 * d for the pairwise closed form of the L2 norm:
    pair_budget = fields.Integer(required=False, load_default=2**26, validate=validate.Range(min=1), data_key="PairBudget")

    # Largest occupancy table (number of entries) used to answer box-counting queries:
    counting_table_budget = fields.Integer(required=False, load_default=2**24, validate=validate.Range(min=1), data_key="CountingTableBudget")

    debug_grid_checks = fields.Boolean(required=False, load_default=False, data_key="DebugGridChecks")
    orlicz_tolerance = fields.Float(required=False, load_default=1e-10, validate=validate.Range(min=0, min_inclusive=False), data_key="OrliczTolerance")
    threads = fields.Integer(required=False, load_default=1, validate=validate.Range(min=1), data_key="Threads")
    exhaustive_max_rectangles = fields.Integer(required=False, load_default=24, validate=validate.Range(min=1, max=40), data_key="ExhaustiveMaxRectangles")


class BaseConfigurationSchema(Schema):
    """The base configuration Schema for Starlab"""

    starlab = fields.Nested(StarlabSchema, required=True, data_key="STARLAB")

    class Meta:
        """Meta properties on the Schema used by Marshmallow"""

        unknown = INCLUDE  # Experiment sections live next to STARLAB -- they are validated by the experiment loader
