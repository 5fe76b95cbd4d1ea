"""Starlab's discrepancy-norm experiment.

:Module: starlab.experiments.plugins.disc
"""
from starlab.experiments.plugins.disc.experiment import DiscExperiment, disc

EXPERIMENT_PLUGINS = [DiscExperiment]
CLICK_COMMANDS = [disc]
