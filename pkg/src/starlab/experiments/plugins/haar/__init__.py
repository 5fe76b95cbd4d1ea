"""Starlab's Haar coefficient tables.

:Module: starlab.experiments.plugins.haar
"""
from starlab.experiments.plugins.haar.experiment import HaarExperiment, haar

EXPERIMENT_PLUGINS = [HaarExperiment]
CLICK_COMMANDS = [haar]
