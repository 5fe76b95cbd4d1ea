"""Starlab's point-set generator experiment.

:Module: starlab.experiments.plugins.gen
"""
from starlab.experiments.plugins.gen.experiment import GenExperiment, gen

EXPERIMENT_PLUGINS = [GenExperiment]
CLICK_COMMANDS = [gen]
