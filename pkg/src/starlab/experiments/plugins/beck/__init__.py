"""Starlab's Beck-gain coincidence sums.

:Module: starlab.experiments.plugins.beck
"""
from starlab.experiments.plugins.beck.experiment import BeckExperiment, beck

EXPERIMENT_PLUGINS = [BeckExperiment]
CLICK_COMMANDS = [beck]
