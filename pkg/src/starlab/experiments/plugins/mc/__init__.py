"""Starlab's random-coefficient estimates.

:Module: starlab.experiments.plugins.mc
"""
from starlab.experiments.plugins.mc.experiment import McExperiment, mc

EXPERIMENT_PLUGINS = [McExperiment]
CLICK_COMMANDS = [mc]
