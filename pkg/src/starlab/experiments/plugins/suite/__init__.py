"""Starlab's acceptance suite.

:Module: starlab.experiments.plugins.suite
"""
from starlab.experiments.plugins.suite.experiment import SuiteExperiment, suite

EXPERIMENT_PLUGINS = [SuiteExperiment]
CLICK_COMMANDS = [suite]
