"""Starlab's Roth chain report.

:Module: starlab.experiments.plugins.chain
"""
from starlab.experiments.plugins.chain.experiment import ChainExperiment, chain

EXPERIMENT_PLUGINS = [ChainExperiment]
CLICK_COMMANDS = [chain]
