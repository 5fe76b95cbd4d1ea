"""Starlab's Riesz product certificates.

:Module: starlab.experiments.plugins.riesz
"""
from starlab.experiments.plugins.riesz.experiment import RieszExperiment, riesz

EXPERIMENT_PLUGINS = [RieszExperiment]
CLICK_COMMANDS = [riesz]
