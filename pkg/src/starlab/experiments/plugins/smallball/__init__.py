"""Starlab's small-ball search.

:Module: starlab.experiments.plugins.smallball
"""
from starlab.experiments.plugins.smallball.experiment import SmallballExperiment, smallball

EXPERIMENT_PLUGINS = [SmallballExperiment]
CLICK_COMMANDS = [smallball]
