"""Starlab's experiment plugins. Every package here exports EXPERIMENT_PLUGINS and CLICK_COMMANDS.

:Module: starlab.experiments.plugins
"""
