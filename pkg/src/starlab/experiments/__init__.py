"""Starlab's experiments: one plugin per CLI subcommand.

:Module: starlab.experiments
"""
