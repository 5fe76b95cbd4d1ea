"""Starlab utility components: logging, configuration, plugin discovery and small numeric helpers.

:Module: starlab.utils
"""
