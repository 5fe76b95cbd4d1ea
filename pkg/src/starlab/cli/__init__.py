"""Starlab's command line interface.

:Module: starlab.cli
"""
