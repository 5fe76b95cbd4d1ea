"""Starlab's logger management

This holds the Starlab logger, which is to be used throughout the application for all logging and diagnostic output.
Results go to stdout (or files); logs always go to stderr so that JSON output stays clean.

:Module: starlab.utils.logging
"""
import logging
import sys

LOGGER = logging.getLogger("starlab")

# Create console handler (stderr, so that `--json` output on stdout is never interleaved with log lines):
handler = logging.StreamHandler(sys.stderr)

# Create formatter:
formatter = logging.Formatter("%(asctime)s - %(levelname)s - %(message)s - %(pathname)s - %(funcName)s:%(lineno)i")

handler.setFormatter(formatter)
LOGGER.addHandler(handler)

LOGGER.propagate = False

# The log level will be set by the configuration.
# The configuration will also update the 3rd party logging levels to supress things like pybnb's solver chatter.
