"""PyTest fixtures for Starlab's experiments

:Module: starlab.tests.experiments.conftest
"""
# pylint: disable=unused-argument
from typing import Any, Dict, Generator
from unittest import mock
from unittest.mock import MagicMock

import pytest
import yaml

SAMPLE_GOOD_CONFIG = """
Enabled: False
Defaults:
    Restarts: 3
"""


SAMPLE_POINT_SET_PAYLOAD = """
Set: vdc-shifted
K: 4
Shift: 5
"""


@pytest.fixture
def sample_good_config() -> Dict[str, Any]:
    """This returns the SAMPLE_GOOD_CONFIG as a dictionary for use in testing schemas."""
    return yaml.safe_load(SAMPLE_GOOD_CONFIG)


@pytest.fixture
def sample_point_set_payload() -> Dict[str, Any]:
    """This returns the SAMPLE_POINT_SET_PAYLOAD as a dictionary for use in testing schemas."""
    return yaml.safe_load(SAMPLE_POINT_SET_PAYLOAD)


@pytest.fixture
def mock_loader_logger() -> Generator[MagicMock, None, None]:
    """This will mock out the logger that is used during the experiment loading and return a MagicMock for tests to verify that log entries are being made."""
    with mock.patch("starlab.experiments.loader.LOGGER") as mock_logger:
        yield mock_logger
