import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("suite", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("suite")

from eta_forge import PrecisionContext  # noqa: E402


@pytest.fixture
def ctx():
    return PrecisionContext()


@pytest.fixture
def ctx_ext():
    return PrecisionContext.extended(120)
