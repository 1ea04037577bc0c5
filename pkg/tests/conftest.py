import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spinorlab.satake import from_traces, synth_form  # noqa: E402


@pytest.fixture(scope="session")
def loc12():
    """t_a = 2cos1, t_b = 2cos2 at p = 2."""
    return from_traces(2 * math.cos(1.0), 2 * math.cos(2.0), 2)


@pytest.fixture(scope="session")
def seed1_small():
    return synth_form(1, 10**4, 0.05)


@pytest.fixture(scope="session")
def seed1_large():
    return synth_form(1, 10**6, 0.05)
