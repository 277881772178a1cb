import json
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from mixedspec.sturm import Potential  # noqa: E402

settings.register_profile("desk", max_examples=25, deadline=None)
settings.load_profile("desk")

FUNCTIONS = {
    "free": lambda x: 0.0 * x,
    "cos2pix": lambda x: np.cos(2 * np.pi * x),
    "x": lambda x: x + 0.0,
    "x(1-x)": lambda x: x * (1 - x),
}


def potential(name, grid_n=2049):
    return Potential.from_function(FUNCTIONS[name], grid_n)


@pytest.fixture(scope="session")
def frozen():
    return json.loads((Path(__file__).parent / "data" / "frozen.json").read_text())["potentials"]
