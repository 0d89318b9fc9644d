import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dyadlab.grid import DyadicGrid, random_weight  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=[1, 2, 3, 4])
def small_grid(request):
    return DyadicGrid(request.param)


@pytest.fixture
def weights(rng):
    """A few random weights at depths 2..5 of every generator kind."""
    out = []
    for depth in (2, 3, 4, 5):
        for kind in ("cascade", "lognormal", "sparse"):
            out.append(random_weight(DyadicGrid(depth), rng, kind))
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(verdicts, key=int):
        terminalreporter.write_line(verdicts[key])
