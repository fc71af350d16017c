import subprocess
import sys

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)


def run_cli(*args, cwd=None):
    """Run the installed CLI in a subprocess; returns CompletedProcess."""
    return subprocess.run(
        [sys.executable, "-m", "anisotachy.cli", *map(str, args)],
        capture_output=True,
        text=True,
        cwd=cwd,
    )
