import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tempoctrl.generate import GeneratorSpec, er_temporal


@pytest.fixture
def small_er():
    def make(n=8, t=4, p=0.3, seed=0, self_loops=True):
        return er_temporal(GeneratorSpec(model="er", n=n, snapshots=t, p=p,
                                         seed=seed, self_loops=self_loops))

    return make
