import math
import warnings

import numpy as np
import pytest

from holobrack.ball import BallParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_params(rng, count=20, shapes_only=False):
    """Random ball parameters; ``a`` drawn from {0, 2} or from [0, 4]."""
    out = []
    for _ in range(count):
        a = float(rng.choice([0.0, 2.0])) if shapes_only else float(rng.uniform(0, 4))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            out.append(BallParams(m=rng.uniform(0.2, 5), g=rng.uniform(1, 20), R=rng.uniform(0.1, 3),
                                  phi=rng.uniform(0.05, math.pi / 2 - 0.05), a=a))
    return out
