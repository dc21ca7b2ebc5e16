import math
import numpy as np
import pytest

from pasta_prosody.momel import MomelAnchor, MomelSpline
from pasta_prosody.pitch import F0Contour, F0Frame


def sample_spline(anchors, domain, step=0.01):
    """Contour sampled from a known spline, all frames voiced. The grid covers
    the whole domain (the last frame may overshoot by less than one step)."""
    spline = MomelSpline([MomelAnchor(t, v) for t, v in anchors], domain)
    n = math.ceil((domain[1] - domain[0]) / step - 1e-9)
    times = [round(domain[0] + i * step, 10) for i in range(n + 1)]
    frames = [F0Frame(t, spline.value_at(t), True) for t in times]
    return F0Contour(frames, step), spline


def random_spline(rng, n_anchors=None, lo=80.0, hi=300.0):
    """Random anchors with >= 0.2 s gaps inside a padded domain."""
    if n_anchors is None:
        n_anchors = int(rng.integers(1, 6))
    times = np.cumsum(0.2 + rng.random(n_anchors) * 0.6)
    values = lo + rng.random(n_anchors) * (hi - lo)
    domain = (0.0, float(times[-1]) + 0.2)
    return MomelSpline(
        [MomelAnchor(float(t), float(v)) for t, v in zip(times, values)], domain
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
