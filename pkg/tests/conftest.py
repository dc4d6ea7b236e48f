import numpy as np
import pytest

import residency as ry


def hist(ids, n_locations=None, **kwargs):
    return ry.LocationHistory.from_ids(ids, n_locations, **kwargs)


def segs(*pairs):
    """ResidenceHistory from (location, length) pairs."""
    return ry.ResidenceHistory.from_segments(pairs)


def random_history(rng, n, n_locations, p_unknown=0.0):
    vals = rng.integers(0, n_locations, size=n)
    if p_unknown:
        vals[rng.random(n) < p_unknown] = ry.UNKNOWN
    return ry.LocationHistory(vals, n_locations)


@pytest.fixture(params=["compiled", "pure"])
def backend(request):
    if request.param == "compiled" and not ry.compiled_available():
        pytest.skip("compiled backend not built")
    with ry.use_backend(request.param):
        yield request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)
