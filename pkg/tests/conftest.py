import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from relhyp import catalog
from relhyp.metric import FactorBalls, Metric


@pytest.fixture(scope="session")
def metrics():
    """Shared metrics, grown on demand: ``metrics(name, radius)``."""
    cache = {}

    def get(name, radius=6):
        m = cache.get(name)
        if m is None or m.radius < radius:
            m = Metric.build(catalog.by_name(name), radius, factor_radius=max(radius, 8))
            cache[name] = m
        return m

    return get


@pytest.fixture(scope="session")
def factor_balls():
    cache = {}

    def get(name, radius=8):
        if name not in cache:
            cache[name] = FactorBalls(catalog.by_name(name), radius)
        return cache[name]

    return get
