import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corrsense import (
    ChannelParams,
    CorrelationModel,
    CorrelationParams,
    build_correlation,
    epa_gain,
    sample_geometry,
)


@pytest.fixture(scope="session")
def params():
    """Reference channel setting: 20 dB SNRs, 10 dB total power, unit source."""
    return ChannelParams.from_db()


@pytest.fixture(scope="session")
def corr_params():
    return CorrelationParams(250.0, 1.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)


def make_instance(seed, n_nodes=10, model=CorrelationModel.FULL_RANK,
                  side=20.0, source_distance=30.0):
    """One seeded (geometry, correlation) pair at the reference scale."""
    rng = np.random.default_rng(seed)
    geom = sample_geometry(rng, n_nodes, side, source_distance)
    corr = build_correlation(geom, CorrelationParams(250.0, 1.0), model)
    return geom, corr


@pytest.fixture()
def fullrank_instance():
    return make_instance(42)
