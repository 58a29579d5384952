import numpy as np
import pytest
import xarray as xr

import fdaloha
from fdaloha import DurationConfig, QuadConfig, SimConfig, SystemParams

xr.set_options(display_style="text")


@pytest.fixture(autouse=True)
def add_standard_imports(doctest_namespace):
    """imports for doctest"""
    doctest_namespace["np"] = np
    doctest_namespace["xr"] = xr
    doctest_namespace["fdaloha"] = fdaloha
    doctest_namespace["SystemParams"] = SystemParams
    doctest_namespace["DurationConfig"] = DurationConfig


@pytest.fixture()
def reference_params():
    """lambda=0.05, r=1, alpha=4, theta=2, eta=1, W=1."""
    return SystemParams()


@pytest.fixture()
def imperfect_params(reference_params):
    """Reference parameters with cancellation efficiency 0.9."""
    return reference_params.replace(eta=0.9)


@pytest.fixture()
def quad_config():
    """Default quadrature tolerances."""
    return QuadConfig()


@pytest.fixture()
def loose_quad_config():
    """Quadrature tolerances for tests that only need a few digits."""
    return QuadConfig(rel_tol=1e-6, abs_tol=1e-10)


@pytest.fixture()
def small_sim():
    """Small torus and short horizon: seconds per replication."""
    return SimConfig(
        window_side=20.0,
        backoff_max=14.0,
        warmup=32.0,
        measure_time=40.0,
        replications=5,
        base_seed=7,
    )


@pytest.fixture()
def single_rep_sim(small_sim):
    """A single replication, too few to resolve a standard error."""
    return small_sim.replace(replications=1, measure_time=20.0)
