# flake8: noqa
from importlib.metadata import PackageNotFoundError, version

from . import (
    analytic,
    constants,
    curves,
    exceptions,
    figures,
    hetero,
    metrics,
    model,
    montecarlo,
    quadrature,
    slotted,
    testing,
)
from .curves import SweepSpec, read_curve, write_curve
from .model import DuplexMix, DurationConfig, SystemParams
from .montecarlo import SimConfig
from .options import set_options
from .quadrature import QuadConfig

try:
    __version__ = version(__name__)
except PackageNotFoundError:  # pragma: no cover
    # package is not installed
    pass  # pragma: no cover


def clear_cache():
    """Drop every memoized interference functional."""
    analytic.clear_cache()
    slotted.clear_cache()
    hetero.clear_cache()
