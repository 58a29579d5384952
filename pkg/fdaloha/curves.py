"""Curve data, parameter sweeps and their CSV representation.

A curve is an :py:class:`xarray.Dataset` with one data variable per series, one
or two dimension coordinates and the metadata needed to re-run it in ``.attrs``.
On disk it is a CSV file preceded by the metadata as JSON in ``#`` comment lines.
"""

import io
import json
from dataclasses import dataclass, field
from importlib.metadata import PackageNotFoundError, version

import dask
import numpy as np
import pandas as pd
import xarray as xr

from .checks import has_min_len, is_finite_number, is_in_list
from .constants import VALID_SPACINGS, VALID_SWEEP_VARIABLES
from .exceptions import ParameterError
from .metrics import POINT_KEYS, get_metric, operating_point
from .options import OPTIONS
from .quadrature import QuadConfig

CurveData = xr.Dataset

COMMENT = "# "

# sweep variable -> operating point key
SWEEP_KEYS = {
    "D": "d",
    "q": "q",
    "G": "load",
    "r": "r",
    "gamma": "gamma",
    "theta": "theta",
    "alpha": "alpha",
    "eta": "eta",
}


def tool_version():
    """Installed version of ``fdaloha``, ``"unknown"`` when not installed."""
    try:
        return version("fdaloha")
    except PackageNotFoundError:  # pragma: no cover
        return "unknown"


def _to_builtin(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def curve_metadata(params=None, cfg=None, **kwargs):
    """Metadata echo of a curve: tool version, quadrature tolerances, options that
    change numerical results, the parameters and any ``kwargs``."""
    cfg = QuadConfig() if cfg is None else cfg
    meta = {
        "fdaloha_version": tool_version(),
        "quadrature": {
            "rel_tol": cfg.rel_tol,
            "abs_tol": cfg.abs_tol,
            "max_depth": cfg.max_depth,
        },
        "omega_hd_prime": OPTIONS["omega_hd_prime"],
    }
    if params is not None:
        meta["params"] = params.to_dict()
    meta.update(kwargs)
    # normalize to JSON types so that attrs survive write_curve/read_curve unchanged
    return json.loads(json.dumps(meta, default=_to_builtin))


def make_curve(data_vars, coords, metadata):
    """Assemble :py:data:`CurveData`.

    Args:
        data_vars (dict): name -> ``(dims, values)`` of every series.
        coords (dict): dimension name -> coordinate values.
        metadata (dict): see :py:func:`curve_metadata`.

    Returns:
        xarray.Dataset

    Raises:
        ParameterError: if a series does not match the length of its coordinates.
    """
    for name, (dims, values) in data_vars.items():
        dims = (dims,) if isinstance(dims, str) else tuple(dims)
        shape = tuple(len(coords[d]) for d in dims)
        if np.shape(values) != shape:
            raise ParameterError(
                f"series {name!r} has shape {np.shape(values)}, expected {shape} "
                f"from coordinates {dims}."
            )
    ds = xr.Dataset(data_vars, coords={k: np.asarray(v) for k, v in coords.items()})
    ds.attrs.update(metadata)
    return ds


def write_curve(curve, path):
    """Write ``curve`` to ``path``: JSON metadata in comment lines, then CSV.

    Returns:
        path
    """
    # every series shares the dimensions of the first one, in that order
    first = next(iter(curve.data_vars.values()))
    df = curve.to_dataframe(dim_order=list(first.dims))
    header = json.dumps(
        {
            "dims": list(df.index.names),
            "attrs": curve.attrs,
            "series": {k: curve[k].attrs for k in curve.data_vars},
        },
        indent=1,
        sort_keys=True,
        default=_to_builtin,
    )
    with open(path, "w") as f:
        for line in header.splitlines():
            f.write(COMMENT + line + "\n")
        df.to_csv(f)
    return path


def read_curve(path):
    """Read a file written by :py:func:`write_curve` back into :py:data:`CurveData`."""
    header, body = [], []
    with open(path) as f:
        for line in f:
            (header if line.startswith(COMMENT) else body).append(line)
    if not header:
        raise ParameterError(f"{path} has no metadata header.")
    meta = json.loads("".join(line[len(COMMENT) :] for line in header))
    df = pd.read_csv(io.StringIO("".join(body)), index_col=meta["dims"])
    ds = xr.Dataset.from_dataframe(df)
    ds.attrs.update(meta["attrs"])
    for name, attrs in meta.get("series", {}).items():
        ds[name].attrs.update(attrs)
    return ds


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep of a parameter at fixed other parameters.

    Args:
        variable (str): one of ``D, q, G, r, gamma, theta, alpha, eta``.
        start (float): first value.
        stop (float): last value, ``stop > start``.
        steps (int): number of values, ``>= 2``.
        spacing (str): ``"linear"`` or ``"log"``.
        fixed (dict): overrides of the reference operating point, keys as in
            :py:func:`~fdaloha.metrics.operating_point`.
    """

    variable: str
    start: float
    stop: float
    steps: int = 50
    spacing: str = "linear"
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        is_in_list(self.variable, VALID_SWEEP_VARIABLES, "sweep variable")
        is_in_list(self.spacing, VALID_SPACINGS, "spacing")
        is_finite_number(self.start, "start")
        is_finite_number(self.stop, "stop")
        if not self.start < self.stop:
            raise ParameterError(
                f"sweep start must be < stop, found {self.start} >= {self.stop}."
            )
        if isinstance(self.steps, bool) or int(self.steps) != self.steps:
            raise ParameterError(f"steps must be an integer, found {self.steps!r}.")
        if self.steps < 2:
            raise ParameterError(f"sweep needs steps >= 2, found {self.steps}.")
        if self.spacing == "log" and self.start <= 0:
            raise ParameterError(
                f"log spacing needs start > 0, found {self.start}."
            )
        for key in self.fixed:
            is_in_list(key, POINT_KEYS, "fixed parameter")
        if self.variable in ("D", "G") and {"d", "load"} & set(self.fixed):
            raise ParameterError(
                f"sweeping {self.variable} conflicts with fixed "
                f"{sorted({'d', 'load'} & set(self.fixed))}."
            )

    def values(self):
        """The swept values."""
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, int(self.steps))
        return np.linspace(self.start, self.stop, int(self.steps))

    def point(self, value):
        """:py:class:`~fdaloha.metrics.OperatingPoint` at one swept value."""
        return operating_point(
            **{**self.fixed, SWEEP_KEYS[self.variable]: float(value)}
        )

    def to_dict(self):
        return {
            "variable": self.variable,
            "start": self.start,
            "stop": self.stop,
            "steps": int(self.steps),
            "spacing": self.spacing,
            "fixed": dict(self.fixed),
        }


def _evaluate_point(point, metrics, cfg):
    return [metric(point, cfg) for metric in metrics]


def evaluate_points(points, metrics, cfg=None):
    """Evaluate ``metrics`` at every point concurrently; rows keep input order.

    Returns:
        numpy.ndarray: shape ``(len(points), len(metrics))``.
    """
    tasks = [dask.delayed(_evaluate_point)(p, metrics, cfg) for p in points]
    rows = dask.compute(*tasks, scheduler=OPTIONS["scheduler"])
    return np.array(rows, dtype=float).reshape(len(points), len(metrics))


def evaluate_sweep(spec, metrics, cfg=None):
    """Evaluate ``metrics`` along ``spec``.

    Args:
        spec (SweepSpec): the sweep.
        metrics (list): metric names, aliases or
            :py:class:`~fdaloha.metrics.Metric` instances.
        cfg (QuadConfig, optional): quadrature tolerances.

    Returns:
        CurveData: dimension ``spec.variable``, one series per metric.

    Raises:
        KeywordError: for an unknown metric.

    Example:
        >>> spec = SweepSpec("D", 0.5, 8, steps=3, fixed={"q": 0.0})
        >>> evaluate_sweep(spec, ["throughput"]).throughput.dims
        ('D',)
    """
    has_min_len(metrics, 1, "metrics")
    metrics = [get_metric(m) for m in metrics]
    cfg = QuadConfig() if cfg is None else cfg
    values = spec.values()
    points = [spec.point(v) for v in values]
    table = evaluate_points(points, metrics, cfg)
    meta = curve_metadata(
        points[0].params,
        cfg,
        command="sweep",
        sweep=spec.to_dict(),
        metrics=[m.name for m in metrics],
    )
    curve = make_curve(
        {m.name: (spec.variable, table[:, i]) for i, m in enumerate(metrics)},
        {spec.variable: values},
        meta,
    )
    for m in metrics:
        curve[m.name].attrs.update(long_name=m.long_name, units=m.units)
    return curve
