"""Data behind the figures of the throughput study.

Every ``figure_*`` builder returns :py:data:`~fdaloha.curves.CurveData` whose
series share the same dimensions; grid points are evaluated concurrently with
:py:mod:`dask` and stored in index order. :py:func:`build_figure` dispatches on
the figure number.
"""

import itertools

import dask
import numpy as np

from . import analytic, hetero, slotted
from .checks import is_in_list
from .constants import REFERENCE_DURATIONS, REFERENCE_FRACTIONS, VALID_FIGURES
from .curves import curve_metadata, make_curve
from .exceptions import ParameterError
from .model import DurationConfig, SystemParams, validate
from .montecarlo import estimate_throughput
from .options import OPTIONS
from .quadrature import QuadConfig

THETAS = [0.5, 1.0, 2.0, 4.0, 8.0]
ALPHAS = [2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0]
ETAS = [0.7, 0.8, 0.9, 1.0]
D_HD_LIST = [0.5, 1.0, 2.0, 4.0, 8.0]
LOADS = [0.05, 0.2, 0.35]
HETERO_FRACTIONS = [0.25, 0.5, 0.75]


def _durations(start=0.1, stop=20.0, steps=60):
    # always contains the simulated durations so that sim columns align
    return np.union1d(np.geomspace(start, stop, steps), REFERENCE_DURATIONS)


def _evaluate_grid(func, coords, **kwargs):
    """Evaluate ``func(*point, **kwargs)`` on the product of the ``coords`` values.

    ``func`` returns a sequence of floats; the result has shape
    ``(len(c) for c in coords.values()) + (n_outputs,)``.
    """
    points = list(itertools.product(*coords.values()))
    tasks = [dask.delayed(func)(*p, **kwargs) for p in points]
    rows = dask.compute(*tasks, scheduler=OPTIONS["scheduler"])
    shape = tuple(len(v) for v in coords.values())
    return np.array(rows, dtype=float).reshape(shape + (-1,))


def _setup(params, cfg):
    params = SystemParams() if params is None else validate(params)
    cfg = QuadConfig() if cfg is None else cfg
    return params, cfg


def _delta_row(theta, alpha, cfg):
    hd = analytic.omega_hd(1.0, theta, alpha)
    fd = analytic.omega_fd(1.0, theta, alpha, cfg)
    err = fd.abs_error_estimate
    return hd, fd.value, err, fd.value / hd, err / hd


def delta_table(thetas=THETAS, alphas=ALPHAS, cfg=None):
    """``delta(theta, alpha)`` with the functionals at ``r = 1`` and quadrature
    error columns.

    Returns:
        CurveData: dimensions ``(theta, alpha)``, series ``delta``,
        ``delta_error``, ``omega_hd``, ``omega_fd`` and ``omega_fd_error``.
    """
    _, cfg = _setup(None, cfg)
    coords = {"theta": sorted(thetas), "alpha": sorted(alphas)}
    for theta, alpha in itertools.product(*coords.values()):
        analytic.check_geometry(1.0, theta, alpha)
    table = _evaluate_grid(_delta_row, coords, cfg=cfg)
    dims = ("theta", "alpha")
    names = ["omega_hd", "omega_fd", "omega_fd_error", "delta", "delta_error"]
    return make_curve(
        {name: (dims, table[..., i]) for i, name in enumerate(names)},
        coords,
        curve_metadata(None, cfg, command="tables"),
    )


def figure_2(params=None, cfg=None, thetas=THETAS, alphas=ALPHAS):
    """Grid of ``delta`` over threshold and path-loss exponent."""
    params, cfg = _setup(params, cfg)
    curve = delta_table(thetas, alphas, cfg)[["delta", "delta_error"]]
    curve.attrs.update(curve_metadata(params, cfg, command="figure", figure=2))
    return curve


def figure_3(params=None, cfg=None, fractions=REFERENCE_FRACTIONS, sim=None):
    """Throughput density vs packet duration for several full-duplex fractions.

    With ``sim`` (a :py:class:`~fdaloha.montecarlo.SimConfig`), the series
    ``sim_throughput`` and ``sim_stderr`` hold Monte Carlo estimates at the
    reference durations and ``NaN`` elsewhere.
    """
    params, cfg = _setup(params, cfg)
    fractions = sorted(fractions)
    d = _durations()
    # warm the functional cache once, the rows are closed form afterwards
    analytic.omega_fd(params.r, params.theta, params.alpha, cfg)
    throughput = np.stack(
        [analytic.throughput(params, q, d, cfg) for q in fractions]
    )
    data_vars = {"throughput": (("q", "D"), throughput)}
    meta = {"command": "figure", "figure": 3}
    if sim is not None:
        mean = np.full_like(throughput, np.nan)
        stderr = np.full_like(throughput, np.nan)
        for i, q in enumerate(fractions):
            for d_ref in REFERENCE_DURATIONS:
                durations = DurationConfig(d_ref)
                est = estimate_throughput(
                    params, q, durations, sim.for_durations(durations)
                )
                j = int(np.searchsorted(d, d_ref))
                mean[i, j] = est.throughput_mean
                stderr[i, j] = est.throughput_stderr
        data_vars["sim_throughput"] = (("q", "D"), mean)
        data_vars["sim_stderr"] = (("q", "D"), stderr)
        meta["sim"] = sim.to_dict()
    return make_curve(
        data_vars, {"q": fractions, "D": d}, curve_metadata(params, cfg, **meta)
    )


def _q_star_row(eta, d, params, cfg):
    return (analytic.optimal_q(params.replace(eta=eta), d, cfg).q_star,)


def figure_4(params=None, cfg=None, etas=None):
    """Optimal full-duplex fraction vs packet duration, by default at the
    cancellation efficiency of ``params``."""
    params, cfg = _setup(params, cfg)
    etas = sorted([params.eta] if etas is None else etas)
    d = _durations(0.1, 20.0, 100)
    analytic.omega_fd(params.r, params.theta, params.alpha, cfg)
    coords = {"eta": etas, "D": d}
    table = _evaluate_grid(_q_star_row, coords, params=params, cfg=cfg)[..., 0]
    regions = [analytic.optimal_q(params.replace(eta=eta), 1.0, cfg) for eta in etas]
    meta = curve_metadata(
        params,
        cfg,
        command="figure",
        figure=4,
        d1=[reg.d1 for reg in regions],
        d2=[reg.d2 for reg in regions],
    )
    return make_curve({"q_star": (("eta", "D"), table)}, coords, meta)


def figure_5(params=None, cfg=None, etas=ETAS):
    """Optimal full-duplex fraction vs packet duration with imperfect cancellation."""
    curve = figure_4(params, cfg, etas)
    curve.attrs["figure"] = 5
    return curve


def _chi_row(theta, alpha, params, cfg):
    return (analytic.chi_gain(params.replace(theta=theta, alpha=alpha), cfg),)


def figure_6(params=None, cfg=None, thetas=THETAS, alphas=ALPHAS):
    """Peak full-duplex gain vs path-loss exponent for several thresholds."""
    params, cfg = _setup(params, cfg)
    coords = {"theta": sorted(thetas), "alpha": sorted(alphas)}
    table = _evaluate_grid(_chi_row, coords, params=params, cfg=cfg)[..., 0]
    return make_curve(
        {"chi_gain": (("theta", "alpha"), table)},
        coords,
        curve_metadata(params, cfg, command="figure", figure=6),
    )


def figure_7(params=None, cfg=None, etas=ETAS, r=None):
    """Peak full-duplex gain vs link distance for several cancellation
    efficiencies."""
    params, cfg = _setup(params, cfg)
    r = np.linspace(1.0, 2.0, 21) if r is None else np.sort(r)
    etas = sorted(etas)
    table = np.array(
        [
            [analytic.chi_gain(params.replace(eta=eta, r=ri), cfg) for ri in r]
            for eta in etas
        ]
    )
    return make_curve(
        {"chi_gain": (("eta", "r"), table)},
        {"eta": etas, "r": r},
        curve_metadata(params, cfg, command="figure", figure=7),
    )


def _hetero_row(q, x, params, cfg):
    g = x * params.lam
    homogeneous = float(analytic.throughput_at_load(params, q, g, cfg))
    opt = hetero.optimize_duration_pair(params, q, g, cfg, allow_boundary=True)
    return (
        homogeneous,
        opt.throughput,
        opt.gamma,
        opt.d_hd,
        float(opt.on_boundary),
        opt.interior_throughput,
        opt.interior_gamma,
    )


def figure_8(params=None, cfg=None, fractions=HETERO_FRACTIONS, loads=None):
    """Throughput density vs normalized load ``G / lambda`` with equal durations
    and with the optimized duration pair.

    Where ``on_boundary`` is one the optimized pair sits on the edge of the
    ``gamma`` range; ``throughput_interior`` and ``gamma_interior`` then hold the
    best interior optimum, ``nan`` if the objective has none.
    """
    params, cfg = _setup(params, cfg)
    x = np.geomspace(0.1, 20.0, 40) if loads is None else np.sort(loads)
    coords = {"q": sorted(fractions), "G_over_lambda": x}
    table = _evaluate_grid(_hetero_row, coords, params=params, cfg=cfg)
    dims = ("q", "G_over_lambda")
    names = [
        "throughput_homogeneous",
        "throughput_optimized",
        "gamma",
        "d_hd",
        "on_boundary",
        "throughput_interior",
        "gamma_interior",
    ]
    return make_curve(
        {name: (dims, table[..., i]) for i, name in enumerate(names)},
        coords,
        curve_metadata(params, cfg, command="figure", figure=8),
    )


def _gamma_star_row(d_hd, q, params, cfg):
    return (hetero.gamma_star(params, q, d_hd, cfg, allow_boundary=True),)


def figure_9(params=None, cfg=None, d_hd=D_HD_LIST, fractions=None):
    """Optimal duration ratio vs full-duplex fraction for several half-duplex
    durations."""
    params, cfg = _setup(params, cfg)
    q = np.linspace(0.0, 1.0, 21) if fractions is None else np.sort(fractions)
    coords = {"d_hd": sorted(d_hd), "q": q}
    table = _evaluate_grid(_gamma_star_row, coords, params=params, cfg=cfg)[..., 0]
    return make_curve(
        {"gamma_star": (("d_hd", "q"), table)},
        coords,
        curve_metadata(params, cfg, command="figure", figure=9),
    )


def _xi_row(q, g, params, cfg, modes):
    row = []
    for mode in modes:
        if mode == "optimized_hetero":
            xi, opt = slotted.xi_ratio_optimized(
                params, q, g, cfg, allow_boundary=True
            )
            row += [xi, float(opt.on_boundary)]
        else:
            row.append(slotted.xi_ratio(params, q, g, mode, cfg))
    return tuple(row)


def _xi_row_by_load(g, q, params, cfg, modes):
    return _xi_row(q, g, params, cfg, modes)


def figure_10(params=None, cfg=None, fractions=None, loads=None):
    """Unslotted over slotted throughput on a grid of fraction and load, equal
    durations."""
    params, cfg = _setup(params, cfg)
    q = np.linspace(0.0, 1.0, 11) if fractions is None else np.sort(fractions)
    g = np.linspace(0.05, 0.5, 10) if loads is None else np.sort(loads)
    coords = {"q": q, "G": g}
    table = _evaluate_grid(
        _xi_row, coords, params=params, cfg=cfg, modes=["homogeneous"]
    )[..., 0]
    return make_curve(
        {"xi_ratio": (("q", "G"), table)},
        coords,
        curve_metadata(params, cfg, command="figure", figure=10),
    )


def figure_11(params=None, cfg=None, loads=LOADS, fractions=None):
    """Unslotted over slotted throughput vs fraction for several loads; the
    ``xi_homogeneous`` series has equal durations, ``xi_optimized`` the optimized
    duration pair; ``on_boundary`` is one where that pair sits on the edge of the
    ``gamma`` range."""
    params, cfg = _setup(params, cfg)
    q = np.linspace(0.0, 1.0, 21) if fractions is None else np.sort(fractions)
    coords = {"G": sorted(loads), "q": q}
    table = _evaluate_grid(
        _xi_row_by_load,
        coords,
        params=params,
        cfg=cfg,
        modes=["homogeneous", "optimized_hetero"],
    )
    return make_curve(
        {
            "xi_homogeneous": (("G", "q"), table[..., 0]),
            "xi_optimized": (("G", "q"), table[..., 1]),
            "on_boundary": (("G", "q"), table[..., 2]),
        },
        coords,
        curve_metadata(params, cfg, command="figure", figure=11),
    )


FIGURES = {
    2: figure_2,
    3: figure_3,
    4: figure_4,
    5: figure_5,
    6: figure_6,
    7: figure_7,
    8: figure_8,
    9: figure_9,
    10: figure_10,
    11: figure_11,
}


def build_figure(fig_id, params=None, cfg=None, sim=None):
    """Data of figure ``fig_id``.

    Args:
        fig_id (int): one of ``2, ..., 11``.
        params (SystemParams, optional): overrides of the reference parameters.
        cfg (QuadConfig, optional): quadrature tolerances.
        sim (SimConfig, optional): adds Monte Carlo points, figure 3 only.

    Returns:
        CurveData

    Raises:
        KeywordError: for an unsupported ``fig_id``.
    """
    is_in_list(fig_id, VALID_FIGURES, "figure")
    if sim is not None:
        if fig_id != 3:
            raise ParameterError(
                f"Simulated points are only available for figure 3, got {fig_id}."
            )
        return figure_3(params, cfg, sim=sim)
    return FIGURES[fig_id](params, cfg)
