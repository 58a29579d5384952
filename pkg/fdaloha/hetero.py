"""Heterogeneous packet durations: half-duplex packets last ``D``, full-duplex
exchanges ``gamma * D``.

Interference between packets of different length is averaged with the
trapezoidal overlap functions :py:func:`overlap_hd_on_fd` and
:py:func:`overlap_fd_on_hd`, which lead to the modified functionals
``Omega'_hd`` (closed form) and ``Omega'_fd`` (double integral).
"""

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .analytic import (
    check_geometry,
    full_duplex_complement,
    interference_constant,
    omega_fd,
    omega_hd,
    throughput,
)
from .checks import is_in_interval, is_in_list, is_positive
from .constants import (
    GAMMA_GRID_POINTS,
    GAMMA_MAX,
    GAMMA_MIN,
    VALID_OMEGA_HD_PRIME_FORMS,
)
from .exceptions import OptimizationError
from .logging import (
    log_optimizer_boundary,
    log_optimizer_bracket,
    log_quadrature_result,
)
from .model import DurationConfig, beta_coeff, validate, validate_durations
from .options import OPTIONS
from .quadrature import QuadConfig, QuadResult, integrate_polar
from .slotted import full_duplex_blocking, omega_fd_slotted

VALID_OMEGA_FD_PRIME_METHODS = ["quadrature", "decomposition"]


@dataclass(frozen=True)
class HeteroOmegaSet:
    """Interference functionals of one ``(r, theta, alpha, gamma)`` tuple."""

    omega_hd_prime: float
    omega_fd_prime: float
    gamma: float
    fd_error_estimate: float


@dataclass(frozen=True)
class HeteroOptimum:
    """Best duration pair found by an optimizer.

    ``load`` is ``G = lambda d_hd (1 + q (gamma - 1))``; ``on_boundary`` flags a
    maximizer at the edge of the ``gamma`` search range. In that case
    ``interior_gamma`` and ``interior_throughput`` hold the best interior local
    maximum that is at least as good as equal durations, ``nan`` if there is
    none; otherwise they repeat ``gamma`` and ``throughput``.
    """

    d_hd: float
    gamma: float
    throughput: float
    load: float = math.nan
    on_boundary: bool = False
    interior_gamma: float = math.nan
    interior_throughput: float = math.nan


def _trapezoid(t, left, knee1, knee2, right, height):
    t = np.asarray(t, dtype=float)
    rise = (t - left) / (knee1 - left)
    fall = (right - t) / (right - knee2)
    out = height * np.clip(np.minimum(np.minimum(rise, fall), 1.0), 0.0, 1.0)
    return out if out.ndim else float(out)


def overlap_hd_on_fd(t, gamma, d):
    """Average fraction of a full-duplex packet of length ``gamma * d`` covered by
    a half-duplex interferer of length ``d`` starting ``t`` later.

    Supported on ``[-d, gamma * d]`` and integrating to ``d``.

    Example:
        >>> overlap_hd_on_fd(0.5, 2.0, 1.0)
        0.5
    """
    is_positive(gamma, "gamma")
    is_positive(d, "d")
    if gamma <= 1:
        return _trapezoid(t, -d, -d * (1 - gamma), 0.0, gamma * d, 1.0)
    return _trapezoid(t, -d, 0.0, d * (gamma - 1), gamma * d, 1.0 / gamma)


def overlap_fd_on_hd(t, gamma, d):
    """Average fraction of a half-duplex packet of length ``d`` covered by a
    full-duplex interferer of length ``gamma * d`` starting ``t`` later.

    Supported on ``[-gamma * d, d]`` and integrating to ``gamma * d``.
    """
    is_positive(gamma, "gamma")
    is_positive(d, "d")
    if gamma <= 1:
        return _trapezoid(t, -gamma * d, 0.0, d * (1 - gamma), d, gamma)
    return _trapezoid(t, -gamma * d, -d * (gamma - 1), 0.0, d, 1.0)


def omega_hd_prime(r, theta, alpha, gamma, form=None):
    """Interference functional of half-duplex interferers on a full-duplex
    reception, closed form.

    Args:
        r, theta, alpha (float): link distance, SIR threshold, path-loss exponent.
        gamma (float): full-duplex to half-duplex duration ratio.
        form (str, optional): ``"closed_form"`` or ``"overlap_integral"``;
            defaults to ``OPTIONS["omega_hd_prime"]``, see
            :py:class:`~fdaloha.options.set_options`.

    Returns:
        float: equal to :py:func:`~fdaloha.analytic.omega_hd` at ``gamma = 1``.

    Example:
        >>> omega_hd_prime(1.0, 2.0, 4.0, 0.5)  # doctest: +ELLIPSIS
        23.26...
    """
    is_positive(gamma, "gamma")
    form = OPTIONS["omega_hd_prime"] if form is None else form
    is_in_list(form, VALID_OMEGA_HD_PRIME_FORMS, "form")
    constant = interference_constant(r, theta, alpha)
    base = 2.0 * alpha / (alpha + 2.0)
    if gamma <= 1:
        excess = (1.0 - gamma) / gamma
        if form == "closed_form":
            excess *= 2.0
        return constant * (base + excess)
    excess = (gamma - 1.0) / gamma if form == "closed_form" else gamma - 1.0
    return constant * (base + excess) * gamma ** (-(1.0 + 2.0 / alpha))


def _omega_fd_prime_integrand(r, theta, alpha, gamma):
    if gamma <= 1:
        weight = 0.5 * (1.0 - gamma)

        def integrand(u, phi):
            return (
                4.0
                * u
                * (
                    gamma * full_duplex_complement(u, phi, r, theta, alpha, gamma)
                    + weight * full_duplex_blocking(u, phi, r, theta, alpha, gamma)
                )
            )

    else:
        weight = 0.5 * (gamma - 1.0)

        def integrand(u, phi):
            return (
                4.0
                * u
                * (
                    full_duplex_complement(u, phi, r, theta, alpha)
                    + weight * full_duplex_blocking(u, phi, r, theta, alpha)
                )
            )

    return integrand


@functools.lru_cache(maxsize=None)
def _omega_fd_prime(r, theta, alpha, gamma, cfg):
    result = integrate_polar(
        _omega_fd_prime_integrand(r, theta, alpha, gamma), cfg, radial_points=[r]
    )
    log_quadrature_result(
        "omega_fd_prime", result, r=r, theta=theta, alpha=alpha, gamma=gamma
    )
    return result


def _omega_fd_prime_decomposed(r, theta, alpha, gamma, cfg):
    if gamma <= 1:
        # both parts see the threshold scaled by the shorter overlap
        fd = omega_fd(r, gamma * theta, alpha, cfg)
        fd_s = omega_fd_slotted(r, gamma * theta, alpha, cfg)
        weight, weight_s = gamma, 1.0 - gamma
    else:
        fd = omega_fd(r, theta, alpha, cfg)
        fd_s = omega_fd_slotted(r, theta, alpha, cfg)
        weight, weight_s = 1.0, gamma - 1.0
    value = weight * fd.value + weight_s * fd_s.value
    error = weight * fd.abs_error_estimate + weight_s * fd_s.abs_error_estimate
    return QuadResult(value, error, fd.evaluations + fd_s.evaluations)


def omega_fd_prime(r, theta, alpha, gamma, cfg=None, method="quadrature"):
    """Interference functional of full-duplex interferers on a half-duplex
    reception.

    For ``gamma <= 1`` the integrand is
    ``4u [gamma (1 - k(x, y, gamma s)) + (1 - gamma)/2 b(gamma a, gamma b)]`` and for
    ``gamma > 1`` it is ``4u [(1 - k(x, y, s)) + (gamma - 1)/2 b(a, b)]``, with
    ``x = u**-alpha``, ``y`` the path loss from the companion node,
    ``s = theta r**alpha`` and ``b`` the blocking probability of
    :py:func:`~fdaloha.slotted.blocking_probability`.

    Args:
        r, theta, alpha (float): link distance, SIR threshold, path-loss exponent.
        gamma (float): full-duplex to half-duplex duration ratio.
        cfg (QuadConfig, optional): quadrature tolerances.
        method (str): ``"quadrature"`` integrates the double integral directly;
            ``"decomposition"`` combines the memoized ``Omega_fd`` and
            ``Omega_fd_s`` through the exact splitting
            ``Omega_fd + (gamma - 1) Omega_fd_s`` (``gamma > 1``) and
            ``gamma Omega_fd + (1 - gamma) Omega_fd_s``, both evaluated at the
            threshold ``gamma * theta`` (``gamma <= 1``). For ``gamma > 1`` this
            costs no quadrature once both are cached.

    Returns:
        QuadResult: identical to :py:func:`~fdaloha.analytic.omega_fd` at
        ``gamma = 1``.
    """
    check_geometry(r, theta, alpha)
    is_positive(gamma, "gamma")
    is_in_list(method, VALID_OMEGA_FD_PRIME_METHODS, "method")
    cfg = QuadConfig() if cfg is None else cfg
    if method == "decomposition":
        return _omega_fd_prime_decomposed(
            float(r), float(theta), float(alpha), float(gamma), cfg
        )
    return _omega_fd_prime(float(r), float(theta), float(alpha), float(gamma), cfg)


def clear_cache():
    """Drop all memoized heterogeneous functionals."""
    _omega_fd_prime.cache_clear()


def omega_set_hetero(params, gamma, cfg=None):
    """:py:class:`HeteroOmegaSet` of ``params`` at duration ratio ``gamma``."""
    validate(params)
    fd = omega_fd_prime(params.r, params.theta, params.alpha, gamma, cfg)
    return HeteroOmegaSet(
        omega_hd_prime=omega_hd_prime(params.r, params.theta, params.alpha, gamma),
        omega_fd_prime=fd.value,
        gamma=gamma,
        fd_error_estimate=fd.abs_error_estimate,
    )


def success_probs_hetero(params, q, durations, cfg=None, method="quadrature"):
    """Success probabilities ``(p_hd, p_fd)`` with heterogeneous durations.

    ``p_hd = exp(-lambda D ((1 - q) Omega_hd + q Omega'_fd))`` and
    ``p_fd = beta exp(-lambda gamma D ((1 - q) Omega'_hd + q Omega_fd))``.
    """
    validate(params)
    is_in_interval(q, 0, 1, "q")
    validate_durations(durations)
    r, theta, alpha = params.r, params.theta, params.alpha
    d, gamma = durations.d, durations.gamma
    hd_exponent = (1.0 - q) * omega_hd(r, theta, alpha)
    fd_exponent = (1.0 - q) * omega_hd_prime(r, theta, alpha, gamma)
    if q != 0:
        hd_exponent += q * omega_fd_prime(r, theta, alpha, gamma, cfg, method).value
        fd_exponent += q * omega_fd(r, theta, alpha, cfg).value
    p_hd = math.exp(-params.lam * d * hd_exponent)
    p_fd = beta_coeff(params) * math.exp(-params.lam * gamma * d * fd_exponent)
    return p_hd, p_fd


def throughput_hetero(params, q, durations, cfg=None, method="quadrature"):
    """Throughput density ``lambda W D ((1 - q) p_hd + 2 gamma q p_fd)``.

    Reduces to :py:func:`~fdaloha.analytic.throughput` at ``gamma = 1``.
    """
    p_hd, p_fd = success_probs_hetero(params, q, durations, cfg, method)
    gamma = durations.gamma
    return (
        params.lam
        * params.w
        * durations.d
        * ((1.0 - q) * p_hd + 2.0 * gamma * q * p_fd)
    )


def gamma_grid():
    """Logarithmic grid of the duration-ratio searches; contains ``gamma = 1``."""
    return np.logspace(np.log10(GAMMA_MIN), np.log10(GAMMA_MAX), GAMMA_GRID_POINTS)


def _refine(objective, name, grid, values, idx):
    """Golden-section refinement in ``log(gamma)`` around the grid point ``idx``."""
    lower, center, upper = np.log(grid[idx - 1 : idx + 2])
    log_optimizer_bracket(
        name, grid[idx - 1], grid[idx], grid[idx + 1], float(values[idx])
    )
    if values[idx] == values[idx - 1] or values[idx] == values[idx + 1]:
        return float(grid[idx]), float(values[idx])
    res = optimize.minimize_scalar(
        lambda log_gamma: -objective(math.exp(log_gamma)),
        bracket=(lower, center, upper),
        method="golden",
        options={"xtol": 1e-8},
    )
    if not np.isfinite(res.fun):
        raise OptimizationError(f"{name}: objective not finite at refinement.")
    if -res.fun >= values[idx] and lower <= res.x <= upper:
        return float(math.exp(res.x)), float(-res.fun)
    return float(grid[idx]), float(values[idx])


def _interior_peak(values, floor):
    """Index of the best interior local maximum of ``values`` not below ``floor``,
    ``None`` if there is none."""
    inner = values[1:-1]
    peaks = np.flatnonzero((inner > values[:-2]) & (inner >= values[2:])) + 1
    peaks = peaks[values[peaks] >= floor]
    if peaks.size == 0:
        return None
    return int(peaks[np.argmax(values[peaks])])


def _maximize_over_gamma(objective, name, allow_boundary):
    """Grid search over :py:func:`gamma_grid` followed by golden-section refinement
    in ``log(gamma)``.

    Returns:
        tuple: ``(gamma, value, on_boundary, interior_gamma, interior_value)``. When
        the maximum sits on the edge of the grid, the interior pair is the best
        interior local maximum at least as good as ``gamma = 1`` (``nan`` if
        there is none); otherwise it repeats the maximizer.
    """
    grid = gamma_grid()
    values = np.array([objective(g) for g in grid])
    if not np.all(np.isfinite(values)):
        bad = grid[~np.isfinite(values)]
        raise OptimizationError(f"{name}: objective not finite at gamma={bad}.")
    idx = int(np.argmax(values))
    if 0 < idx < len(grid) - 1:
        gamma, value = _refine(objective, name, grid, values, idx)
        return gamma, value, False, gamma, value
    if not allow_boundary:
        raise OptimizationError(
            f"{name}: optimum pinned to the search boundary gamma={grid[idx]}, "
            f"search range [{GAMMA_MIN}, {GAMMA_MAX}]."
        )
    log_optimizer_boundary(name, grid[idx], float(values[idx]))
    peak = _interior_peak(values, values[np.argmin(np.abs(np.log(grid)))])
    if peak is None:
        interior = (math.nan, math.nan)
    else:
        interior = _refine(objective, name, grid, values, peak)
    return (float(grid[idx]), float(values[idx]), True) + interior


def optimize_duration_pair(params, q, g, cfg=None, allow_boundary=False):
    """Duration pair ``(D_hd, gamma)`` maximizing :py:func:`throughput_hetero` at
    fixed load ``G = lambda D_hd (1 + q (gamma - 1))``.

    The load constraint fixes ``D_hd`` for every ``gamma``; the remaining 1-D
    problem is solved by a logarithmic grid over ``gamma in [1e-3, 1e2]`` and a
    golden-section refinement around the best grid point. An optimum on the edge
    of the range is flagged with ``on_boundary`` and comes with the best interior
    local maximum, if any. For ``q = 0`` and ``q = 1`` the objective does not
    depend on ``gamma``, and ``gamma = 1`` is returned.

    Args:
        params (SystemParams): system parameters.
        q (float): fraction of full-duplex clusters.
        g (float): network load.
        cfg (QuadConfig, optional): quadrature tolerances.
        allow_boundary (bool): return a maximizer at the edge of the search
            range instead of raising.

    Returns:
        HeteroOptimum

    Raises:
        OptimizationError: if the objective is not finite or the optimum sits on
            the search boundary and ``allow_boundary`` is ``False``.
    """
    validate(params)
    is_in_interval(q, 0, 1, "q")
    is_positive(g, "g")
    if q in (0, 1):
        d_hd = g / params.lam
        value = float(throughput(params, q, d_hd, cfg))
        return HeteroOptimum(
            d_hd=d_hd,
            gamma=1.0,
            throughput=value,
            load=g,
            interior_gamma=1.0,
            interior_throughput=value,
        )

    def d_hd_of(gamma):
        return g / (params.lam * (1.0 + q * (gamma - 1.0)))

    def objective(gamma):
        return throughput_hetero(
            params, q, DurationConfig(d_hd_of(gamma), gamma), cfg, "decomposition"
        )

    gamma, value, on_boundary, interior_gamma, interior_value = _maximize_over_gamma(
        objective, "optimize_duration_pair", allow_boundary
    )
    return HeteroOptimum(
        d_hd=d_hd_of(gamma),
        gamma=gamma,
        throughput=value,
        load=g,
        on_boundary=on_boundary,
        interior_gamma=interior_gamma,
        interior_throughput=interior_value,
    )


def gamma_star(params, q, d_hd, cfg=None, allow_boundary=False):
    """Duration ratio maximizing :py:func:`throughput_hetero` at fixed half-duplex
    duration ``d_hd``.

    Same search as :py:func:`optimize_duration_pair`. At ``q = 0`` no cluster is
    full-duplex and ``1.0`` is returned.

    Returns:
        float
    """
    validate(params)
    is_in_interval(q, 0, 1, "q")
    is_positive(d_hd, "d_hd")
    if q == 0:
        return 1.0

    def objective(gamma):
        return throughput_hetero(
            params, q, DurationConfig(d_hd, gamma), cfg, "decomposition"
        )

    return _maximize_over_gamma(objective, "gamma_star", allow_boundary)[0]
