"""Slotted Aloha reference model and the unslotted-to-slotted throughput ratio.

In a slotted network every interferer overlaps a packet for its whole duration,
so the interference functionals lose the time-averaging factor of the
asynchronous case. Both networks are compared at the same load ``G``.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np

from .analytic import (
    check_geometry,
    interference_constant,
    path_loss_companion,
    throughput_at_load,
)
from .checks import is_in_interval, is_in_list, is_positive
from .constants import VALID_XI_MODES
from .logging import log_quadrature_result
from .model import beta_coeff, validate
from .quadrature import QuadConfig, integrate_polar


@dataclass(frozen=True)
class SlottedOmegaSet:
    """Slotted interference functionals of one ``(r, theta, alpha)`` triple."""

    omega_hd_s: float
    omega_fd_s: float


def omega_hd_slotted(r, theta, alpha):
    """Slotted half-duplex interference functional, the plain interference
    constant ``pi r**2 theta**(2/alpha) Gamma(1 + 2/alpha) Gamma(1 - 2/alpha)``.

    Example:
        >>> omega_hd_slotted(1.0, 2.0, 4.0)  # doctest: +ELLIPSIS
        6.9788...
    """
    return interference_constant(r, theta, alpha)


def omega_gap(r, theta, alpha):
    """``Omega_hd - Omega_hd_s = Omega_hd_s (alpha - 2) / (alpha + 2)``."""
    return interference_constant(r, theta, alpha) * (alpha - 2.0) / (alpha + 2.0)


def blocking_probability(a, b):
    """``1 - 1 / ((1 + a) (1 + b))``: probability that either of two Rayleigh-faded
    interferers with normalized strengths ``a`` and ``b`` blocks a reception."""
    if math.isinf(a) or math.isinf(b):
        return 1.0
    if min(a, b) >= 1.0:
        return 1.0 - 1.0 / ((1.0 + a) * (1.0 + b))
    return (a + b + a * b) / ((1.0 + a) * (1.0 + b))


def full_duplex_blocking(u, phi, r, theta, alpha, scale=1.0):
    """:py:func:`blocking_probability` of a full-duplex cluster with one node at
    distance ``u`` and the companion at angle ``phi``, with threshold
    ``scale * theta``."""
    s = scale * theta * r**alpha
    a = s * u ** (-alpha) if u > 0.0 else math.inf
    b = s * path_loss_companion(u, phi, r, alpha)
    return blocking_probability(a, b)


@functools.lru_cache(maxsize=None)
def _omega_fd_slotted(r, theta, alpha, cfg):
    def integrand(u, phi):
        return 2.0 * u * full_duplex_blocking(u, phi, r, theta, alpha)

    result = integrate_polar(integrand, cfg, radial_points=[r])
    log_quadrature_result("omega_fd_slotted", result, r=r, theta=theta, alpha=alpha)
    return result


def omega_fd_slotted(r, theta, alpha, cfg=None):
    """Slotted full-duplex interference functional.

    .. math::
        \\Omega_{fd,s} = \\int_0^\\infty 2u \\left(\\pi - \\frac{1}{1 + \\theta r^\\alpha
        u^{-\\alpha}} \\int_0^\\pi \\frac{d\\varphi}{1 + \\theta r^\\alpha
        \\ell(u, \\varphi)}\\right) du

    Returns:
        QuadResult
    """
    check_geometry(r, theta, alpha)
    cfg = QuadConfig() if cfg is None else cfg
    return _omega_fd_slotted(float(r), float(theta), float(alpha), cfg)


def clear_cache():
    """Drop all memoized slotted functionals."""
    _omega_fd_slotted.cache_clear()


def slotted_omega_set(params, cfg=None):
    """:py:class:`SlottedOmegaSet` of ``params``."""
    validate(params)
    return SlottedOmegaSet(
        omega_hd_s=omega_hd_slotted(params.r, params.theta, params.alpha),
        omega_fd_s=omega_fd_slotted(params.r, params.theta, params.alpha, cfg).value,
    )


def throughput_slotted(params, q, g, cfg=None):
    """Slotted throughput density ``W G (1 + q (2 beta - 1)) exp(-G ((1 - q)
    Omega_hd_s + q Omega_fd_s))`` at load ``g``.

    Example:
        >>> float(throughput_slotted(SystemParams(), 0.0, 1 / 6.97886))  # doctest: +ELLIPSIS
        0.05271...
    """
    validate(params)
    is_in_interval(q, 0, 1, "q")
    is_positive(g, "g")
    omega = omega_hd_slotted(params.r, params.theta, params.alpha)
    if q != 0:
        fd = omega_fd_slotted(params.r, params.theta, params.alpha, cfg).value
        omega = (1.0 - q) * omega + q * fd
    beta = beta_coeff(params)
    g = np.asarray(g)
    return params.w * g * (1.0 + q * (2.0 * beta - 1.0)) * np.exp(-g * omega)


def xi_ratio_optimized(params, q, g, cfg=None, allow_boundary=False):
    """Ratio of unslotted to slotted throughput at load ``g`` when the unslotted
    network runs the duration pair of
    :py:func:`~fdaloha.hetero.optimize_duration_pair`.

    Returns:
        tuple: ``(ratio, optimum)`` with the
        :py:class:`~fdaloha.hetero.HeteroOptimum` behind the ratio, whose
        ``on_boundary`` flags a pair pinned to the edge of the ``gamma`` range.
    """
    from .hetero import optimize_duration_pair

    is_positive(g, "g")
    opt = optimize_duration_pair(params, q, g, cfg, allow_boundary=allow_boundary)
    return float(opt.throughput / throughput_slotted(params, q, g, cfg)), opt


def xi_ratio(params, q, g, mode="homogeneous", cfg=None, allow_boundary=False):
    """Ratio of unslotted to slotted throughput at the same load ``g``.

    Args:
        params (SystemParams): system parameters.
        q (float): fraction of full-duplex clusters.
        g (float): network load.
        mode (str): ``"homogeneous"`` evaluates the unslotted network with equal
            durations ``D = G / lambda``; ``"optimized_hetero"`` with the
            duration pair of :py:func:`xi_ratio_optimized`.
        cfg (QuadConfig, optional): quadrature tolerances.
        allow_boundary (bool): forwarded to the duration-pair optimizer.

    Returns:
        float
    """
    is_in_list(mode, VALID_XI_MODES, "mode")
    is_positive(g, "g")
    if mode == "optimized_hetero":
        return xi_ratio_optimized(params, q, g, cfg, allow_boundary)[0]
    unslotted = throughput_at_load(params, q, g, cfg)
    return float(unslotted / throughput_slotted(params, q, g, cfg))
