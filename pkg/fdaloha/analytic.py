"""Homogeneous-duration analysis of asynchronous Aloha with half- and full-duplex
clusters.

Every cluster transmits packets of duration ``D`` that start according to a
space-time Poisson process of density ``lambda``; a fraction ``q`` of clusters
operates in full-duplex. The success probabilities are
``exp(-lambda D ((1 - q) Omega_hd + q Omega_fd))`` (times ``beta`` for a
full-duplex receiver), where ``Omega_hd`` is known in closed form and
``Omega_fd`` is a radial-angular double integral.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .checks import (
    is_at_least,
    is_greater_than,
    is_in_interval,
    is_positive,
)
from .logging import log_quadrature_result
from .model import beta_coeff, validate
from .quadrature import (
    QuadConfig,
    integrate_polar,
    log_ratio_kernel_complement,
)


@dataclass(frozen=True)
class OmegaSet:
    """Interference functionals of one ``(r, theta, alpha)`` triple."""

    omega_hd: float
    omega_fd: float
    delta: float
    fd_error_estimate: float


@dataclass(frozen=True)
class OptimalQ:
    """Throughput-maximizing full-duplex fraction at a given packet duration.

    ``region`` is ``"full"`` when ``q_star == 1``, ``"half"`` when ``q_star == 0``
    and ``"intermediate"`` otherwise; ``d1 <= d2`` are the durations delimiting
    the three regions.
    """

    q_star: float
    d1: float
    d2: float
    region: str


def check_geometry(r, theta, alpha):
    """Check the invariants of the arguments of the interference functionals."""
    is_at_least(r, 1, "r")
    is_positive(theta, "theta")
    is_greater_than(alpha, 2, "alpha")
    return True


def gamma_product(alpha):
    """``Gamma(1 + 2/alpha) Gamma(1 - 2/alpha)``, equal to ``(2 pi / alpha) /
    sin(2 pi / alpha)`` by the reflection formula."""
    return float(special.gamma(1.0 + 2.0 / alpha) * special.gamma(1.0 - 2.0 / alpha))


def interference_constant(r, theta, alpha):
    """``pi r**2 theta**(2/alpha) Gamma(1 + 2/alpha) Gamma(1 - 2/alpha)``.

    Interference functional of interferers that overlap the whole packet, the
    common factor of all closed forms.
    """
    check_geometry(r, theta, alpha)
    return math.pi * r**2 * theta ** (2.0 / alpha) * gamma_product(alpha)


def omega_hd(r, theta, alpha):
    """Interference functional of half-duplex interferers.

    Example:
        >>> omega_hd(1.0, 2.0, 4.0)  # doctest: +ELLIPSIS
        9.3051...
    """
    return interference_constant(r, theta, alpha) * 2.0 * alpha / (alpha + 2.0)


def path_loss_companion(u, phi, r, alpha):
    """Path loss ``(u**2 + r**2 + 2 r u cos(phi))**(-alpha/2)`` from the companion
    node of an interferer at distance ``u``; ``inf`` on the collocated point."""
    base = u * u + r * r + 2.0 * r * u * math.cos(phi)
    if base <= 0.0:
        return math.inf
    return base ** (-0.5 * alpha)


def full_duplex_complement(u, phi, r, theta, alpha, scale=1.0):
    """``1 - k(u**-alpha, l(u, phi), scale theta r**alpha)`` for an interfering
    full-duplex cluster with one node at distance ``u``.

    The complement tends to one for ``u -> 0`` and on the collocated point of the
    companion node.
    """
    x = u ** (-alpha) if u > 0.0 else math.inf
    y = path_loss_companion(u, phi, r, alpha)
    if math.isinf(x) or math.isinf(y):
        return 1.0
    return log_ratio_kernel_complement(x, y, scale * theta * r**alpha)


def _omega_fd_integrand(r, theta, alpha):
    def integrand(u, phi):
        return 4.0 * u * full_duplex_complement(u, phi, r, theta, alpha)

    return integrand


@functools.lru_cache(maxsize=None)
def _omega_fd(r, theta, alpha, cfg):
    result = integrate_polar(
        _omega_fd_integrand(r, theta, alpha), cfg, radial_points=[r]
    )
    log_quadrature_result("omega_fd", result, r=r, theta=theta, alpha=alpha)
    return result


def omega_fd(r, theta, alpha, cfg=None):
    """Interference functional of full-duplex interferers.

    .. math::
        \\Omega_{fd} = \\int_0^\\infty 4u \\left(\\pi - \\int_0^\\pi
        k(u^{-\\alpha}, \\ell(u, \\varphi), \\theta r^\\alpha)\\, d\\varphi\\right) du

    Results are memoized per ``(r, theta, alpha, cfg)``; see :py:func:`clear_cache`.

    Args:
        r (float): link distance, ``r >= 1``.
        theta (float): SIR threshold.
        alpha (float): path-loss exponent, ``alpha > 2``.
        cfg (QuadConfig, optional): quadrature tolerances.

    Returns:
        QuadResult

    Raises:
        QuadratureError: if either integral level does not converge.
    """
    check_geometry(r, theta, alpha)
    cfg = QuadConfig() if cfg is None else cfg
    return _omega_fd(float(r), float(theta), float(alpha), cfg)


def omega_fd_bounds(r, theta, alpha):
    """Closed-form ``(lower, upper)`` bracket of :py:func:`omega_fd`.

    The lower bound is :py:func:`omega_hd`; the upper bound follows from bounding
    the kernel by its value on the farther node, ``4 alpha`` times the
    interference constant.
    """
    return omega_hd(r, theta, alpha), 4.0 * alpha * interference_constant(
        r, theta, alpha
    )


@functools.lru_cache(maxsize=None)
def _delta(theta, alpha, cfg):
    return omega_fd(1.0, theta, alpha, cfg).value / omega_hd(1.0, theta, alpha)


def delta(theta, alpha, cfg=None):
    """Ratio ``Omega_fd / Omega_hd``, which does not depend on ``r``."""
    check_geometry(1.0, theta, alpha)
    cfg = QuadConfig() if cfg is None else cfg
    return _delta(float(theta), float(alpha), cfg)


def clear_cache():
    """Drop all memoized interference functionals."""
    _omega_fd.cache_clear()
    _delta.cache_clear()


def omega_set(params, cfg=None):
    """:py:class:`OmegaSet` of ``params``."""
    validate(params)
    hd = omega_hd(params.r, params.theta, params.alpha)
    fd = omega_fd(params.r, params.theta, params.alpha, cfg)
    return OmegaSet(
        omega_hd=hd,
        omega_fd=fd.value,
        delta=fd.value / hd,
        fd_error_estimate=fd.abs_error_estimate,
    )


def mixed_omega(params, q, cfg=None):
    """``(1 - q) Omega_hd + q Omega_fd``; no quadrature at ``q = 0``."""
    validate(params)
    is_in_interval(q, 0, 1, "q")
    hd = omega_hd(params.r, params.theta, params.alpha)
    if q == 0:
        return hd
    fd = omega_fd(params.r, params.theta, params.alpha, cfg).value
    return (1.0 - q) * hd + q * fd


def overlap(t, d):
    """Average fraction ``(D - |T|) / D`` of a packet covered by an interferer
    starting ``T`` later; zero outside ``[-D, D]``."""
    is_positive(d, "d")
    t = np.asarray(t, dtype=float)
    out = np.clip((d - np.abs(t)) / d, 0.0, 1.0)
    return out if out.ndim else float(out)


def success_prob_hd(params, q, d, cfg=None):
    """Success probability of a half-duplex reception.

    Example:
        >>> float(success_prob_hd(SystemParams(), 0.0, 1.0))  # doctest: +ELLIPSIS
        0.6279...
    """
    is_positive(d, "d")
    return np.exp(-params.lam * np.asarray(d) * mixed_omega(params, q, cfg))


def success_prob_fd(params, q, d, cfg=None):
    """Success probability of a full-duplex reception, ``beta`` times the half-duplex
    one."""
    return beta_coeff(params) * success_prob_hd(params, q, d, cfg)


def success_probs(params, q, d, cfg=None):
    """Both success probabilities ``(p_hd, p_fd)`` from a single evaluation."""
    p_hd = success_prob_hd(params, q, d, cfg)
    return p_hd, beta_coeff(params) * p_hd


def throughput(params, q, d, cfg=None):
    """Throughput density ``W lambda D (1 + q (2 beta - 1)) p_hd``.

    A half-duplex cluster delivers one packet per transmission, a full-duplex
    cluster two, each succeeding with its own probability.

    Args:
        params (SystemParams): system parameters.
        q (float): fraction of full-duplex clusters.
        d (float or array-like): packet duration(s).
        cfg (QuadConfig, optional): tolerances of ``Omega_fd``.

    Returns:
        float or numpy.ndarray: successfully delivered bits per unit time and area.
    """
    beta = beta_coeff(params)
    p_hd = success_prob_hd(params, q, d, cfg)
    return params.w * params.lam * np.asarray(d) * (1.0 + q * (2.0 * beta - 1.0)) * p_hd


def throughput_at_load(params, q, g, cfg=None):
    """:py:func:`throughput` at the duration ``D = G / lambda`` of load ``G``."""
    is_positive(g, "g")
    return throughput(params, q, np.asarray(g) / params.lam, cfg)


def optimal_q(params, d, cfg=None):
    """Full-duplex fraction maximizing :py:func:`throughput` at duration ``d``.

    Stationarity in ``q`` gives ``q* = 1 / (lambda D dOmega) - 1 / (2 beta - 1)``
    with ``dOmega = Omega_fd - Omega_hd``, clamped to ``[0, 1]``. It reaches one at
    ``d1 = (2 beta - 1) / (2 beta lambda dOmega)`` and zero at
    ``d2 = (2 beta - 1) / (lambda dOmega)``. With ``beta <= 1/2`` full-duplex never
    pays off and ``q* = 0`` for all ``D``.

    Returns:
        OptimalQ
    """
    validate(params)
    is_positive(d, "d")
    beta = beta_coeff(params)
    contrast = 2.0 * beta - 1.0
    if contrast <= 0.0:
        return OptimalQ(q_star=0.0, d1=0.0, d2=0.0, region="half")
    d_omega = (
        omega_fd(params.r, params.theta, params.alpha, cfg).value
        - omega_hd(params.r, params.theta, params.alpha)
    )
    d1 = contrast / (2.0 * beta * params.lam * d_omega)
    d2 = contrast / (params.lam * d_omega)
    if d <= d1:
        q_star = 1.0
    elif d >= d2:
        q_star = 0.0
    else:
        q_star = 1.0 / (params.lam * d * d_omega) - 1.0 / contrast
        q_star = min(max(q_star, 0.0), 1.0)
    if q_star == 1.0:
        region = "full"
    elif q_star == 0.0:
        region = "half"
    else:
        region = "intermediate"
    return OptimalQ(q_star=q_star, d1=d1, d2=d2, region=region)


def optimal_duration(params, q, cfg=None):
    """Duration ``D*`` maximizing :py:func:`throughput` at fixed ``q`` and the peak
    ``T*``.

    ``T*`` does not depend on ``lambda``; ``D*`` scales as ``1 / lambda``.

    Returns:
        tuple: ``(d_star, t_star)``.
    """
    omega = mixed_omega(params, q, cfg)
    beta = beta_coeff(params)
    d_star = 1.0 / (params.lam * omega)
    t_star = params.w * (1.0 + q * (2.0 * beta - 1.0)) / (math.e * omega)
    return d_star, t_star


def chi_gain(params, cfg=None):
    """Ratio ``2 beta / delta`` of the peak full-duplex-only throughput to the peak
    half-duplex-only throughput."""
    validate(params)
    return 2.0 * beta_coeff(params) / delta(params.theta, params.alpha, cfg)


def eta_min(r, theta, alpha):
    """Cancellation efficiency below which ``beta <= 1/2`` and full-duplex does not
    pay off, clamped at zero."""
    check_geometry(r, theta, alpha)
    return max(0.0, 1.0 - math.log(2.0) * r ** (-alpha) / theta)
