"""Scalar metrics evaluated along a sweep.

Every metric is a :py:class:`Metric` wrapping a function of one
:py:class:`OperatingPoint` and the quadrature configuration. Look them up by name
with :py:func:`get_metric`.
"""

from dataclasses import dataclass
from typing import Callable, List, Optional

from . import analytic, hetero, slotted
from .checks import is_in_list
from .model import (
    DurationConfig,
    SystemParams,
    beta_coeff,
    load,
    validate_durations,
    validate_mix,
)

# keys accepted by ``operating_point`` besides the SystemParams fields
PARAM_KEYS = ["lambda", "r", "alpha", "theta", "eta", "w"]
POINT_KEYS = PARAM_KEYS + ["q", "d", "gamma", "load"]


@dataclass(frozen=True)
class OperatingPoint:
    """System parameters, full-duplex fraction and durations of one evaluation."""

    params: SystemParams
    q: float
    durations: DurationConfig

    @property
    def g(self):
        return load(self.params, self.q, self.durations)

    def to_dict(self):
        return {
            **self.params.to_dict(),
            "q": self.q,
            **self.durations.to_dict(),
        }


def operating_point(**overrides):
    """Build an :py:class:`OperatingPoint` from the reference set and ``overrides``.

    ``load`` takes precedence over ``d``: the half-duplex duration is then
    ``G / (lambda (1 + q (gamma - 1)))``.

    Example:
        >>> operating_point(load=0.2).durations.d  # doctest: +ELLIPSIS
        4.0...
    """
    for key in overrides:
        is_in_list(key, POINT_KEYS, "operating point key")
    params = SystemParams().replace(
        **{k: float(v) for k, v in overrides.items() if k in PARAM_KEYS}
    )
    q = float(overrides.get("q", 0.0))
    validate_mix(q)
    gamma = float(overrides.get("gamma", 1.0))
    if "load" in overrides:
        d = float(overrides["load"]) / (params.lam * (1.0 + q * (gamma - 1.0)))
    else:
        d = float(overrides.get("d", 1.0))
    return OperatingPoint(params, q, validate_durations(DurationConfig(d, gamma)))


class Metric:
    """Master class for all sweep metrics."""

    def __init__(
        self,
        name: str,
        function: Callable,
        long_name: Optional[str] = None,
        aliases: Optional[List[str]] = None,
        units: str = "1",
    ):
        """Metric initialization.

        Args:
            name: name of metric, used as the column name of the curve.
            function: ``function(point, cfg)`` returning a float.
            long_name: long name of metric. Defaults to ``None``.
            aliases: Allowed aliases for this metric. Defaults to ``None``.
            units: units of the metric. Defaults to ``"1"``.
        """
        self.name = name
        self.function = function
        self.long_name = long_name
        self.aliases = aliases
        self.units = units

    def __call__(self, point, cfg=None):
        return float(self.function(point, cfg))

    def __repr__(self) -> str:
        """Show metadata of metric class."""
        summary = "----- Metric metadata -----\n"
        summary += f"Name: {self.name}\n"
        summary += f"Alias: {self.aliases}\n"
        summary += f"long_name: {self.long_name}\n"
        summary += f"units: {self.units}\n"
        summary += f"Function: {self.function.__doc__}\n"
        return summary


def _throughput(point, cfg):
    """Homogeneous throughput density at duration ``D``."""
    return analytic.throughput(point.params, point.q, point.durations.d, cfg)


__throughput = Metric(
    name="throughput",
    function=_throughput,
    long_name="Throughput density, equal durations",
    aliases=["T"],
    units="bits per unit time and area",
)


def _success_prob_hd(point, cfg):
    """Success probability of a half-duplex reception."""
    return analytic.success_prob_hd(point.params, point.q, point.durations.d, cfg)


__success_prob_hd = Metric(
    name="success_prob_hd",
    function=_success_prob_hd,
    long_name="Half-duplex success probability",
    aliases=["p_hd"],
)


def _success_prob_fd(point, cfg):
    """Success probability of a full-duplex reception."""
    return analytic.success_prob_fd(point.params, point.q, point.durations.d, cfg)


__success_prob_fd = Metric(
    name="success_prob_fd",
    function=_success_prob_fd,
    long_name="Full-duplex success probability",
    aliases=["p_fd"],
)


def _load(point, cfg):
    """Network load ``G``."""
    return point.g


__load = Metric(name="load", function=_load, long_name="Network load", aliases=["G"])


def _beta(point, cfg):
    """Residual self-interference factor."""
    return beta_coeff(point.params)


__beta = Metric(name="beta", function=_beta, long_name="Self-interference factor")


def _omega_hd(point, cfg):
    """Half-duplex interference functional."""
    p = point.params
    return analytic.omega_hd(p.r, p.theta, p.alpha)


__omega_hd = Metric(
    name="omega_hd", function=_omega_hd, long_name="Half-duplex functional"
)


def _omega_fd(point, cfg):
    """Full-duplex interference functional."""
    p = point.params
    return analytic.omega_fd(p.r, p.theta, p.alpha, cfg).value


__omega_fd = Metric(
    name="omega_fd", function=_omega_fd, long_name="Full-duplex functional"
)


def _delta(point, cfg):
    """Ratio of the full- to the half-duplex functional."""
    return analytic.delta(point.params.theta, point.params.alpha, cfg)


__delta = Metric(name="delta", function=_delta, long_name="Functional ratio")


def _q_star(point, cfg):
    """Throughput-maximizing full-duplex fraction at duration ``D``."""
    return analytic.optimal_q(point.params, point.durations.d, cfg).q_star


__q_star = Metric(
    name="q_star", function=_q_star, long_name="Optimal full-duplex fraction"
)


def _d_star(point, cfg):
    """Throughput-maximizing duration at fraction ``q``."""
    return analytic.optimal_duration(point.params, point.q, cfg)[0]


__d_star = Metric(name="d_star", function=_d_star, long_name="Optimal duration")


def _t_star(point, cfg):
    """Peak throughput density over the duration at fraction ``q``."""
    return analytic.optimal_duration(point.params, point.q, cfg)[1]


__t_star = Metric(name="t_star", function=_t_star, long_name="Peak throughput")


def _chi_gain(point, cfg):
    """Peak full-duplex-only over peak half-duplex-only throughput."""
    return analytic.chi_gain(point.params, cfg)


__chi_gain = Metric(
    name="chi_gain", function=_chi_gain, long_name="Full-duplex gain", aliases=["chi"]
)


def _eta_min(point, cfg):
    """Cancellation efficiency below which full-duplex never pays off."""
    p = point.params
    return analytic.eta_min(p.r, p.theta, p.alpha)


__eta_min = Metric(
    name="eta_min", function=_eta_min, long_name="Minimum cancellation efficiency"
)


def _throughput_hetero(point, cfg):
    """Throughput density with full-duplex duration ``gamma D``."""
    return hetero.throughput_hetero(point.params, point.q, point.durations, cfg)


__throughput_hetero = Metric(
    name="throughput_hetero",
    function=_throughput_hetero,
    long_name="Throughput density, different durations",
    units="bits per unit time and area",
)


def _omega_hd_prime(point, cfg):
    """Impact of half-duplex interferers on a full-duplex reception."""
    p = point.params
    return hetero.omega_hd_prime(p.r, p.theta, p.alpha, point.durations.gamma)


__omega_hd_prime = Metric(
    name="omega_hd_prime",
    function=_omega_hd_prime,
    long_name="Half-duplex functional, different durations",
)


def _omega_fd_prime(point, cfg):
    """Impact of full-duplex interferers on a half-duplex reception."""
    p = point.params
    gamma = point.durations.gamma
    return hetero.omega_fd_prime(p.r, p.theta, p.alpha, gamma, cfg).value


__omega_fd_prime = Metric(
    name="omega_fd_prime",
    function=_omega_fd_prime,
    long_name="Full-duplex functional, different durations",
)


def _gamma_star(point, cfg):
    """Throughput-maximizing duration ratio at half-duplex duration ``D``."""
    return hetero.gamma_star(
        point.params, point.q, point.durations.d, cfg, allow_boundary=True
    )


__gamma_star = Metric(
    name="gamma_star", function=_gamma_star, long_name="Optimal duration ratio"
)


def _optimized_throughput(point, cfg):
    """Throughput density of the best duration pair at load ``G``."""
    return hetero.optimize_duration_pair(
        point.params, point.q, point.g, cfg, allow_boundary=True
    ).throughput


__optimized_throughput = Metric(
    name="optimized_throughput",
    function=_optimized_throughput,
    long_name="Throughput density, optimized durations",
    units="bits per unit time and area",
)


def _throughput_slotted(point, cfg):
    """Slotted throughput density at load ``G``."""
    return slotted.throughput_slotted(point.params, point.q, point.g, cfg)


__throughput_slotted = Metric(
    name="throughput_slotted",
    function=_throughput_slotted,
    long_name="Slotted throughput density",
    units="bits per unit time and area",
)


def _xi_ratio(point, cfg):
    """Unslotted over slotted throughput at load ``G``, equal durations."""
    return slotted.xi_ratio(point.params, point.q, point.g, "homogeneous", cfg)


__xi_ratio = Metric(
    name="xi_ratio",
    function=_xi_ratio,
    long_name="Unslotted to slotted throughput ratio",
    aliases=["xi"],
)


def _xi_ratio_hetero(point, cfg):
    """Unslotted over slotted throughput at load ``G``, optimized durations."""
    return slotted.xi_ratio(
        point.params, point.q, point.g, "optimized_hetero", cfg, allow_boundary=True
    )


__xi_ratio_hetero = Metric(
    name="xi_ratio_hetero",
    function=_xi_ratio_hetero,
    long_name="Unslotted to slotted throughput ratio, optimized durations",
    aliases=["xi_hetero"],
)


__ALL_METRICS__ = [
    __throughput,
    __success_prob_hd,
    __success_prob_fd,
    __load,
    __beta,
    __omega_hd,
    __omega_fd,
    __delta,
    __q_star,
    __d_star,
    __t_star,
    __chi_gain,
    __eta_min,
    __throughput_hetero,
    __omega_hd_prime,
    __omega_fd_prime,
    __gamma_star,
    __optimized_throughput,
    __throughput_slotted,
    __xi_ratio,
    __xi_ratio_hetero,
]

METRICS = {m.name: m for m in __ALL_METRICS__}
METRIC_ALIASES = dict()
for m in __ALL_METRICS__:
    if m.aliases is not None:
        for a in m.aliases:
            METRIC_ALIASES[a] = m.name

ALL_METRICS = [m.name for m in __ALL_METRICS__]


def get_metric(metric):
    """Convert a metric name or alias to its :py:class:`Metric`.

    Raises:
        KeywordError: if ``metric`` names no metric.
    """
    if isinstance(metric, Metric):
        return metric
    is_in_list(metric, ALL_METRICS + list(METRIC_ALIASES), "metric")
    return METRICS[METRIC_ALIASES.get(metric, metric)]
