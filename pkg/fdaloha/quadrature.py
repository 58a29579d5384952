"""Tolerance-controlled numerical integration.

Finite integrals are delegated to the adaptive Gauss-Kronrod rule of
:py:func:`scipy.integrate.quad`; the semi-infinite range is mapped onto
``[0, 1)`` by ``u = t / (1 - t)``. The radial-angular double integrals of the
interference functionals are iterated 1-D integrals over ``u in [0, inf)`` and
``phi in [0, pi]``.
"""

import math
from dataclasses import dataclass, field

from scipy import integrate

from .constants import KERNEL_LIMIT_THRESHOLD
from .exceptions import ParameterError, QuadratureError
from .options import OPTIONS

# below this scaled argument the complement kernel uses its power series
_SERIES_THRESHOLD = 1e-3
_SERIES_TERMS = 7
# inner integrals of integrate_polar run this much tighter than the outer one
_INNER_TOL_FACTOR = 0.1


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances of an adaptive quadrature.

    Defaults are read from :py:data:`~fdaloha.options.OPTIONS` when the config is
    created, see :py:class:`~fdaloha.options.set_options`.

    Args:
        rel_tol (float): relative tolerance, default ``1e-8``.
        abs_tol (float): absolute tolerance, default ``1e-12``.
        max_depth (int): maximum number of subintervals of the adaptive
            subdivision, default ``50``.
    """

    rel_tol: float = field(default_factory=lambda: OPTIONS["rel_tol"])
    abs_tol: float = field(default_factory=lambda: OPTIONS["abs_tol"])
    max_depth: int = field(default_factory=lambda: OPTIONS["max_depth"])

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ParameterError(
                f"Tolerances must be > 0, found rel_tol={self.rel_tol}, "
                f"abs_tol={self.abs_tol}."
            )
        if not (isinstance(self.max_depth, int) and self.max_depth >= 1):
            raise ParameterError(
                f"max_depth must be a positive integer, found {self.max_depth}."
            )

    def tolerance(self, value):
        """Accepted absolute error for an integral of size ``value``."""
        return max(self.rel_tol * abs(value), self.abs_tol)


@dataclass(frozen=True)
class QuadResult:
    """Value of an integral with its absolute error estimate and the number of
    integrand evaluations spent."""

    value: float
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.abs_error_estimate < 0:
            raise ParameterError(
                f"abs_error_estimate must be >= 0, found {self.abs_error_estimate}."
            )

    def __float__(self):
        return float(self.value)


def _default(cfg):
    return QuadConfig() if cfg is None else cfg


def integrate_finite(f, a, b, cfg=None, points=None):
    """Integrate ``f`` over ``[a, b]``.

    Args:
        f (callable): real function of one real argument, finite on ``[a, b]``.
        a, b (float): integration bounds with ``a <= b``.
        cfg (QuadConfig, optional): tolerances. Defaults to ``QuadConfig()``.
        points (sequence, optional): interior points where ``f`` has kinks.

    Returns:
        QuadResult

    Raises:
        QuadratureError: if the error estimate stays above
            ``max(rel_tol * |value|, abs_tol)`` once ``max_depth`` subintervals
            are used.

    Example:
        >>> round(integrate_finite(math.sin, 0, math.pi).value, 10)
        2.0
    """
    cfg = _default(cfg)
    if not a <= b:
        raise ParameterError(f"Require a <= b, found a={a}, b={b}.")
    if a == b:
        return QuadResult(0.0, 0.0, 1)
    if points is not None:
        points = [p for p in points if a < p < b] or None
    out = integrate.quad(
        f,
        a,
        b,
        epsabs=cfg.abs_tol,
        epsrel=cfg.rel_tol,
        limit=cfg.max_depth,
        points=points,
        full_output=1,
    )
    value, abserr, info = out[0], out[1], out[2]
    if len(out) > 3 and abserr > cfg.tolerance(value):
        raise QuadratureError(
            f"Integral over [{a}, {b}] did not converge within {cfg.max_depth} "
            f"subintervals: value {value}, error estimate {abserr}. {out[3]}"
        )
    return QuadResult(float(value), float(abserr), int(info["neval"]))


def integrate_semi_infinite(f, cfg=None, points=None):
    """Integrate ``f`` over ``[0, inf)`` through the substitution ``u = t / (1 - t)``.

    ``f`` must decay faster than ``1/u``. Kinks listed in ``points`` are given in
    the original variable ``u``.

    Example:
        >>> round(integrate_semi_infinite(lambda u: math.exp(-u)).value, 8)
        1.0
    """

    def g(t):
        if t >= 1.0:
            return 0.0
        one_minus = 1.0 - t
        return f(t / one_minus) / (one_minus * one_minus)

    t_points = None if points is None else [p / (1.0 + p) for p in points if p > 0]
    return integrate_finite(g, 0.0, 1.0, cfg, points=t_points)


def log_ratio_kernel(x, y, s):
    """Kernel ``k(x, y, s) = (ln(1 + s x) - ln(1 + s y)) / (s (x - y))``.

    Within ``1e-9 * max(x, y, 1)`` of the diagonal the removable singularity is
    replaced by its limit ``1 / (1 + s x)``. The result lies in ``(0, 1]``.

    Example:
        >>> log_ratio_kernel(1.0, 0.0, 2.0)  # doctest: +ELLIPSIS
        0.5493...
    """
    if abs(x - y) <= KERNEL_LIMIT_THRESHOLD * max(x, y, 1.0):
        return 1.0 / (1.0 + s * x)
    a = s * x
    b = s * y
    return math.log1p((a - b) / (1.0 + b)) / (a - b)


def log_ratio_kernel_complement(x, y, s):
    """``1 - k(x, y, s)`` evaluated without cancellation.

    With ``h(z) = z - ln(1 + z)`` the complement is the divided difference
    ``(h(s x) - h(s y)) / (s x - s y)``. For small arguments the power series of
    ``h`` is differenced term by term.
    """
    a = s * x
    b = s * y
    if max(a, b) < _SERIES_THRESHOLD:
        # (a**n - b**n) / (a - b) by recurrence, no subtraction of close values
        total = 0.0
        diff_quotient = 1.0
        b_power = 1.0
        for n in range(2, _SERIES_TERMS + 1):
            b_power *= b
            diff_quotient = a * diff_quotient + b_power
            total += (-1) ** n * diff_quotient / n
        return total
    if abs(x - y) <= KERNEL_LIMIT_THRESHOLD * max(x, y, 1.0):
        return a / (1.0 + a)
    return 1.0 - math.log1p((a - b) / (1.0 + b)) / (a - b)


def integrate_polar(integrand, cfg=None, radial_points=None):
    """Iterated integral ``int_0^inf int_0^pi integrand(u, phi) dphi du``.

    The inner angular integral is computed for every radial node with tolerances
    ten times tighter than ``cfg``. The returned error estimate adds the outer
    error estimate and the largest relative error of any inner integral applied
    to the total.

    Args:
        integrand (callable): ``integrand(u, phi)``.
        cfg (QuadConfig, optional): tolerances of both levels.
        radial_points (sequence, optional): radii where the inner integral has
            a kink, e.g. ``u = r`` where the angular integrand becomes singular.

    Returns:
        QuadResult: ``evaluations`` counts integrand calls of both levels.
    """
    cfg = _default(cfg)
    # inner errors stay below the outer tolerance
    inner_cfg = QuadConfig(
        rel_tol=_INNER_TOL_FACTOR * cfg.rel_tol,
        abs_tol=_INNER_TOL_FACTOR * cfg.abs_tol,
        max_depth=cfg.max_depth,
    )
    state = {"evaluations": 0, "max_rel_error": 0.0}

    def radial(u):
        inner = integrate_finite(
            lambda phi: integrand(u, phi), 0.0, math.pi, inner_cfg
        )
        state["evaluations"] += inner.evaluations
        if inner.value != 0.0:
            state["max_rel_error"] = max(
                state["max_rel_error"], inner.abs_error_estimate / abs(inner.value)
            )
        return inner.value

    outer = integrate_semi_infinite(radial, cfg, points=radial_points)
    error = outer.abs_error_estimate + state["max_rel_error"] * abs(outer.value)
    return QuadResult(outer.value, error, state["evaluations"] + outer.evaluations)
