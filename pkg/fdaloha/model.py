"""Validated parameter types shared by every fdaloha computation.

All quantities are in normalized units: unit area, unit time and unit transmit
power ``P = 1``. The transmit power is not a field since the signal to
interference ratio does not depend on it once self-interference is modelled as
the residual ``(1 - eta) P``.
"""

import dataclasses
import json
import math
from dataclasses import dataclass

from .checks import (
    is_at_least,
    is_greater_than,
    is_in_interval,
    is_positive,
)
from .constants import REFERENCE_PARAMS
from .exceptions import ParameterError

# ``lambda`` is reserved in Python, JSON keeps the documented field name
_JSON_ALIASES = {"lam": "lambda"}


class JSONSerializable:
    """JSON (de)serialization with the documented field names."""

    def to_dict(self):
        return {
            _JSON_ALIASES.get(f.name, f.name): getattr(self, f.name)
            for f in dataclasses.fields(self)
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d):
        inverse = {v: k for k, v in _JSON_ALIASES.items()}
        names = {f.name for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, value in d.items():
            name = inverse.get(key, key)
            if name not in names:
                raise ParameterError(
                    f"Unknown field {key!r} for {cls.__name__}, "
                    f"expected {sorted(_JSON_ALIASES.get(n, n) for n in names)}."
                )
            kwargs[name] = value
        return cls(**kwargs)

    @classmethod
    def from_json(cls, s):
        try:
            d = json.loads(s)
        except json.JSONDecodeError as e:
            raise ParameterError(f"Invalid JSON for {cls.__name__}: {e}")
        if not isinstance(d, dict):
            raise ParameterError(f"{cls.__name__} JSON must be an object, got {d!r}.")
        return cls.from_dict(d)


@dataclass(frozen=True)
class SystemParams(JSONSerializable):
    """Physical and protocol parameters of the network.

    Args:
        lam (float): space-time link density, links per unit area per unit time.
        r (float): link distance within a cluster, ``r >= 1``.
        alpha (float): path-loss exponent, ``alpha > 2``.
        theta (float): SIR decoding threshold (linear), ``theta > 0``.
        eta (float): self-interference cancellation efficiency in ``[0, 1]``.
        w (float): information bitrate, ``w > 0``.
    """

    lam: float = REFERENCE_PARAMS["lambda"]
    r: float = REFERENCE_PARAMS["r"]
    alpha: float = REFERENCE_PARAMS["alpha"]
    theta: float = REFERENCE_PARAMS["theta"]
    eta: float = REFERENCE_PARAMS["eta"]
    w: float = REFERENCE_PARAMS["w"]

    def replace(self, **changes):
        """Copy with ``changes`` applied; ``lambda`` is accepted for ``lam``."""
        if "lambda" in changes:
            changes["lam"] = changes.pop("lambda")
        return validate(dataclasses.replace(self, **changes))


@dataclass(frozen=True)
class DuplexMix(JSONSerializable):
    """Fraction ``q`` of clusters operating in full-duplex."""

    q: float = 0.0


@dataclass(frozen=True)
class DurationConfig(JSONSerializable):
    """Half-duplex packet duration ``d`` and full-duplex duration ratio ``gamma``.

    A full-duplex exchange occupies the medium for ``gamma * d``; ``gamma = 1``
    is the homogeneous case.
    """

    d: float = 1.0
    gamma: float = 1.0

    @property
    def d_fd(self):
        return self.gamma * self.d


def validate(params):
    """Check every invariant of ``params`` and return it unchanged.

    Args:
        params (SystemParams): parameters to check.

    Returns:
        SystemParams: ``params`` if valid.

    Raises:
        ParameterError: naming the first violated invariant.
    """
    if not isinstance(params, SystemParams):
        raise ParameterError(f"Expected SystemParams, found {type(params)}.")
    is_positive(params.lam, "lambda")
    is_at_least(params.r, 1, "r")
    is_greater_than(params.alpha, 2, "alpha")
    is_positive(params.theta, "theta")
    is_in_interval(params.eta, 0, 1, "eta")
    is_positive(params.w, "w")
    return params


def validate_mix(mix):
    """Check ``0 <= q <= 1``; accepts a :py:class:`DuplexMix` or a bare ``q``."""
    q = mix.q if isinstance(mix, DuplexMix) else mix
    is_in_interval(q, 0, 1, "q")
    return mix


def validate_durations(durations):
    """Check ``d > 0`` and ``gamma > 0`` of a :py:class:`DurationConfig`."""
    if not isinstance(durations, DurationConfig):
        raise ParameterError(f"Expected DurationConfig, found {type(durations)}.")
    is_positive(durations.d, "d")
    is_positive(durations.gamma, "gamma")
    return durations


def beta_coeff(params):
    """Residual self-interference factor ``exp(-(1 - eta) theta r**alpha)``.

    Example:
        >>> beta_coeff(SystemParams(eta=0.9))  # doctest: +ELLIPSIS
        0.8187...
    """
    validate(params)
    return math.exp(-(1.0 - params.eta) * params.theta * params.r ** params.alpha)


def load(params, q, durations):
    """Network load ``G = lambda d (1 + q (gamma - 1))``.

    The average fraction of time the medium is occupied per unit area; ``lambda d``
    in the homogeneous case.
    """
    validate(params)
    validate_mix(q)
    validate_durations(durations)
    return params.lam * durations.d * (1.0 + q * (durations.gamma - 1.0))
