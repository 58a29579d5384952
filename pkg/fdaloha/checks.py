"""Common checks for fdaloha operations."""

import warnings

import numpy as np

from .constants import MIN_REPLICATIONS_FOR_POWER
from .exceptions import KeywordError, ParameterError, SimulationError
from .options import OPTIONS


# --------------------------------------#
# CHECKS
# --------------------------------------#
def is_in_list(item, list_, kind):
    """Check whether an item is in a list; kind is just a string."""
    if item not in list_:
        raise KeywordError(f"Specify {kind} from {list_}: got {item}")
    return True


def is_finite_number(value, name):
    """Check that ``value`` (a number or an array of numbers) is real and finite."""
    if isinstance(value, bool):
        raise ParameterError(f"{name} must be a real number, found {value!r}.")
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be a real number, found {value!r}.")
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{name} must be finite, found {value}.")
    return True


def is_positive(value, name):
    """Check that ``value`` is strictly positive."""
    is_finite_number(value, name)
    if not np.all(np.asarray(value) > 0):
        raise ParameterError(f"{name} must be > 0, found {value}.")
    return True


def is_greater_than(value, bound, name):
    """Check that ``value`` is strictly larger than ``bound``."""
    is_finite_number(value, name)
    if not np.all(np.asarray(value) > bound):
        raise ParameterError(f"{name} must be > {bound}, found {value}.")
    return True


def is_at_least(value, bound, name):
    """Check that ``value`` is not smaller than ``bound``."""
    is_finite_number(value, name)
    if not np.all(np.asarray(value) >= bound):
        raise ParameterError(f"{name} must be >= {bound}, found {value}.")
    return True


def is_in_interval(value, lower, upper, name):
    """Check that ``lower <= value <= upper``."""
    is_finite_number(value, name)
    arr = np.asarray(value)
    if not np.all((lower <= arr) & (arr <= upper)):
        raise ParameterError(
            f"{name} must be in [{lower}, {upper}], found {value}."
        )
    return True


def has_min_len(arr, len_, kind):
    """Check that the array is at least the specified length."""
    arr_len = len(arr)
    if arr_len < len_:
        raise ParameterError(
            f"Your {kind} must have at least {len_} entries, "
            f"but has only length {arr_len}!"
        )
    return True


def has_valid_windows(warmup, measure_time, cycle):
    """Check that the simulator windows leave room for a stationary measurement."""
    if not measure_time > 0:
        raise SimulationError(f"measure_time must be > 0, found {measure_time}.")
    if warmup < 2 * cycle:
        raise SimulationError(
            f"warmup must be at least two renewal cycles 2(D+B) = {2 * cycle}, "
            f"found {warmup}."
        )
    return True


# --------------------------------------#
# WARNINGS
# --------------------------------------#
def warn_if_low_replications(replications):
    """Warn when a standard error rests on too few replications."""
    if OPTIONS["warn_low_replications"] and replications < MIN_REPLICATIONS_FOR_POWER:
        warnings.warn(
            f"Only {replications} replication(s): the standard error is not "
            f"resolved, consider at least {MIN_REPLICATIONS_FOR_POWER}.",
            UserWarning,
        )
        return True
    return False


def warn_if_small_window(window_side, r, alpha):
    """Warn when the torus truncates a noticeable share of the interference tail.

    The missing far interference scales as ``L**(2 - alpha)``; windows shorter
    than ten link distances, or with a truncated share above one percent, are
    flagged.
    """
    if not OPTIONS["warn_small_window"]:
        return False
    truncated = (window_side / (2 * r)) ** (2 - alpha)
    if window_side < 10 * r or truncated > 1e-2:
        warnings.warn(
            f"Torus side L={window_side} is small for r={r}, alpha={alpha}: "
            f"roughly {truncated:.1%} of the interference tail is cut off.",
            UserWarning,
        )
        return True
    return False
