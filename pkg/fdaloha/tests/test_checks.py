import math
import warnings

import numpy as np
import pytest

from fdaloha import set_options
from fdaloha.checks import (
    has_min_len,
    has_valid_windows,
    is_at_least,
    is_finite_number,
    is_greater_than,
    is_in_interval,
    is_in_list,
    is_positive,
    warn_if_low_replications,
    warn_if_small_window,
)
from fdaloha.exceptions import KeywordError, ParameterError, SimulationError


def test_is_in_list():
    assert is_in_list("figure", ["figure", "sweep"], "command")
    with pytest.raises(KeywordError, match="Specify command from"):
        is_in_list("plot", ["figure", "sweep"], "command")


@pytest.mark.parametrize("value", [math.nan, math.inf, "two", None, True])
def test_is_finite_number_rejects(value):
    with pytest.raises(ParameterError):
        is_finite_number(value, "theta")


def test_numeric_checks_accept_arrays():
    assert is_positive(np.array([0.1, 2.0]), "d")
    with pytest.raises(ParameterError, match="d must be > 0"):
        is_positive(np.array([0.1, 0.0]), "d")
    assert is_in_interval(np.linspace(0, 1, 5), 0, 1, "q")


@pytest.mark.parametrize(
    "check,args",
    [
        (is_positive, (0.0, "theta")),
        (is_greater_than, (2.0, 2, "alpha")),
        (is_at_least, (0.5, 1, "r")),
        (is_in_interval, (1.01, 0, 1, "eta")),
        (is_in_interval, (-0.01, 0, 1, "q")),
    ],
)
def test_numeric_checks_raise_naming_parameter(check, args):
    name = args[-1]
    with pytest.raises(ParameterError, match=name):
        check(*args)


def test_has_min_len():
    assert has_min_len([1, 2], 2, "metrics")
    with pytest.raises(ParameterError, match="at least 1 entries"):
        has_min_len([], 1, "metrics")


def test_has_valid_windows():
    assert has_valid_windows(warmup=30.0, measure_time=100.0, cycle=15.0)
    with pytest.raises(SimulationError, match="two renewal cycles"):
        has_valid_windows(warmup=29.0, measure_time=100.0, cycle=15.0)
    with pytest.raises(SimulationError, match="measure_time"):
        has_valid_windows(warmup=30.0, measure_time=0.0, cycle=15.0)


def test_warn_if_low_replications():
    with pytest.warns(UserWarning, match="replication"):
        assert warn_if_low_replications(1)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert not warn_if_low_replications(20)
        with set_options(warn_low_replications=False):
            assert not warn_if_low_replications(1)


@pytest.mark.parametrize(
    "window_side,alpha,warns",
    [(40.0, 4.0, False), (15.0, 4.0, True), (8.0, 4.0, True), (40.0, 2.5, True)],
)
def test_warn_if_small_window(window_side, alpha, warns):
    if warns:
        with pytest.warns(UserWarning, match="interference tail"):
            assert warn_if_small_window(window_side, 1.0, alpha)
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert not warn_if_small_window(window_side, 1.0, alpha)


def test_fdaloha_warnings_silences_small_window():
    with set_options(fdaloha_warnings=False):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert not warn_if_small_window(8.0, 1.0, 4.0)
