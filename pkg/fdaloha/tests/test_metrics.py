import math

import pytest

from fdaloha import analytic
from fdaloha.exceptions import KeywordError, ParameterError
from fdaloha.metrics import (
    ALL_METRICS,
    METRIC_ALIASES,
    Metric,
    get_metric,
    operating_point,
)
from fdaloha.model import SystemParams


def test_operating_point_defaults():
    point = operating_point()
    assert point.params == SystemParams()
    assert point.q == 0.0
    assert point.durations.d == 1.0
    assert point.durations.gamma == 1.0
    assert point.g == pytest.approx(0.05)


def test_operating_point_load_sets_duration():
    point = operating_point(load=0.2, q=0.5, gamma=2.0)
    assert point.durations.d == pytest.approx(0.2 / (0.05 * 1.5))
    assert point.g == pytest.approx(0.2)
    # load wins over d
    assert operating_point(load=0.2, d=9.0).durations.d == pytest.approx(4.0)


def test_operating_point_to_dict():
    d = operating_point(theta=4.0, q=0.25).to_dict()
    assert d["lambda"] == 0.05
    assert d["theta"] == 4.0
    assert d["q"] == 0.25
    assert d["d"] == 1.0


@pytest.mark.parametrize(
    "overrides,error",
    [
        ({"Q": 0.5}, KeywordError),
        ({"q": 1.5}, ParameterError),
        ({"alpha": 2.0}, ParameterError),
        ({"d": 0.0}, ParameterError),
    ],
)
def test_operating_point_rejects(overrides, error):
    with pytest.raises(error):
        operating_point(**overrides)


def test_get_metric_aliases():
    assert get_metric("T") is get_metric("throughput")
    assert get_metric("xi").name == "xi_ratio"
    for alias, name in METRIC_ALIASES.items():
        assert get_metric(alias).name == name
    metric = get_metric("delta")
    assert get_metric(metric) is metric


def test_get_metric_unknown():
    with pytest.raises(KeywordError, match="metric"):
        get_metric("goodput")


def test_metric_repr():
    assert "Name: throughput" in repr(get_metric("throughput"))
    assert "Alias: ['T']" in repr(get_metric("throughput"))


def test_custom_metric():
    metric = Metric("twice_q", lambda point, cfg: 2 * point.q)
    assert metric(operating_point(q=0.25)) == 0.5


@pytest.mark.parametrize("name", ALL_METRICS)
def test_every_metric_is_finite(name):
    value = get_metric(name)(operating_point(q=0.5, d=2.0))
    assert isinstance(value, float)
    assert math.isfinite(value)


def test_metrics_match_analytic():
    point = operating_point(q=0.5, d=2.0, eta=0.9)
    assert get_metric("throughput")(point) == pytest.approx(
        float(analytic.throughput(point.params, 0.5, 2.0))
    )
    assert get_metric("p_fd")(point) == pytest.approx(
        get_metric("beta")(point) * get_metric("p_hd")(point)
    )
    assert get_metric("G")(point) == pytest.approx(0.1)


def test_duration_metrics_at_reference():
    point = operating_point()
    assert get_metric("d_star")(point) == pytest.approx(2.14936, rel=1e-4)
    assert get_metric("t_star")(point) == pytest.approx(0.039535, rel=1e-4)
    assert get_metric("eta_min")(point) == pytest.approx(1 - math.log(2) / 2)
