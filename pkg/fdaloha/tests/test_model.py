import json
import math

import pytest

from fdaloha.constants import REFERENCE_PARAMS
from fdaloha.exceptions import ParameterError
from fdaloha.model import (
    DuplexMix,
    DurationConfig,
    SystemParams,
    beta_coeff,
    load,
    validate,
    validate_durations,
    validate_mix,
)


def test_defaults_are_reference_set(reference_params):
    assert reference_params.to_dict() == REFERENCE_PARAMS
    assert validate(reference_params) is reference_params


@pytest.mark.parametrize(
    "changes,name",
    [
        ({"lam": 0.0}, "lambda"),
        ({"r": 0.5}, "r"),
        ({"alpha": 2.0}, "alpha"),
        ({"theta": -1.0}, "theta"),
        ({"eta": 1.1}, "eta"),
        ({"w": 0.0}, "w"),
        ({"alpha": math.nan}, "alpha"),
    ],
)
def test_validate_names_violated_invariant(changes, name):
    with pytest.raises(ParameterError, match=name):
        validate(SystemParams(**changes))


def test_validate_rejects_other_types():
    with pytest.raises(ParameterError, match="Expected SystemParams"):
        validate({"lambda": 0.05})


def test_replace_accepts_lambda_and_validates(reference_params):
    assert reference_params.replace(**{"lambda": 0.1}).lam == 0.1
    assert reference_params.replace(eta=0.5).eta == 0.5
    with pytest.raises(ParameterError, match="eta"):
        reference_params.replace(eta=2.0)


def test_validate_mix_and_durations():
    assert validate_mix(0.5) == 0.5
    assert validate_mix(DuplexMix(1.0)) == DuplexMix(1.0)
    with pytest.raises(ParameterError, match="q"):
        validate_mix(DuplexMix(1.5))
    with pytest.raises(ParameterError, match="gamma"):
        validate_durations(DurationConfig(1.0, 0.0))
    with pytest.raises(ParameterError, match="d must be"):
        validate_durations(DurationConfig(-1.0, 1.0))
    assert DurationConfig(2.0, 3.0).d_fd == 6.0


@pytest.mark.parametrize(
    "eta,expected", [(1.0, 1.0), (0.9, math.exp(-0.2)), (0.0, math.exp(-2.0))]
)
def test_beta_coeff(reference_params, eta, expected):
    assert beta_coeff(reference_params.replace(eta=eta)) == pytest.approx(expected)


def test_beta_coeff_scales_with_distance(reference_params):
    """Residual self-interference grows as r**alpha relative to the useful signal."""
    p = reference_params.replace(eta=0.99, r=2.0)
    assert beta_coeff(p) == pytest.approx(math.exp(-0.01 * 2.0 * 16.0))


def test_load(reference_params):
    assert load(reference_params, 0.0, DurationConfig(4.0)) == pytest.approx(0.2)
    assert load(reference_params, 0.5, DurationConfig(2.0, 3.0)) == pytest.approx(0.2)
    # gamma = 1 is the homogeneous load lambda D at every q
    assert load(reference_params, 0.7, DurationConfig(3.0)) == pytest.approx(0.15)


@pytest.mark.parametrize(
    "obj", [SystemParams(eta=0.9, r=1.5), DuplexMix(0.25), DurationConfig(2.0, 0.5)]
)
def test_json_round_trip(obj):
    assert type(obj).from_json(obj.to_json()) == obj


def test_json_uses_documented_field_names():
    d = json.loads(SystemParams().to_json())
    assert "lambda" in d and "lam" not in d


@pytest.mark.parametrize(
    "text,match",
    [
        ('{"lambda": 0.05, "beta": 1}', "Unknown field"),
        ("[1, 2]", "must be an object"),
        ("{lambda: 0.05}", "Invalid JSON"),
    ],
)
def test_from_json_errors(text, match):
    with pytest.raises(ParameterError, match=match):
        SystemParams.from_json(text)
