import math

import numpy as np
import pytest

from fdaloha.analytic import omega_fd, omega_hd
from fdaloha.exceptions import KeywordError, ParameterError
from fdaloha.slotted import (
    blocking_probability,
    omega_fd_slotted,
    omega_gap,
    omega_hd_slotted,
    slotted_omega_set,
    throughput_slotted,
    xi_ratio,
    xi_ratio_optimized,
)

C_REF = 6.978865


def test_omega_hd_slotted_is_interference_constant():
    assert omega_hd_slotted(1.0, 2.0, 4.0) == pytest.approx(C_REF, rel=1e-6)


@pytest.mark.parametrize("alpha", [2.5, 4.0, 6.0])
def test_omega_gap(alpha):
    gap = omega_hd(1.0, 2.0, alpha) - omega_hd_slotted(1.0, 2.0, alpha)
    assert omega_gap(1.0, 2.0, alpha) == pytest.approx(gap)
    assert gap > 0


def test_blocking_probability():
    assert blocking_probability(0.0, 0.0) == 0.0
    assert blocking_probability(1.0, 1.0) == pytest.approx(0.75)
    assert blocking_probability(math.inf, 0.5) == 1.0
    # small arguments keep their relative accuracy
    assert blocking_probability(1e-12, 1e-12) == pytest.approx(2e-12)


def test_omega_fd_slotted_between_bounds(quad_config):
    hd_s = omega_hd_slotted(1.0, 2.0, 4.0)
    fd_s = omega_fd_slotted(1.0, 2.0, 4.0, quad_config).value
    assert hd_s < fd_s < 2.0 * hd_s
    assert fd_s < omega_fd(1.0, 2.0, 4.0, quad_config).value


def test_slotted_omega_set(reference_params):
    s = slotted_omega_set(reference_params)
    assert s.omega_hd_s == pytest.approx(C_REF, rel=1e-6)
    assert s.omega_fd_s > s.omega_hd_s


def test_throughput_slotted_peak(reference_params):
    g = np.linspace(0.01, 0.5, 491)
    t = throughput_slotted(reference_params, 0.0, g)
    assert g[np.argmax(t)] == pytest.approx(1.0 / C_REF, abs=1e-3)
    assert t.max() == pytest.approx(1.0 / (math.e * C_REF), rel=1e-4)


def test_throughput_slotted_rejects_bad_load(reference_params):
    with pytest.raises(ParameterError):
        throughput_slotted(reference_params, 0.0, 0.0)
    with pytest.raises(ParameterError):
        throughput_slotted(reference_params, 1.5, 0.2)


@pytest.mark.parametrize("g,expected", [(0.05, 0.89019), (0.35, 0.44300)])
def test_xi_ratio_half_duplex(reference_params, g, expected):
    xi = xi_ratio(reference_params, 0.0, g)
    assert xi == pytest.approx(expected, rel=1e-4)
    assert xi == pytest.approx(math.exp(-g * omega_gap(1.0, 2.0, 4.0)))


@pytest.mark.parametrize("q", [0.0, 0.5, 1.0])
def test_xi_ratio_below_one(reference_params, q):
    for g in [0.05, 0.2, 0.5]:
        assert 0.0 < xi_ratio(reference_params, q, g) < 1.0


def test_xi_ratio_optimized_durations_not_worse(reference_params):
    hom = xi_ratio(reference_params, 0.5, 0.05)
    opt = xi_ratio(
        reference_params, 0.5, 0.05, "optimized_hetero", allow_boundary=True
    )
    assert opt >= hom * (1 - 1e-6)


def test_xi_ratio_unknown_mode(reference_params):
    with pytest.raises(KeywordError):
        xi_ratio(reference_params, 0.5, 0.2, mode="slotted")


def test_omega_fd_slotted_scales_with_r_squared(quad_config):
    base = omega_fd_slotted(1.0, 2.0, 4.0, quad_config).value
    assert omega_fd_slotted(2.0, 2.0, 4.0, quad_config).value == pytest.approx(
        4.0 * base, rel=1e-6
    )


def test_xi_ratio_optimized_carries_optimum(reference_params):
    xi, opt = xi_ratio_optimized(reference_params, 0.5, 0.05, allow_boundary=True)
    assert xi == xi_ratio(
        reference_params, 0.5, 0.05, "optimized_hetero", allow_boundary=True
    )
    assert xi == pytest.approx(
        opt.throughput / float(throughput_slotted(reference_params, 0.5, 0.05))
    )
    assert opt.load == 0.05
    assert not opt.on_boundary
