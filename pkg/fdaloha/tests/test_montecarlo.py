import math

import numpy as np
import pandas as pd
import pytest

from fdaloha.analytic import success_prob_hd, throughput
from fdaloha.exceptions import SimulationError
from fdaloha.model import DurationConfig
from fdaloha.montecarlo import (
    Schedule,
    SimConfig,
    Topology,
    cluster_state,
    counts_to_csv,
    draw_schedule,
    draw_topology,
    estimate_throughput,
    evaluate_packets,
    make_rngs,
    match_density,
    overlap_fraction,
    run_replication,
    snapshot,
    time_average_interference,
    torus_distance,
    validate_sim,
    validation_campaign,
)
from fdaloha.options import set_options


def test_match_density_conventions():
    assert match_density(0.05, 4.0, 14.0, convention="quoted") == pytest.approx(0.225)
    assert match_density(0.05, 1.0, 14.0, convention="quoted") == pytest.approx(0.75)
    assert match_density(0.05, 4.0, 14.0) == pytest.approx(0.55)
    assert match_density(0.05, 4.0, 14.0, gamma=2.0, q=0.5) == pytest.approx(0.65)
    with pytest.raises(SimulationError):
        match_density(0.05, 4.0, 14.0, convention="peak")


def test_torus_distance_wraps():
    assert torus_distance((0.0, 0.0), (39.0, 0.0), 40.0) == pytest.approx(1.0)
    assert torus_distance((1.0, 1.0), (39.0, 39.0), 40.0) == pytest.approx(
        math.sqrt(8.0)
    )
    assert torus_distance((3.0, 4.0), (0.0, 0.0), 40.0) == pytest.approx(5.0)


def test_overlap_fraction():
    assert overlap_fraction(0.0, 1.0, 0.5, 1.0) == pytest.approx(0.5)
    assert overlap_fraction(0.0, 2.0, 0.5, 1.0) == pytest.approx(0.5)
    assert overlap_fraction(0.0, 1.0, -2.0, 1.0) == 0.0
    assert overlap_fraction(0.0, 1.0, -1.0, 5.0) == 1.0


def test_time_average_interference():
    assert time_average_interference((0, 0), (0, 1), [], 4.0) == 0.0
    interferers = [((2.0, 0.0), 1.0, (0.5, 1.0)), ((0.0, 1.0), 2.0, (-3.0, 1.0))]
    assert time_average_interference((0, 0), (0, 1), interferers, 4.0) == (
        pytest.approx(0.5 * 2.0**-4)
    )
    wrapped = [((39.0, 0.0), 1.0, (0.0, 1.0))]
    assert time_average_interference((0, 0), (0, 1), wrapped, 4.0, 40.0) == (
        pytest.approx(1.0)
    )
    with pytest.raises(SimulationError):
        time_average_interference((0, 0), (0, 1), [((1, 0), -1.0, (0, 1))], 4.0)


@pytest.mark.parametrize(
    "changes",
    [
        {"window_side": 5.0},
        {"backoff_max": -1.0},
        {"replications": 0},
        {"warmup": 10.0},
        {"measure_time": 0.0},
    ],
)
def test_validate_sim_rejects(reference_params, changes):
    sim = SimConfig().replace(**changes)
    with pytest.raises(SimulationError):
        validate_sim(sim, reference_params, DurationConfig(1.0))


def test_validate_sim_warns_on_small_window(reference_params):
    sim = SimConfig(window_side=12.0)
    with pytest.warns(UserWarning, match="Torus"):
        validate_sim(sim, reference_params, DurationConfig(1.0))
    with set_options(warn_small_window=False):
        validate_sim(sim, reference_params, DurationConfig(1.0))


def test_sim_config_warmup_follows_durations():
    sim = SimConfig.default_for(DurationConfig(2.0, 3.0), backoff_max=4.0)
    assert sim.warmup == 2 * (6.0 + 4.0)
    assert SimConfig().for_durations(DurationConfig(8.0)).warmup == 2 * (8.0 + 14.0)
    assert SimConfig(warmup=100.0).for_durations(DurationConfig(1.0)).warmup == 100.0


def test_make_rngs_deterministic_and_independent():
    first = [rng.random(3) for rng in make_rngs(11)]
    second = [rng.random(3) for rng in make_rngs(11)]
    for a, b in zip(first, second):
        np.testing.assert_array_equal(a, b)
    assert not np.allclose(first[0], first[1])


def test_draw_topology():
    rng = np.random.default_rng(3)
    topo = draw_topology(0.5, 1.0, 20.0, rng)
    assert topo.centers.shape == (topo.n_clusters, 2)
    assert 100 < topo.n_clusters < 300
    assert np.all((topo.centers >= 0) & (topo.centers < 20.0))
    nodes = topo.node_positions()
    np.testing.assert_allclose(
        torus_distance(nodes[0::2], nodes[1::2], 20.0), 1.0, rtol=1e-12
    )


def test_draw_schedule_renewal_structure():
    rng = np.random.default_rng(5)
    durations = DurationConfig(1.0, 2.0)
    schedule = draw_schedule(3, 0.5, durations, 2.0, 50.0, rng)
    assert np.all(np.diff(schedule.start) >= 0)
    assert np.all(schedule.start < 50.0)
    np.testing.assert_array_equal(schedule.full_duplex, schedule.duration == 2.0)
    for c in range(3):
        mine = schedule.cluster == c
        start, end = schedule.start[mine], schedule.end[mine]
        gaps = start[1:] - end[:-1]
        assert np.all((gaps >= 0) & (gaps <= 2.0))


def test_draw_schedule_pure_modes():
    durations = DurationConfig(1.0, 3.0)
    half = draw_schedule(4, 0.0, durations, 1.0, 20.0, np.random.default_rng(0))
    full = draw_schedule(4, 1.0, durations, 1.0, 20.0, np.random.default_rng(0))
    assert not half.full_duplex.any()
    assert full.full_duplex.all()
    assert np.all(full.duration == 3.0)
    empty = draw_schedule(0, 0.5, durations, 1.0, 20.0, np.random.default_rng(0))
    assert len(empty) == 0


def test_cluster_state_phases():
    topology = Topology(
        centers=np.array([[1.0, 1.0]]), angles=np.array([0.5]), r=1.0, window_side=40.0
    )
    schedule = Schedule(
        cluster=np.array([0, 0]),
        start=np.array([0.0, 5.0]),
        duration=np.array([1.0, 1.0]),
        full_duplex=np.array([False, True]),
    )
    state = cluster_state(topology, schedule, 0, 0.5)
    assert state.phase == ("transmitting", 0.0, 1.0)
    assert state.mode == "half"
    assert state.center_position == (1.0, 1.0)
    assert cluster_state(topology, schedule, 0, 2.0).phase == ("backoff", 5.0)
    busy = cluster_state(topology, schedule, 0, 5.5)
    assert busy.mode == "full"
    assert busy.phase == ("transmitting", 5.0, 1.0)
    assert cluster_state(topology, schedule, 0, -1.0).phase == ("backoff", 0.0)
    assert cluster_state(topology, schedule, 0, 7.0).phase == ("backoff", math.inf)


def test_run_replication_deterministic(reference_params, small_sim):
    durations = DurationConfig(1.0)
    first = run_replication(reference_params, 0.5, durations, small_sim, 42)
    second = run_replication(reference_params, 0.5, durations, small_sim, 42)
    assert first == second
    assert first["seed"] == 42
    assert 0 < first["successes_hd"] + first["successes_fd"] <= first["attempts"]
    assert first["throughput"] == pytest.approx(
        first["bits"] / (small_sim.window_side**2 * small_sim.measure_time)
    )


def test_run_replication_half_duplex_only(reference_params, small_sim):
    counts = run_replication(reference_params, 0.0, DurationConfig(1.0), small_sim, 1)
    assert counts["successes_fd"] == 0
    assert counts["attempts"] > 0


def test_estimate_throughput_seeded(reference_params, single_rep_sim):
    durations = DurationConfig(1.0)
    with pytest.warns(UserWarning, match="replication"):
        est = estimate_throughput(reference_params, 0.0, durations, single_rep_sim)
    again = estimate_throughput(reference_params, 0.0, durations, single_rep_sim)
    assert est == again
    assert est.throughput_stderr == math.inf
    assert est.counts.sizes["replication"] == 1
    assert 0 < est.success_rate <= 1


def test_counts_to_csv(reference_params, single_rep_sim, tmp_path):
    est = estimate_throughput(
        reference_params, 0.0, DurationConfig(1.0), single_rep_sim
    )
    path = counts_to_csv(est, tmp_path / "counts.csv")
    df = pd.read_csv(path, index_col="replication")
    assert len(df) == 1
    assert df["attempts"].iloc[0] == est.attempts


@pytest.mark.slow
def test_estimate_close_to_analytic(reference_params, small_sim):
    durations = DurationConfig(1.0)
    est = estimate_throughput(reference_params, 0.0, durations, small_sim)
    reference = float(throughput(reference_params, 0.0, 1.0))
    assert 0 < est.throughput_stderr < est.throughput_mean
    assert 0.7 < est.throughput_mean / reference < 1.3


def test_validation_campaign_low_power(reference_params, single_rep_sim):
    report = validation_campaign(
        reference_params, single_rep_sim, fractions=[0.0], durations=[1.0, 2.0]
    )
    assert report.analytic.dims == ("q", "D")
    assert report.attrs["low_power"] is True
    assert report.attrs["failed_cells"] == 0
    assert report.attrs["cells_within_expected"] == 0
    assert np.isnan(report.z).all()
    assert float(report.analytic.sel(q=0.0, D=1.0)) == pytest.approx(
        float(throughput(reference_params, 0.0, 1.0))
    )


def test_cancellation_irrelevant_without_full_duplex(reference_params, small_sim):
    durations = DurationConfig(2.0)
    perfect = run_replication(reference_params, 0.0, durations, small_sim, 3)
    leaky = run_replication(
        reference_params.replace(eta=0.5), 0.0, durations, small_sim, 3
    )
    assert perfect == leaky


def test_counts_invariant_under_torus_translation(reference_params, small_sim):
    durations = DurationConfig(1.0)
    topo_rng, schedule_rng, _ = make_rngs(11)
    lam_prime = match_density(
        reference_params.lam, 1.0, small_sim.backoff_max, q=0.5
    )
    topology = draw_topology(
        lam_prime, reference_params.r, small_sim.window_side, topo_rng
    )
    schedule = draw_schedule(
        topology.n_clusters,
        0.5,
        durations,
        small_sim.backoff_max,
        small_sim.warmup + small_sim.measure_time,
        schedule_rng,
    )
    counts = evaluate_packets(
        topology, schedule, reference_params, small_sim, make_rngs(11)[2]
    )
    moved = evaluate_packets(
        topology.shifted((7.3, 11.1)),
        schedule,
        reference_params,
        small_sim,
        make_rngs(11)[2],
    )
    assert counts["attempts"] > 0
    assert moved["attempts"] == counts["attempts"]
    assert moved["successes_hd"] == counts["successes_hd"]
    assert moved["successes_fd"] == counts["successes_fd"]
    assert moved["bits"] == pytest.approx(counts["bits"])


def test_short_full_duplex_matches_homogeneous(reference_params, small_sim):
    # all clusters full-duplex: d = 2 with gamma = 0.5 sends packets of length 1
    short = DurationConfig(2.0, 0.5)
    sim = small_sim.for_durations(short)
    hetero = run_replication(reference_params, 1.0, short, sim, 5)
    homogeneous = run_replication(reference_params, 1.0, DurationConfig(1.0), sim, 5)
    assert hetero == homogeneous


def test_snapshot_counts_clusters_on_air(reference_params, small_sim):
    durations = DurationConfig(4.0)
    sim = small_sim.for_durations(durations)
    est = estimate_throughput(reference_params, 0.0, durations, sim)
    on_air = est.counts["transmitting"].values / sim.window_side**2
    # packet density lambda times the time a packet stays on air
    assert on_air.mean() == pytest.approx(reference_params.lam * 4.0, rel=0.25)

    topology = Topology(
        centers=np.array([[1.0, 1.0], [5.0, 5.0]]),
        angles=np.array([0.0, 1.0]),
        r=1.0,
        window_side=40.0,
    )
    schedule = Schedule(
        cluster=np.array([0, 1]),
        start=np.array([0.0, 3.0]),
        duration=np.array([2.0, 2.0]),
        full_duplex=np.array([False, True]),
    )
    states = snapshot(topology, schedule, 1.0)
    assert [s.phase[0] for s in states] == ["transmitting", "backoff"]
    assert states[1].mode == "full"


def test_stderr_is_standard_error_of_replications(reference_params, small_sim):
    est = estimate_throughput(reference_params, 0.5, DurationConfig(1.0), small_sim)
    samples = est.counts["throughput"].values
    assert est.throughput_stderr == pytest.approx(
        np.std(samples, ddof=1) / math.sqrt(samples.size)
    )


@pytest.mark.slow
def test_stderr_shrinks_with_replications(reference_params, small_sim):
    durations = DurationConfig(1.0)
    sim = small_sim.replace(measure_time=20.0, replications=8)
    few = estimate_throughput(reference_params, 0.0, durations, sim)
    many = estimate_throughput(
        reference_params, 0.0, durations, sim.replace(replications=32)
    )
    # four times the replications halves the standard error
    assert 1.2 < few.throughput_stderr / many.throughput_stderr < 3.4


@pytest.mark.slow
@pytest.mark.parametrize("d", [1.0, 4.0])
def test_half_duplex_success_rate(reference_params, small_sim, d):
    durations = DurationConfig(d)
    est = estimate_throughput(
        reference_params, 0.0, durations, small_sim.for_durations(durations)
    )
    expected = float(success_prob_hd(reference_params, 0.0, d))
    assert est.success_rate == pytest.approx(expected, abs=0.05)


@pytest.mark.slow
def test_validation_campaign_reference_grid(reference_params):
    report = validation_campaign(reference_params, SimConfig())
    assert dict(report.sizes) == {"q": 3, "D": 5}
    assert report.attrs["low_power"] is False
    assert report.attrs["failed_cells"] == 0
    assert report.attrs["cells_within_expected"] >= 14
    pure = report.z.sel(q=[0.0, 1.0], D=[1.0, 4.0])
    assert (np.abs(pure) <= 3).all()
