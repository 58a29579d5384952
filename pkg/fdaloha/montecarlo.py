"""Event-level simulation of renewal Aloha on a torus.

Clusters are scattered as a Poisson point process of density ``lambda'`` on an
``L x L`` torus. Every cluster alternates packets and uniform backoffs in
``[0, B]``; the duplex mode is redrawn at every transmission start. A packet is
received successfully iff its Rayleigh-faded signal exceeds ``theta`` times the
time-averaged interference (plus the residual self-interference ``1 - eta`` at
full-duplex receivers).

Each replication is single-threaded and deterministic given its seed;
replications are evaluated concurrently with :py:mod:`dask`.
"""

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Optional

import dask
import numpy as np
import xarray as xr

from .analytic import throughput
from .checks import (
    has_valid_windows,
    is_at_least,
    is_in_interval,
    is_positive,
    warn_if_low_replications,
    warn_if_small_window,
)
from .constants import (
    MIN_REPLICATIONS_FOR_POWER,
    REFERENCE_BACKOFF,
    REFERENCE_DURATIONS,
    REFERENCE_FRACTIONS,
    REFERENCE_WINDOW,
    VALIDATION_Z_EXPECTED,
    VALIDATION_Z_FAIL,
)
from .curves import curve_metadata, make_curve
from .exceptions import SimulationError
from .logging import log_replication, log_validation_cell
from .model import DurationConfig, JSONSerializable, validate, validate_durations
from .options import OPTIONS

try:
    from tqdm.auto import tqdm
except ImportError:
    tqdm = None

MEASURE_TIME = 200.0
REPLICATIONS = 20
VALID_DENSITY_CONVENTIONS = ["mean_cycle", "quoted"]
_NO_KEYS = np.array([], dtype=int)


@dataclass(frozen=True)
class SimConfig(JSONSerializable):
    """Geometry, protocol and replication plan of a simulation campaign.

    Args:
        window_side (float): side ``L`` of the square torus, ``L > 10 r``.
        backoff_max (float): maximum backoff ``B``.
        warmup (float): time before measurement starts, ``>= 2 (D + B)`` for the
            longest packet duration ``D``.
        measure_time (float): measurement horizon.
        replications (int): number of independent replications.
        base_seed (int): replication ``i`` uses seed ``base_seed + i``.
    """

    window_side: float = REFERENCE_WINDOW
    backoff_max: float = REFERENCE_BACKOFF
    warmup: float = 2 * (1.0 + REFERENCE_BACKOFF)
    measure_time: float = MEASURE_TIME
    replications: int = REPLICATIONS
    base_seed: int = 0

    @classmethod
    def default_for(
        cls,
        durations,
        backoff_max=REFERENCE_BACKOFF,
        window_side=REFERENCE_WINDOW,
        measure_time=MEASURE_TIME,
        replications=REPLICATIONS,
        base_seed=0,
    ):
        """Config with the shortest admissible warmup for ``durations``."""
        validate_durations(durations)
        longest = max(durations.d, durations.d_fd)
        return cls(
            window_side=window_side,
            backoff_max=backoff_max,
            warmup=2.0 * (longest + backoff_max),
            measure_time=measure_time,
            replications=replications,
            base_seed=base_seed,
        )

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def for_durations(self, durations):
        """Copy whose warmup covers at least two renewal cycles of ``durations``."""
        validate_durations(durations)
        longest = max(durations.d, durations.d_fd)
        return self.replace(
            warmup=max(self.warmup, 2.0 * (longest + self.backoff_max))
        )


@dataclass(frozen=True)
class ClusterState:
    """State of one cluster at a given time.

    ``phase`` is ``("transmitting", start, duration)`` or ``("backoff", until)``.
    """

    center_position: tuple
    companion_angle: float
    mode: str
    phase: tuple


@dataclass(frozen=True)
class SimEstimate:
    """Mean throughput over replications with its standard error.

    ``throughput_stderr`` is ``inf`` for a single replication. ``counts`` holds the
    per-replication counts along dimension ``replication``.
    """

    throughput_mean: float
    throughput_stderr: float
    attempts: int
    successes_hd: int
    successes_fd: int
    counts: Optional[xr.Dataset] = field(default=None, compare=False, repr=False)

    @property
    def success_rate(self):
        successes = self.successes_hd + self.successes_fd
        return successes / self.attempts if self.attempts else math.nan


@dataclass(frozen=True)
class Topology:
    """Cluster centers on the torus and the angles of their companion nodes."""

    centers: np.ndarray
    angles: np.ndarray
    r: float
    window_side: float

    @property
    def n_clusters(self):
        return len(self.angles)

    @property
    def companions(self):
        offset = self.r * np.column_stack([np.cos(self.angles), np.sin(self.angles)])
        return np.mod(self.centers + offset, self.window_side)

    def node_positions(self):
        """Positions of all nodes; node ``2 c`` is the center of cluster ``c``,
        node ``2 c + 1`` its companion."""
        nodes = np.empty((2 * self.n_clusters, 2))
        nodes[0::2] = self.centers
        nodes[1::2] = self.companions
        return nodes

    def shifted(self, vector):
        """Topology translated by ``vector`` on the torus."""
        return dataclasses.replace(
            self, centers=np.mod(self.centers + np.asarray(vector), self.window_side)
        )


@dataclass(frozen=True)
class Schedule:
    """All packets of a replication sorted by start time."""

    cluster: np.ndarray
    start: np.ndarray
    duration: np.ndarray
    full_duplex: np.ndarray

    @property
    def end(self):
        return self.start + self.duration

    def __len__(self):
        return len(self.start)


def match_density(lam, d, b, gamma=1.0, q=0.0, convention="mean_cycle"):
    """Cluster density ``lambda'`` whose renewal traffic matches the packet density
    ``lam``.

    Args:
        lam (float): space-time packet density of the analytical model.
        d (float): half-duplex packet duration.
        b (float): maximum backoff ``B``.
        gamma (float): full-duplex duration ratio.
        q (float): full-duplex fraction, sets the mean duration
            ``d (1 + q (gamma - 1))``.
        convention (str): ``"mean_cycle"`` divides by the mean renewal cycle,
            ``lambda' = lam (mean_d + B / 2)``; ``"quoted"`` returns
            ``lam (d + B) / d``.

    Example:
        The default convention gives ``0.05 (4 + 14 / 2) = 0.55`` where the quoted
        relation gives ``0.225``:

        >>> match_density(0.05, 4.0, 14.0)  # doctest: +ELLIPSIS
        0.55...
        >>> match_density(0.05, 4.0, 14.0, convention="quoted")  # doctest: +ELLIPSIS
        0.225...
    """
    is_positive(lam, "lambda")
    is_positive(d, "d")
    is_at_least(b, 0, "b")
    is_in_interval(q, 0, 1, "q")
    if convention == "quoted":
        return lam * (d + b) / d
    if convention != "mean_cycle":
        raise SimulationError(
            f"Specify convention from {VALID_DENSITY_CONVENTIONS}: got {convention}"
        )
    mean_d = d * (1.0 + q * (gamma - 1.0))
    return lam * (mean_d + 0.5 * b)


def torus_distance(a, b, window_side):
    """Euclidean distance with wrap-around on a square torus of side
    ``window_side``."""
    delta = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    delta = np.mod(delta, window_side)
    delta = np.minimum(delta, window_side - delta)
    return np.hypot(delta[..., 0], delta[..., 1])


def overlap_fraction(own_start, own_duration, start, duration):
    """Fraction of the own window ``[own_start, own_start + own_duration)`` covered by
    ``[start, start + duration)``."""
    start = np.asarray(start, dtype=float)
    end = start + np.asarray(duration, dtype=float)
    covered = np.minimum(end, own_start + own_duration) - np.maximum(start, own_start)
    return np.clip(covered, 0.0, None) / own_duration


def time_average_interference(
    receiver, own_window, interferers, alpha, window_side=None
):
    """Interference power averaged over a packet.

    Args:
        receiver (sequence): 2-D position of the receiver.
        own_window (tuple): ``(start, duration)`` of the received packet.
        interferers (list): ``(position, fading, (start, duration))`` per
            interfering transmission.
        alpha (float): path-loss exponent.
        window_side (float, optional): torus side for wrap-around distances.

    Returns:
        float: sum of ``fading * distance**-alpha * overlap`` over interferers.

    Example:
        >>> time_average_interference((0, 0), (0, 1), [((1, 0), 1.0, (0, 1))], 4.0)
        1.0
    """
    if len(interferers) == 0:
        return 0.0
    positions = np.array([p for p, _, _ in interferers], dtype=float)
    fading = np.array([f for _, f, _ in interferers], dtype=float)
    if np.any(fading < 0):
        raise SimulationError("Fading coefficients must be nonnegative.")
    windows = np.array([w for _, _, w in interferers], dtype=float)
    receiver = np.asarray(receiver, dtype=float)
    if window_side is None:
        dist = np.hypot(*(positions - receiver).T)
    else:
        dist = torus_distance(positions, receiver, window_side)
    ov = overlap_fraction(own_window[0], own_window[1], windows[:, 0], windows[:, 1])
    return float(np.sum(fading * dist ** (-alpha) * ov))


def validate_sim(sim, params, durations):
    """Check the invariants of ``sim`` for a network with ``params`` and
    ``durations``; warns if the torus cuts off much of the interference tail."""
    if not isinstance(sim, SimConfig):
        raise SimulationError(f"Expected SimConfig, found {type(sim)}.")
    if not sim.window_side > 10 * params.r:
        raise SimulationError(
            f"window_side must exceed 10 r = {10 * params.r}, "
            f"found {sim.window_side}."
        )
    if not sim.backoff_max >= 0:
        raise SimulationError(f"backoff_max must be >= 0, found {sim.backoff_max}.")
    if not (isinstance(sim.replications, int) and sim.replications >= 1):
        raise SimulationError(
            f"replications must be a positive integer, found {sim.replications}."
        )
    longest = max(durations.d, durations.d_fd)
    has_valid_windows(sim.warmup, sim.measure_time, longest + sim.backoff_max)
    warn_if_small_window(sim.window_side, params.r, params.alpha)
    return sim


def make_rngs(seed):
    """Independent topology, schedule and fading generators of one replication."""
    children = np.random.SeedSequence(seed).spawn(3)
    return tuple(np.random.Generator(np.random.Philox(c)) for c in children)


def draw_topology(lam_prime, r, window_side, rng):
    """Poisson number of clusters with mean ``lam_prime * L**2``, uniform centers
    and uniform companion angles."""
    n = rng.poisson(lam_prime * window_side**2)
    centers = rng.uniform(0.0, window_side, size=(n, 2))
    angles = rng.uniform(0.0, 2.0 * math.pi, size=n)
    return Topology(centers=centers, angles=angles, r=r, window_side=window_side)


def draw_schedule(n_clusters, q, durations, backoff_max, horizon, rng):
    """Renewal schedule of every cluster up to ``horizon``.

    The first start of each cluster is uniform over one cycle
    ``[0, mean_d + B)`` with ``mean_d = d (1 + q (gamma - 1))``; after each packet
    a cluster waits a uniform backoff in ``[0, B]``. The duplex mode of each packet
    is full with probability ``q``.
    """
    mean_d = durations.d * (1.0 + q * (durations.gamma - 1.0))
    clock = rng.uniform(0.0, mean_d + backoff_max, size=n_clusters)
    ids = np.arange(n_clusters)
    rounds = []
    active = clock < horizon
    while np.any(active):
        idx = ids[active]
        fd = rng.random(idx.size) < q
        dur = np.where(fd, durations.d_fd, durations.d)
        rounds.append((idx, clock[idx], dur, fd))
        clock[idx] = clock[idx] + dur + rng.uniform(0.0, backoff_max, size=idx.size)
        active = clock < horizon
    if not rounds:
        empty = np.array([], dtype=float)
        return Schedule(np.array([], dtype=int), empty, empty, np.array([], dtype=bool))
    cluster, start, duration, full_duplex = (np.concatenate(x) for x in zip(*rounds))
    order = np.argsort(start, kind="stable")
    return Schedule(cluster[order], start[order], duration[order], full_duplex[order])


def cluster_state(topology, schedule, index, t):
    """:py:class:`ClusterState` of cluster ``index`` at time ``t``."""
    mine = np.flatnonzero(schedule.cluster == index)
    started = mine[schedule.start[mine] <= t]
    if started.size == 0:
        nxt = mine[0] if mine.size else None
        mode = "full" if nxt is not None and schedule.full_duplex[nxt] else "half"
        until = float(schedule.start[nxt]) if nxt is not None else math.inf
        phase = ("backoff", until)
    else:
        last = started[-1]
        mode = "full" if schedule.full_duplex[last] else "half"
        if t < schedule.end[last]:
            phase = (
                "transmitting",
                float(schedule.start[last]),
                float(schedule.duration[last]),
            )
        else:
            later = mine[schedule.start[mine] > t]
            until = float(schedule.start[later[0]]) if later.size else math.inf
            phase = ("backoff", until)
    return ClusterState(
        center_position=tuple(topology.centers[index]),
        companion_angle=float(topology.angles[index]),
        mode=mode,
        phase=phase,
    )


def snapshot(topology, schedule, t):
    """:py:class:`ClusterState` of every cluster at time ``t``."""
    return [cluster_state(topology, schedule, c, t) for c in range(topology.n_clusters)]


def evaluate_packets(topology, schedule, params, sim, rng):
    """Decode every packet ending inside the measurement window.

    A half-duplex packet is received by the companion node, a full-duplex packet
    by both nodes. Interference comes from every transmitting node of other
    clusters, weighted by the fraction of the received packet it overlaps. The
    fading of an interferer towards a receiving node is drawn once per
    interfering packet and reused by every reception it overlaps.

    Returns:
        dict: ``attempts``, ``successes_hd``, ``successes_fd``, ``bits``.
    """
    counts = {"attempts": 0, "successes_hd": 0, "successes_fd": 0, "bits": 0.0}
    if len(schedule) == 0:
        return counts
    nodes = topology.node_positions()
    start, duration, end = schedule.start, schedule.duration, schedule.end
    cluster, full_duplex = schedule.cluster, schedule.full_duplex
    longest = float(duration.max())
    signal_gain = params.r ** (-params.alpha)
    residual = 1.0 - params.eta
    lower, upper = sim.warmup, sim.warmup + sim.measure_time
    # per receiving node: fading keys 2 j + side of its previous reception
    fading_cache = {}

    for i in np.flatnonzero((end >= lower) & (end < upper)):
        c = cluster[i]
        lo = np.searchsorted(start, start[i] - longest, side="left")
        hi = np.searchsorted(start, end[i], side="left")
        cand = np.arange(lo, hi)
        cand = cand[(end[cand] > start[i]) & (cluster[cand] != c)]
        ov = overlap_fraction(start[i], duration[i], start[cand], duration[cand])
        fd_cand = cand[full_duplex[cand]]
        keys = np.concatenate([2 * cand, 2 * fd_cand + 1])
        tx_nodes = np.concatenate([2 * cluster[cand], 2 * cluster[fd_cand] + 1])
        weights = np.concatenate([ov, ov[full_duplex[cand]]])
        rx_nodes = (2 * c, 2 * c + 1) if full_duplex[i] else (2 * c + 1,)
        for rx in rx_nodes:
            fading = np.empty(keys.size)
            prev_keys, prev_fading = fading_cache.get(rx, (_NO_KEYS, None))
            known = np.isin(keys, prev_keys)
            if np.any(known):
                fading[known] = prev_fading[np.searchsorted(prev_keys, keys[known])]
            fading[~known] = rng.exponential(size=int(np.count_nonzero(~known)))
            order = np.argsort(keys)
            fading_cache[rx] = (keys[order], fading[order])
            gain = torus_distance(nodes[tx_nodes], nodes[rx], sim.window_side) ** (
                -params.alpha
            )
            interference = float(np.sum(fading * gain * weights))
            if full_duplex[i]:
                interference += residual
            success = rng.exponential() * signal_gain >= params.theta * interference
            counts["attempts"] += 1
            if success:
                counts["successes_fd" if full_duplex[i] else "successes_hd"] += 1
                counts["bits"] += params.w * duration[i]
    return counts


def run_replication(params, q, durations, sim, seed):
    """Simulate one replication.

    Returns:
        dict: seed, number of clusters and packets, clusters transmitting when the
        measurement starts, attempts, successes per mode, delivered bits and the
        throughput density ``bits / (L**2 measure_time)``.
    """
    validate(params)
    is_in_interval(q, 0, 1, "q")
    validate_durations(durations)
    validate_sim(sim, params, durations)
    topo_rng, schedule_rng, fading_rng = make_rngs(seed)
    lam_prime = match_density(
        params.lam, durations.d, sim.backoff_max, durations.gamma, q
    )
    topology = draw_topology(lam_prime, params.r, sim.window_side, topo_rng)
    schedule = draw_schedule(
        topology.n_clusters,
        q,
        durations,
        sim.backoff_max,
        sim.warmup + sim.measure_time,
        schedule_rng,
    )
    counts = evaluate_packets(topology, schedule, params, sim, fading_rng)
    # clusters on air when the measurement starts
    counts["transmitting"] = sum(
        state.phase[0] == "transmitting"
        for state in snapshot(topology, schedule, sim.warmup)
    )
    counts["throughput"] = counts["bits"] / (sim.window_side**2 * sim.measure_time)
    counts["seed"] = seed
    counts["clusters"] = topology.n_clusters
    counts["packets"] = len(schedule)
    log_replication(
        seed, counts["packets"], counts["successes_hd"], counts["successes_fd"]
    )
    return counts


def estimate_throughput(params, q, durations, sim):
    """Mean throughput density over ``sim.replications`` replications.

    Replication ``i`` runs with seed ``sim.base_seed + i``; replications are
    computed concurrently with the dask scheduler of
    ``OPTIONS["scheduler"]`` and aggregated in index order.

    Returns:
        SimEstimate
    """
    validate_sim(sim, params, durations)
    warn_if_low_replications(sim.replications)
    tasks = [
        dask.delayed(run_replication)(params, q, durations, sim, sim.base_seed + i)
        for i in range(sim.replications)
    ]
    results = dask.compute(*tasks, scheduler=OPTIONS["scheduler"])
    counts = xr.Dataset(
        {
            key: ("replication", np.array([res[key] for res in results]))
            for key in [
                "seed",
                "clusters",
                "packets",
                "transmitting",
                "attempts",
                "successes_hd",
                "successes_fd",
                "bits",
                "throughput",
            ]
        },
        coords={"replication": np.arange(sim.replications)},
    )
    counts.attrs.update(
        {"q": q, "d": durations.d, "gamma": durations.gamma, **sim.to_dict()}
    )
    samples = counts["throughput"].values
    n = samples.size
    stderr = float(np.std(samples, ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    return SimEstimate(
        throughput_mean=float(np.mean(samples)),
        throughput_stderr=stderr,
        attempts=int(counts["attempts"].sum()),
        successes_hd=int(counts["successes_hd"].sum()),
        successes_fd=int(counts["successes_fd"].sum()),
        counts=counts,
    )


def counts_to_csv(counts, path):
    """Write per-replication counts to ``path`` as CSV."""
    if isinstance(counts, SimEstimate):
        counts = counts.counts
    counts.to_dataframe().to_csv(path)
    return path


def analytic_reference(params, q, durations, cfg=None):
    """Analytical throughput the simulation of ``(q, durations)`` estimates."""
    if durations.gamma == 1:
        return float(throughput(params, q, durations.d, cfg))
    from .hetero import throughput_hetero

    return float(throughput_hetero(params, q, durations, cfg))


def validation_campaign(
    params,
    sim,
    fractions=REFERENCE_FRACTIONS,
    durations=REFERENCE_DURATIONS,
    gamma=1.0,
    analytic_params=None,
    cfg=None,
):
    """Compare simulated and analytical throughput on a grid of ``(q, D)``.

    Each cell runs :py:func:`estimate_throughput` with ``sim`` (warmup extended
    to the cell's durations) and reports ``z = (simulated - analytic) / stderr``.
    Runs with fewer than ``MIN_REPLICATIONS_FOR_POWER`` replications are flagged
    ``low_power`` and their ``z`` is ``NaN``.

    Args:
        params (SystemParams): parameters of the simulated network.
        sim (SimConfig): simulation plan.
        fractions (list): full-duplex fractions.
        durations (list): half-duplex packet durations.
        gamma (float): full-duplex duration ratio.
        analytic_params (SystemParams, optional): parameters of the analytical
            side, ``params`` if ``None``.
        cfg (QuadConfig, optional): quadrature tolerances.

    Returns:
        CurveData: dimensions ``(q, D)``; ``attrs`` hold ``low_power``,
        ``failed_cells`` (``|z| > 4``) and ``cells_within_expected`` (``|z| <= 3``).
    """
    validate(params)
    analytic_params = params if analytic_params is None else validate(analytic_params)
    fractions, durations = sorted(fractions), sorted(durations)
    low_power = sim.replications < MIN_REPLICATIONS_FOR_POWER
    shape = (len(fractions), len(durations))
    columns = {
        name: np.full(shape, np.nan)
        for name in ["analytic", "simulated", "stderr", "z", "attempts", "successes"]
    }
    cells = [(i, j) for i in range(shape[0]) for j in range(shape[1])]
    if tqdm:
        cells = tqdm(cells)
    for i, j in cells:
        q, cell = fractions[i], DurationConfig(durations[j], gamma)
        est = estimate_throughput(params, q, cell, sim.for_durations(cell))
        ref = analytic_reference(analytic_params, q, cell, cfg)
        if low_power or not 0 < est.throughput_stderr < math.inf:
            z = math.nan
        else:
            z = (est.throughput_mean - ref) / est.throughput_stderr
        log_validation_cell(
            q, cell.d, gamma, ref, est.throughput_mean, est.throughput_stderr, z
        )
        columns["analytic"][i, j] = ref
        columns["simulated"][i, j] = est.throughput_mean
        columns["stderr"][i, j] = est.throughput_stderr
        columns["z"][i, j] = z
        columns["attempts"][i, j] = est.attempts
        columns["successes"][i, j] = est.successes_hd + est.successes_fd
    z = np.abs(columns["z"])
    meta = curve_metadata(
        params,
        cfg,
        command="validate",
        gamma=gamma,
        analytic_params=analytic_params.to_dict(),
        sim=sim.to_dict(),
        low_power=bool(low_power),
        failed_cells=int(np.sum(z > VALIDATION_Z_FAIL)),
        cells_within_expected=int(np.sum(z <= VALIDATION_Z_EXPECTED)),
    )
    return make_curve(
        {name: (("q", "D"), values) for name, values in columns.items()},
        {"q": fractions, "D": durations},
        meta,
    )
