from fdaloha import QuadConfig, SimConfig, SystemParams, clear_cache, set_options
from fdaloha.analytic import omega_fd
from fdaloha.hetero import gamma_star, omega_fd_prime
from fdaloha.model import DurationConfig
from fdaloha.montecarlo import estimate_throughput
from fdaloha.slotted import omega_fd_slotted

from . import _skip_slow, parameterized

ALPHAS = [2.5, 4.0, 6.0]
TOLERANCES = [1e-6, 1e-8]

set_options(fdaloha_warnings=False)


class Functionals:
    """Benchmark time of the nested quadratures, memoization switched off."""

    timeout = 300.0
    repeat = 1
    number = 1

    def setup(self, *args, **kwargs):
        clear_cache()

    @parameterized(["alpha", "rel_tol"], (ALPHAS, TOLERANCES))
    def time_omega_fd(self, alpha, rel_tol):
        omega_fd(1.0, 2.0, alpha, QuadConfig(rel_tol=rel_tol))

    @parameterized(["alpha"], (ALPHAS,))
    def time_omega_fd_slotted(self, alpha):
        omega_fd_slotted(1.0, 2.0, alpha)

    @parameterized(["gamma"], ([0.5, 2.0],))
    def time_omega_fd_prime(self, gamma):
        omega_fd_prime(1.0, 2.0, 4.0, gamma)


class Optimizer:
    """Benchmark the duration-ratio search once the functionals are cached."""

    def setup(self, *args, **kwargs):
        self.params = SystemParams()
        gamma_star(self.params, 0.5, 1.0, allow_boundary=True)

    @parameterized(["d_hd"], ([0.5, 4.0],))
    def time_gamma_star(self, d_hd):
        gamma_star(self.params, 0.5, d_hd, allow_boundary=True)


class Simulation:
    """Benchmark time and peak memory of Monte Carlo replications."""

    timeout = 600.0
    repeat = 1
    number = 1

    def setup(self, *args, **kwargs):
        _skip_slow()
        self.params = SystemParams()
        self.sim = SimConfig(measure_time=50.0, replications=4)

    @parameterized(["q"], ([0.0, 1.0],))
    def time_estimate_throughput(self, q):
        estimate_throughput(self.params, q, DurationConfig(1.0), self.sim)

    @parameterized(["q"], ([0.0, 1.0],))
    def peakmem_estimate_throughput(self, q):
        estimate_throughput(self.params, q, DurationConfig(1.0), self.sim)
