import logging
from datetime import datetime


def log_command_header(command, **kwargs) -> None:
    """Add header to the log for a command line call or validation campaign."""
    settings = ", ".join(f"{k}={v}" for k, v in kwargs.items())
    logging.info(
        f"`fdaloha {command}` with {settings} at {str(datetime.now())}\n"
        f"++++++++++++++++++++++++++++++++++++++++++++++++"
    )


def log_quadrature_result(name, result, **kwargs) -> None:
    """Log value, error estimate and evaluation count of one double integral."""
    key = ", ".join(f"{k}={v}" for k, v in kwargs.items())
    logging.info(
        f"{name}({key}) | value: {result.value:.10g} | "
        f"error: {result.abs_error_estimate:.2e} | "
        f"evaluations: {result.evaluations}"
    )


def log_replication(seed, packets, successes_hd, successes_fd) -> None:
    """Log the counts of a single Monte Carlo replication."""
    logging.info(
        f"replication | seed: {seed} | packets: {packets} | "
        f"successes: {successes_hd} hd, {successes_fd} fd"
    )


def log_optimizer_bracket(name, lower, center, upper, objective) -> None:
    """At each refinement, log the bracket handed to the golden search."""
    logging.debug(
        f"{name} | bracket: ({lower:.6g}, {center:.6g}, {upper:.6g}) | "
        f"objective at center: {objective:.10g}"
    )


def log_validation_cell(q, d, gamma, analytic, simulated, stderr, z) -> None:
    """Log one cell of a validation campaign."""
    logging.info(
        f"validate | q: {q} | D: {d} | gamma: {gamma} | "
        f"analytic: {analytic:.6g} | simulated: {simulated:.6g} "
        f"+/- {stderr:.2g} | z: {z:+.2f}"
    )


def log_optimizer_boundary(name, gamma, objective) -> None:
    """Log a maximizer pinned to the edge of the ``gamma`` search range."""
    logging.info(
        f"{name} | optimum on the search boundary | gamma: {gamma:.6g} | "
        f"objective: {objective:.10g}"
    )
