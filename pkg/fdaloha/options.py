from .constants import (
    DEFAULT_ABS_TOL,
    DEFAULT_MAX_DEPTH,
    DEFAULT_REL_TOL,
    VALID_OMEGA_HD_PRIME_FORMS,
    VALID_SCHEDULERS,
)

OPTIONS = {
    "rel_tol": DEFAULT_REL_TOL,
    "abs_tol": DEFAULT_ABS_TOL,
    "max_depth": DEFAULT_MAX_DEPTH,
    "omega_hd_prime": "closed_form",
    "scheduler": "threads",
    "warn_low_replications": True,
    "warn_small_window": True,
    "fdaloha_warnings": True,
}  # defaults


def _positive_float(choice):
    if isinstance(choice, bool):
        return False
    return isinstance(choice, (int, float)) and choice > 0


_VALIDATORS = {
    "rel_tol": _positive_float,
    "abs_tol": _positive_float,
    "max_depth": lambda choice: isinstance(choice, int) and choice >= 1,
    "omega_hd_prime": frozenset(VALID_OMEGA_HD_PRIME_FORMS).__contains__,
    "scheduler": frozenset(VALID_SCHEDULERS).__contains__,
    "warn_low_replications": lambda choice: choice in [True, False],
    "warn_small_window": lambda choice: choice in [True, False],
    "fdaloha_warnings": lambda choice: choice in [True, False],
}


class set_options:
    """
    Set options for ``fdaloha`` in a controlled context.

    Analogous to
    :py:class:`~xarray.options.set_options`.

    Args:
        ``rel_tol`` : float, default: ``1e-8``
            Relative tolerance of the default :py:class:`.QuadConfig`.
        ``abs_tol`` : float, default: ``1e-12``
            Absolute tolerance of the default :py:class:`.QuadConfig`.
        ``max_depth`` : int, default: ``50``
            Maximum number of adaptive subdivisions of the default
            :py:class:`.QuadConfig`.
        ``omega_hd_prime`` : {``"closed_form"``, ``"overlap_integral"``}, default ``"closed_form"`` # noqa: E501
            How :py:func:`~fdaloha.hetero.omega_hd_prime` evaluates the impact of
            half-duplex interferers on a full-duplex reception of different duration.

            * ``closed_form`` evaluates the tabulated closed forms with correction
                terms ``2(1-gamma)/gamma`` and ``(gamma-1)/gamma``.
            * ``overlap_integral`` evaluates the result of integrating the overlap
                function directly, with correction terms ``(1-gamma)/gamma`` and
                ``gamma-1``.

        ``scheduler`` : {``"threads"``, ``"processes"``, ``"synchronous"``}, default ``"threads"`` # noqa: E501
            dask scheduler used for Monte Carlo replications and grid evaluations.
        ``warn_low_replications`` : {``True``, ``False``}, default ``True``
            Raise ``UserWarning`` when a validation runs with too few replications
            to resolve a standard error.
        ``warn_small_window`` : {``True``, ``False``}, default ``True``
            Raise ``UserWarning`` when the simulated torus is small compared to
            the reach of the path-loss tail.
        ``fdaloha_warnings`` : {``True``, ``False``}, default ``True``
            Overwrites all options containing ``"*warn*"``.

    Examples:

        You can use ``set_options`` either as a context manager:

        >>> with fdaloha.set_options(rel_tol=1e-10):
        ...     fdaloha.quadrature.QuadConfig().rel_tol
        ...
        1e-10

        Or to set global options:

        >>> fdaloha.set_options(scheduler="threads")  # doctest: +ELLIPSIS
        <fdaloha.options.set_options object at 0x...>
    """

    def __init__(self, **kwargs):
        self.old = {}
        for k, v in kwargs.items():
            if k not in OPTIONS:
                raise ValueError(
                    "argument name %r is not in the set of valid options %r"
                    % (k, set(OPTIONS))
                )
            if k in _VALIDATORS and not _VALIDATORS[k](v):
                if k == "omega_hd_prime":
                    expected = f"Expected one of {VALID_OMEGA_HD_PRIME_FORMS!r}"
                elif k == "scheduler":
                    expected = f"Expected one of {VALID_SCHEDULERS!r}"
                else:
                    expected = ""
                raise ValueError(
                    f"option {k!r} given an invalid value: {v!r}. " + expected
                )
            self.old[k] = OPTIONS[k]
        if "fdaloha_warnings" in kwargs:
            for k in [o for o in OPTIONS.keys() if "warn" in o]:
                self.old.setdefault(k, OPTIONS[k])
        self._apply_update(kwargs)

    def _apply_update(self, options_dict):
        if (
            "fdaloha_warnings" in options_dict
        ):  # fdaloha_warnings == False overwrites all warnings options
            if not options_dict["fdaloha_warnings"]:
                for k in [o for o in OPTIONS.keys() if "warn" in o]:
                    options_dict[k] = False
        OPTIONS.update(options_dict)

    def __enter__(self):
        return

    def __exit__(self, type, value, traceback):
        self._apply_update(self.old)
