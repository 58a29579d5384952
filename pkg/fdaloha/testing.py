import logging

import numpy as np
from xarray.testing import assert_allclose, assert_equal, assert_identical


def assert_curves_equal(curve, curve2, how="equal", **assert_how_kwargs):
    """Applies ``assert_{how}`` to two curves and compares their metadata."""
    if how == "equal":
        assert_func = assert_equal
    elif how == "allclose":
        assert_func = assert_allclose
    elif how == "identical":
        assert_func = assert_identical
    else:
        raise ValueError(f"how must be equal, allclose or identical, found {how}")
    logging.info(f"check curves {list(curve.data_vars)}")
    assert_func(curve, curve2, **assert_how_kwargs)
    assert curve.attrs == curve2.attrs


def check_curve_dims_and_data_vars(curve, dims, data_vars):
    """Checks that dimensions and series of a curve are the expected ones.

    Args:
        curve (xarray.Dataset): curve returned by a figure or sweep.
        dims (tuple): expected dimension names, in order.
        data_vars (list): expected series names.

    Asserts:
        That every series has dimensions ``dims``, the series are ``data_vars`` and
        all values are finite.
    """
    assert set(curve.data_vars) == set(data_vars)
    for name in data_vars:
        assert curve[name].dims == tuple(dims), name
        assert np.all(np.isfinite(curve[name].values)), name
