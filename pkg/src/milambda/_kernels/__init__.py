"""Pair-counting kernels behind the correlation integral and BDS statistic.

The compiled extension is used when it was built; otherwise the NumPy
version is selected at import. Both return identical integers. Setting
``MILAMBDA_BACKEND=python`` forces the NumPy version.
"""

import os

import numpy as np

from . import _pairs_py

try:
    from . import _pairs as _compiled
except ImportError:  # extension not built
    _compiled = None

python_pair_counts = _pairs_py.pair_counts
cython_pair_counts = _compiled.pair_counts if _compiled is not None else None

if os.environ.get("MILAMBDA_BACKEND", "").lower() == "python":
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def pair_counts(x, eps, m, backend=None):
    """Count threshold-close pairs of `x` under the max-norm.

    Parameters
    ----------
    x : 1d array of float
    eps : float
        Strict threshold, a pair is close when ``|x_i - x_j| < eps``.
    m : int
        Window (embedding) length.
    backend : {None, "cython", "python"}
        Force an implementation; None picks the compiled one when present.

    Returns
    -------
    close_all : int
        Close pairs ``i < j`` over the whole series.
    close_tail : int
        Close pairs with both indices ``>= m - 1``.
    close_windows : int
        Pairs of length-`m` windows ``s < t`` whose coordinates are all close.
    row_counts : ndarray of int64
        For each ``i``, the number of ``j != i`` close to it.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    m = int(m)
    if m < 1:
        raise ValueError("window length must be >= 1")
    if x.size < 2:
        return 0, 0, 0, np.zeros(x.size, dtype=np.int64)
    if backend is None:
        backend = BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled.pair_counts(x, float(eps), m)
    if backend == "python":
        return _pairs_py.pair_counts(x, float(eps), m)
    raise ValueError(f"unknown backend {backend!r}")
