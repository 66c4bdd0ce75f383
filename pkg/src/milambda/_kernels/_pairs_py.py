"""NumPy pair counting, used when the compiled extension is unavailable."""

import numpy as np


def pair_counts(x, eps, m):
    x = np.ascontiguousarray(x, dtype=np.float64)
    n = x.size
    row = np.zeros(n, dtype=np.int64)
    close_all = close_tail = close_windows = 0
    for d in range(1, n):
        b = np.abs(x[: n - d] - x[d:]) < eps
        row[: n - d] += b
        row[d:] += b
        close_all += int(np.count_nonzero(b))
        close_tail += int(np.count_nonzero(b[m - 1:]))
        span = n - d - m + 1
        if span > 0:
            w = b[:span].copy()
            for k in range(1, m):
                w &= b[k:k + span]
            close_windows += int(np.count_nonzero(w))
    return close_all, close_tail, close_windows, row
