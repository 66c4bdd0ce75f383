# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pair counting over the distance-threshold indicator matrix.

Row counts and the one-dimensional pair totals come from a two-pointer scan
over the sorted series in O(N log N). On sorted data ``xs[b] - xs[a]`` is
bit-identical to ``|x_i - x_j|`` and non-decreasing in ``b``, so the scan
decides every pair exactly as the direct comparison would.

Window matches still need all O(N**2) pairs; they are counted one diagonal
of the indicator matrix at a time with 0/1 doubles, which vectorize on
baseline SSE2. Every tally is an integer below 2**53, so the sums are exact
in any order (the extension is built with reassociation enabled).
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs
from libc.stdlib cimport malloc, free

cnp.import_array()


def sorted_row_counts(const double[::1] x, double eps):
    """Number of ``j != i`` with ``|x_i - x_j| < eps``, for every ``i``."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t a, hi = 0
    order = np.argsort(np.asarray(x), kind="stable")
    xs_arr = np.ascontiguousarray(np.asarray(x)[order])
    cdef const double[::1] xs = xs_arr
    starts_arr = np.zeros(n + 1, dtype=np.int64)
    forward_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] starts = starts_arr
    cdef long long[::1] forward = forward_arr
    with nogil:
        for a in range(n):
            if hi < a + 1:
                hi = a + 1
            while hi < n and xs[hi] - xs[a] < eps:
                hi += 1
            forward[a] = hi - a - 1
            # sorted positions a+1 .. hi-1 each gain the partner a
            starts[a + 1] += 1
            starts[hi] -= 1
    backward = np.cumsum(starts_arr[:n])
    rows = np.empty(n, dtype=np.int64)
    rows[order] = forward_arr + backward
    return rows


def window_matches(const double[::1] x, double eps, Py_ssize_t m):
    """Pairs of length-`m` windows ``s < t`` whose coordinates are all close."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t d, i, k, length, span
    cdef const double* xp = &x[0]
    cdef const double* yp
    cdef double total = 0.0, acc
    cdef double* b = <double*> malloc(n * sizeof(double))
    cdef double* w = <double*> malloc(n * sizeof(double))
    if b == NULL or w == NULL:
        free(b)
        free(w)
        raise MemoryError()
    try:
        with nogil:
            for d in range(1, n - m + 1):
                length = n - d
                span = length - m + 1
                yp = xp + d
                acc = 0.0
                if m == 1:
                    for i in range(length):
                        acc += 1.0 if fabs(xp[i] - yp[i]) < eps else 0.0
                elif m == 2:
                    for i in range(length):
                        b[i] = 1.0 if fabs(xp[i] - yp[i]) < eps else 0.0
                    for i in range(span):
                        acc += b[i] * b[i + 1]
                else:
                    for i in range(length):
                        b[i] = 1.0 if fabs(xp[i] - yp[i]) < eps else 0.0
                    for i in range(span):
                        w[i] = b[i] * b[i + 1]
                    for k in range(2, m - 1):
                        for i in range(span):
                            w[i] *= b[i + k]
                    for i in range(span):
                        acc += w[i] * b[i + m - 1]
                total += acc
    finally:
        free(b)
        free(w)
    return int(total)


def pair_counts(const double[::1] x, double eps, Py_ssize_t m):
    """Integer pair statistics of `x` at threshold `eps` and window length `m`.

    Returns ``(close_all, close_tail, close_windows, row_counts)``; see
    :func:`milambda._kernels.pair_counts` for the meaning of each.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j, lead = min(m - 1, n)
    rows = sorted_row_counts(x, eps)
    close_all = int(rows.sum()) // 2
    # drop pairs touching the first m - 1 observations
    head = int(rows[:lead].sum())
    inner = 0
    for i in range(lead):
        for j in range(i + 1, lead):
            if fabs(x[i] - x[j]) < eps:
                inner += 1
    close_tail = close_all - (head - inner)
    return close_all, close_tail, window_matches(x, eps, m), rows
