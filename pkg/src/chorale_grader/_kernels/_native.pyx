# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel implementations.

Semantics twin of ``_pure.py``: identical floating-point operation order so
both backends return bit-identical results. All floats are C doubles (IEEE
binary64), matching Python floats.
"""

import array as _array

from libc.math cimport fabs

BACKEND = "native"


def w1_accumulate(double[::1] p_mass, double[::1] q_mass, double[::1] gaps):
    """Closed-form 1-D transport cost: sum |cdf_p - cdf_q| * gap."""
    cdef Py_ssize_t k, n = gaps.shape[0]
    cdef double total = 0.0, cp = 0.0, cq = 0.0
    for k in range(n):
        cp += p_mass[k]
        cq += q_mass[k]
        total += fabs(cp - cq) * gaps[k]
    return total


def ks_statistic(double[::1] a, double[::1] b):
    """Sup-norm gap between the empirical CDFs of two sorted samples."""
    cdef Py_ssize_t n = a.shape[0], m = b.shape[0]
    cdef Py_ssize_t i = 0, j = 0
    cdef double d = 0.0, diff, x
    while i < n and j < m:
        x = a[i] if a[i] <= b[j] else b[j]
        while i < n and a[i] == x:
            i += 1
        while j < m and b[j] == x:
            j += 1
        diff = fabs((<double>i) / (<double>n) - (<double>j) / (<double>m))
        if diff > d:
            d = diff
    return d


def suffix_match_lengths(long long[::1] tokens):
    """Longest repeated-suffix length at each position (correlative matrix)."""
    cdef Py_ssize_t n = tokens.shape[0]
    cdef Py_ssize_t d, i, run
    if n == 0:
        return []
    out = _array.array("q", [0]) * n
    cdef long long[::1] buf = out
    for d in range(1, n):
        run = 0
        for i in range(n - d):
            if tokens[i] == tokens[i + d]:
                run += 1
                if run > buf[i]:
                    buf[i] = run
            else:
                run = 0
    return list(out)


def greedy_occurrences(long long[::1] tokens, Py_ssize_t start, Py_ssize_t length):
    """Leftmost non-overlapping occurrence starts of tokens[start:start+length]."""
    cdef Py_ssize_t n = tokens.shape[0]
    cdef Py_ssize_t pos = 0, k
    cdef bint hit
    occs = []
    while pos + length <= n:
        hit = True
        for k in range(length):
            if tokens[pos + k] != tokens[start + k]:
                hit = False
                break
        if hit:
            occs.append(pos)
            pos += length
        else:
            pos += 1
    return occs
