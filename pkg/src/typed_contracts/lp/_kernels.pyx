# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled tableau kernels; same contract as ``_kernels_py``."""

from math import gcd


def pivot(list rows, list dens, Py_ssize_t r, Py_ssize_t c):
    cdef list prow = rows[r]
    cdef list row, new
    cdef object p = prow[c]
    cdef object a, den, g
    cdef Py_ssize_t i, k, width, nrows
    if p == 0:
        raise ZeroDivisionError("pivot on a zero entry")
    width = len(prow)
    if p < 0:
        prow = [-v for v in prow]
        p = -p
    g = gcd(p, *prow)
    if g > 1:
        prow = [v // g for v in prow]
        p = p // g
    rows[r] = prow
    dens[r] = p
    nrows = len(rows)
    for i in range(nrows):
        if i == r:
            continue
        row = <list>rows[i]
        a = row[c]
        if a == 0:
            continue
        new = [None] * width
        for k in range(width):
            new[k] = row[k] * p - a * prow[k]
        den = dens[i] * p
        g = gcd(den, *new)
        if g > 1:
            for k in range(width):
                new[k] = new[k] // g
            den = den // g
        rows[i] = new
        dens[i] = den


def entering_bland(list obj, Py_ssize_t ncols):
    cdef Py_ssize_t j
    for j in range(ncols):
        if obj[j] < 0:
            return j
    return -1


def leaving_bland(list rows, list basis, Py_ssize_t c):
    cdef Py_ssize_t best = -1
    cdef Py_ssize_t i, nrows = len(rows)
    cdef list row
    cdef object a, rhs, lhs, cur
    cdef object best_num = 0
    cdef object best_den = 1
    for i in range(1, nrows):
        row = <list>rows[i]
        a = row[c]
        if a <= 0:
            continue
        rhs = row[len(row) - 1]
        if best < 0:
            best = i
            best_num = rhs
            best_den = a
            continue
        lhs = rhs * best_den
        cur = best_num * a
        if lhs < cur or (lhs == cur and basis[i] < basis[best]):
            best = i
            best_num = rhs
            best_den = a
    return best
