"""Pure-Python tableau kernels.

The tableau is a list of integer rows; row ``i`` represents the rational row
``rows[i] / dens[i]`` with ``dens[i] > 0``.  Row 0 is the reduced-cost row and
the last entry of every row is the right-hand side.  ``_kernels.pyx`` mirrors
these functions line for line.
"""

from math import gcd


def pivot(rows, dens, r, c):
    """Pivot on entry (r, c), keeping every row integral and gcd-reduced."""
    prow = rows[r]
    p = prow[c]
    if p == 0:
        raise ZeroDivisionError("pivot on a zero entry")
    if p < 0:
        prow = [-v for v in prow]
        p = -p
    g = gcd(p, *prow)
    if g > 1:
        prow = [v // g for v in prow]
        p //= g
    rows[r] = prow
    dens[r] = p
    width = len(prow)
    for i in range(len(rows)):
        if i == r:
            continue
        row = rows[i]
        a = row[c]
        if a == 0:
            continue
        new = [row[k] * p - a * prow[k] for k in range(width)]
        den = dens[i] * p
        g = gcd(den, *new)
        if g > 1:
            new = [v // g for v in new]
            den //= g
        rows[i] = new
        dens[i] = den


def entering_bland(obj, ncols):
    """Lowest column index in [0, ncols) with a negative reduced cost, or -1."""
    for j in range(ncols):
        if obj[j] < 0:
            return j
    return -1


def leaving_bland(rows, basis, c):
    """Minimum-ratio row for entering column ``c`` (ties: lowest basic index).

    Returns -1 when the column has no positive entry.  Row denominators cancel
    in the ratio rhs_i / a_ic, so the comparison is done on integers.
    """
    best = -1
    best_num = 0
    best_den = 1
    for i in range(1, len(rows)):
        row = rows[i]
        a = row[c]
        if a <= 0:
            continue
        rhs = row[-1]
        if best < 0:
            best, best_num, best_den = i, rhs, a
            continue
        lhs = rhs * best_den
        cur = best_num * a
        if lhs < cur or (lhs == cur and basis[i] < basis[best]):
            best, best_num, best_den = i, rhs, a
    return best
