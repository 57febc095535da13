# cython: language_level=3
"""Compiled row-reduction kernel.

Same algorithm as _rref_py (fraction-free elimination on integer rows,
first-nonzero pivot rule, content removal); the entries stay Python
big ints, the loop machinery is compiled.
"""

from fractions import Fraction
from math import gcd

BACKEND = "cython"


cdef inline object _row_content(list row, Py_ssize_t ncols):
    cdef Py_ssize_t j
    g = 0
    for j in range(ncols):
        x = row[j]
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


cdef void _reduce_content(list row, Py_ssize_t ncols):
    cdef Py_ssize_t j
    g = _row_content(row, ncols)
    if g > 1:
        for j in range(ncols):
            row[j] = row[j] // g


def rref(rows):
    """RREF of a rational matrix given as row lists.

    Returns (reduced nonzero rows as Fraction lists, pivot column list).
    """
    cdef Py_ssize_t nrows, ncols, r, c, i, j, pr, idx
    if not rows:
        return [], []
    ncols = len(rows[0])
    cdef list work = []
    cdef list irow, row, piv
    for orow in rows:
        den = 1
        for x in orow:
            d = x.denominator
            den = den * d // gcd(den, d)
        irow = [int(x * den) for x in orow]
        _reduce_content(irow, ncols)
        work.append(irow)
    nrows = len(work)

    cdef list pivots = []
    r = 0
    for c in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if (<list>work[i])[c]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            work[r], work[pr] = work[pr], work[r]
        piv = <list>work[r]
        p = piv[c]
        for i in range(r + 1, nrows):
            row = <list>work[i]
            q = row[c]
            if q:
                g = gcd(p, q)
                a = p // g
                b = q // g
                for j in range(c, ncols):
                    row[j] = a * row[j] - b * piv[j]
                _reduce_content(row, ncols)
        pivots.append(c)
        r += 1

    for idx in range(len(pivots) - 1, -1, -1):
        c = <Py_ssize_t>pivots[idx]
        piv = <list>work[idx]
        p = piv[c]
        for i in range(idx):
            row = <list>work[i]
            q = row[c]
            if q:
                g = gcd(p, q)
                a = p // g
                b = q // g
                for j in range(<Py_ssize_t>pivots[i], ncols):
                    row[j] = a * row[j] - b * piv[j]
                _reduce_content(row, ncols)

    out = []
    for idx in range(len(pivots)):
        c = <Py_ssize_t>pivots[idx]
        piv = <list>work[idx]
        p = piv[c]
        out.append([Fraction(x, p) for x in piv])
    return out, pivots
