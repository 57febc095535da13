"""Pure-Python row-reduction kernel.

Reduced row echelon form over the rationals, computed fraction-free on
integer rows with per-row content removal. Pivot rule: first nonzero
entry in column order, so the output is deterministic.

Kept in lockstep with the compiled twin ``_rref_c.pyx``; a parity test
exercises both on the same inputs.
"""

from fractions import Fraction
from math import gcd

BACKEND = "python"


def _row_content(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def _reduce_content(row):
    g = _row_content(row)
    if g > 1:
        for j in range(len(row)):
            row[j] //= g


def rref(rows):
    """RREF of a rational matrix given as row lists.

    Returns (reduced nonzero rows as Fraction lists, pivot column list).
    """
    if not rows:
        return [], []
    ncols = len(rows[0])
    work = []
    for row in rows:
        den = 1
        for x in row:
            d = x.denominator
            den = den * d // gcd(den, d)
        irow = [int(x * den) for x in row]
        _reduce_content(irow)
        work.append(irow)
    nrows = len(work)

    pivots = []
    r = 0
    for c in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if work[i][c]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            work[r], work[pr] = work[pr], work[r]
        piv = work[r]
        p = piv[c]
        for i in range(r + 1, nrows):
            row = work[i]
            q = row[c]
            if q:
                g = gcd(p, q)
                a = p // g
                b = q // g
                for j in range(c, ncols):
                    row[j] = a * row[j] - b * piv[j]
                _reduce_content(row)
        pivots.append(c)
        r += 1

    for idx in range(len(pivots) - 1, -1, -1):
        c = pivots[idx]
        piv = work[idx]
        p = piv[c]
        for i in range(idx):
            row = work[i]
            q = row[c]
            if q:
                g = gcd(p, q)
                a = p // g
                b = q // g
                for j in range(pivots[i], ncols):
                    row[j] = a * row[j] - b * piv[j]
                _reduce_content(row)

    out = []
    for idx, c in enumerate(pivots):
        p = work[idx][c]
        out.append([Fraction(x, p) for x in work[idx]])
    return out, pivots
