"""Pure-Python fraction-free elimination kernel.

Mirror of the compiled kernel in ``_elim_c.pyx``; keep the two in sync.
Rows hold arbitrary-precision Python ints; Bareiss' condensation keeps
all intermediate values integral (the two-step division is exact).
"""

from __future__ import annotations


def bareiss_rank(rows, ncols):
    """Rank of an integer matrix given as a list of row lists.

    Deterministic pivoting: columns are scanned left to right, the first
    row (top to bottom) with a nonzero entry in the current column is
    promoted.  The input rows are consumed destructively.
    """
    m = len(rows)
    rank = 0
    prev = 1
    for c in range(ncols):
        if rank == m:
            break
        pivot_row = -1
        for r in range(rank, m):
            if rows[r][c] != 0:
                pivot_row = r
                break
        if pivot_row < 0:
            continue
        if pivot_row != rank:
            rows[pivot_row], rows[rank] = rows[rank], rows[pivot_row]
        p = rows[rank][c]
        for r in range(rank + 1, m):
            row = rows[r]
            factor = row[c]
            if factor == 0:
                # still renormalize by the Bareiss division step
                for l in range(c + 1, ncols):
                    row[l] = (row[l] * p) // prev
            else:
                prow = rows[rank]
                for l in range(c + 1, ncols):
                    row[l] = (row[l] * p - factor * prow[l]) // prev
            row[c] = 0
        prev = p
        rank += 1
    return rank
