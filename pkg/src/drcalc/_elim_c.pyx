# cython: language_level=3
"""Compiled fraction-free elimination kernel.

Same algorithm as ``_elim_py.bareiss_rank``: Bareiss condensation on
arbitrary-precision integers with deterministic column-major pivoting.
Entries stay Python ints (they outgrow machine words quickly); the win
over the pure version is loop and indexing overhead.
"""


def bareiss_rank(list rows, Py_ssize_t ncols):
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t c, r, l, pivot_row
    cdef list row, prow
    prev = 1
    for c in range(ncols):
        if rank == m:
            break
        pivot_row = -1
        for r in range(rank, m):
            if (<list>rows[r])[c] != 0:
                pivot_row = r
                break
        if pivot_row < 0:
            continue
        if pivot_row != rank:
            rows[pivot_row], rows[rank] = rows[rank], rows[pivot_row]
        prow = <list>rows[rank]
        p = prow[c]
        for r in range(rank + 1, m):
            row = <list>rows[r]
            factor = row[c]
            if factor == 0:
                for l in range(c + 1, ncols):
                    row[l] = (row[l] * p) // prev
            else:
                for l in range(c + 1, ncols):
                    row[l] = (row[l] * p - factor * prow[l]) // prev
            row[c] = 0
        prev = p
        rank += 1
    return rank
