# cython: language_level=3
"""Compiled elimination core.

Mirror of trophodge._kernels_py; entries stay Python ints (arbitrary
precision), Cython removes the interpreter overhead of the inner loops.
"""

BACKEND = "cython"


def echelonize(list mat, Py_ssize_t nrows, Py_ssize_t ncols):
    """Forward fraction-free Gaussian elimination, in place.

    Rows are permuted so that the first ``rank`` rows form a row echelon
    system.  Returns ``(rank, pivot_columns)``.
    """
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef list rowr, rowi, pivots = []
    denom = 1
    for c in range(ncols):
        if r == nrows:
            break
        p = -1
        for i in range(r, nrows):
            if (<list>mat[i])[c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            mat[r], mat[p] = mat[p], mat[r]
        rowr = <list>mat[r]
        piv = rowr[c]
        for i in range(r + 1, nrows):
            rowi = <list>mat[i]
            mic = rowi[c]
            if mic == 0:
                for j in range(c, ncols):
                    rowi[j] = (rowi[j] * piv) // denom
            else:
                rowi[c] = 0
                for j in range(c + 1, ncols):
                    rowi[j] = (rowi[j] * piv - mic * rowr[j]) // denom
        denom = piv
        pivots.append(c)
        r += 1
    return r, pivots


def rank(list mat, Py_ssize_t nrows, Py_ssize_t ncols):
    """Rank of an integer matrix; consumes ``mat``."""
    r, _ = echelonize(mat, nrows, ncols)
    return r
