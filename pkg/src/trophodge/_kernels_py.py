"""Pure-Python elimination core.

Mirror of the compiled module ``trophodge._kernels``; keep the two in sync.
All cohomology dimensions in the package reduce to ranks of integer
matrices, so this is the hot loop.  Entries are arbitrary-precision Python
ints; the fraction-free (Bareiss) update keeps intermediate entries as
minors of the input, which controls coefficient blow-up without ever
leaving exact arithmetic.
"""

BACKEND = "python"


def echelonize(mat, nrows, ncols):
    """Forward fraction-free Gaussian elimination, in place.

    ``mat`` is a list of row lists of ints.  Rows are permuted so that the
    first ``rank`` rows form a row echelon system.  Returns
    ``(rank, pivot_columns)``.
    """
    r = 0
    denom = 1
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = -1
        for i in range(r, nrows):
            if mat[i][c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            mat[r], mat[p] = mat[p], mat[r]
        rowr = mat[r]
        piv = rowr[c]
        for i in range(r + 1, nrows):
            rowi = mat[i]
            mic = rowi[c]
            if mic == 0:
                # Bareiss still rescales untouched rows.
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


def rank(mat, nrows, ncols):
    """Rank of an integer matrix; consumes ``mat``."""
    r, _ = echelonize(mat, nrows, ncols)
    return r
