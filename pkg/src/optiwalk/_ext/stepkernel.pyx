# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Fused coin-and-shift update over a dense lattice."""

cdef enum:
    MAX_DIMS = 64


def coin_shift(const double complex[:, ::1] psi,
               const double complex[:, ::1] coin,
               const Py_ssize_t[::1] shape,
               double complex[:, ::1] out):
    """Write ``shift(coin @ psi)`` into ``out`` (which must be zeroed).

    ``psi`` and ``out`` are (n_sites, 2d) views of a C-ordered lattice of
    ``shape``. Returns 1 if a nonzero amplitude would leave the lattice,
    in which case ``out`` is incomplete.
    """
    cdef Py_ssize_t nsites = psi.shape[0]
    cdef Py_ssize_t nc = psi.shape[1]
    cdef Py_ssize_t d = shape.shape[0]
    cdef Py_ssize_t s, c, k, n, last, step
    cdef Py_ssize_t[MAX_DIMS] coord
    cdef Py_ssize_t[MAX_DIMS] stride
    cdef double complex acc
    cdef bint empty
    cdef int overflow = 0

    if d > MAX_DIMS or nc != 2 * d:
        raise ValueError("lattice rank and coin size disagree")
    if coin.shape[0] != nc or coin.shape[1] != nc or out.shape[0] != nsites or out.shape[1] != nc:
        raise ValueError("array shapes disagree")

    stride[d - 1] = 1
    for n in range(d - 2, -1, -1):
        stride[n] = stride[n + 1] * shape[n + 1]
    for n in range(d):
        coord[n] = 0

    with nogil:
        for s in range(nsites):
            empty = True
            for k in range(nc):
                if psi[s, k] != 0:
                    empty = False
                    break
            if not empty:
                for c in range(nc):
                    acc = 0
                    for k in range(nc):
                        acc = acc + coin[c, k] * psi[s, k]
                    n = c >> 1
                    step = 1 - 2 * (c & 1)
                    if coord[n] + step < 0 or coord[n] + step >= shape[n]:
                        if acc != 0:
                            overflow = 1
                        continue
                    out[s + step * stride[n], c] = acc
            # advance the row-major coordinate counter
            last = d - 1
            while last >= 0:
                coord[last] += 1
                if coord[last] < shape[last]:
                    break
                coord[last] = 0
                last -= 1
    return overflow
