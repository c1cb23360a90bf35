# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweeps over basis triples.

Every associativity-type axiom reduces to comparing two bracketings of a
triple product, each built from a pair of 3-index product tensors.  The
tensors of interest are very sparse, so all four are walked as CSR rows and
only touched output slots are visited.
"""
import numpy as np
cimport numpy as cnp

from libc.math cimport sqrt

cnp.import_array()


def _csr(t, Py_ssize_t rows):
    a = np.asarray(t).reshape(rows, -1)
    mask = a != 0
    indptr = np.zeros(rows + 1, dtype=np.intp)
    np.cumsum(mask.sum(axis=1), out=indptr[1:])
    idx = np.ascontiguousarray(np.nonzero(mask)[1], dtype=np.intp)
    data = np.ascontiguousarray(a[mask], dtype=np.complex128)
    return indptr, idx, data


def triple_product_residual(const double complex[:, :, ::1] p1,
                            const double complex[:, :, ::1] p2,
                            const double complex[:, :, ::1] q1,
                            const double complex[:, :, ::1] q2):
    """max |sum_m p1[i,j,m] p2[m,k,l] - sum_m q1[j,k,m] q2[i,m,l]| over i,j,k,l."""
    cdef Py_ssize_t ni = p1.shape[0], nj = p1.shape[1], nm1 = p1.shape[2]
    cdef Py_ssize_t nk = p2.shape[1], nl = p2.shape[2], nm2 = q1.shape[2]
    if p2.shape[0] != nm1 or q1.shape[0] != nj or q1.shape[1] != nk:
        raise ValueError("incompatible tensor shapes")
    if q2.shape[0] != ni or q2.shape[1] != nm2 or q2.shape[2] != nl:
        raise ValueError("incompatible tensor shapes")
    if ni == 0 or nj == 0 or nk == 0 or nl == 0:
        return 0.0

    a_ptr, a_idx, a_val = _csr(p1, ni * nj)     # (i, j) -> m
    b_ptr, b_idx, b_val = _csr(p2, nm1 * nk)    # (m, k) -> l
    c_ptr, c_idx, c_val = _csr(q1, nj * nk)     # (j, k) -> m
    d_ptr, d_idx, d_val = _csr(q2, ni * nm2)    # (i, m) -> l
    cdef Py_ssize_t[::1] ap = a_ptr, ai = a_idx, bp = b_ptr, bi = b_idx
    cdef Py_ssize_t[::1] cp = c_ptr, ci = c_idx, dp = d_ptr, di = d_idx
    cdef const double complex[::1] av = a_val, bv = b_val, cv = c_val, dv = d_val

    cdef double complex[::1] buf = np.zeros(nl, dtype=np.complex128)
    cdef unsigned char[::1] mark = np.zeros(nl, dtype=np.uint8)
    cdef Py_ssize_t[::1] touched = np.zeros(nl, dtype=np.intp)
    cdef Py_ssize_t i, j, k, l, m, s, t, nt
    cdef double complex v
    cdef double best = 0.0, a2
    with nogil:
        for i in range(ni):
            for j in range(nj):
                for k in range(nk):
                    nt = 0
                    for s in range(ap[i * nj + j], ap[i * nj + j + 1]):
                        m = ai[s]
                        v = av[s]
                        for t in range(bp[m * nk + k], bp[m * nk + k + 1]):
                            l = bi[t]
                            if not mark[l]:
                                mark[l] = 1
                                touched[nt] = l
                                nt = nt + 1
                            buf[l] = buf[l] + v * bv[t]
                    for s in range(cp[j * nk + k], cp[j * nk + k + 1]):
                        m = ci[s]
                        v = cv[s]
                        for t in range(dp[i * nm2 + m], dp[i * nm2 + m + 1]):
                            l = di[t]
                            if not mark[l]:
                                mark[l] = 1
                                touched[nt] = l
                                nt = nt + 1
                            buf[l] = buf[l] - v * dv[t]
                    for s in range(nt):
                        l = touched[s]
                        a2 = buf[l].real * buf[l].real + buf[l].imag * buf[l].imag
                        if a2 > best:
                            best = a2
                        buf[l] = 0
                        mark[l] = 0
    return sqrt(best)
