# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi kernel for complex Hermitian matrices."""

from libc.math cimport sqrt, hypot, fabs


cdef double _offdiag_sq(double complex[:, ::1] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    cdef double complex z
    for i in range(n):
        for j in range(n):
            if i != j:
                z = a[i, j]
                s += z.real * z.real + z.imag * z.imag
    return s


def jacobi_sweeps(double complex[:, ::1] a, double complex[:, ::1] v,
                  double rel_tol, int max_sweeps):
    """Diagonalize ``a`` in place, accumulating rotations into ``v``.

    ``v`` must hold the identity on entry. Returns the number of sweeps run.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep = 0
    cdef double fro_sq = 0.0, thresh_sq, r, app, aqq, tau, t, c, s
    cdef double complex e, ce, akp, akq, apk, aqk, z

    for p in range(n):
        for q in range(n):
            z = a[p, q]
            fro_sq += z.real * z.real + z.imag * z.imag
    thresh_sq = rel_tol * rel_tol * fro_sq

    with nogil:
        while sweep < max_sweeps:
            if _offdiag_sq(a, n) <= thresh_sq:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    z = a[p, q]
                    r = hypot(z.real, z.imag)
                    if r < 1e-300:
                        continue
                    e = z / r
                    ce = e.conjugate()
                    app = a[p, p].real
                    aqq = a[q, q].real
                    tau = (aqq - app) / (2.0 * r)
                    if tau >= 0.0:
                        t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                    else:
                        t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * ce * akq
                        a[k, q] = s * akp + c * ce * akq
                    for k in range(n):
                        apk = a[p, k]
                        aqk = a[q, k]
                        a[p, k] = c * apk - s * e * aqk
                        a[q, k] = s * apk + c * e * aqk
                    a[p, p] = app - t * r
                    a[q, q] = aqq + t * r
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        akp = v[k, p]
                        akq = v[k, q]
                        v[k, p] = c * akp - s * ce * akq
                        v[k, q] = s * akp + c * ce * akq
            sweep += 1
    return sweep
