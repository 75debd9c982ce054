"""Pure-Python cyclic Jacobi kernel; same sweep order as the compiled one."""

import math

import numpy as np


def jacobi_sweeps(a, v, rel_tol, max_sweeps):
    n = a.shape[0]
    thresh_sq = rel_tol * rel_tol * float(np.vdot(a, a).real)
    mask = ~np.eye(n, dtype=bool)
    sweep = 0
    while sweep < max_sweeps:
        off = a[mask]
        if float(np.vdot(off, off).real) <= thresh_sq:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = a[p, q]
                r = abs(z)
                if r < 1e-300:
                    continue
                e = z / r
                ce = e.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p - s * ce * col_q
                a[:, q] = s * col_p + c * ce * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p - s * e * row_q
                a[q, :] = s * row_p + c * e * row_q
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * ce * vq
                v[:, q] = s * vp + c * ce * vq
        sweep += 1
    return sweep
