# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled projected-gradient kernels.

Same algorithm, acceptance rule, and termination as ``pure``; only the
inner loops are C. Results agree with the fallback to float tolerance.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

cdef int MAX_HALVINGS = 60


cdef double _value_real(double[:, ::1] q, double[::1] c, double[::1] x) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc = 0.0, row
    for i in range(n):
        row = 0.0
        for j in range(n):
            row += q[i, j] * x[j]
        acc += x[i] * row - 2.0 * c[i] * x[i]
    return acc


cdef void _grad_real(double[:, ::1] q, double[::1] c, double[::1] x,
                     double[::1] out) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j
    cdef double row
    for i in range(n):
        row = 0.0
        for j in range(n):
            row += q[i, j] * x[j]
        out[i] = 2.0 * (row - c[i])


cdef void _project_real(double[::1] x_r, double[::1] x_t, bint nonneg) noexcept nogil:
    cdef Py_ssize_t n = x_r.shape[0]
    cdef Py_ssize_t i
    cdef double a, b, norm
    for i in range(n):
        a = x_r[i]
        b = x_t[i]
        if nonneg:
            if a < 0.0:
                a = 0.0
            if b < 0.0:
                b = 0.0
        norm = sqrt(a * a + b * b)
        if norm > 1.0:
            a /= norm
            b /= norm
        x_r[i] = a
        x_t[i] = b


def solve_pair_disk_qp(q_r, q_t, c_r, c_t, x_r0, x_t0, nonneg=True,
                       tol=1e-7, max_iter=5000):
    """Real disk-constrained QP pair; see the fallback for the contract."""
    cdef double[:, ::1] qr = np.ascontiguousarray(q_r, dtype=float)
    cdef double[:, ::1] qt = np.ascontiguousarray(q_t, dtype=float)
    cdef double[::1] cr = np.ascontiguousarray(c_r, dtype=float)
    cdef double[::1] ct = np.ascontiguousarray(c_t, dtype=float)
    xr_arr = np.array(x_r0, dtype=float, copy=True)
    xt_arr = np.array(x_t0, dtype=float, copy=True)
    cdef double[::1] xr = np.ascontiguousarray(xr_arr)
    cdef double[::1] xt = np.ascontiguousarray(xt_arr)
    cdef Py_ssize_t n = xr.shape[0]
    cdef double[::1] gr = np.empty(n)
    cdef double[::1] gt = np.empty(n)
    cdef double[::1] yr = np.empty(n)
    cdef double[::1] yt = np.empty(n)
    cdef bint nn = bool(nonneg)
    cdef double tol_c = tol
    cdef int max_it = max_iter
    cdef double eta = 1.0
    cdef double f_cur, f_new, lin, step_sq = 0.0, dr, dt
    cdef Py_ssize_t i
    cdef int it = 0, h = 0
    cdef bint ok = False

    with nogil:
        _project_real(xr, xt, nn)
        f_cur = _value_real(qr, cr, xr) + _value_real(qt, ct, xt)
        for it in range(1, max_it + 1):
            _grad_real(qr, cr, xr, gr)
            _grad_real(qt, ct, xt, gt)
            eta = eta * 2.0
            if eta > 1e12:
                eta = 1e12
            for h in range(MAX_HALVINGS):
                for i in range(n):
                    yr[i] = xr[i] - eta * gr[i]
                    yt[i] = xt[i] - eta * gt[i]
                _project_real(yr, yt, nn)
                step_sq = 0.0
                lin = 0.0
                for i in range(n):
                    dr = yr[i] - xr[i]
                    dt = yt[i] - xt[i]
                    step_sq += dr * dr + dt * dt
                    lin += gr[i] * dr + gt[i] * dt
                f_new = _value_real(qr, cr, yr) + _value_real(qt, ct, yt)
                if f_new <= f_cur + lin + step_sq / (2.0 * eta) + 1e-15 * max(1.0, fabs(f_cur)):
                    break
                eta *= 0.5
            for i in range(n):
                xr[i] = yr[i]
                xt[i] = yt[i]
            f_cur = f_new
            if sqrt(step_sq) / eta <= tol_c:
                ok = True
                break

    return xr_arr, xt_arr, (it if ok else max_it), bool(ok)


cdef double _value_cplx(double complex[:, ::1] g, double complex[::1] z,
                        double complex[::1] x) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j
    cdef double complex row
    cdef double acc = 0.0
    for i in range(n):
        row = 0.0
        for j in range(n):
            row += g[i, j] * x[j]
        acc += (x[i].conjugate() * row).real - 2.0 * (z[i].conjugate() * x[i]).real
    return acc


cdef void _grad_cplx(double complex[:, ::1] g, double complex[::1] z,
                     double complex[::1] x, double complex[::1] out) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j
    cdef double complex row
    for i in range(n):
        row = 0.0
        for j in range(n):
            row += g[i, j] * x[j]
        out[i] = 2.0 * (row - z[i])


cdef void _project_cplx(double complex[::1] x_r, double complex[::1] x_t) noexcept nogil:
    cdef Py_ssize_t n = x_r.shape[0]
    cdef Py_ssize_t i
    cdef double norm
    for i in range(n):
        norm = sqrt((x_r[i].conjugate() * x_r[i]).real
                    + (x_t[i].conjugate() * x_t[i]).real)
        if norm > 1.0:
            x_r[i] = x_r[i] / norm
            x_t[i] = x_t[i] / norm


def solve_pair_disk_qp_complex(g_r, g_t, z_r, z_t, x_r0, x_t0,
                               tol=1e-7, max_iter=5000):
    """Complex disk-constrained QP pair; see the fallback for the contract."""
    cdef double complex[:, ::1] gr_m = np.ascontiguousarray(g_r, dtype=complex)
    cdef double complex[:, ::1] gt_m = np.ascontiguousarray(g_t, dtype=complex)
    cdef double complex[::1] zr = np.ascontiguousarray(z_r, dtype=complex)
    cdef double complex[::1] zt = np.ascontiguousarray(z_t, dtype=complex)
    xr_arr = np.array(x_r0, dtype=complex, copy=True)
    xt_arr = np.array(x_t0, dtype=complex, copy=True)
    cdef double complex[::1] xr = np.ascontiguousarray(xr_arr)
    cdef double complex[::1] xt = np.ascontiguousarray(xt_arr)
    cdef Py_ssize_t n = xr.shape[0]
    cdef double complex[::1] gr = np.empty(n, dtype=complex)
    cdef double complex[::1] gt = np.empty(n, dtype=complex)
    cdef double complex[::1] yr = np.empty(n, dtype=complex)
    cdef double complex[::1] yt = np.empty(n, dtype=complex)
    cdef double tol_c = tol
    cdef int max_it = max_iter
    cdef double eta = 1.0
    cdef double f_cur, f_new, lin, step_sq = 0.0
    cdef double complex dr, dt
    cdef Py_ssize_t i
    cdef int it = 0, h = 0
    cdef bint ok = False

    with nogil:
        _project_cplx(xr, xt)
        f_cur = _value_cplx(gr_m, zr, xr) + _value_cplx(gt_m, zt, xt)
        for it in range(1, max_it + 1):
            _grad_cplx(gr_m, zr, xr, gr)
            _grad_cplx(gt_m, zt, xt, gt)
            eta = eta * 2.0
            if eta > 1e12:
                eta = 1e12
            for h in range(MAX_HALVINGS):
                for i in range(n):
                    yr[i] = xr[i] - eta * gr[i]
                    yt[i] = xt[i] - eta * gt[i]
                _project_cplx(yr, yt)
                step_sq = 0.0
                lin = 0.0
                for i in range(n):
                    dr = yr[i] - xr[i]
                    dt = yt[i] - xt[i]
                    step_sq += (dr.conjugate() * dr).real + (dt.conjugate() * dt).real
                    lin += (gr[i].conjugate() * dr).real + (gt[i].conjugate() * dt).real
                f_new = _value_cplx(gr_m, zr, yr) + _value_cplx(gt_m, zt, yt)
                if f_new <= f_cur + lin + step_sq / (2.0 * eta) + 1e-15 * max(1.0, fabs(f_cur)):
                    break
                eta *= 0.5
            for i in range(n):
                xr[i] = yr[i]
                xt[i] = yt[i]
            f_cur = f_new
            if sqrt(step_sq) / eta <= tol_c:
                ok = True
                break

    return xr_arr, xt_arr, (it if ok else max_it), bool(ok)
