"""Pure-Python projected-gradient kernels (fallback for the compiled ones).

Both kernels minimize a pair of convex quadratics coupled only through a
per-element disk constraint, by projected gradient with Armijo
backtracking: accept a step when

    f(x+) <= f(x) + <grad, x+ - x> + ||x+ - x||^2 / (2 eta)

and stop when the gradient mapping ||x - proj(x - eta grad)|| / eta falls
below ``tol``. The compiled module implements the identical algorithm.
"""

import numpy as np

_MAX_HALVINGS = 60


def _project_real(x_r, x_t, nonneg):
    if nonneg:
        x_r = np.maximum(x_r, 0.0)
        x_t = np.maximum(x_t, 0.0)
    norms = np.hypot(x_r, x_t)
    scale = np.where(norms > 1.0, 1.0 / np.maximum(norms, 1e-300), 1.0)
    return x_r * scale, x_t * scale


def _project_complex(x_r, x_t):
    norms = np.sqrt(np.abs(x_r) ** 2 + np.abs(x_t) ** 2)
    scale = np.where(norms > 1.0, 1.0 / np.maximum(norms, 1e-300), 1.0)
    return x_r * scale, x_t * scale


def _pg_loop(value, gradient, project, x_r, x_t, tol, max_iter):
    f_cur = value(x_r, x_t)
    eta = 1.0
    for it in range(1, max_iter + 1):
        g_r, g_t = gradient(x_r, x_t)
        eta = min(eta * 2.0, 1e12)
        for _ in range(_MAX_HALVINGS):
            c_r, c_t = project(x_r - eta * g_r, x_t - eta * g_t)
            d_r, d_t = c_r - x_r, c_t - x_t
            step_sq = float(np.vdot(d_r, d_r).real + np.vdot(d_t, d_t).real)
            lin = float(np.vdot(g_r, d_r).real + np.vdot(g_t, d_t).real)
            f_new = value(c_r, c_t)
            if f_new <= f_cur + lin + step_sq / (2.0 * eta) + 1e-15 * max(1.0, abs(f_cur)):
                break
            eta *= 0.5
        x_r, x_t, f_cur = c_r, c_t, f_new
        if np.sqrt(step_sq) / eta <= tol:
            return x_r, x_t, it, True
    return x_r, x_t, max_iter, False


def solve_pair_disk_qp(q_r, q_t, c_r, c_t, x_r0, x_t0, nonneg=True,
                       tol=1e-7, max_iter=5000):
    """min x_r^T Q_r x_r - 2 c_r^T x_r + x_t^T Q_t x_t - 2 c_t^T x_t
    s.t. x_r[l]^2 + x_t[l]^2 <= 1 per element (and x >= 0 when nonneg).

    Returns (x_r, x_t, iterations, converged).
    """
    q_r = np.ascontiguousarray(q_r, dtype=float)
    q_t = np.ascontiguousarray(q_t, dtype=float)
    c_r = np.asarray(c_r, dtype=float)
    c_t = np.asarray(c_t, dtype=float)

    def value(x_r, x_t):
        return float(x_r @ q_r @ x_r - 2.0 * c_r @ x_r
                     + x_t @ q_t @ x_t - 2.0 * c_t @ x_t)

    def gradient(x_r, x_t):
        return 2.0 * (q_r @ x_r - c_r), 2.0 * (q_t @ x_t - c_t)

    def project(x_r, x_t):
        return _project_real(x_r, x_t, nonneg)

    x_r, x_t = project(np.asarray(x_r0, dtype=float).copy(),
                       np.asarray(x_t0, dtype=float).copy())
    return _pg_loop(value, gradient, project, x_r, x_t, tol, max_iter)


def solve_pair_disk_qp_complex(g_r, g_t, z_r, z_t, x_r0, x_t0,
                               tol=1e-7, max_iter=5000):
    """min sum_k x_k^H G_k x_k - 2 Re(z_k^H x_k) over complex pairs with
    |x_r[l]|^2 + |x_t[l]|^2 <= 1 per element.

    Returns (x_r, x_t, iterations, converged).
    """
    g_r = np.ascontiguousarray(g_r, dtype=complex)
    g_t = np.ascontiguousarray(g_t, dtype=complex)
    z_r = np.asarray(z_r, dtype=complex)
    z_t = np.asarray(z_t, dtype=complex)

    def value(x_r, x_t):
        return float((np.vdot(x_r, g_r @ x_r) - 2.0 * np.vdot(z_r, x_r)
                      + np.vdot(x_t, g_t @ x_t) - 2.0 * np.vdot(z_t, x_t)).real)

    def gradient(x_r, x_t):
        return 2.0 * (g_r @ x_r - z_r), 2.0 * (g_t @ x_t - z_t)

    x_r, x_t = _project_complex(np.asarray(x_r0, dtype=complex).copy(),
                                np.asarray(x_t0, dtype=complex).copy())
    return _pg_loop(value, gradient, _project_complex, x_r, x_t, tol, max_iter)
