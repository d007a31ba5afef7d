"""Backend equivalence and projection behavior of the hot kernels."""

import numpy as np
import pytest

from starsec._core import BACKEND, pure

try:
    from starsec._core import _kernels as compiled
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels unavailable")


def real_instance(n, rng, scale=1.0):
    def psd():
        r = rng.standard_normal((n, n))
        return r @ r.T + 0.05 * np.eye(n)
    q_r, q_t = psd(), psd()
    c_r, c_t = scale * rng.standard_normal(n), scale * rng.standard_normal(n)
    x0 = np.abs(rng.standard_normal((2, n))) * 0.3
    return q_r, q_t, c_r, c_t, x0[0], x0[1]


def complex_instance(n, rng, scale=1.0):
    def psd():
        r = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return r @ r.conj().T + 0.05 * np.eye(n)
    z = scale * (rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n)))
    x0 = 0.3 * (rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n)))
    return psd(), psd(), z[0], z[1], x0[0], x0[1]


def real_value(q_r, q_t, c_r, c_t, x_r, x_t):
    return float(x_r @ q_r @ x_r - 2 * c_r @ x_r + x_t @ q_t @ x_t - 2 * c_t @ x_t)


def test_pure_real_feasible_and_converged(rng):
    for trial in range(10):
        args = real_instance(6, rng)
        x_r, x_t, iters, ok = pure.solve_pair_disk_qp(*args)
        assert ok and iters <= 5000
        assert np.all(x_r >= 0) and np.all(x_t >= 0)
        assert np.all(x_r ** 2 + x_t ** 2 <= 1 + 1e-12)


def test_pure_complex_feasible_and_converged(rng):
    for trial in range(10):
        args = complex_instance(6, rng)
        x_r, x_t, iters, ok = pure.solve_pair_disk_qp_complex(*args)
        assert ok
        assert np.all(np.abs(x_r) ** 2 + np.abs(x_t) ** 2 <= 1 + 1e-12)


def test_unconstrained_interior_solution_is_exact(rng):
    # a target well inside the disk: the PG must hit Q^{-1} c
    q = np.eye(3)
    c = np.array([0.2, -0.1, 0.05])
    x_r, x_t, _, ok = pure.solve_pair_disk_qp(q, q, c, np.zeros(3),
                                              np.zeros(3), np.zeros(3), nonneg=False)
    assert ok
    assert np.allclose(x_r, c, atol=1e-7)
    assert np.allclose(x_t, 0.0, atol=1e-7)


def test_nonneg_flag_clamps(rng):
    q = np.eye(2)
    c = np.array([-0.5, 0.3])
    x_r, x_t, _, _ = pure.solve_pair_disk_qp(q, q, c, np.zeros(2),
                                             np.full(2, 0.2), np.zeros(2), nonneg=True)
    assert np.all(x_r >= 0)
    assert x_r[0] == pytest.approx(0.0, abs=1e-9)
    assert x_r[1] == pytest.approx(0.3, abs=1e-7)


@needs_compiled
def test_backends_agree_real(rng):
    for trial in range(15):
        args = real_instance(8, rng, scale=2.0)
        xr_p, xt_p, _, _ = pure.solve_pair_disk_qp(*args)
        xr_c, xt_c, _, _ = compiled.solve_pair_disk_qp(*args)
        f_p = real_value(args[0], args[1], args[2], args[3], xr_p, xt_p)
        f_c = real_value(args[0], args[1], args[2], args[3], xr_c, xt_c)
        assert f_c == pytest.approx(f_p, rel=1e-10, abs=1e-12)
        assert np.allclose(xr_c, xr_p, atol=1e-6)
        assert np.allclose(xt_c, xt_p, atol=1e-6)


@needs_compiled
def test_backends_agree_complex(rng):
    for trial in range(15):
        args = complex_instance(8, rng, scale=2.0)
        xr_p, xt_p, _, _ = pure.solve_pair_disk_qp_complex(*args)
        xr_c, xt_c, _, _ = compiled.solve_pair_disk_qp_complex(*args)

        def value(x_r, x_t):
            return float((np.vdot(x_r, args[0] @ x_r) - 2 * np.vdot(args[2], x_r)
                          + np.vdot(x_t, args[1] @ x_t) - 2 * np.vdot(args[3], x_t)).real)

        assert value(xr_c, xt_c) == pytest.approx(value(xr_p, xt_p), rel=1e-10, abs=1e-12)
        assert np.allclose(xr_c, xr_p, atol=1e-6)
        assert np.allclose(xt_c, xt_p, atol=1e-6)


def test_iteration_cap_reported(rng):
    args = real_instance(6, rng, scale=5.0)
    _, _, iters, ok = pure.solve_pair_disk_qp(*args, tol=1e-16, max_iter=3)
    assert iters == 3 and not ok


def test_backend_selection_reports_a_backend():
    assert BACKEND in ("compiled", "pure")
