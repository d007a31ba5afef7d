import numpy as np
import pytest

from starsec import max_eigenvalue, mm_phase_step, solve_amplitudes
from starsec.rates import REGION_COL, StarProfile
from starsec.scenario import REGIONS
from starsec.surrogate import RisQuadratics, ris_objective, ris_objective_vec, update_aux, ris_quadratics

from conftest import random_point, random_profile, tiny_config


def make_quads(n, rng, z_scale=1.0, gamma_scale=1.0):
    def psd():
        r = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return gamma_scale * (r @ r.conj().T) / n
    g1, g2, g3 = psd(), psd(), psd()
    z1 = z_scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    z2 = z_scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return RisQuadratics(gamma1=g1, gamma2=g2, gamma3=g3, gamma=g1 + g2 + g3,
                         z1=z1, z2=z2, d=rng.standard_normal())


def mm_bound(quads, theta, theta_ref):
    """Largest-eigenvalue tangent majorant of the surface objective."""
    lam = max_eigenvalue(quads.gamma)
    shift = lam * np.eye(len(theta)) - quads.gamma
    return float(lam * np.vdot(theta, theta).real
                 - 2 * np.vdot(theta, shift @ theta_ref).real
                 + np.vdot(theta_ref, shift @ theta_ref).real
                 - 2 * np.vdot(theta, quads.z_sum).real
                 - quads.d)


def test_max_eigenvalue_trivial_cases():
    assert max_eigenvalue(np.eye(4, dtype=complex)) == pytest.approx(1.0)
    assert max_eigenvalue(np.diag([1.0, 2.0, 3.0]).astype(complex)) == pytest.approx(3.0)


def test_max_eigenvalue_rejects_non_hermitian():
    bad = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
    with pytest.raises(ValueError):
        max_eigenvalue(bad)


def test_max_eigenvalue_against_characteristic_cubic(rng):
    # at L=3 the spectrum solves the characteristic cubic built from the
    # trace invariants; np.roots is independent of the eigensolver
    for trial in range(10):
        r = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        mat = r @ r.conj().T
        tr = np.trace(mat).real
        tr2 = np.trace(mat @ mat).real
        det = np.linalg.det(mat).real
        coeffs = [1.0, -tr, 0.5 * (tr ** 2 - tr2), -det]
        root = max(np.roots(coeffs).real)
        assert max_eigenvalue(mat) == pytest.approx(root, rel=1e-9)


def test_max_eigenvalue_power_iteration_branch(rng):
    n = 300  # beyond the dense-eigensolver cutoff
    r = rng.standard_normal((n, 5))
    mat = (r @ r.T).astype(complex)
    assert max_eigenvalue(mat) == pytest.approx(np.linalg.eigvalsh(mat)[-1], rel=1e-8)


def test_phase_step_aligns_with_linear_pull(rng):
    # Gamma = lam*I makes the quadratic direction-free: the optimal phase
    # aligns theta with z, i.e. arg(z); real-positive z pins phases at 0
    n = 4
    lam = 2.0
    for z in (np.ones(n) + 0j, np.exp(1j * rng.uniform(0, 2 * np.pi, n))):
        quads = {k: RisQuadratics(
            gamma1=lam * np.eye(n, dtype=complex), gamma2=np.zeros((n, n), complex),
            gamma3=np.zeros((n, n), complex), gamma=lam * np.eye(n, dtype=complex),
            z1=z / 2, z2=z / 2, d=0.0) for k in REGIONS}
        prof = random_profile(n, rng)
        out = mm_phase_step(quads, prof)
        for k in REGIONS:
            expected = np.mod(np.angle(z), 2 * np.pi)
            assert np.allclose(out.phase[:, REGION_COL[k]], expected, atol=1e-12)
        assert np.array_equal(out.amp, prof.amp)


def test_phase_step_keeps_phase_on_zero_pull(rng):
    n = 3
    zeros = np.zeros((n, n), complex)
    quads = {k: RisQuadratics(gamma1=zeros, gamma2=zeros, gamma3=zeros,
                              gamma=zeros, z1=np.zeros(n, complex),
                              z2=np.zeros(n, complex), d=0.0) for k in REGIONS}
    prof = random_profile(n, rng)
    out = mm_phase_step(quads, prof)
    assert np.array_equal(out.phase, prof.phase)


def test_majorant_tangent_at_reference(rng):
    for trial in range(20):
        quads = make_quads(5, rng)
        theta = random_profile(5, rng).coefficient_vector("r")
        g = ris_objective_vec(quads, theta)
        bound = mm_bound(quads, theta, theta)
        assert abs(bound - g) <= 1e-10 * max(1.0, abs(g))


def test_majorant_dominates_everywhere(rng):
    for trial in range(100):
        quads = make_quads(4, rng)
        prof_a, prof_b = random_profile(4, rng), random_profile(4, rng)
        theta, ref = prof_a.coefficient_vector("r"), prof_b.coefficient_vector("t")
        assert mm_bound(quads, theta, ref) - ris_objective_vec(quads, theta) >= -1e-9


def test_shifted_matrix_is_psd(rng):
    for trial in range(20):
        quads = make_quads(6, rng)
        lam = max_eigenvalue(quads.gamma)
        eigs = np.linalg.eigvalsh(lam * np.eye(6) - quads.gamma)
        assert eigs[0] >= -1e-9


def test_phase_step_descends(rng):
    for trial in range(100):
        quads = {k: make_quads(5, rng) for k in REGIONS}
        prof = random_profile(5, rng)
        out = mm_phase_step(quads, prof)
        assert ris_objective(quads, out) <= ris_objective(quads, prof) + 1e-9


def test_amplitude_step_descends_and_stays_feasible(rng):
    for trial in range(50):
        quads = {k: make_quads(5, rng) for k in REGIONS}
        prof = random_profile(5, rng)
        out = solve_amplitudes(quads, prof)
        assert ris_objective(quads, out) <= ris_objective(quads, prof) + 1e-9
        assert np.all(out.amp >= 0)
        assert np.all(out.amp.sum(axis=1) <= 1 + 1e-12)
        assert np.array_equal(out.phase, prof.phase)


def test_amplitudes_saturate_for_pure_linear_pull(rng):
    # no quadratic cost and a pull favoring one region: that region's
    # split rails at 1, the other at 0
    n = 3
    zeros = np.zeros((n, n), complex)
    prof = StarProfile(np.full((n, 2), 0.25), np.zeros((n, 2)))
    quads = {
        "r": RisQuadratics(gamma1=zeros, gamma2=zeros, gamma3=zeros, gamma=zeros,
                           z1=np.full(n, 0.5 + 0j), z2=np.full(n, 0.5 + 0j), d=0.0),
        "t": RisQuadratics(gamma1=zeros, gamma2=zeros, gamma3=zeros, gamma=zeros,
                           z1=np.full(n, -0.5 + 0j), z2=np.full(n, -0.5 + 0j), d=0.0),
    }
    out = solve_amplitudes(quads, prof)
    assert np.allclose(out.amp[:, 0], 1.0, atol=1e-6)
    assert np.allclose(out.amp[:, 1], 0.0, atol=1e-6)


def test_symmetric_instance_splits_evenly(rng):
    n = 2
    shared = make_quads(n, rng)
    prof = StarProfile(np.full((n, 2), 0.3), np.zeros((n, 2)))
    quads = {k: shared for k in REGIONS}
    out = solve_amplitudes(quads, prof)
    assert np.allclose(out.amp[:, 0], out.amp[:, 1], atol=1e-6)
    assert np.all(out.amp <= 0.5 + 1e-9)


def grid_oracle(quads, prof, coarse=41, refinements=4):
    """Multi-scale grid search over the two per-element split pairs at
    fixed phases; final local spacing 1e-3. Independent of the projected
    gradient path."""
    phi = {k: np.exp(1j * prof.phase[:, REGION_COL[k]]) for k in REGIONS}
    q = {k: (quads[k].gamma * np.outer(phi[k].conj(), phi[k])).real for k in REGIONS}
    c = {k: (phi[k].conj() * quads[k].z_sum).real for k in REGIONS}

    def value(x):  # x shape (..., 2, L): square-root splits per region
        total = 0.0
        for idx, k in enumerate(REGIONS):
            xk = x[..., idx, :]
            total = total + np.einsum("...i,ij,...j->...", xk, q[k], xk) - 2 * xk @ c[k]
        return total

    n = prof.n_elements
    lo = np.zeros((2, n))
    hi = np.ones((2, n))
    best_x, best_val = None, np.inf
    for level in range(refinements + 1):
        axes = [np.linspace(lo[i, l], hi[i, l], coarse) for i in range(2) for l in range(n)]
        mesh = np.meshgrid(*axes, indexing="ij")
        x = np.stack([m.ravel() for m in mesh], axis=-1).reshape(-1, 2, n)
        feas = np.sum(x ** 2, axis=1) <= 1.0 + 1e-12
        x = x[np.all(feas, axis=1)]
        vals = value(x)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best_x = float(vals[i]), x[i]
        span = (hi - lo) / (coarse - 1)
        lo = np.clip(best_x - 2 * span, 0.0, 1.0)
        hi = np.clip(best_x + 2 * span, 0.0, 1.0)
    return best_val


def test_amplitude_solve_matches_grid_oracle(rng):
    for trial in range(3):
        quads = {k: make_quads(2, rng, z_scale=0.8) for k in REGIONS}
        prof = random_profile(2, rng)
        out = solve_amplitudes(quads, prof)
        got = ris_objective(quads, out)
        const = -sum(quads[k].d for k in REGIONS)
        best = grid_oracle(quads, prof) + const
        assert got - best <= 1e-4 * max(1.0, abs(best))


def test_dark_system_returns_input(rng):
    n = 4
    zeros = np.zeros((n, n), complex)
    quads = {k: RisQuadratics(gamma1=zeros, gamma2=zeros, gamma3=zeros, gamma=zeros,
                              z1=np.zeros(n, complex), z2=np.zeros(n, complex), d=0.0)
             for k in REGIONS}
    prof = random_profile(n, rng)
    out = solve_amplitudes(quads, prof)
    assert out is prof


def test_steps_never_increase_model_obj_on_live_instances():
    cfg = tiny_config()
    for seed in range(10):
        ch, beams, prof = random_point(cfg, 8000 + seed)
        aux = update_aux(ch, beams, prof, cfg)
        quads = ris_quadratics(aux, ch, beams, cfg)
        stepped = mm_phase_step(quads, prof)
        refit = solve_amplitudes(quads, stepped)
        g0, g1, g2 = (ris_objective(quads, p) for p in (prof, stepped, refit))
        assert g1 <= g0 + 1e-9
        assert g2 <= g1 + 1e-9
