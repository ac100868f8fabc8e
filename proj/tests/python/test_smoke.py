import math

import numpy as np
import pytest

import quadprop as qp


def test_preset_and_sigma():
    spec = qp.preset("damped", lam=0.6)
    assert spec.dimension == 1
    assert math.isclose(qp.sigma_of_t(spec, 0, 0.5), 0.16, rel_tol=1e-14)
    assert qp.validate(spec) == []
    with pytest.raises(qp.SpecError):
        qp.preset("damped", lam=1.2)


def test_characteristic_and_caustics():
    sol = qp.solve_characteristic(qp.preset("isotropic"), 0, 8.0)
    mu = np.asarray(sol["mu"])
    t = np.asarray(sol["t"])
    assert np.max(np.abs(mu - np.sin(t))) < 1e-10
    assert np.allclose(sol["caustics"], [math.pi, 2 * math.pi], atol=1e-9)


def test_phases_match_riccati():
    spec = qp.preset("isotropic")
    a = qp.phase_coefficients(spec, 0, 1.0)
    b = qp.riccati_oracle(spec, 0, 1e-3, 1.0)
    assert abs(a.alpha - b.alpha) < 1e-6
    assert abs(a.gamma - b.gamma) < 1e-6


def test_kernel_against_closed_form():
    spec = qp.preset("isotropic")
    g = qp.eval_kernel(spec, [0.7], [-0.3], 0.9)
    ref = qp.table1_kernel("G2", 0.7, -0.3, 0.9)
    assert abs(g - ref) / abs(ref) < 1e-9


def test_propagation_norms_and_centroid():
    grid = qp.Grid(512, 0.0, 20.0 / 512)
    psi = qp.gaussian_state(grid, [2.0], [1.0], [0.0])
    prop = qp.Propagator(qp.preset("isotropic"), 2.0)
    out = prop.propagate(psi, 1.0, qp.Method.direct)
    assert abs(out.l2_norm() - 1.0) < 1e-8
    assert abs(out.centroid()[0] - 2.0 * math.cos(1.0)) < 1e-3
    vals = out.values
    assert vals.shape == (512,)
    assert vals.dtype == np.complex128


def test_state_roundtrip_via_numpy():
    grid = qp.Grid(64, 0.0, 0.25)
    xs = np.array(grid.points(0))
    vals = np.exp(-(xs**2) / 2).astype(np.complex128)
    st = qp.GridState(grid, vals)
    assert np.allclose(st.values, vals)


def test_nls_soliton_short_run():
    grid = qp.Grid(512, 0.2, 36.0 / 512)
    u0 = qp.soliton_state(grid, 1.0, 0.5, 0.0)
    traj = qp.solve_nls(qp.preset("free"), qp.Nonlinearity(3.0, -1.0), u0, 0.5, 1e-3)
    assert not traj.truncated_by_guard
    assert abs(traj.mass_log[-1] - traj.mass_log[0]) < 1e-6
    t, final = traj.snapshots[-1]
    xs = np.array(final.grid.points(0))
    err = np.abs(np.abs(final.values) - 1.0 / np.cosh(xs - 0.5 * t))
    assert np.sqrt(np.sum(err**2) * (36.0 / 512)) < 1e-3


def test_nls_supercritical_rejected():
    grid = qp.Grid(64, 0.0, 0.25)
    u0 = qp.gaussian_state(grid, [0.0], [1.0], [0.0])
    with pytest.raises(qp.SpecError):
        qp.solve_nls(qp.preset("free"), qp.Nonlinearity(5.0, 1.0), u0, 0.1, 1e-2)


def test_strichartz_helpers():
    assert qp.is_admissible(2.0, 6.0, 1.5) == "sharp"
    assert qp.is_admissible(2.0, float("inf"), 1.0) == "forbidden_endpoint"
    assert qp.endpoint(1.5) == (2.0, 6.0)
    w = qp.decay_weight([1.0, 1.0], [-1, 1], 0, 0.1, 1.0, 1.0)
    assert abs(w - math.sqrt(math.exp(-1.0) / (2 * math.pi * math.sin(1.0)))) < 1e-12


def test_spec_json_roundtrip():
    spec = qp.preset("anisotropic", omega=2.0)
    back = qp.HamiltonianSpec.from_json(spec.to_json())
    assert abs(qp.sigma_of_t(back, 0, 0.3) - 1.0) < 1e-14
