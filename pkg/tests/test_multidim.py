import numpy as np
import pytest

from omqm import (DomainError, QuantumParams, State3D, ThermoParams, isoentropic_value,
                  mech_lagrangian_3d, onshell_sphere_radius, onshell_state,
                  sample_onshell_sphere, thermo_lagrangian_3d, to_quantum)


def st(q, v):
    return State3D(np.asarray(q, float), np.asarray(v, float))


def _random_rotation(rng):
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])


def test_thermo_lagrangian_values(unit_tp):
    assert thermo_lagrangian_3d(unit_tp, st([0, 0, 0], [0, 0, 0])) == 0.0
    tp = ThermoParams(R=2.0, s=2.0, k_B=1.0)  # gamma = 1
    assert thermo_lagrangian_3d(tp, st([1, 0, 0], [0, 1, 0])) == 2.0


def test_thermo_lagrangian_rotation_invariant(unit_tp, rng):
    for _ in range(25):
        q = rng.standard_normal(3)
        v = rng.standard_normal(3)
        rot = _random_rotation(rng)
        a = thermo_lagrangian_3d(unit_tp, st(q, v))
        b = thermo_lagrangian_3d(unit_tp, st(rot @ q, rot @ v))
        assert a == pytest.approx(b, abs=1e-12)


def test_mech_lagrangian_values(unit_qp):
    assert mech_lagrangian_3d(unit_qp, st([0, 0, 0], [0, 0, 0])) == 0.0
    qp = QuantumParams(m=2.0, omega=1.0, hbar=1.0)
    assert mech_lagrangian_3d(qp, st([1, 0, 0], [0, 0, 0])) == -1.0


def test_equipotential_membership(unit_qp, rng):
    # V(q) = m w^2 |q|^2 / 2 is constant on spheres |q| = rho
    rho = 1.7
    pot = lambda q: 0.5 * unit_qp.m * unit_qp.omega ** 2 * float(q @ q)
    values = []
    for _ in range(50):
        d = rng.standard_normal(3)
        values.append(pot(rho * d / np.linalg.norm(d)))
    assert np.ptp(values) < 1e-12


def test_isoentropic_values(unit_tp):
    assert isoentropic_value(unit_tp, st([0, 0, 0], [0, 0, 0])) == 0.0
    assert isoentropic_value(unit_tp, st([1, 1, 0], [0, 0, 1])) == 3.0
    # on shell: v = gamma q makes the value 2 gamma^2 |q|^2
    q = np.array([0.3, -1.2, 0.5])
    g = unit_tp.gamma()
    assert isoentropic_value(unit_tp, onshell_state(unit_tp, q)) == pytest.approx(
        2 * g * g * float(q @ q), rel=1e-15)


def test_onshell_trajectory_keeps_proportionality(unit_tp):
    # along q(tau) = q2 e^{gamma(tau - tau2)} the value is 2 gamma^2 |q(tau)|^2
    q2 = np.array([1.0, 0.4, -0.3])
    g = unit_tp.gamma()
    for tau in np.linspace(-3.0, 0.0, 7):
        q = q2 * np.exp(g * tau)
        val = isoentropic_value(unit_tp, onshell_state(unit_tp, q))
        assert val == pytest.approx(2 * g * g * float(q @ q), rel=1e-14)


def test_sphere_radius_values(unit_tp):
    assert onshell_sphere_radius(unit_tp, np.sqrt(2.0)) == pytest.approx(1.0, rel=1e-15)
    assert onshell_sphere_radius(unit_tp, 1e-9) < 1e-8
    with pytest.raises(DomainError):
        onshell_sphere_radius(unit_tp, 0.0)


def test_sphere_radius_round_trip(unit_tp, rng):
    for rho in (0.1, 1.0, 10.0):
        r = onshell_sphere_radius(unit_tp, rho)
        for _ in range(200):
            d = rng.standard_normal(3)
            q = r * d / np.linalg.norm(d)
            val = isoentropic_value(unit_tp, onshell_state(unit_tp, q))
            assert val == pytest.approx(rho ** 2, abs=1e-12)


def test_level_sets_are_spheres(unit_tp, rng):
    # isotropy: on-shell value depends only on |q|; monotonic in |q|
    vals_fixed_radius = []
    for _ in range(30):
        d = rng.standard_normal(3)
        q = 1.3 * d / np.linalg.norm(d)
        vals_fixed_radius.append(isoentropic_value(unit_tp, onshell_state(unit_tp, q)))
    assert np.ptp(vals_fixed_radius) < 1e-12
    radii = np.linspace(0.1, 3.0, 12)
    vals = [isoentropic_value(unit_tp, onshell_state(unit_tp, np.array([r, 0, 0])))
            for r in radii]
    assert np.all(np.diff(vals) > 0)


def test_duality_radius_correspondence(unit_tp):
    # with omega = gamma, the mechanical sphere label rho and the on-shell
    # configuration radius differ by exactly sqrt(2) gamma
    qp = to_quantum(unit_tp, hbar=1.0)
    assert qp.omega == unit_tp.gamma()
    for rho in (0.5, 2.0):
        r = onshell_sphere_radius(unit_tp, rho)
        assert np.sqrt(2.0) * unit_tp.gamma() * r == pytest.approx(rho, rel=1e-15)


def test_sample_cloud(unit_tp):
    pts = sample_onshell_sphere(unit_tp, 2.0, 100, seed=9)
    assert pts.shape == (100, 4)
    radii = np.linalg.norm(pts[:, :3], axis=1)
    assert np.allclose(radii, onshell_sphere_radius(unit_tp, 2.0), rtol=1e-12)
    assert np.allclose(pts[:, 3], 4.0, atol=1e-12)


def test_state_validation():
    with pytest.raises(DomainError):
        State3D(np.zeros(2), np.zeros(3))
    with pytest.raises(DomainError):
        State3D(np.array([np.nan, 0, 0]), np.zeros(3))
