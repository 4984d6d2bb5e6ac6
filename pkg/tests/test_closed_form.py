import numpy as np
import pytest
from oracles import cquad, compose_propagators_quad, gaussian_moments, window_quad

from omqm import (CausticError, DomainError, Gate, OrderingError, QuantumParams, ThermoParams,
                  conditional_density, euclidean_propagator, feynman_propagator,
                  ground_state_density, stationary_density, to_quantum, to_thermo,
                  transition_density, wick_identity_residual)


# ------------------------------------------------------------ stationary law

def test_stationary_peak_value(unit_tp):
    # normalization oracle: 1 / integral of the bare exponential
    bare = lambda x: np.exp(-unit_tp.s * x * x / (2.0 * unit_tp.k_B))
    norm = window_quad(bare, 0.0, 1.0)
    assert stationary_density(unit_tp, 0.0) == pytest.approx(1.0 / norm, rel=1e-12)
    assert stationary_density(unit_tp, 0.0) == pytest.approx(0.3989422804, rel=1e-9)


def test_stationary_moments_by_quadrature(unit_tp):
    mass, mean, var = gaussian_moments(lambda x: stationary_density(unit_tp, x), 0.0, 1.0)
    assert mass == pytest.approx(1.0, abs=1e-9)
    assert mean == pytest.approx(0.0, abs=1e-12)
    assert var == pytest.approx(1.0, rel=1e-9)


def test_stationary_tails():
    tp = ThermoParams(R=1.0, s=2.0, k_B=1.0)
    assert stationary_density(tp, 1e3) == 0.0
    assert stationary_density(tp, -1e3) == 0.0


@pytest.mark.parametrize("R,s,k_B", [(1, 1, 1), (2.5, 0.7, 1.3), (0.4, 3.0, 0.2)])
def test_densities_normalized(R, s, k_B):
    tp = ThermoParams(R=R, s=s, k_B=k_B)
    sig = np.sqrt(tp.stationary_variance())
    mass = window_quad(lambda x: stationary_density(tp, x), 0.0, sig)
    assert mass == pytest.approx(1.0, abs=1e-9)
    for a, x1 in ((0.2, 1.1), (1.0, -2.0), (5.0, 0.3)):
        u = np.exp(-a)
        mass = window_quad(lambda x: transition_density(tp, x, x1, a),
                           u * x1, sig * np.sqrt(1 - u * u))
        assert mass == pytest.approx(1.0, abs=1e-9)
        assert np.all(transition_density(tp, np.linspace(-8, 8, 50) * sig, x1, a) >= 0.0)


# ----------------------------------------------------------- conditional law

def test_conditional_moments_at_log2_lag(unit_tp):
    # u = 1/2; moments by quadrature oracle
    a = np.log(2.0)
    f = lambda x: transition_density(unit_tp, x, 1.0, a)
    _, mean, var = gaussian_moments(f, 0.5, 1.0)
    assert mean == pytest.approx(0.5, abs=1e-10)
    assert var == pytest.approx(0.75, rel=1e-9)


def test_conditional_long_time_reaches_stationary(unit_tp):
    xs = np.linspace(-6, 6, 101)
    d = np.abs(transition_density(unit_tp, xs, 3.0, 40.0) - stationary_density(unit_tp, xs))
    assert d.max() < 1e-15


def test_conditional_collapse_rate_at_a20(unit_tp):
    # residual of the collapse is (to first order) u * |x1| * max|phi'|; check
    # the canonical x1 = 0 gate at 1e-10 and the u-scaled bound elsewhere
    xs = np.linspace(-8, 8, 401)
    stat = stationary_density(unit_tp, xs)
    u = np.exp(-20.0)
    assert np.max(np.abs(transition_density(unit_tp, xs, 0.0, 20.0) - stat)) < 1e-10
    for x1 in (0.1, -0.1):
        assert np.max(np.abs(transition_density(unit_tp, xs, x1, 20.0) - stat)) < 1e-10
    for x1 in (1.0, 4.0, 8.0):
        sup = np.max(np.abs(transition_density(unit_tp, xs, x1, 20.0) - stat))
        assert sup < 0.25 * u * x1 + 1e-14


def test_conditional_short_time_concentrates(unit_tp):
    a = 1e-4
    f = lambda x: transition_density(unit_tp, x, 1.0, a)
    _, mean, var = gaussian_moments(f, np.exp(-a), 0.02)
    assert mean == pytest.approx(np.exp(-a), abs=1e-10)  # -> x1 as a -> 0+
    assert var == pytest.approx(1.0 - np.exp(-2 * a), rel=1e-6)
    assert var < 3e-4  # concentration: variance -> 0


def test_gate_interface_and_ordering(unit_tp):
    g1 = Gate(x=1.0, tau=0.5)
    g2 = Gate(x=-0.3, tau=1.5)
    direct = transition_density(unit_tp, g2.x, g1.x, unit_tp.gamma() * 1.0)
    assert conditional_density(unit_tp, g2, g1) == direct
    with pytest.raises(OrderingError):
        conditional_density(unit_tp, g1, g2)
    with pytest.raises(OrderingError):
        conditional_density(unit_tp, g1, Gate(x=0.0, tau=0.5))
    with pytest.raises(DomainError):
        Gate(x=np.inf, tau=0.0)


# --------------------------------------------------------------- ground state

def test_ground_state_peak(unit_qp):
    bare = lambda x: np.exp(-unit_qp.m * unit_qp.omega * x * x / unit_qp.hbar)
    norm = window_quad(bare, 0.0, 1.0)
    assert ground_state_density(unit_qp, 0.0) == pytest.approx(1.0 / norm, rel=1e-12)
    assert ground_state_density(unit_qp, 0.0) == pytest.approx(0.5641895835, rel=1e-9)
    assert ground_state_density(unit_qp, 1e3) == 0.0


def test_ground_state_equals_transported_stationary(unit_qp):
    for k_B in (1.0, 0.37, 42.0):
        tp = to_thermo(unit_qp, k_B)
        xs = np.linspace(-5, 5, 101)
        d = np.abs(ground_state_density(unit_qp, xs) - stationary_density(tp, xs))
        assert d.max() < 1e-12


# ----------------------------------------------------------------- propagator

def test_propagator_quarter_period(unit_qp):
    # at w*dt = pi/2: cos = 0, sin = 1, so the phase is -i x2 x1 and the
    # prefactor has modulus (2 pi)^{-1/2}
    for x1, x2 in ((0.6, -1.1), (0.0, 2.0), (1.3, 1.3)):
        K = feynman_propagator(unit_qp, x2, np.pi / 2, x1, 0.0)
        expected = np.sqrt(1.0 / (2j * np.pi)) * np.exp(-1j * x2 * x1)
        assert K.value == pytest.approx(expected, rel=1e-14)
        assert abs(K.value) == pytest.approx(1.0 / np.sqrt(2 * np.pi), rel=1e-14)
    assert feynman_propagator(unit_qp, 0.0, np.pi / 2, 0.0, 0.0).branch == "principal"


def test_propagator_unitarity_by_quadrature(unit_qp):
    # Gaussian packet, evolved by quadrature against the kernel; norms agree
    x0c, sig, t = 0.5, 0.8, 0.7
    psi = lambda x: (2 * np.pi * sig ** 2) ** -0.25 * np.exp(-(x - x0c) ** 2 / (4 * sig ** 2))

    def phi(x2):
        return cquad(lambda x1: feynman_propagator(unit_qp, x2, t, x1, 0.0).value * psi(x1),
                     x0c - 12 * sig, x0c + 12 * sig)

    norm_in = window_quad(lambda x: abs(psi(x)) ** 2, x0c, sig)
    xs = np.linspace(-10, 10, 401)
    norm_out = np.trapezoid([abs(phi(x)) ** 2 for x in xs], xs)
    assert norm_out == pytest.approx(norm_in, abs=1e-6)


def test_propagator_group_property(unit_qp):
    for (x0, x3, t1, t2) in [(0.3, -0.7, 0.6, 1.5), (1.0, 1.0, 0.5, 1.2), (-1.3, 0.4, 0.9, 2.1)]:
        lhs = compose_propagators_quad(unit_qp, feynman_propagator, x3, t2, x0, t1)
        rhs = feynman_propagator(unit_qp, x3, t2, x0, 0.0).value
        assert abs(lhs - rhs) < 1e-8


def test_propagator_caustics():
    qp = QuantumParams(m=1.0, omega=2.0, hbar=1.0)
    for t in (np.pi / 2, np.pi, 1e-12):  # omega*t multiples of pi (or ~0)
        with pytest.raises(CausticError):
            feynman_propagator(qp, 1.0, t, 0.0, 0.0)
    # configurable guard width
    feynman_propagator(qp, 1.0, np.pi / 2 + 1e-5, 0.0, 0.0, eps_caustic=1e-6)
    with pytest.raises(CausticError):
        feynman_propagator(qp, 1.0, np.pi / 2 + 1e-5, 0.0, 0.0, eps_caustic=1e-3)


# -------------------------------------------------------------- wick identity

def test_wick_residual_point(unit_tp):
    res = wick_identity_residual(unit_tp, 1.0, -0.7, 0.3, 0.9)
    assert abs(res) < 1e-10


def test_wick_residual_symmetric_point(unit_tp):
    # x1 = x2 = 0: dV = 0, pure prefactor identity
    for t in (0.3, 1.5, 2.9):
        assert abs(wick_identity_residual(unit_tp, 1.0, 0.0, 0.0, t)) < 1e-12


def test_wick_residual_constant_on_grid(unit_tp):
    xs = np.linspace(-2, 2, 21)
    res = wick_identity_residual(unit_tp, 1.0, xs[:, None], xs[None, :], 0.9)
    assert np.max(np.abs(res)) < 1e-10


def test_wick_residual_generic_params():
    tp = ThermoParams(R=0.8, s=1.7, k_B=0.9)
    qp = to_quantum(tp, hbar=1.3)
    for wt in (0.4, 1.1, 2.5):
        res = wick_identity_residual(tp, 1.3, 0.6, -0.4, wt / qp.omega)
        assert abs(res) < 1e-10


def test_wick_window_and_caustic_errors(unit_tp):
    with pytest.raises(DomainError):
        wick_identity_residual(unit_tp, 1.0, 0.1, 0.2, 0.0)
    with pytest.raises(DomainError):
        wick_identity_residual(unit_tp, 1.0, 0.1, 0.2, 3.5)  # past pi
    with pytest.raises(CausticError):
        wick_identity_residual(unit_tp, 1.0, 0.1, 0.2, np.pi - 1e-9)


# --------------------------------------------------- dictionary transport

def test_conditional_is_transported_euclidean_kernel(unit_tp):
    # f(x2, tau | x1, 0) = exp(w tau / 2 - dV/(hbar w)) K_E(x2, tau | x1): the
    # real-time Euclidean form of the same identity the wick residual checks
    qp = to_quantum(unit_tp, hbar=1.0)
    xs = np.linspace(-3, 3, 41)
    for tau in (0.3, 1.0, 2.7):
        cond = transition_density(unit_tp, xs[:, None], xs[None, :], unit_tp.gamma() * tau)
        dV = 0.5 * qp.m * qp.omega ** 2 * (xs[:, None] ** 2 - xs[None, :] ** 2)
        dressed = np.exp(qp.omega * tau / 2.0 - dV / (qp.hbar * qp.omega)) \
            * euclidean_propagator(qp, xs[:, None], xs[None, :], tau)
        assert np.max(np.abs(cond - dressed)) < 1e-13
