import pytest

from omqm import (DomainError, PhysicalConstants, QuantaInput, ThermoParams,
                  compton_wavelength, entropy_increase, second_law_quantum,
                  time_from_temperature)


def const(c=1.0, k_B=1.0, hbar=1.0):
    return PhysicalConstants(c=c, k_B=k_B, hbar=hbar)


def test_time_from_temperature_values():
    assert time_from_temperature(const(), 1.0) == 1.0
    assert time_from_temperature(const(k_B=2.0), 0.5) == 1.0
    with pytest.raises(DomainError):
        time_from_temperature(const(), 0.0)


def test_reciprocity_identity(rng):
    cs = const(k_B=1.380649e-23, hbar=1.054571817e-34)
    for T in 10.0 ** rng.uniform(-3, 3, size=300):
        t = time_from_temperature(cs, T)
        assert abs(t * (cs.k_B / cs.hbar) * T - 1.0) < 1e-14


def test_compton_wavelength_values():
    assert compton_wavelength(const(), 1.0) == 1.0
    assert compton_wavelength(const(c=2.0), 0.5) == 1.0
    with pytest.raises(DomainError):
        compton_wavelength(const(), -1.0)


def test_compton_wavelength_scaling():
    cs = const(c=2.9979e8, hbar=1.0546e-34)
    lam = compton_wavelength(cs, 9.109e-31)
    assert compton_wavelength(cs, 2 * 9.109e-31) == lam / 2  # exact halving


def test_entropy_increase_values(unit_tp):
    assert entropy_increase(unit_tp, const(), 1.0, 1.0) == 1.0
    tp = ThermoParams(R=1.0, s=2.0, k_B=1.0)
    # lambda_C = 1/2 at m = 2, so dS = 3 * 2 * 1/4
    assert entropy_increase(tp, const(), 2.0, 3.0) == pytest.approx(1.5, rel=1e-15)
    assert entropy_increase(tp, const(), 0.3, 0.2) > 0.0
    with pytest.raises(DomainError):
        entropy_increase(tp, const(), 1.0, 0.0)


def test_scaling_identities_exact(unit_tp):
    # binade scalings commute with rounding, so these hold bit-exactly
    base = const(c=3.1, k_B=0.7, hbar=0.9)
    doubled = const(c=3.1, k_B=0.7, hbar=1.8)
    assert time_from_temperature(doubled, 2.4) == 2.0 * time_from_temperature(base, 2.4)
    assert compton_wavelength(doubled, 1.7) == 2.0 * compton_wavelength(base, 1.7)
    assert entropy_increase(unit_tp, doubled, 1.7) == 4.0 * entropy_increase(unit_tp, base, 1.7)


def test_second_law_quantum_cases():
    r0 = second_law_quantum(const(), 0)
    assert r0.delta_S == 0.0 and not r0.bound_satisfied
    assert "classical limit" in r0.note

    r1 = second_law_quantum(const(), 1)
    assert r1.delta_S == 1.0 and r1.bound_satisfied and r1.uncertainty_satisfied
    assert r1.uncertainty_floor == 0.5

    k_B = 1.380649e-23
    r7 = second_law_quantum(const(k_B=k_B), 7)
    assert r7.delta_S == 7 * k_B
    assert r7.delta_S == pytest.approx(9.664543e-23, rel=1e-6)


def test_delta_s_is_exact_multiple():
    k_B = 1.380649e-23
    for N in (0, 1, 2, 13, 1000):
        r = second_law_quantum(const(k_B=k_B), N)
        assert r.delta_S == N * r.k_B  # exact by construction


def test_second_law_domain_errors():
    with pytest.raises(DomainError):
        second_law_quantum(const(), -1)
    with pytest.raises(DomainError):
        second_law_quantum(const(), 1.5)


def test_quanta_input_validation():
    QuantaInput(mass=1.0, constants=const(), N=0, n=1.0)
    with pytest.raises(DomainError):
        QuantaInput(mass=0.0, constants=const())
    with pytest.raises(DomainError):
        QuantaInput(mass=1.0, constants=const(), N=-2)
    with pytest.raises(DomainError):
        QuantaInput(mass=1.0, constants=const(), n=0.0)
