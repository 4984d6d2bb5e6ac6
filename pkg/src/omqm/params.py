"""Parameter records of the two dual theories and the dictionary between them.

Thermodynamic side: Onsager coefficient R (time * entropy / length^2),
entropy curvature s (entropy / length^2), Boltzmann constant k_B (entropy).
Quantum side: mass m, angular frequency omega, Planck constant hbar (action).

The dictionary fixes only the ratios

    omega = gamma = s / R          and          m * omega / hbar = s / (2 k_B),

so one constant per direction (hbar, resp. k_B) is a free conversion input.
Units are tracked by convention, not by a unit-checking type system; the
extensive coordinate x is fixed to carry length on both sides.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


def _require_positive(**values: float) -> None:
    for name, v in values.items():
        if not v > 0.0:
            raise DomainError(f"{name} must be > 0, got {v!r}")


@dataclass(frozen=True)
class ThermoParams:
    """Linear irreversible thermodynamics of one extensive coordinate."""

    R: float    # time * entropy / length^2
    s: float    # entropy / length^2
    k_B: float  # entropy

    def __post_init__(self):
        _require_positive(R=self.R, s=self.s, k_B=self.k_B)

    def gamma(self) -> float:
        """Relaxation rate s/R (1/time). Derived, never stored."""
        return self.s / self.R

    def stationary_variance(self) -> float:
        """Variance k_B/s of the equilibrium fluctuation law."""
        return self.k_B / self.s


@dataclass(frozen=True)
class QuantumParams:
    """Harmonic oscillator: mass, angular frequency, Planck constant."""

    m: float
    omega: float  # 1/time
    hbar: float   # action

    def __post_init__(self):
        _require_positive(m=self.m, omega=self.omega, hbar=self.hbar)

    def spring_constant(self) -> float:
        """k = m * omega^2. Derived, never stored."""
        return self.m * self.omega ** 2


@dataclass(frozen=True)
class PhysicalConstants:
    """Constants for the quantization calculators (c enters via the Compton length)."""

    c: float
    k_B: float
    hbar: float

    def __post_init__(self):
        _require_positive(c=self.c, k_B=self.k_B, hbar=self.hbar)


def to_quantum(tp: ThermoParams, hbar: float) -> QuantumParams:
    """Map thermodynamic parameters to the dual oscillator.

    omega = s/R and m = hbar*R/(2 k_B), so that m*omega/hbar = s/(2 k_B).
    """
    _require_positive(hbar=hbar)
    return QuantumParams(m=hbar * tp.R / (2.0 * tp.k_B), omega=tp.s / tp.R, hbar=hbar)


def to_thermo(qp: QuantumParams, k_B: float) -> ThermoParams:
    """Inverse dictionary: s = 2 k_B m omega / hbar and R = s / omega."""
    _require_positive(k_B=k_B)
    s = 2.0 * k_B * qp.m * qp.omega / qp.hbar
    return ThermoParams(R=s / qp.omega, s=s, k_B=k_B)


def wick_time(t: float) -> complex:
    """Rotate mechanical time to thermodynamic time: tau = i*t."""
    return 1j * t
