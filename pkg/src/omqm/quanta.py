"""Quantization calculators: time-temperature reciprocity, Compton-length
entropy increase, and the quantized second law with its uncertainty pairing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .params import PhysicalConstants, ThermoParams


@dataclass(frozen=True)
class QuantaInput:
    """Inputs of the quantization calculators."""

    mass: float
    constants: PhysicalConstants
    N: int = 0        # entropy quantum count
    n: float = 1.0    # dimensionless multiplier of the entropy increase

    def __post_init__(self):
        if not self.mass > 0.0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if self.N < 0:
            raise DomainError(f"N must be >= 0, got {self.N}")
        if not self.n > 0.0:
            raise DomainError(f"n must be positive, got {self.n}")


@dataclass(frozen=True)
class SecondLawReport:
    """Entropy bound N k_B together with the paired uncertainty statement.

    The entropy quantum k_B plays the role hbar/2 plays mechanically (the
    dictionary identifies hbar with 2 k_B), so the bound delta_S >= k_B and
    the bound dE dt >= hbar/2 are the same statement in the two pictures.
    """

    N: int
    k_B: float
    hbar: float
    delta_S: float
    entropy_bound: float          # k_B, the quantum of entropy
    bound_satisfied: bool         # delta_S >= k_B, i.e. N >= 1
    uncertainty_floor: float      # hbar/2, the paired mechanical bound
    uncertainty_satisfied: bool   # identical verdict in the dual picture
    note: str


def time_from_temperature(constants: PhysicalConstants, T: float) -> float:
    """Reciprocity t = hbar / (k_B T): time and temperature are mutually inverse."""
    if not T > 0.0:
        raise DomainError(f"temperature must be positive, got {T}")
    return constants.hbar / (constants.k_B * T)


def compton_wavelength(constants: PhysicalConstants, mass: float) -> float:
    """lambda_C = hbar / (m c), the particle's quantum of length."""
    if not mass > 0.0:
        raise DomainError(f"mass must be positive, got {mass}")
    return constants.hbar / (mass * constants.c)


def entropy_increase(tp: ThermoParams, constants: PhysicalConstants,
                     mass: float, n: float = 1.0) -> float:
    """dS = n s lambda_C^2, the entropy cost of forming one equivalence class.

    n is dimensionless and undetermined by the counting argument; the default
    n = 1 is the Landauer-order choice.
    """
    if not n > 0.0:
        raise DomainError(f"n must be positive, got {n}")
    lam = compton_wavelength(constants, mass)
    return n * tp.s * lam * lam


def second_law_quantum(constants: PhysicalConstants, N: int) -> SecondLawReport:
    """Quantized second law: delta_S = N k_B, admissible only for integer N >= 0.

    For N >= 1 the bound delta_S >= k_B holds; via the dictionary (hbar <->
    2 k_B) the same verdict reads dE dt >= hbar/2 mechanically. N = 0 is the
    classical limit in which the quantum of entropy drops out.
    """
    if N != int(N) or N < 0:
        raise DomainError(f"N must be a nonnegative integer, got {N!r}")
    N = int(N)
    delta_S = N * constants.k_B
    satisfied = N >= 1
    note = ("classical limit: with N = 0 the bound degenerates to delta_S >= 0, "
            "the k_B -> 0 form of the second law" if N == 0 else
            f"delta_S = {N} quanta of entropy")
    return SecondLawReport(
        N=N, k_B=constants.k_B, hbar=constants.hbar, delta_S=delta_S,
        entropy_bound=constants.k_B, bound_satisfied=satisfied,
        uncertainty_floor=constants.hbar / 2.0, uncertainty_satisfied=satisfied,
        note=note,
    )
