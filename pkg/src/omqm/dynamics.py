"""Deterministic thermodynamics: force, flux, entropy production, extremal paths.

The entropy surface is quadratic, S(x) = S0 - s x^2 / 2, so the restoring
force is linear, the relaxation law is exponential at rate gamma = s/R, and
the variational problem for the most probable path has the closed-form
solution x(tau) = x2 e^{gamma (tau - tau2)} coming in from x(-inf) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .params import ThermoParams


@dataclass(frozen=True)
class EntropyState:
    """Entropy coordinate pair: equilibrium value S0 and displacement x."""

    S0: float
    x: float

    def value(self, tp: ThermoParams) -> float:
        """S(x) = S0 - s x^2 / 2, always <= S0."""
        return self.S0 - 0.5 * tp.s * self.x ** 2


def quadratic_entropy(tp: ThermoParams, x, S0: float = 0.0):
    """Entropy surface S(x) = S0 - s x^2 / 2 (array-friendly)."""
    x = np.asarray(x, dtype=float)
    out = S0 - 0.5 * tp.s * x * x
    return out if out.ndim else float(out)


def thermo_force(tp: ThermoParams, x):
    """Restoring force X = dS/dx = -s x."""
    x = np.asarray(x, dtype=float)
    out = -tp.s * x
    return out if out.ndim else float(out)


def relaxation_flux(tp: ThermoParams, x):
    """Deterministic flux dx/dtau = L X = -(s/R) x = -gamma x."""
    x = np.asarray(x, dtype=float)
    out = -tp.gamma() * x
    return out if out.ndim else float(out)


def entropy_production_rate(tp: ThermoParams, x, xdot):
    """dS/dtau = X * dx/dtau = -s x xdot; positive on relaxing trajectories."""
    x = np.asarray(x, dtype=float)
    xdot = np.asarray(xdot, dtype=float)
    out = -tp.s * x * xdot
    return out if out.ndim else float(out)


def extremal_path(tp: ThermoParams, x2: float, tau2: float, tau):
    """Most probable path into the gate (x2, tau2): x(tau) = x2 e^{gamma (tau - tau2)}.

    Solves d^2x/dtau^2 = gamma^2 x with x(-inf) = 0 and x(tau2) = x2.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau > tau2):
        raise DomainError(f"extremal path is defined for tau <= tau2={tau2}")
    out = x2 * np.exp(tp.gamma() * (tau - tau2))
    return out if out.ndim else float(out)


def extremal_onegate_exponent(tp: ThermoParams, x2: float) -> float:
    """Action exponent accumulated along the extremal path from x(-inf)=0 to x2.

    (1/4k_B) * integral of R (dx/dtau + gamma x)^2 evaluated analytically:
    the integrand on the extremal path is R (2 gamma x)^2, and the improper
    integral collapses to s x2^2 / (2 k_B), the stationary-law exponent.
    """
    return tp.s * x2 ** 2 / (2.0 * tp.k_B)
