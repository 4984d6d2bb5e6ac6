"""Exact densities, the oscillator propagator, and the identity linking them.

All thermodynamic densities here are normalized exactly (the source theory's
convention drops normalizations and restores them at the end; we carry them
throughout). Consequence, checked symbolically and numerically before this
module was written: the analytic continuation of the normalized conditional
density to imaginary time equals

    exp(i*omega*t/2 - dV/(hbar*omega)) * K(x2, t | x1, 0)

with no residual sqrt(2 m omega / hbar) factor; that factor belongs to the
unnormalized convention. `wick_identity_residual` asserts the normalized form.

Complex square roots always take the principal branch (argument in (-pi, pi]).
The continuation window is restricted to 0 < omega*t < pi, which keeps every
principal branch consistent and sidesteps caustic phase bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CausticError, DomainError, OrderingError
from .params import QuantumParams, ThermoParams, to_quantum

#: below this value of |sin(omega*dt)| (omega*dt dimensionless) the propagator
#: prefactor is treated as singular
EPS_CAUSTIC = 1e-8


@dataclass(frozen=True)
class Gate:
    """A (position, time) event at which a probability gate is evaluated."""

    x: float
    tau: float | complex

    def __post_init__(self):
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(np.asarray(self.tau, dtype=complex)))):
            raise DomainError("gate components must be finite")


@dataclass(frozen=True)
class ComplexAmplitude:
    """Complex value whose square roots were taken on the principal branch."""

    value: complex
    branch: str = field(default="principal")

    def __abs__(self) -> float:
        return float(np.max(np.abs(self.value))) if np.ndim(self.value) else abs(self.value)


def stationary_density(tp: ThermoParams, x) -> np.ndarray | float:
    """Equilibrium fluctuation law: sqrt(s/(2 pi k_B)) exp(-s x^2 / (2 k_B))."""
    x = np.asarray(x, dtype=float)
    c = tp.s / (2.0 * tp.k_B)
    out = np.sqrt(c / np.pi) * np.exp(-c * x * x)
    return out if out.ndim else float(out)


def transition_density(tp: ThermoParams, x2, x1, a) -> np.ndarray | float:
    """Conditional density after a dimensionless elapsed time a = gamma*(tau2-tau1).

    Normalized Gaussian with mean e^{-a} x1 and variance (k_B/s)(1 - e^{-2a}).
    Accepts arrays in any argument (numpy broadcasting).
    """
    if np.any(np.asarray(a) <= 0.0):
        raise OrderingError(f"elapsed time must be positive, got a={a!r}")
    x2 = np.asarray(x2, dtype=float)
    x1 = np.asarray(x1, dtype=float)
    u = np.exp(-np.asarray(a, dtype=float))
    var = tp.stationary_variance() * (1.0 - u * u)
    out = np.exp(-((x2 - u * x1) ** 2) / (2.0 * var)) / np.sqrt(2.0 * np.pi * var)
    return out if out.ndim else float(out)


def conditional_density(tp: ThermoParams, g2: Gate, g1: Gate) -> np.ndarray | float:
    """Two-gate function: density of passing x2 at tau2 given x1 at tau1 (real gates)."""
    for g in (g2, g1):
        if np.iscomplexobj(g.tau) and np.any(np.imag(g.tau) != 0.0):
            raise DomainError("conditional_density takes real gates; "
                              "use wick_identity_residual for imaginary time")
    dtau = np.real(g2.tau) - np.real(g1.tau)
    if np.any(dtau <= 0.0):
        raise OrderingError(f"gates out of order: tau2={g2.tau!r} <= tau1={g1.tau!r}")
    return transition_density(tp, g2.x, g1.x, tp.gamma() * dtau)


def ground_state_density(qp: QuantumParams, x) -> np.ndarray | float:
    """Squared modulus of the oscillator ground state: sqrt(m w/(pi hbar)) e^{-m w x^2/hbar}."""
    x = np.asarray(x, dtype=float)
    c = qp.m * qp.omega / qp.hbar
    out = np.sqrt(c / np.pi) * np.exp(-c * x * x)
    return out if out.ndim else float(out)


def _as_position(x) -> np.ndarray:
    # the kernel is entire in the positions; complex arguments are legal
    # (contour-rotated quadrature relies on this)
    a = np.asarray(x)
    return a if np.issubdtype(a.dtype, np.inexact) else a.astype(float)


def feynman_propagator(qp: QuantumParams, x2, t2, x1, t1,
                       eps_caustic: float = EPS_CAUSTIC) -> ComplexAmplitude:
    """Harmonic oscillator propagator K(x2, t2 | x1, t1), principal branch.

    All arguments broadcast; positions may be complex. Raises CausticError
    when any requested |sin(omega (t2 - t1))| < eps_caustic instead of
    returning a near-infinite or NaN amplitude.
    """
    wdt = qp.omega * (np.asarray(t2, dtype=float) - np.asarray(t1, dtype=float))
    sin = np.sin(wdt)
    if np.any(np.abs(sin) < eps_caustic):
        raise CausticError(f"omega*(t2-t1) within {eps_caustic} of a caustic (sin={sin!r})")
    x2 = _as_position(x2)
    x1 = _as_position(x1)
    pref = np.sqrt(qp.m * qp.omega / (2j * np.pi * qp.hbar * sin))
    phase = (1j * qp.m * qp.omega / (2.0 * qp.hbar)) \
        * ((x2 * x2 + x1 * x1) * np.cos(wdt) - 2.0 * x2 * x1) / sin
    val = pref * np.exp(phase)
    return ComplexAmplitude(value=val if np.ndim(val) else complex(val))


def euclidean_propagator(qp: QuantumParams, x2, x1, tau) -> np.ndarray | float:
    """Imaginary-time oscillator kernel K(x2, -i*tau | x1, 0), real and positive.

    Obtained from the propagator by t -> -i*tau (sin -> -i*sinh); used to
    check that the conditional density is the dictionary transport of the
    oscillator kernel at real Euclidean time.
    """
    if np.any(np.asarray(tau) <= 0.0):
        raise DomainError(f"Euclidean time must be positive, got {tau!r}")
    wt = qp.omega * np.asarray(tau, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    x1 = np.asarray(x1, dtype=float)
    c2 = qp.m * qp.omega / (2.0 * qp.hbar)
    out = np.sqrt(qp.m * qp.omega / (2.0 * np.pi * qp.hbar * np.sinh(wt))) \
        * np.exp(-c2 * ((x2 * x2 + x1 * x1) * np.cosh(wt) - 2.0 * x2 * x1) / np.sinh(wt))
    return out if out.ndim else float(out)


def wick_identity_residual(tp: ThermoParams, hbar: float, x2, x1, t,
                           eps_caustic: float = EPS_CAUSTIC) -> np.ndarray | complex:
    """Residual of the density <-> propagator identity at imaginary time.

    Continues the normalized conditional density to a = i*omega*t and returns

        f(x2, i t | x1, 0) / [exp(i w t/2 - dV/(hbar w)) K(x2, t | x1, 0)] - 1

    with dV = V(x2) - V(x1), V(x) = m w^2 x^2 / 2. Identically zero (to
    rounding) for 0 < omega*t < pi; outside that window the principal branches
    of the two sides no longer agree and a DomainError is raised. Caustic
    errors from the propagator propagate.
    """
    qp = to_quantum(tp, hbar)
    wt = qp.omega * np.asarray(t, dtype=float)
    if np.any(wt <= 0.0) or np.any(wt >= np.pi):
        raise DomainError(f"continuation window is 0 < omega*t < pi, got omega*t={wt!r}")
    x2 = np.asarray(x2, dtype=float)
    x1 = np.asarray(x1, dtype=float)

    # analytic continuation of transition_density: u = e^{-a} with a = i w t
    c = qp.m * qp.omega / qp.hbar  # = s / (2 k_B)
    u = np.exp(-1j * wt)
    one_minus_u2 = 1.0 - u * u
    f_cont = np.sqrt(c / (np.pi * one_minus_u2)) * np.exp(-c * (x2 - u * x1) ** 2 / one_minus_u2)

    K = feynman_propagator(qp, x2, np.asarray(t, dtype=float), x1, 0.0, eps_caustic)
    dV = 0.5 * qp.m * qp.omega ** 2 * (x2 * x2 - x1 * x1)
    rhs = np.exp(1j * wt / 2.0 - dV / (qp.hbar * qp.omega)) * K.value
    out = f_cont / rhs - 1.0
    return out if np.ndim(out) else complex(out)
