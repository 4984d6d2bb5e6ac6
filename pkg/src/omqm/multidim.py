"""Isotropic 3D case: both Lagrangians, isoentropic level sets, on-shell spheres.

With equal Onsager coefficients in all three directions the thermodynamic
Lagrangian is (R/2)(|v|^2 + gamma^2 |q|^2) and its level sets |v|^2 +
gamma^2 |q|^2 = rho^2 are 5-dimensional submanifolds of phase space. On
shell, v = gamma q, so the level set collapses to the configuration-space
sphere |q| = rho / (gamma sqrt(2)) -- the counterpart of the mechanical
equipotential spheres |q| = const.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .params import QuantumParams, ThermoParams


@dataclass(frozen=True)
class State3D:
    """Phase-space point: position and velocity 3-vectors."""

    position: np.ndarray
    velocity: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.position, dtype=float)
        v = np.asarray(self.velocity, dtype=float)
        if q.shape != (3,) or v.shape != (3,):
            raise DomainError("position and velocity must be 3-vectors")
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(v))):
            raise DomainError("state components must be finite")
        object.__setattr__(self, "position", q)
        object.__setattr__(self, "velocity", v)


def thermo_lagrangian_3d(tp: ThermoParams, st: State3D) -> float:
    """(R/2)(|v|^2 + gamma^2 |q|^2), entropy per unit time."""
    g = tp.gamma()
    return float(0.5 * tp.R * (st.velocity @ st.velocity + g * g * (st.position @ st.position)))


def mech_lagrangian_3d(qp: QuantumParams, st: State3D) -> float:
    """(m/2)(|v|^2 - omega^2 |q|^2), energy."""
    w = qp.omega
    return float(0.5 * qp.m * (st.velocity @ st.velocity - w * w * (st.position @ st.position)))


def isoentropic_value(tp: ThermoParams, st: State3D) -> float:
    """|v|^2 + gamma^2 |q|^2, the quantity whose level sets are isoentropic."""
    g = tp.gamma()
    return float(st.velocity @ st.velocity + g * g * (st.position @ st.position))


def onshell_sphere_radius(tp: ThermoParams, rho: float) -> float:
    """Configuration radius of the on-shell reduction of the level set rho^2.

    On shell v = gamma q, so |v|^2 + gamma^2 |q|^2 = 2 gamma^2 |q|^2 = rho^2
    gives |q| = rho / (gamma sqrt(2)).
    """
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho}")
    return float(rho / (tp.gamma() * np.sqrt(2.0)))


def onshell_state(tp: ThermoParams, q: np.ndarray) -> State3D:
    """The on-shell phase-space point over position q (v = gamma q)."""
    q = np.asarray(q, dtype=float)
    return State3D(position=q, velocity=tp.gamma() * q)


def random_directions(n: int, seed: int) -> np.ndarray:
    """n unit vectors drawn uniformly on the sphere (seeded, reproducible)."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def sample_onshell_sphere(tp: ThermoParams, rho: float, n: int, seed: int) -> np.ndarray:
    """Point cloud on the on-shell sphere: rows (x, y, z, isoentropic value)."""
    r = onshell_sphere_radius(tp, rho)
    dirs = random_directions(n, seed)
    pts = r * dirs
    vals = np.array([isoentropic_value(tp, onshell_state(tp, p)) for p in pts])
    return np.column_stack([pts, vals])
