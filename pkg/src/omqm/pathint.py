"""Path-integral machinery: the action functional, its minimizer, and kernel
composition on a grid.

Discretization conventions (fixed once, enforced by the saddle-point
consistency tests): the action integrand (R/2)(dx/dtau + gamma x)^2 is
evaluated per segment with a forward difference for dx/dtau and the midpoint
average for x, i.e. the midpoint rule centered between samples. With this
choice the "full" square form and the "split" form (R/2)(xdot^2 + gamma^2
x^2) differ exactly by the telescoping boundary term (R gamma / 2)(x_end^2 -
x_start^2), mirroring the continuum identity.

The minimizer solves the discrete Euler-Lagrange system, a symmetric
positive-definite tridiagonal system, directly; a gradient-descent fallback
exists purely as a cross-check.

Kernel composition integrates over intermediate gates with the trapezoid
rule. The quadrature grid is padded internally (the requested grid plus 10
stationary deviations per side at the same spacing) because conditional
densities launched from the outermost requested gates carry mass past the
requested edge; composing on the bare grid loses that mass and caps accuracy
near 1e-5. Results are restricted back to the requested grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .closed_form import transition_density
from .errors import CoverageError, DomainError, GridError, NormalizationError, NumericError
from .params import ThermoParams
from .report import write_csv
from .stochastic import Path

#: padding, in stationary deviations, added per side to the quadrature grid
PAD_SIGMAS = 10.0
#: maximum tolerated mass defect of a short-time column on the padded grid
COVERAGE_TOL = 1e-9

DEFAULT_GRID_POINTS = 401
DEFAULT_GRID_SIGMAS = 8.0


@dataclass(frozen=True)
class ActionValue:
    """Discretized action (entropy units) together with its grid resolution."""

    value: float
    n_steps: int
    dt: float

    def exponent(self, k_B: float) -> float:
        """Gate exponent value/(2 k_B); exp(-exponent) weights the path."""
        return self.value / (2.0 * k_B)


@dataclass(frozen=True)
class GridSpec:
    """Uniform symmetric grid: n_points samples spanning [-half_width, half_width]."""

    half_width: float
    n_points: int = DEFAULT_GRID_POINTS

    def __post_init__(self):
        if not (self.half_width > 0.0 and self.n_points >= 2):
            raise GridError(f"invalid grid spec {self!r}")

    def points(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n_points)


def default_grid(tp: ThermoParams, n_points: int = DEFAULT_GRID_POINTS,
                 half_width_sigmas: float = DEFAULT_GRID_SIGMAS) -> GridSpec:
    """The reference grid: +-8 stationary deviations, 401 points."""
    return GridSpec(half_width_sigmas * np.sqrt(tp.stationary_variance()), n_points)


def trapezoid_weights(x: np.ndarray) -> np.ndarray:
    h = x[1] - x[0]
    w = np.full(x.size, h)
    w[0] = w[-1] = h / 2.0
    return w


def _as_uniform_grid(grid) -> np.ndarray:
    x = grid.points() if isinstance(grid, GridSpec) else np.asarray(grid, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise GridError("grid must be a 1-d array with at least 2 points")
    d = np.diff(x)
    if not np.all(d > 0.0) or not np.allclose(d, d[0], rtol=1e-9, atol=0.0):
        raise GridError("grid must be uniform and strictly increasing")
    return x


@dataclass(frozen=True)
class GridKernel:
    """Conditional density sampled on a grid: matrix[i, j] = f(x[i] | x[j]).

    Columns are densities in the first argument; each integrates to 1 by the
    trapezoid rule up to the recorded mass defect (compose_kernel measures it
    on the padded quadrature grid, exact_grid_kernel on the grid itself).
    """

    x: np.ndarray
    a: float
    matrix: np.ndarray
    column_mass_defect: float

    def weights(self) -> np.ndarray:
        return trapezoid_weights(self.x)

    def column_mass(self) -> np.ndarray:
        """Trapezoid integral of every column over this (restricted) grid."""
        return self.weights() @ self.matrix

    def sup_diff(self, other: "GridKernel") -> float:
        return float(np.max(np.abs(self.matrix - other.matrix)))

    def to_csv(self, path_or_buf) -> None:
        """Write columns x1, x2, value (one row per matrix entry)."""
        rows = ((self.x[j], self.x[i], self.matrix[i, j])
                for j in range(self.x.size) for i in range(self.x.size))
        write_csv(path_or_buf, ["x1", "x2", "value"], rows)


def om_action(tp: ThermoParams, path: Path, form: str = "full") -> ActionValue:
    """Discretized action of a path.

    form="full": integrand (R/2)(xdot + gamma x)^2 (square form).
    form="split": integrand (R/2)(xdot^2 + gamma^2 x^2), the same action after
    dropping the total derivative gamma d(x^2)/dtau; differs from "full" by
    the boundary term (R gamma / 2)(x_end^2 - x_start^2).
    """
    if path.times.size < 2:
        raise GridError("path needs at least 2 points")
    d = np.diff(path.times)
    if not np.allclose(d, d[0], rtol=1e-9, atol=0.0):
        raise GridError("om_action requires a uniform time grid")
    dt = float(d[0])
    gamma = tp.gamma()
    xdot = np.diff(path.values) / dt
    xmid = 0.5 * (path.values[1:] + path.values[:-1])
    if form == "full":
        integrand = (xdot + gamma * xmid) ** 2
    elif form == "split":
        integrand = xdot ** 2 + (gamma * xmid) ** 2
    else:
        raise DomainError(f"unknown action form {form!r}")
    value = float(0.5 * tp.R * dt * integrand.sum())
    return ActionValue(value=value, n_steps=int(d.size), dt=dt)


def _el_coefficients(tp: ThermoParams, dt: float) -> tuple[float, float]:
    # per-segment linear form alpha*x_{k+1} + beta*x_k of (xdot + gamma*xmid)
    alpha = 1.0 / dt + 0.5 * tp.gamma()
    beta = -1.0 / dt + 0.5 * tp.gamma()
    return alpha, beta


def minimize_action(tp: ThermoParams, x1: float, tau1: float, x2: float, tau2: float,
                    n_steps: int) -> tuple[Path, ActionValue]:
    """Discrete path of least action with fixed endpoints.

    Solves the discrete Euler-Lagrange system (tridiagonal, positive
    definite) for the interior samples; the minimized exponent
    action/(2 k_B) reproduces (s/2k_B)(x2 - e^{-a} x1)^2 / (1 - e^{-2a}).
    """
    if not tau2 > tau1:
        raise DomainError(f"need tau2 > tau1, got {tau1} .. {tau2}")
    if n_steps < 2:
        raise DomainError(f"n_steps must be >= 2, got {n_steps}")
    dt = (tau2 - tau1) / n_steps
    alpha, beta = _el_coefficients(tp, dt)
    diag = alpha * alpha + beta * beta
    off = alpha * beta

    m = n_steps - 1
    ab = np.zeros((3, m))
    ab[0, 1:] = off
    ab[1, :] = diag
    ab[2, :-1] = off
    rhs = np.zeros(m)
    rhs[0] = -off * x1
    rhs[-1] = -off * x2
    try:
        interior = solve_banded((1, 1), ab, rhs)
    except np.linalg.LinAlgError as exc:  # cannot occur for gamma, dt > 0
        raise NumericError(f"Euler-Lagrange system singular: {exc}") from exc

    values = np.concatenate([[x1], interior, [x2]])
    path = Path(times=tau1 + dt * np.arange(n_steps + 1), values=values)
    return path, om_action(tp, path)


def minimize_action_descent(tp: ThermoParams, x1: float, tau1: float, x2: float,
                            tau2: float, n_steps: int, max_iter: int = 20000,
                            tol: float = 1e-12) -> tuple[Path, ActionValue]:
    """Gradient-descent cross-check for the tridiagonal minimizer.

    Conjugate-gradient iteration on the same discrete quadratic form; exists
    only to confirm the direct solve, not for production use.
    """
    if not tau2 > tau1:
        raise DomainError(f"need tau2 > tau1, got {tau1} .. {tau2}")
    dt = (tau2 - tau1) / n_steps
    alpha, beta = _el_coefficients(tp, dt)
    diag = alpha * alpha + beta * beta
    off = alpha * beta
    m = n_steps - 1

    def apply_A(v):
        out = diag * v
        out[:-1] += off * v[1:]
        out[1:] += off * v[:-1]
        return out

    b = np.zeros(m)
    b[0] = -off * x1
    b[-1] = -off * x2
    v = np.zeros(m)
    r = b - apply_A(v)
    p = r.copy()
    rs = r @ r
    for _ in range(max_iter):
        if np.sqrt(rs) < tol:
            break
        Ap = apply_A(p)
        a_step = rs / (p @ Ap)
        v += a_step * p
        r -= a_step * Ap
        rs_new = r @ r
        p = r + (rs_new / rs) * p
        rs = rs_new
    values = np.concatenate([[x1], v, [x2]])
    path = Path(times=tau1 + dt * np.arange(n_steps + 1), values=values)
    return path, om_action(tp, path)


def minimum_action_exponent(tp: ThermoParams, x1: float, x2: float, a: float) -> float:
    """Continuum value of the minimized gate exponent (the analytic target)."""
    if not a > 0.0:
        raise DomainError(f"need a > 0, got {a}")
    u = np.exp(-a)
    return float(tp.s / (2.0 * tp.k_B) * (x2 - u * x1) ** 2 / (1.0 - u * u))


def euler_short_time_density(tp: ThermoParams, x2, x1, delta_tau: float):
    """One Euler-Maruyama step as a Gaussian kernel: mean (1 - gamma d) x1,
    variance 2 k_B d / R. First-order accurate in d; used for the
    path-integral convergence demonstration."""
    if not delta_tau > 0.0:
        raise DomainError(f"need delta_tau > 0, got {delta_tau}")
    mean = (1.0 - tp.gamma() * delta_tau) * np.asarray(x1, dtype=float)
    var = 2.0 * tp.k_B * delta_tau / tp.R
    x2 = np.asarray(x2, dtype=float)
    return np.exp(-((x2 - mean) ** 2) / (2.0 * var)) / np.sqrt(2.0 * np.pi * var)


def _padded(x: np.ndarray, tp: ThermoParams) -> tuple[np.ndarray, slice]:
    h = x[1] - x[0]
    n_pad = int(np.ceil(PAD_SIGMAS * np.sqrt(tp.stationary_variance()) / h))
    left = x[0] - h * np.arange(n_pad, 0, -1)
    right = x[-1] + h * np.arange(1, n_pad + 1)
    return np.concatenate([left, x, right]), slice(n_pad, n_pad + x.size)


def _compose_power(K: np.ndarray, w: np.ndarray, n: int) -> np.ndarray:
    """n-fold composition K o K o ... o K under the weighted product."""
    def prod(A, B):
        return A @ (w[:, None] * B)

    result = None
    base = K
    k = n
    while k > 0:
        if k & 1:
            result = base if result is None else prod(base, result)
        k >>= 1
        if k:
            base = prod(base, base)
    return result


def compose_kernel(tp: ThermoParams, total_a: float, n_slices: int, grid=None,
                   short_time: str = "exact",
                   coverage_tol: float = COVERAGE_TOL) -> GridKernel:
    """Compose the short-time kernel for a = total_a/n_slices over n_slices.

    short_time="exact" composes the exact conditional density (the semigroup
    property makes the result exact up to quadrature); short_time="euler"
    composes the first-order Euler kernel, converging to the exact kernel at
    O(total_a/n_slices).

    The requested grid must span at least 8 stationary deviations; narrower
    grids raise CoverageError, as does any short-time column whose mass
    defect on the padded quadrature grid exceeds coverage_tol.
    """
    if not total_a > 0.0:
        raise DomainError(f"need total_a > 0, got {total_a}")
    if n_slices < 1:
        raise DomainError(f"need n_slices >= 1, got {n_slices}")
    x = _as_uniform_grid(default_grid(tp) if grid is None else grid)
    sigma = np.sqrt(tp.stationary_variance())
    if min(-x[0], x[-1]) < 8.0 * sigma * (1.0 - 1e-12):
        raise CoverageError(
            f"grid half-width {min(-x[0], x[-1]):.4g} < 8 stationary deviations {8 * sigma:.4g}")

    xp, core = _padded(x, tp)
    w = trapezoid_weights(xp)
    a_slice = total_a / n_slices
    X2, X1 = xp[:, None], xp[None, :]
    if short_time == "exact":
        Ks = transition_density(tp, X2, X1, a_slice)
    elif short_time == "euler":
        Ks = euler_short_time_density(tp, X2, X1, a_slice / tp.gamma())
    else:
        raise DomainError(f"unknown short_time kernel {short_time!r}")

    # mass containment of the slice kernel, checked for every requested gate
    col_mass = w @ Ks[:, core]
    defect = float(np.max(np.abs(col_mass - 1.0)))
    if defect > coverage_tol:
        raise CoverageError(
            f"short-time kernel leaks mass {defect:.3e} > {coverage_tol:.1e} off the padded grid")

    K = _compose_power(Ks, w, n_slices)
    return GridKernel(x=x, a=total_a, matrix=K[core, core], column_mass_defect=defect)


def exact_grid_kernel(tp: ThermoParams, a: float, grid=None) -> GridKernel:
    """The exact whole-interval kernel sampled on the grid (reference object)."""
    x = _as_uniform_grid(default_grid(tp) if grid is None else grid)
    K = transition_density(tp, x[:, None], x[None, :], a)
    w = trapezoid_weights(x)
    defect = float(np.max(np.abs(w @ K - 1.0)))
    return GridKernel(x=x, a=a, matrix=K, column_mass_defect=defect)


def propagate_onegate(tp: ThermoParams, f1: np.ndarray, a: float, grid) -> np.ndarray:
    """Propagate a one-gate density forward: f2(x2) = integral f(x2|x1) f1(x1) dx1.

    f1 must be nonnegative and normalized on the grid within 1e-6; the
    stationary density is a fixed point and total mass is preserved up to
    quadrature tolerance.
    """
    x = _as_uniform_grid(grid)
    f1 = np.asarray(f1, dtype=float)
    if f1.shape != x.shape:
        raise GridError(f"density shape {f1.shape} does not match grid shape {x.shape}")
    if np.any(f1 < 0.0):
        raise NormalizationError("input density has negative entries")
    w = trapezoid_weights(x)
    mass = float(w @ f1)
    if abs(mass - 1.0) > 1e-6:
        raise NormalizationError(f"input density integrates to {mass!r}, not 1 within 1e-6")
    K = transition_density(tp, x[:, None], x[None, :], a)
    return K @ (w * f1)
