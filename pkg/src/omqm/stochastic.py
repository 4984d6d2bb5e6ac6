"""Monte Carlo side: ensembles of the linear relaxation process with noise.

The stochastic equation R dx/dtau + s x = F_r fixes only the mean of the
random force. Its white-noise intensity is pinned here by requiring that the
stationary law of the simulated process reproduce the Gaussian fluctuation
density with variance k_B/s; the unique choice is

    <F_r(tau) F_r(tau')> = 2 k_B R delta(tau - tau'),

i.e. sigma = sqrt(2 k_B / R) in the reduced equation
dx = -gamma x dtau + sigma dW. The acceptance suite enforces this derivation.

Reproducibility contract: every result is a pure function of (seed,
parameters). Paths are partitioned into fixed-size blocks; block b draws its
noise from the b-th child of SeedSequence(seed), so the ensemble statistics
do not depend on execution order or on how many worker threads ran them
(cap with the OM_QM_THREADS environment variable).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats as sp_stats

from .closed_form import transition_density
from .errors import DomainError, GridError, NumericError, StepSizeError
from .params import ThermoParams
from .report import write_csv

#: paths per RNG substream; fixed so results are independent of thread count
BLOCK_SIZE = 16384
#: noise rows drawn per chunk inside a block (memory / speed tradeoff only)
_CHUNK_STEPS = 256

#: default histogram shape: 101 uniform bins spanning +-6 stationary sigmas
HIST_BINS = 101
HIST_HALF_WIDTH_SIGMAS = 6.0


@dataclass(frozen=True)
class Path:
    """A discretized trajectory: strictly increasing times plus positions."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or v.ndim != 1 or t.size != v.size:
            raise GridError("times and values must be 1-d arrays of equal length")
        if t.size < 1 or not np.all(np.diff(t) > 0.0):
            raise GridError("times must be strictly increasing")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise GridError("path entries must be finite")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def to_csv(self, path_or_buf) -> None:
        """Write columns tau, x (UTF-8, ',' separator, '.' decimal)."""
        write_csv(path_or_buf, ["tau", "x"], zip(self.times, self.values))


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray

    def to_csv(self, path_or_buf) -> None:
        """Write columns bin_left, bin_right, count."""
        write_csv(path_or_buf, ["bin_left", "bin_right", "count"],
                  zip(self.bin_edges[:-1], self.bin_edges[1:], self.counts))


@dataclass(frozen=True)
class EnsembleStats:
    """Terminal-value summary of an ensemble run."""

    count: int
    mean: float
    variance: float
    histogram: Histogram


@dataclass(frozen=True)
class TransitionCheck:
    """Goodness-of-fit of empirical terminal values against the exact law."""

    count: int
    lag: float
    x1: float
    empirical_mean: float
    exact_mean: float
    empirical_variance: float
    exact_variance: float
    ks_statistic: float
    ks_pvalue: float
    significance: float
    passed: bool
    histogram: Histogram


def noise_amplitude(tp: ThermoParams) -> float:
    """sigma = sqrt(2 k_B / R), the unique intensity with stationary variance k_B/s."""
    return float(np.sqrt(2.0 * tp.k_B / tp.R))


def _check_dt(tp: ThermoParams, dt: float) -> None:
    if not dt > 0.0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    if not dt < 0.1 / tp.gamma():
        raise StepSizeError(f"dt={dt} violates the guard dt < 0.1/gamma = {0.1 / tp.gamma()}")


def simulate_ou(tp: ThermoParams, x0: float, tau_end: float, dt: float, seed: int,
                sigma: float | None = None, method: str = "euler") -> Path:
    """Integrate dx = -gamma x dtau + sigma dW from x(0) = x0 up to tau_end.

    method="euler" is the Euler-Maruyama default; method="exact" uses the
    error-free Gaussian one-step law as an internal cross-check. sigma=None
    derives the amplitude from the parameters; sigma=0.0 recovers the
    deterministic relaxation law.
    """
    if not tau_end > 0.0:
        raise DomainError(f"tau_end must be positive, got {tau_end}")
    _check_dt(tp, dt)
    if method not in ("euler", "exact"):
        raise DomainError(f"unknown method {method!r}")
    sig = noise_amplitude(tp) if sigma is None else float(sigma)
    if sig < 0.0:
        raise DomainError("sigma must be >= 0")
    gamma = tp.gamma()
    n_steps = int(round(tau_end / dt))
    rng = np.random.default_rng(np.random.SeedSequence(seed))

    x = np.empty(n_steps + 1)
    x[0] = x0
    noise = rng.standard_normal(n_steps)
    if method == "euler":
        drift = 1.0 - gamma * dt
        kick = sig * np.sqrt(dt)
    else:
        drift = np.exp(-gamma * dt)
        kick = sig * np.sqrt((1.0 - drift * drift) / (2.0 * gamma))
    for k in range(n_steps):
        x[k + 1] = drift * x[k] + kick * noise[k]
        if not np.isfinite(x[k + 1]):
            raise NumericError(f"non-finite sample at step {k + 1}")
    return Path(times=dt * np.arange(n_steps + 1), values=x)


def _evolve_block(ss: np.random.SeedSequence, n: int, x0: float, n_steps: int,
                  drift: float, kick: float) -> np.ndarray:
    """Terminal values of one block of paths (noise drawn in step chunks)."""
    rng = np.random.default_rng(ss)
    x = np.full(n, float(x0))
    done = 0
    while done < n_steps:
        m = min(_CHUNK_STEPS, n_steps - done)
        noise = rng.standard_normal((m, n))
        for row in noise:
            x *= drift
            x += kick * row
        done += m
    if not np.all(np.isfinite(x)):
        raise NumericError(f"non-finite sample after {n_steps} steps")
    return x


def _terminal_ensemble(tp: ThermoParams, x0: float, horizon: float, dt: float,
                       n_paths: int, seed: int, method: str = "euler") -> np.ndarray:
    """Terminal values of n_paths independent trajectories after `horizon`."""
    _check_dt(tp, dt)
    gamma = tp.gamma()
    sig = noise_amplitude(tp)
    n_steps = int(round(horizon / dt))
    if method == "euler":
        drift = 1.0 - gamma * dt
        kick = sig * np.sqrt(dt)
    elif method == "exact":
        drift = np.exp(-gamma * dt)
        kick = sig * np.sqrt((1.0 - drift * drift) / (2.0 * gamma))
    else:
        raise DomainError(f"unknown method {method!r}")

    n_blocks = (n_paths + BLOCK_SIZE - 1) // BLOCK_SIZE
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    sizes = [min(BLOCK_SIZE, n_paths - b * BLOCK_SIZE) for b in range(n_blocks)]

    threads = int(os.environ.get("OM_QM_THREADS", "1") or "1")
    if threads > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(
                lambda args: _evolve_block(args[0], args[1], x0, n_steps, drift, kick),
                zip(children, sizes)))
    else:
        parts = [_evolve_block(ss, n, x0, n_steps, drift, kick)
                 for ss, n in zip(children, sizes)]
    return np.concatenate(parts)


def make_histogram(tp: ThermoParams, values: np.ndarray,
                   bins: int = HIST_BINS,
                   half_width_sigmas: float = HIST_HALF_WIDTH_SIGMAS) -> Histogram:
    """Uniform histogram over +-half_width_sigmas stationary deviations.

    Samples beyond the range are clipped into the edge bins so the counts
    always sum to the sample count.
    """
    half = half_width_sigmas * np.sqrt(tp.stationary_variance())
    edges = np.linspace(-half, half, bins + 1)
    clipped = np.clip(values, edges[0], np.nextafter(edges[-1], -np.inf))
    counts, _ = np.histogram(clipped, bins=edges)
    return Histogram(bin_edges=edges, counts=counts)


def ensemble_stationary_stats(tp: ThermoParams, n_paths: int, burn_in: float, seed: int,
                              dt: float = 1e-3, method: str = "euler") -> EnsembleStats:
    """Terminal-value statistics after relaxing for `burn_in` from x0 = 0.

    For n_paths -> infinity the mean tends to 0 and the variance to k_B/s.
    """
    if n_paths < 1:
        raise DomainError(f"n_paths must be >= 1, got {n_paths}")
    if burn_in < 10.0 / tp.gamma():
        raise DomainError(f"burn_in must be >= 10/gamma = {10.0 / tp.gamma()}, got {burn_in}")
    finals = _terminal_ensemble(tp, 0.0, burn_in, dt, n_paths, seed, method)
    variance = float(finals.var(ddof=1)) if n_paths > 1 else 0.0
    return EnsembleStats(count=n_paths, mean=float(finals.mean()),
                         variance=variance, histogram=make_histogram(tp, finals))


def empirical_transition_check(tp: ThermoParams, x1: float, lag: float, n_paths: int,
                               seed: int, dt: float = 1e-3, significance: float = 0.01,
                               method: str = "euler") -> TransitionCheck:
    """Start n_paths at x1, evolve for `lag`, compare against the exact law.

    The comparison CDF uses the realized lag n_steps*dt (the time actually
    simulated). Reports the Kolmogorov-Smirnov statistic against the exact
    conditional CDF and a pass/fail verdict at the given significance.
    """
    if n_paths < 1:
        raise DomainError(f"empty ensemble: n_paths={n_paths}")
    if not lag > 0.0:
        raise DomainError(f"lag must be positive, got {lag}")
    if int(round(lag / dt)) < 1:
        raise StepSizeError(f"lag {lag} is shorter than half a step dt={dt}")
    finals = _terminal_ensemble(tp, x1, lag, dt, n_paths, seed, method)

    a = tp.gamma() * (int(round(lag / dt)) * dt)
    u = np.exp(-a)
    exact_mean = u * x1
    exact_var = tp.stationary_variance() * (1.0 - u * u)
    ks = sp_stats.kstest(finals, sp_stats.norm(loc=exact_mean, scale=np.sqrt(exact_var)).cdf)
    return TransitionCheck(
        count=n_paths, lag=lag, x1=x1,
        empirical_mean=float(finals.mean()), exact_mean=float(exact_mean),
        empirical_variance=float(finals.var(ddof=1)) if n_paths > 1 else 0.0,
        exact_variance=float(exact_var),
        ks_statistic=float(ks.statistic), ks_pvalue=float(ks.pvalue),
        significance=significance, passed=bool(ks.pvalue > significance),
        histogram=make_histogram(tp, finals),
    )


def exact_transition_reference(tp: ThermoParams, x1: float, lag: float, x: np.ndarray) -> np.ndarray:
    """Exact conditional density on a grid, as plotted/exported next to histograms."""
    return transition_density(tp, x, x1, tp.gamma() * lag)
