"""Named experiments: each verifies one face of the thermodynamics <-> oscillator
map at desk scale, writes CSV data products plus a JSON report, and (by
default) renders one figure.

Acceptance coverage: stationary -> fluctuation variance and entropy
production; transition -> empirical transition law and long-time collapse;
chapman-kolmogorov -> semigroup exactness; path-integral -> first-order
short-time convergence; minimize -> variational consistency; wick-identity ->
dictionary round trips, ground-state correspondence, and the continued
density / propagator identity; isoentropic -> on-shell sphere reduction;
quanta -> quantization calculators. `all` chains every experiment.
"""

from __future__ import annotations

from pathlib import Path as FsPath

import numpy as np

from . import dynamics, figures, multidim, pathint, quanta, stochastic
from .closed_form import (ground_state_density, stationary_density, transition_density,
                          wick_identity_residual)
from .config import KEY_REGISTRY, EXPERIMENTS, ExperimentConfig
from .errors import CausticError
from .params import PhysicalConstants, ThermoParams, to_quantum, to_thermo
from .report import Report, print_summary, write_csv


def run_experiment(cfg: ExperimentConfig, echo: bool = True) -> Report:
    """Execute one named experiment, write its outputs, return the report."""
    out_dir = FsPath(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    runner = _RUNNERS[cfg.experiment]
    report = runner(cfg, out_dir)
    report.write_json(out_dir / "report.json")
    if echo:
        print_summary(report)
    return report


def _inputs_echo(cfg: ExperimentConfig) -> dict:
    tp = cfg.thermo()
    qp = cfg.quantum()
    numeric = {k: getattr(cfg, k) for k in KEY_REGISTRY
               if k not in ("R", "s", "m", "omega", "k_B", "hbar")}
    return {
        "thermo": {"R": tp.R, "s": tp.s, "k_B": tp.k_B},
        "quantum": {"m": qp.m, "omega": qp.omega, "hbar": qp.hbar},
        "numeric": numeric,
    }


def _new_report(cfg: ExperimentConfig, name: str) -> Report:
    return Report(experiment=name, inputs=_inputs_echo(cfg), seed=cfg.seed)


# ----------------------------------------------------------------- stationary

def run_stationary(cfg: ExperimentConfig, out_dir: FsPath) -> Report:
    tp = cfg.thermo()
    rep = _new_report(cfg, "stationary")

    stats = stochastic.ensemble_stationary_stats(
        tp, n_paths=cfg.n_paths, burn_in=cfg.burn_in_time(), seed=cfg.seed, dt=cfg.dt)
    target = tp.stationary_variance()
    se_var = target * np.sqrt(2.0 / (stats.count - 1))
    se_mean = np.sqrt(target / stats.count)
    rep.add_metric("sample_mean", stats.mean)
    rep.add_metric("sample_variance", stats.variance)
    rep.add_metric("target_variance", target)
    rep.check("variance_abs_error", abs(stats.variance - target),
              cfg.tol_stationary_sigmas * se_var)
    rep.check("mean_abs_error", abs(stats.mean), cfg.tol_stationary_sigmas * se_mean)

    # entropy production along randomized relaxation trajectories
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 10)))
    gamma = tp.gamma()
    taus = np.linspace(0.0, 5.0 / gamma, 201)
    h = 1e-5 / gamma
    min_rate, max_fd_err = np.inf, 0.0
    for _ in range(100):
        x0 = rng.uniform(0.25, 2.0) * rng.choice([-1.0, 1.0])
        x = x0 * np.exp(-gamma * taus)
        rate = dynamics.entropy_production_rate(tp, x, dynamics.relaxation_flux(tp, x))
        min_rate = min(min_rate, float(rate.min()))
        s_plus = dynamics.quadratic_entropy(tp, x0 * np.exp(-gamma * (taus + h)))
        s_minus = dynamics.quadratic_entropy(tp, x0 * np.exp(-gamma * (taus - h)))
        fd = (s_plus - s_minus) / (2.0 * h)
        max_fd_err = max(max_fd_err, float(np.max(np.abs(fd - rate))))
    rep.check("entropy_production_min", min_rate, 0.0, comparator="ge")
    rep.check("entropy_production_fd_error", max_fd_err, cfg.tol_entropy_production)

    xs = np.linspace(stats.histogram.bin_edges[0], stats.histogram.bin_edges[-1], 501)
    dens = stationary_density(tp, xs)
    stats.histogram.to_csv(out_dir / "stationary_histogram.csv")
    write_csv(out_dir / "stationary_density.csv", ["x", "density"],
              zip(xs.tolist(), np.asarray(dens).tolist()))
    sample = stochastic.simulate_ou(tp, x0=0.0, tau_end=cfg.burn_in_time(),
                                    dt=cfg.dt, seed=cfg.seed)
    sample.to_csv(out_dir / "sample_path.csv")
    rep.outputs += ["stationary_histogram.csv", "stationary_density.csv", "sample_path.csv"]
    if cfg.figures:
        figures.histogram_vs_density(out_dir / "stationary.png", stats.histogram, xs, dens,
                                     "Terminal ensemble vs stationary law", "exact stationary")
        rep.outputs.append("stationary.png")
    return rep


# ----------------------------------------------------------------- transition

def run_transition(cfg: ExperimentConfig, out_dir: FsPath) -> Report:
    tp = cfg.thermo()
    rep = _new_report(cfg, "transition")
    gamma = tp.gamma()
    panels = []
    summary_rows = []
    for i, lag_units in enumerate(cfg.floats("lags")):
        lag = lag_units / gamma
        chk = stochastic.empirical_transition_check(
            tp, x1=cfg.x1, lag=lag, n_paths=cfg.n_paths, seed=cfg.seed + i + 1,
            dt=cfg.dt, significance=cfg.ks_significance)
        tag = f"lag{i + 1}"
        rep.add_metric(f"{tag}_ks_statistic", chk.ks_statistic)
        rep.check(f"{tag}_ks_pvalue", chk.ks_pvalue, cfg.ks_significance, comparator="gt")
        se_mean = np.sqrt(chk.exact_variance / chk.count)
        rep.check(f"{tag}_mean_abs_error", abs(chk.empirical_mean - chk.exact_mean),
                  cfg.tol_stationary_sigmas * se_mean)
        xs = np.linspace(chk.histogram.bin_edges[0], chk.histogram.bin_edges[-1], 501)
        dens = stochastic.exact_transition_reference(tp, cfg.x1, lag, xs)
        chk.histogram.to_csv(out_dir / f"transition_histogram_{tag}.csv")
        write_csv(out_dir / f"transition_exact_{tag}.csv", ["x", "density"],
                  zip(xs.tolist(), np.asarray(dens).tolist()))
        rep.outputs += [f"transition_histogram_{tag}.csv", f"transition_exact_{tag}.csv"]
        panels.append((lag, chk.histogram, xs, dens))
        summary_rows.append((lag, chk.count, chk.empirical_mean, chk.exact_mean,
                             chk.ks_statistic, chk.ks_pvalue, chk.passed))

    write_csv(out_dir / "transition_summary.csv",
              ["lag", "n", "empirical_mean", "exact_mean", "ks_statistic", "ks_pvalue", "passed"],
              summary_rows)
    rep.outputs.append("transition_summary.csv")

    # long-time collapse of the exact kernel onto the stationary law; the
    # canonical one-gate reduction fixes the start gate at x1 = 0
    grid = pathint.default_grid(tp, cfg.grid_points, cfg.grid_sigmas).points()
    stat = stationary_density(tp, grid)
    collapse = max(
        float(np.max(np.abs(transition_density(tp, grid, x1, cfg.collapse_a) - stat)))
        for x1 in (0.0, 0.1, -0.1))
    rep.check("collapse_sup_error", collapse, cfg.tol_collapse)

    if cfg.figures:
        figures.transition_panels(out_dir / "transition.png", panels,
                                  f"Empirical transition law from x1 = {cfg.x1:g}")
        rep.outputs.append("transition.png")
    return rep


# ------------------------------------------------------- chapman-kolmogorov

def run_chapman_kolmogorov(cfg: ExperimentConfig, out_dir: FsPath) -> Report:
    tp = cfg.thermo()
    rep = _new_report(cfg, "chapman-kolmogorov")
    grid = pathint.default_grid(tp, cfg.grid_points, cfg.grid_sigmas)
    exact = pathint.exact_grid_kernel(tp, cfg.total_a, grid)
    err_rows = []
    last = None
    for n_slices in cfg.ints("ck_slices"):
        composed = pathint.compose_kernel(tp, cfg.total_a, n_slices, grid)
        err = composed.sup_diff(exact)
        rep.check(f"sup_error_{n_slices}_slices", err, cfg.tol_semigroup)
        err_rows.append((n_slices, err))
        last = composed
    write_csv(out_dir / "ck_errors.csv", ["n_slices", "sup_error"], err_rows)
    exact.to_csv(out_dir / "kernel_exact.csv")
    last.to_csv(out_dir / "kernel_composed.csv")
    rep.outputs += ["ck_errors.csv", "kernel_exact.csv", "kernel_composed.csv"]
    if cfg.figures:
        figures.kernel_error_map(out_dir / "chapman_kolmogorov.png", exact.x,
                                 np.abs(last.matrix - exact.matrix),
                                 f"Composition error, {err_rows[-1][0]} slices")
        rep.outputs.append("chapman_kolmogorov.png")
    return rep


# ------------------------------------------------------------- path-integral

def run_path_integral(cfg: ExperimentConfig, out_dir: FsPath) -> Report:
    tp = cfg.thermo()
    rep = _new_report(cfg, "path-integral")
    grid = pathint.default_grid(tp, cfg.grid_points, cfg.grid_sigmas)
    exact = pathint.exact_grid_kernel(tp, cfg.total_a, grid)
    counts = cfg.ints("euler_slices")
    errors = []
    for n_slices in counts:
        composed = pathint.compose_kernel(tp, cfg.total_a, n_slices, grid,
                                          short_time="euler")
        errors.append(composed.sup_diff(exact))
        rep.add_metric(f"euler_sup_error_{n_slices}_slices", errors[-1])
    rows = [(counts[0], errors[0], float("nan"))]
    for i in range(1, len(counts)):
        ratio = errors[i - 1] / errors[i]
        rows.append((counts[i], errors[i], ratio))
        rep.check(f"error_ratio_{counts[i - 1]}_to_{counts[i]}_lower", ratio,
                  cfg.ratio_lo, comparator="gt")
        rep.check(f"error_ratio_{counts[i - 1]}_to_{counts[i]}_upper", ratio,
                  cfg.ratio_hi, comparator="lt")
    write_csv(out_dir / "pi_convergence.csv", ["n_slices", "sup_error", "ratio_to_prev"], rows)
    rep.outputs.append("pi_convergence.csv")
    if cfg.figures:
        figures.convergence_plot(out_dir / "path_integral.png", counts, errors,
                                 "Euler short-time kernel: error vs slices")
        rep.outputs.append("path_integral.png")
    return rep


# ------------------------------------------------------------------ minimize

def run_minimize(cfg: ExperimentConfig, out_dir: FsPath) -> Report:
    tp = cfg.thermo()
    rep = _new_report(cfg, "minimize")
    gamma = tp.gamma()
    a = cfg.total_a
    tau2 = a / gamma
    ends = np.linspace(-cfg.endpoint_half_width, cfg.endpoint_half_width, cfg.endpoint_points)

    worst = 0.0
    rows = []
    showcase = None
    for x1 in ends:
        for x2 in ends:
            path, action = pathint.minimize_action(tp, x1, 0.0, x2, tau2, cfg.n_steps)
            num = action.exponent(tp.k_B)
            exact = pathint.minimum_action_exponent(tp, x1, x2, a)
            rel = abs(num - exact) / exact if exact > 0.0 else abs(num - exact)
            worst = max(worst, rel)
            rows.append((x1, x2, num, exact, rel))
            if showcase is None and x1 == ends[0] and x2 == ends[-1]:
                showcase = path
    rep.check("endpoint_grid_worst_rel_error", worst, cfg.tol_minimize)

    onegate_rows = []
    worst_one = 0.0
    for x2 in ends:
        if x2 == 0.0:
            continue
        _, action = pathint.minimize_action(tp, 0.0, 0.0, x2, cfg.onegate_a / gamma,
                                            cfg.n_steps)
        num = action.exponent(tp.k_B)
        exact = dynamics.extremal_onegate_exponent(tp, x2)
        rel = abs(num - exact) / exact
        worst_one = max(worst_one, rel)
        onegate_rows.append((x2, num, exact, rel))
    rep.check("onegate_worst_rel_error", worst_one, cfg.tol_minimize)

    write_csv(out_dir / "minimize_exponents.csv",
              ["x1", "x2", "exponent_numeric", "exponent_exact", "rel_error"], rows)
    write_csv(out_dir / "minimize_onegate.csv",
              ["x2", "exponent_numeric", "exponent_exact", "rel_error"], onegate_rows)
    showcase.to_csv(out_dir / "minimizer_path.csv")
    rep.outputs += ["minimize_exponents.csv", "minimize_onegate.csv", "minimizer_path.csv"]
    if cfg.figures:
        u = np.exp(-a)
        x1s, x2s = ends[0], ends[-1]
        A = (x2s - x1s * u) / (np.exp(gamma * tau2) - u)
        B = x1s - A
        exact_vals = A * np.exp(gamma * showcase.times) + B * np.exp(-gamma * showcase.times)
        figures.minimizer_paths(out_dir / "minimize.png", [(showcase, exact_vals)],
                                f"Least-action path, x1={x1s:g} -> x2={x2s:g}")
        rep.outputs.append("minimize.png")
    return rep


# ------------------------------------------------------------- wick-identity

def run_wick_identity(cfg: ExperimentConfig, out_dir: FsPath) -> Report:
    tp = cfg.thermo()
    qp = cfg.quantum()
    rep = _new_report(cfg, "wick-identity")
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 20)))

    # dictionary round trips over randomized parameter sets
    worst_rt = 0.0
    worst_rel = 0.0
    for _ in range(1000):
        R, s, k_B, hbar = 10.0 ** rng.uniform(-3, 3, size=4)
        tp_i = ThermoParams(R=R, s=s, k_B=k_B)
        qp_i = to_quantum(tp_i, hbar)
        back = to_thermo(qp_i, k_B)
        worst_rt = max(worst_rt,
                       abs(back.R - R) / R, abs(back.s - s) / s)
        lhs = qp_i.m * qp_i.omega / qp_i.hbar
        rhs = s / (2.0 * k_B)
        worst_rel = max(worst_rel, abs(lhs - rhs) / rhs)
        worst_rel = max(worst_rel, abs(tp_i.gamma() - qp_i.omega) / qp_i.omega)
    rep.check("dictionary_roundtrip_max_rel_error", worst_rt, cfg.tol_dictionary)
    rep.check("dictionary_relation_max_rel_error", worst_rel, cfg.tol_dictionary)

    # ground-state correspondence on the reference grid
    grid = pathint.default_grid(tp, cfg.grid_points, cfg.grid_sigmas).points()
    gdiff = float(np.max(np.abs(ground_state_density(qp, grid) - stationary_density(tp, grid))))
    rep.check("ground_state_sup_error", gdiff, cfg.tol_ground_state)
    write_csv(out_dir / "ground_state.csv", ["x", "ground_state", "stationary"],
              zip(grid.tolist(), np.asarray(ground_state_density(qp, grid)).tolist(),
                  np.asarray(stationary_density(tp, grid)).tolist()))
    rep.outputs.append("ground_state.csv")

    # residual of the continued-density identity over the (x1, x2, t) grid
    xs = np.linspace(-cfg.wick_half_width, cfg.wick_half_width, cfg.wick_points)
    omega_ts = cfg.floats("wick_omega_t")
    worst_res = 0.0
    res_rows = []
    last_map = None
    for wt in omega_ts:
        res = wick_identity_residual(tp, qp.hbar, xs[:, None], xs[None, :], wt / qp.omega)
        amax = np.abs(res)
        worst_res = max(worst_res, float(amax.max()))
        last_map = amax
        for j, x1 in enumerate(xs):
            for i, x2 in enumerate(xs):
                res_rows.append((wt, x1, x2, float(amax[i, j])))
    rep.check("wick_residual_max", worst_res, cfg.tol_wick)

    # the caustic window must fail loudly, not with NaNs
    try:
        wick_identity_residual(tp, qp.hbar, 0.5, 0.3, (np.pi - 1e-9) / qp.omega)
        guard = 0.0
    except CausticError:
        guard = 1.0
    rep.check("caustic_guard_raised", guard, 1.0, comparator="ge")

    write_csv(out_dir / "wick_residuals.csv", ["omega_t", "x1", "x2", "abs_residual"], res_rows)
    rep.outputs.append("wick_residuals.csv")
    if cfg.figures:
        figures.residual_map(out_dir / "wick_identity.png", xs, xs, last_map, omega_ts[-1],
                             "Continued density / propagator residual")
        rep.outputs.append("wick_identity.png")
    return rep


# --------------------------------------------------------------- isoentropic

def run_isoentropic(cfg: ExperimentConfig, out_dir: FsPath) -> Report:
    tp = cfg.thermo()
    rep = _new_report(cfg, "isoentropic")
    clouds = []
    worst = 0.0
    for k, rho in enumerate(cfg.floats("rho_values")):
        pts = multidim.sample_onshell_sphere(tp, rho, cfg.n_directions, cfg.seed + k)
        worst = max(worst, float(np.max(np.abs(pts[:, 3] - rho ** 2))))
        name = f"isoentropic_points_rho{k + 1}.csv"
        write_csv(out_dir / name, ["x", "y", "z", "value"],
                  map(tuple, pts.tolist()))
        rep.outputs.append(name)
        clouds.append((rho, pts))
    rep.check("onshell_value_max_abs_error", worst, cfg.tol_isoentropic)

    # rotational invariance of the 3D Lagrangians
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 30)))
    from scipy.spatial.transform import Rotation

    worst_rot = 0.0
    for _ in range(50):
        st = multidim.State3D(rng.standard_normal(3), rng.standard_normal(3))
        q = rng.standard_normal(4)
        rot = Rotation.from_quat(q / np.linalg.norm(q)).as_matrix()
        st_r = multidim.State3D(rot @ st.position, rot @ st.velocity)
        worst_rot = max(worst_rot,
                        abs(multidim.thermo_lagrangian_3d(tp, st_r)
                            - multidim.thermo_lagrangian_3d(tp, st)))
    rep.check("rotation_invariance_max_abs_error", worst_rot, cfg.tol_isoentropic)

    if cfg.figures:
        figures.sphere_cloud(out_dir / "isoentropic.png",
                             [(rho, pts) for rho, pts in clouds if rho <= 1.0] or clouds,
                             "On-shell isoentropic spheres")
        rep.outputs.append("isoentropic.png")
    return rep


# -------------------------------------------------------------------- quanta

def run_quanta(cfg: ExperimentConfig, out_dir: FsPath) -> Report:
    tp = cfg.thermo()
    rep = _new_report(cfg, "quanta")
    const = PhysicalConstants(c=cfg.c, k_B=tp.k_B, hbar=cfg.quantum().hbar)

    t = quanta.time_from_temperature(const, cfg.temperature)
    rep.add_metric("time_from_temperature", t)
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 40)))
    worst_recip = max(
        abs(quanta.time_from_temperature(const, T) * (const.k_B / const.hbar) * T - 1.0)
        for T in 10.0 ** rng.uniform(-3, 3, size=200))
    rep.check("reciprocity_max_abs_error", worst_recip, 1e-14)

    lam = quanta.compton_wavelength(const, cfg.mass)
    rep.add_metric("compton_wavelength", lam)
    double_hbar = PhysicalConstants(c=const.c, k_B=const.k_B, hbar=2.0 * const.hbar)
    scaling_err = max(
        abs(quanta.time_from_temperature(double_hbar, cfg.temperature) - 2.0 * t),
        abs(quanta.compton_wavelength(double_hbar, cfg.mass) - 2.0 * lam),
        abs(quanta.compton_wavelength(const, 2.0 * cfg.mass) - 0.5 * lam),
        abs(quanta.entropy_increase(tp, double_hbar, cfg.mass, cfg.n_multiplier)
            - 4.0 * quanta.entropy_increase(tp, const, cfg.mass, cfg.n_multiplier)),
    )
    rep.check("scaling_identities_max_abs_error", scaling_err, 0.0, comparator="le")

    ds = quanta.entropy_increase(tp, const, cfg.mass, cfg.n_multiplier)
    rep.add_metric("entropy_increase", ds)
    rep.check("entropy_increase_positive", ds, 0.0, comparator="gt")

    law = quanta.second_law_quantum(const, cfg.N_quanta)
    rep.add_metric("second_law_delta_S", law.delta_S)
    rep.add_metric("second_law_bound_satisfied", 1.0 if law.bound_satisfied else 0.0)
    rep.check("delta_S_integer_multiple_error", abs(law.delta_S - law.N * const.k_B),
              0.0, comparator="le")

    N_values = list(range(0, max(cfg.N_quanta, 7) + 1))
    law_rows = []
    for N in N_values:
        r = quanta.second_law_quantum(const, N)
        law_rows.append((N, r.delta_S, r.bound_satisfied, r.uncertainty_floor))
    write_csv(out_dir / "second_law.csv",
              ["N", "delta_S", "bound_satisfied", "uncertainty_floor"], law_rows)
    write_csv(out_dir / "quanta_summary.csv", ["quantity", "value"], [
        ("time_from_temperature", t),
        ("compton_wavelength", lam),
        ("entropy_increase", ds),
        ("second_law_delta_S", law.delta_S),
    ])
    rep.outputs += ["second_law.csv", "quanta_summary.csv"]
    if cfg.figures:
        figures.quanta_chart(out_dir / "quanta.png", N_values,
                             [row[1] for row in law_rows], const.k_B,
                             "Quantized second law")
        rep.outputs.append("quanta.png")
    return rep


# ----------------------------------------------------------------------- all

def run_all(cfg: ExperimentConfig, out_dir: FsPath) -> Report:
    rep = _new_report(cfg, "all")
    for name in EXPERIMENTS:
        if name == "all":
            continue
        sub_cfg = ExperimentConfig(experiment=name, seed=cfg.seed,
                                   out=str(out_dir / name.replace("-", "_")),
                                   figures=cfg.figures, values=dict(cfg.values))
        sub = run_experiment(sub_cfg, echo=False)
        for metric, value in sub.metrics.items():
            rep.add_metric(f"{name}.{metric}", value)
        rep.check(f"{name}_pass", 1.0 if sub.passed() else 0.0, 1.0, comparator="ge")
        rep.outputs.append(f"{name.replace('-', '_')}/report.json")
    return rep


_RUNNERS = {
    "stationary": run_stationary,
    "transition": run_transition,
    "chapman-kolmogorov": run_chapman_kolmogorov,
    "path-integral": run_path_integral,
    "minimize": run_minimize,
    "wick-identity": run_wick_identity,
    "isoentropic": run_isoentropic,
    "quanta": run_quanta,
    "all": run_all,
}
