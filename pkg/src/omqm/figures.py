"""Figure rendering for the report path.

Every experiment saves one PNG next to its CSV outputs (disable with
--no-figures). CSV stays the machine hand-off; figures are for eyeballs.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _save(fig, out_path) -> str:
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return str(out_path)


def histogram_vs_density(out_path, hist, x, density, title, density_label) -> str:
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    widths = np.diff(hist.bin_edges)
    centers = 0.5 * (hist.bin_edges[:-1] + hist.bin_edges[1:])
    total = hist.counts.sum()
    ax.bar(centers, hist.counts / (total * widths), width=widths,
           color="#9ecae1", edgecolor="none", label="ensemble")
    ax.plot(x, density, "k-", lw=1.5, label=density_label)
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.set_title(title)
    ax.legend(frameon=False)
    return _save(fig, out_path)


def transition_panels(out_path, panels, title) -> str:
    """panels: list of (lag, histogram, x, exact_density)."""
    fig, axes = plt.subplots(1, len(panels), figsize=(4.2 * len(panels), 3.6), sharey=True)
    axes = np.atleast_1d(axes)
    for ax, (lag, hist, x, dens) in zip(axes, panels):
        widths = np.diff(hist.bin_edges)
        centers = 0.5 * (hist.bin_edges[:-1] + hist.bin_edges[1:])
        total = hist.counts.sum()
        ax.bar(centers, hist.counts / (total * widths), width=widths,
               color="#a1d99b", edgecolor="none", label="ensemble")
        ax.plot(x, dens, "k-", lw=1.3, label="exact")
        ax.set_title(f"lag = {lag:g}")
        ax.set_xlabel("x")
        ax.set_xlim(-4, 4)
    axes[0].set_ylabel("density")
    axes[0].legend(frameon=False)
    fig.suptitle(title)
    return _save(fig, out_path)


def kernel_error_map(out_path, x, err_matrix, title) -> str:
    fig, ax = plt.subplots(figsize=(5.6, 4.6))
    vmax = max(err_matrix.max(), 1e-300)
    im = ax.imshow(err_matrix, origin="lower", aspect="auto",
                   extent=[x[0], x[-1], x[0], x[-1]],
                   norm=matplotlib.colors.LogNorm(vmin=max(vmax * 1e-8, 1e-300), vmax=vmax),
                   cmap="viridis")
    fig.colorbar(im, ax=ax, label="|composed - exact|")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_title(title)
    return _save(fig, out_path)


def convergence_plot(out_path, slice_counts, errors, title) -> str:
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    ax.loglog(slice_counts, errors, "o-", label="measured sup error")
    ref = errors[0] * slice_counts[0] / np.asarray(slice_counts, dtype=float)
    ax.loglog(slice_counts, ref, "k--", lw=1, label="first order (1/n)")
    ax.set_xlabel("slices")
    ax.set_ylabel("sup error")
    ax.set_title(title)
    ax.legend(frameon=False)
    return _save(fig, out_path)


def minimizer_paths(out_path, paths_with_exact, title) -> str:
    """paths_with_exact: list of (path, exact_values)."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for i, (p, exact) in enumerate(paths_with_exact):
        ax.plot(p.times, p.values, lw=1.4, label="minimizer" if i == 0 else None)
        ax.plot(p.times, exact, "k:", lw=1.0, label="analytic" if i == 0 else None)
    ax.set_xlabel("tau")
    ax.set_ylabel("x")
    ax.set_title(title)
    ax.legend(frameon=False)
    return _save(fig, out_path)


def residual_map(out_path, x1, x2, residuals, omega_t, title) -> str:
    fig, ax = plt.subplots(figsize=(5.6, 4.6))
    im = ax.imshow(residuals, origin="lower", aspect="auto",
                   extent=[x1[0], x1[-1], x2[0], x2[-1]],
                   norm=matplotlib.colors.LogNorm(vmin=max(residuals.min(), 1e-18),
                                                  vmax=max(residuals.max(), 1e-17)),
                   cmap="magma")
    fig.colorbar(im, ax=ax, label="|residual|")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_title(f"{title} (omega*t = {omega_t:g})")
    return _save(fig, out_path)


def sphere_cloud(out_path, clouds, title) -> str:
    """clouds: list of (rho, points array with columns x, y, z, value)."""
    fig = plt.figure(figsize=(5.6, 5.0))
    ax = fig.add_subplot(projection="3d")
    for rho, pts in clouds:
        ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], s=2, alpha=0.5, label=f"rho = {rho:g}")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_title(title)
    ax.legend(frameon=False, loc="upper left")
    return _save(fig, out_path)


def quanta_chart(out_path, N_values, delta_S, k_B, title) -> str:
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    ax.step(N_values, delta_S, where="mid", lw=1.5, label="delta S = N k_B")
    ax.axhline(k_B, color="crimson", ls="--", lw=1, label="quantum of entropy k_B")
    ax.set_xlabel("N")
    ax.set_ylabel("delta S")
    ax.set_title(title)
    ax.legend(frameon=False)
    return _save(fig, out_path)
