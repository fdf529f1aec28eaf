"""Figure rendering for the CLI report paths.

Each CSV-producing command can also render a matplotlib figure next to its
delimited output. Figures are written to file (Agg backend); nothing is ever
shown interactively.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .fitting import DecayHistogram, FitResult, Trace
from .tmm import FieldProfile, GapScan


def _finish(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_spectrum(wavelengths_nm, reflectance, transmittance, path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(wavelengths_nm, reflectance, label="R")
    ax.plot(wavelengths_nm, transmittance, label="T")
    ax.set_xlabel("wavelength (nm)")
    ax.set_ylabel("power fraction")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(frameon=False)
    _finish(fig, path)


def plot_field_profile(profile: FieldProfile, path, qd_plane_nm: float | None = None) -> None:
    fig, ax = plt.subplots(figsize=(8, 4.2))
    ax.plot(profile.z_nm, profile.magnitude, color="tab:blue", lw=1.2, label="|E|")
    ax2 = ax.twinx()
    ax2.fill_between(profile.z_nm, profile.index_profile, color="0.85", step=None, zorder=0)
    ax2.set_ylabel("refractive index", color="0.4")
    ax2.set_ylim(0, max(profile.index_profile) * 1.6)
    for z in profile.node_positions:
        ax.axvline(z, color="tab:red", lw=0.5, alpha=0.4)
    for z in profile.antinode_positions:
        ax.axvline(z, color="tab:green", lw=0.5, alpha=0.4)
    if qd_plane_nm is not None:
        ax.axvline(qd_plane_nm, color="k", ls="--", lw=1.0, label="emitter plane")
    ax.set_xlabel("depth from incident surface (nm)")
    ax.set_ylabel("|E| (arb. or V/m)")
    ax.legend(frameon=False, loc="upper right")
    ax.set_zorder(ax2.get_zorder() + 1)
    ax.patch.set_visible(False)
    _finish(fig, path)


def plot_gap_scan(scan: GapScan, path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(scan.gaps_nm, scan.transmission, lw=0.9)
    for g in scan.resonance_gaps_nm:
        ax.axvline(g, color="tab:red", lw=0.6, alpha=0.5)
    ax.set_xlabel("air gap (nm)")
    ax.set_ylabel("transmission")
    _finish(fig, path)


def plot_trace_fit(trace: Trace, model_y: np.ndarray, path, x_label: str = "") -> None:
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(trace.x, trace.y, ".", ms=4, color="0.3", label="data")
    ax.plot(trace.x, model_y, color="tab:red", lw=1.4, label="fit")
    ax.set_xlabel(x_label or (f"x ({trace.x_unit})" if trace.x_unit else "x"))
    ax.set_ylabel("signal")
    ax.legend(frameon=False)
    _finish(fig, path)


def plot_decay_fit(histogram: DecayHistogram, model_y: np.ndarray | None, path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.semilogy(histogram.bin_centers, np.maximum(histogram.counts, 0.5), ".", ms=3,
                color="0.3", label="counts")
    if model_y is not None:
        ax.semilogy(histogram.bin_centers, np.maximum(model_y, 0.5), color="tab:red",
                    lw=1.4, label="fit")
    ax.set_xlabel("time (ps)")
    ax.set_ylabel("counts")
    ax.legend(frameon=False)
    _finish(fig, path)


def plot_polarization_traces(detunings, i_reflect, i_transmit, path) -> None:
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 5.4), sharex=True)
    ax1.plot(detunings, i_reflect, color="tab:blue")
    ax1.set_ylabel("I_r (arb.)")
    ax2.plot(detunings, i_transmit, color="tab:orange")
    ax2.set_ylabel("I_t (arb.)")
    ax2.set_xlabel("detuning (ueV)")
    _finish(fig, path)
