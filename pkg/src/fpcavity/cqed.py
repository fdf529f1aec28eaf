"""Cavity-QED parameter chain and the detuning-dependent decay model.

The chain runs: free-space decay rate -> transition dipole moment -> mode
volume (from a Purcell factor) -> coupling g -> vacuum field, cooperativity
and the strong-coupling verdict. The rate convention is gamma = 1/tau in
s^-1 (a "1.25 GHz" decay rate means tau = 800 ps), so hbar*gamma is the
energy hbar/tau.

The detuning model is a double Lorentzian over the two polarization-split
cavity modes plus a constant leaky-mode term:

    gamma_cav / gamma_free =
        F_P1 D1^2 / (4 d1^2 + D1^2) + F_P2 D2^2 / (4 d2^2 + D2^2) + alpha,

with d2 = d1 + mode_splitting (detunings measured from the first mode).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import (
    C_LIGHT,
    E_CHARGE,
    EPSILON_0,
    HBAR,
    HBAR_EV,
    angular_frequency,
    rate_to_uev,
)


@dataclass(frozen=True)
class EmitterParams:
    """Free-space emitter properties."""

    gamma_free_ghz: float     # decay rate 1/tau in GHz
    wavelength_nm: float
    dipole_moment_enm: float

    def __post_init__(self):
        if min(self.gamma_free_ghz, self.wavelength_nm, self.dipole_moment_enm) <= 0:
            raise ValueError("emitter parameters must all be positive")

    @property
    def hbar_gamma_uev(self) -> float:
        return rate_to_uev(self.gamma_free_ghz * 1e9)

    @property
    def lifetime_ps(self) -> float:
        return 1000.0 / self.gamma_free_ghz


@dataclass(frozen=True)
class PurcellModel:
    """Parameters of the two-mode decay-enhancement model (widths in ueV)."""

    fp1: float
    fp2: float
    linewidth1_uev: float
    linewidth2_uev: float
    mode_splitting_uev: float
    alpha: float

    def __post_init__(self):
        if self.fp1 < 0 or self.fp2 < 0 or self.alpha < 0:
            raise ValueError("Purcell factors and alpha must be non-negative")
        if self.linewidth1_uev <= 0 or self.linewidth2_uev <= 0:
            raise ValueError("mode linewidths must be positive")


@dataclass(frozen=True)
class CouplingReport:
    """Complete coupling budget; C = 2 g^2/(kappa gamma) holds by construction."""

    mode_volume_um3: float
    e_vac_v_per_m: float
    hbar_g_uev: float
    hbar_kappa_uev: float
    hbar_gamma_uev: float
    cooperativity: float
    strong_coupling: bool
    margin_uev: float


def dipole_from_lifetime(
    gamma_free_ghz: float,
    wavelength_nm: float,
    medium_index: float | None = None,
) -> float:
    """Transition dipole moment in e*nm from a free-space decay rate.

    Inverts the vacuum spontaneous-emission rate,
    mu^2 = 3 pi eps0 hbar c^3 gamma / omega^3. The vacuum form is the
    default; passing ``medium_index`` applies the in-medium variant with an
    extra 1/n (a distinctly smaller dipole), provided for comparison only.
    """
    if not (gamma_free_ghz > 0 and wavelength_nm > 0):
        raise ValueError("inputs must be positive")
    gamma = gamma_free_ghz * 1e9
    omega = angular_frequency(wavelength_nm)
    mu_sq = 3.0 * math.pi * EPSILON_0 * HBAR * C_LIGHT**3 * gamma / omega**3
    if medium_index is not None:
        mu_sq /= medium_index
    return math.sqrt(mu_sq) / (E_CHARGE * 1e-9)


def mode_volume_from_purcell(
    q_factor: float, wavelength_nm: float, index: float, purcell_factor: float
) -> float:
    """Effective mode volume in um^3: V0 = 3 Q (lambda/n)^3 / (4 pi^2 F_p)."""
    if min(q_factor, wavelength_nm, index, purcell_factor) <= 0:
        raise ValueError("inputs must be positive")
    lam_over_n_um = wavelength_nm / index / 1000.0
    return 3.0 * q_factor * lam_over_n_um**3 / (4.0 * math.pi**2 * purcell_factor)


def purcell_from_mode_volume(
    q_factor: float, wavelength_nm: float, index: float, mode_volume_um3: float
) -> float:
    """Exact inverse of mode_volume_from_purcell."""
    if min(q_factor, wavelength_nm, index, mode_volume_um3) <= 0:
        raise ValueError("inputs must be positive")
    lam_over_n_um = wavelength_nm / index / 1000.0
    return 3.0 * q_factor * lam_over_n_um**3 / (4.0 * math.pi**2 * mode_volume_um3)


def coupling_g(
    dipole_moment_enm: float,
    wavelength_nm: float,
    index: float,
    mode_volume_um3: float,
) -> float:
    """Coupling energy hbar*g in ueV: g = sqrt(mu^2 omega / (2 eps0 n^2 hbar V0))."""
    if min(dipole_moment_enm, wavelength_nm, index, mode_volume_um3) <= 0:
        raise ValueError("inputs must be positive")
    mu = dipole_moment_enm * E_CHARGE * 1e-9
    omega = angular_frequency(wavelength_nm)
    v0 = mode_volume_um3 * 1e-18
    g = math.sqrt(mu**2 * omega / (2.0 * EPSILON_0 * index**2 * HBAR * v0))
    return HBAR_EV * g * 1e6


def vacuum_field_from_g(hbar_g_uev: float, dipole_moment_enm: float) -> float:
    """Vacuum field in V/m from hbar*g = mu12 * E_vac."""
    if min(hbar_g_uev, dipole_moment_enm) <= 0:
        raise ValueError("inputs must be positive")
    return hbar_g_uev / dipole_moment_enm * 1e3


def cooperativity(hbar_g_uev: float, hbar_kappa_uev: float, hbar_gamma_uev: float) -> float:
    """C = 2 g^2 / (kappa gamma), unit-consistent in energy units."""
    if hbar_kappa_uev <= 0 or hbar_gamma_uev <= 0:
        raise ZeroDivisionError("kappa and gamma must be positive")
    return 2.0 * hbar_g_uev**2 / (hbar_kappa_uev * hbar_gamma_uev)


def strong_coupling_check(
    hbar_g_uev: float, hbar_kappa_uev: float, hbar_gamma_uev: float
) -> tuple[bool, float]:
    """Polariton-splitting threshold 4g > |kappa - gamma| and its margin (ueV)."""
    if min(hbar_g_uev, hbar_kappa_uev, hbar_gamma_uev) < 0:
        raise ValueError("inputs must be non-negative")
    margin = 4.0 * hbar_g_uev - abs(hbar_kappa_uev - hbar_gamma_uev)
    return margin > 0, margin


def relative_decay_rate(detuning1_uev, model: PurcellModel):
    """gamma_cav / gamma_free at detuning d1 from the first cavity mode.

    Accepts a scalar or array detuning; d2 = d1 + mode_splitting.
    """
    d1 = np.asarray(detuning1_uev, dtype=float)
    d2 = d1 + model.mode_splitting_uev
    w1, w2 = model.linewidth1_uev, model.linewidth2_uev
    ratio = (
        model.fp1 * w1**2 / (4.0 * d1**2 + w1**2)
        + model.fp2 * w2**2 / (4.0 * d2**2 + w2**2)
        + model.alpha
    )
    return float(ratio) if np.isscalar(detuning1_uev) else ratio


def lifetime_at_detuning(
    detuning1_uev: float, model: PurcellModel, gamma_free_ghz: float
) -> float:
    """Predicted lifetime in ps at a given cavity-emitter detuning."""
    ratio = relative_decay_rate(detuning1_uev, model)
    return 1000.0 / (gamma_free_ghz * ratio)


def implied_purcell_factor(
    target_hbar_g_uev: float,
    gamma_free_ghz: float,
    wavelength_nm: float,
    q_factor: float,
    index: float,
) -> float:
    """Purcell factor that makes the full chain reproduce a target coupling.

    Since g scales as sqrt(F_p) through the mode volume, the answer is the
    square of the target over the F_p = 1 chain value.
    """
    mu = dipole_from_lifetime(gamma_free_ghz, wavelength_nm)
    v_unit = mode_volume_from_purcell(q_factor, wavelength_nm, index, 1.0)
    g_unit = coupling_g(mu, wavelength_nm, index, v_unit)
    return (target_hbar_g_uev / g_unit) ** 2


def apply_drift_correction(purcell_factor: float, drift_factor: float = 2.5) -> float:
    """Undo slow-drift line broadening of a fitted Purcell factor.

    Cavity-length wander during long integrations broadens the apparent
    lineshape and suppresses the fitted on-resonance enhancement; the
    corrected value is F' = F * drift_factor. Never applied implicitly.
    """
    if drift_factor <= 0:
        raise ValueError("drift factor must be positive")
    return purcell_factor * drift_factor


def build_coupling_report(
    gamma_free_ghz: float,
    wavelength_nm: float,
    q_factor: float,
    index: float,
    purcell_factor: float,
    hbar_kappa_uev: float | None = None,
) -> CouplingReport:
    """Run the full chain from decay rate to strong-coupling verdict.

    ``hbar_kappa_uev`` defaults to the linewidth implied by the Q factor at
    the given wavelength.
    """
    mu = dipole_from_lifetime(gamma_free_ghz, wavelength_nm)
    v0 = mode_volume_from_purcell(q_factor, wavelength_nm, index, purcell_factor)
    hbar_g = coupling_g(mu, wavelength_nm, index, v0)
    e_vac = vacuum_field_from_g(hbar_g, mu)
    hbar_gamma = rate_to_uev(gamma_free_ghz * 1e9)
    if hbar_kappa_uev is None:
        from .cavity import linewidth_energy

        hbar_kappa_uev = linewidth_energy(wavelength_nm, q_factor)
    coop = cooperativity(hbar_g, hbar_kappa_uev, hbar_gamma)
    strong, margin = strong_coupling_check(hbar_g, hbar_kappa_uev, hbar_gamma)
    return CouplingReport(
        mode_volume_um3=v0,
        e_vac_v_per_m=e_vac,
        hbar_g_uev=hbar_g,
        hbar_kappa_uev=hbar_kappa_uev,
        hbar_gamma_uev=hbar_gamma,
        cooperativity=coop,
        strong_coupling=strong,
        margin_uev=margin,
    )
