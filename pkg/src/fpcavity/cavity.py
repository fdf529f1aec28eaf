"""Closed-form Fabry-Perot relations linking scan observables to cavity figures.

Everything here is algebraic: finesse from the displacement linewidth, mode
index from the displacement-per-wavelength slope (or from the length), the
quality factor Q = 2 l F / lambda, the energy linewidth, and the transverse
Gaussian geometry of the plano-concave resonator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import C_LIGHT, photon_energy_uev


@dataclass(frozen=True)
class CavityFigures:
    """Resonator figures of merit; Q = 2 l F / lambda holds by construction."""

    finesse: float
    mode_index: float
    effective_length_um: float
    q_factor: float
    linewidth_uev: float
    wavelength_nm: float
    mode_splitting_uev: float | None = None


@dataclass(frozen=True)
class GaussianGeometry:
    """Transverse geometry of a plano-concave Gaussian resonator."""

    radius_of_curvature_um: float
    cavity_length_um: float
    waist_um: float
    mode_area_um2: float
    transverse_splitting_ghz: float


def finesse_from_scan(wavelength_nm: float, fwhm_displacement_pm: float) -> float:
    """Finesse in the spatial domain, F = lambda / (2 delta_d)."""
    if not fwhm_displacement_pm > 0:
        raise ValueError(f"FWHM must be > 0, got {fwhm_displacement_pm}")
    return (wavelength_nm * 1000.0) / (2.0 * fwhm_displacement_pm)


def mode_index_from_slope(displacement_per_wavelength: float) -> float:
    """Longitudinal mode index q = 2 * (dd/dlambda)."""
    if not displacement_per_wavelength > 0:
        raise ValueError("slope must be > 0")
    return 2.0 * displacement_per_wavelength


def mode_index_from_length(effective_length_um: float, wavelength_nm: float) -> float:
    """Longitudinal mode index q = 2 l / lambda."""
    if not (effective_length_um > 0 and wavelength_nm > 0):
        raise ValueError("length and wavelength must be > 0")
    return 2.0 * effective_length_um * 1000.0 / wavelength_nm


def length_from_mode_index(mode_index: float, wavelength_nm: float) -> float:
    """Effective cavity length l = q lambda / 2 in um."""
    return mode_index * wavelength_nm / 2.0 / 1000.0


def quality_factor(effective_length_um: float, finesse: float, wavelength_nm: float) -> float:
    """Q = 2 l F / lambda."""
    if not (effective_length_um > 0 and finesse > 0 and wavelength_nm > 0):
        raise ValueError("all inputs must be > 0")
    return 2.0 * effective_length_um * 1000.0 * finesse / wavelength_nm


def linewidth_energy(wavelength_nm: float, q_factor: float) -> float:
    """Cavity linewidth hbar*kappa in micro-eV for a given Q."""
    if not q_factor > 0:
        raise ValueError(f"Q must be > 0, got {q_factor}")
    return photon_energy_uev(wavelength_nm) / q_factor


def cavity_figures(
    wavelength_nm: float,
    fwhm_displacement_pm: float,
    effective_length_um: float,
    mode_splitting_uev: float | None = None,
) -> CavityFigures:
    """Assemble a consistent CavityFigures record from scan observables."""
    finesse = finesse_from_scan(wavelength_nm, fwhm_displacement_pm)
    q = quality_factor(effective_length_um, finesse, wavelength_nm)
    return CavityFigures(
        finesse=finesse,
        mode_index=mode_index_from_length(effective_length_um, wavelength_nm),
        effective_length_um=effective_length_um,
        q_factor=q,
        linewidth_uev=linewidth_energy(wavelength_nm, q),
        wavelength_nm=wavelength_nm,
        mode_splitting_uev=mode_splitting_uev,
    )


# Mode area = area_factor * pi * w0^2. The default 0.5 is the Gaussian-mode
# normalization (integral of exp(-2 r^2/w0^2) over the transverse plane);
# 0.25 gives the half-power-style effective area. The factor is an explicit
# knob because transverse conventions differ between groups.
GAUSSIAN_AREA_FACTOR = 0.5
HALF_POWER_AREA_FACTOR = 0.25


def gaussian_waist(
    radius_of_curvature_um: float,
    cavity_length_um: float,
    wavelength_nm: float,
    area_factor: float = GAUSSIAN_AREA_FACTOR,
) -> GaussianGeometry:
    """Waist, mode area and transverse mode splitting of a plano-concave cavity.

    w0^2 = (lambda/pi) sqrt(L (R - L)); stability requires 0 < L < R. The
    transverse (Hermite-Gaussian) splitting is
    (c / 2L) (1/pi) arccos(sqrt(1 - L/R)).
    """
    R = radius_of_curvature_um
    L = cavity_length_um
    if not (0 < L < R):
        raise ValueError(f"unstable geometry: need 0 < L < R, got L={L}, R={R}")
    lam_um = wavelength_nm / 1000.0
    w0_sq = (lam_um / math.pi) * math.sqrt(L * (R - L))
    w0 = math.sqrt(w0_sq)
    fsr_hz = C_LIGHT / (2.0 * L * 1e-6)
    splitting_hz = fsr_hz * math.acos(math.sqrt(1.0 - L / R)) / math.pi
    return GaussianGeometry(
        radius_of_curvature_um=R,
        cavity_length_um=L,
        waist_um=w0,
        mode_area_um2=area_factor * math.pi * w0_sq,
        transverse_splitting_ghz=splitting_hz / 1e9,
    )
