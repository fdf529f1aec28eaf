"""Cross-polarized two-mode detection model.

The cavity supports two linearly polarized, slightly split fundamental modes
c1 and c2. Excitation is linear at angle phi to the mode axes; detection is
orthogonal to the excitation. The reflected signal is proportional to the
contrast of the two detuning-dependent reflection coefficients,

    I_r = (I0/4) |r1 - r2|^2 sin^2(2 phi),

while transmission only mixes the projections,

    I_t = t1^2 cos^2(phi) + t2^2 sin^2(phi).

Note the asymmetry as printed: at phi = pi/2 the transmission reduces to the
t2 term, although the mode detected there is conventionally labeled c1; the
labeling of which physical mode carries index 1 is a convention choice and
does not affect the intensities.

Each mode responds as a lossy symmetric Lorentzian with |r|^2 + |t|^2 = 1
for unit peak transmission, r real-positive far off resonance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CavityMode:
    """One resonance: position and FWHM share one unit (ueV or pm)."""

    center: float
    linewidth: float
    peak_transmission: float = 1.0

    def __post_init__(self):
        if self.linewidth <= 0:
            raise ValueError("linewidth must be positive")
        if not 0 < self.peak_transmission <= 1:
            raise ValueError("peak transmission must be in (0, 1]")


@dataclass(frozen=True)
class TwoModeCavity:
    """The birefringence-split fundamental mode pair."""

    mode1: CavityMode
    mode2: CavityMode

    @property
    def splitting(self) -> float:
        return self.mode2.center - self.mode1.center


@dataclass(frozen=True)
class DetectionGeometry:
    """Angle between cavity axes and the excitation axis, input intensity."""

    phi_rad: float
    input_intensity: float = 1.0

    def __post_init__(self):
        if not 0 <= self.phi_rad < math.pi:
            raise ValueError("phi must lie in [0, pi)")


def mode_response(detuning, mode: CavityMode):
    """Complex (r, t) of a single mode at the given detuning from its center.

    t = sqrt(T) (w/2) / (w/2 + i d) and r = (sqrt(1-T) w/2 + i d)/(w/2 + i d),
    so |r|^2 + |t|^2 = 1 exactly and r -> 1 far off resonance.
    """
    d = np.asarray(detuning, dtype=float) - mode.center
    half = mode.linewidth / 2.0
    denom = half + 1j * d
    t = math.sqrt(mode.peak_transmission) * half / denom
    r = (math.sqrt(1.0 - mode.peak_transmission) * half + 1j * d) / denom
    if np.isscalar(detuning):
        return complex(r), complex(t)
    return r, t


def field_amplitudes(r1, r2, e0: float, phi_rad: float):
    """Projected reflected amplitudes of the two modes on the detection axis.

    E1 = (r1/2) E0 sin(2 phi), E2 = -(r2/2) E0 sin(2 phi).
    """
    s = math.sin(2.0 * phi_rad)
    return r1 / 2.0 * e0 * s, -r2 / 2.0 * e0 * s


def reflected_intensity(r1, r2, input_intensity: float, phi_rad: float):
    """Cross-polarized reflection: I_r = (I0/4) |r1 - r2|^2 sin^2(2 phi)."""
    return input_intensity / 4.0 * np.abs(np.asarray(r1) - np.asarray(r2)) ** 2 * math.sin(
        2.0 * phi_rad
    ) ** 2


def transmitted_intensity(t1, t2, phi_rad: float):
    """Transmission: I_t = |t1|^2 cos^2(phi) + |t2|^2 sin^2(phi)."""
    return (
        np.abs(np.asarray(t1)) ** 2 * math.cos(phi_rad) ** 2
        + np.abs(np.asarray(t2)) ** 2 * math.sin(phi_rad) ** 2
    )


def detuning_sweep(
    cavity: TwoModeCavity,
    geometry: DetectionGeometry,
    detunings,
) -> tuple[np.ndarray, np.ndarray]:
    """(I_r, I_t) traces over a detuning grid shared by both modes."""
    d = np.asarray(detunings, dtype=float)
    r1, t1 = mode_response(d, cavity.mode1)
    r2, t2 = mode_response(d, cavity.mode2)
    i_r = reflected_intensity(r1, r2, geometry.input_intensity, geometry.phi_rad)
    i_t = transmitted_intensity(t1, t2, geometry.phi_rad)
    return i_r, i_t


def count_resolved_peaks(values: np.ndarray, threshold_frac: float = 0.05) -> int:
    """Number of local maxima above a fraction of the global maximum."""
    y = np.asarray(values, dtype=float)
    if len(y) < 3 or np.max(y) <= 0:
        return 0
    cut = threshold_frac * float(np.max(y))
    n = 0
    for i in range(1, len(y) - 1):
        if y[i] > y[i - 1] and y[i] >= y[i + 1] and y[i] >= cut:
            n += 1
    return n
