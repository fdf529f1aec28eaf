"""1D transfer-matrix solver at normal incidence.

Conventions
-----------
Time dependence exp(-i omega t), so a forward wave is exp(+ikz) and an
absorbing index is n + ik with k >= 0. Admittances are normalized to the
free-space admittance, eta = n. The characteristic matrix used here maps the
tangential fields at the exit boundary of a slab to those at its front
boundary,

    M(d) = [[cos d,  -i sin d / eta], [-i eta sin d,  cos d]],
    delta = 2 pi n d / lambda,

which is the conjugate of the exp(+i omega t) textbook form. Under this
choice the reflection phase of a displaced mirror grows with wavelength and
the penetration depth -(lambda^2 / 4 pi) dphi/dlambda comes out positive for
any passive mirror; the exp(+i omega t) matrix would flip its sign and break
for absorbing layers with k >= 0.

All operations are pure functions of immutable inputs; sweeps may be
evaluated in any order (or in parallel) with bitwise-identical results.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .constants import EPSILON_0, HBAR, angular_frequency
from .materials import DEFAULT_DBR_PAIRS, SILICA, VACUUM, Layer, Material, Stack, build_dbr

TWO_PI = 2.0 * math.pi


class NumericalFailure(ArithmeticError):
    """Degenerate linear system in the transfer-matrix solve."""


class NotAMirrorError(ValueError):
    """Stack is not reflective enough for a penetration-depth evaluation."""


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 characteristic matrix in normalized-admittance form."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)

    @property
    def determinant(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    @classmethod
    def identity(cls) -> "TransferMatrix":
        return cls(1.0 + 0j, 0j, 0j, 1.0 + 0j)


@dataclass(frozen=True)
class ComplexResponse:
    """Amplitude and power reflection/transmission of a stack."""

    r: complex
    t: complex
    R: float
    T: float


def layer_matrix(layer: Layer, wavelength_nm: float) -> TransferMatrix:
    """Characteristic matrix of a single layer at the given vacuum wavelength."""
    if not wavelength_nm > 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength_nm}")
    eta = layer.material.refractive_index
    delta = TWO_PI * eta * layer.thickness / wavelength_nm
    c = cmath.cos(delta)
    s = cmath.sin(delta)
    return TransferMatrix(c, -1j * s / eta, -1j * eta * s, c)


def stack_matrix(stack: Stack, wavelength_nm: float) -> TransferMatrix:
    """Ordered product of layer matrices, incident side as the first factor."""
    m = TransferMatrix.identity()
    for layer in stack.layers:
        m = m @ layer_matrix(layer, wavelength_nm)
    return m


def reflectance(stack: Stack, wavelength_nm: float) -> ComplexResponse:
    """Complex r, t and powers R, T of a stack at normal incidence.

    Solves (B, C)^T = M (1, eta_exit)^T; then r = (eta_in B - C) /
    (eta_in B + C) and the field transmission is t = 2 eta_in / (eta_in B + C).
    T is power-corrected by the admittance ratio of exit and incident media.
    """
    m = stack_matrix(stack, wavelength_nm)
    eta_in = stack.incident_medium.refractive_index
    eta_exit = stack.exit_medium.refractive_index
    b = m.m11 + m.m12 * eta_exit
    c = m.m21 + m.m22 * eta_exit
    denom = eta_in * b + c
    if denom == 0:
        raise NumericalFailure("degenerate admittance sum in reflectance solve")
    r = (eta_in * b - c) / denom
    t = 2.0 * eta_in / denom
    R = abs(r) ** 2
    T = (eta_exit.real / eta_in.real) * abs(t) ** 2
    return ComplexResponse(r, t, R, T)


@dataclass(frozen=True)
class FieldProfile:
    """Sampled intra-stack field for unit transmitted amplitude.

    ``z_nm`` runs from the incident surface into the stack; ``amplitude`` is
    the complex E(z) and ``index_profile`` the (real) refractive index at each
    sample. Antinodes/nodes are parabolic-refined local extrema of |E|.
    """

    z_nm: np.ndarray
    amplitude: np.ndarray
    index_profile: np.ndarray
    layer_boundaries: tuple[float, ...]
    antinode_positions: tuple[float, ...]
    node_positions: tuple[float, ...]

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.amplitude)

    def amplitude_at(self, z: float) -> float:
        """|E| at depth z by linear interpolation."""
        return float(np.interp(z, self.z_nm, self.magnitude))


def _refine_extremum(x: np.ndarray, y: np.ndarray, i: int) -> float:
    """Parabolic refinement of an interior extremum through three samples."""
    denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
    if denom == 0:
        return float(x[i])
    shift = 0.5 * (y[i - 1] - y[i + 1]) / denom
    return float(x[i] + shift * (x[i + 1] - x[i]))


def _local_extrema(z: np.ndarray, mag: np.ndarray) -> tuple[list[float], list[float]]:
    maxima, minima = [], []
    for i in range(1, len(mag) - 1):
        if mag[i] > mag[i - 1] and mag[i] >= mag[i + 1]:
            maxima.append(_refine_extremum(z, mag, i))
        elif mag[i] < mag[i - 1] and mag[i] <= mag[i + 1]:
            minima.append(_refine_extremum(z, mag, i))
    return maxima, minima


def field_profile(stack: Stack, wavelength_nm: float, grid_step_nm: float = 1.0) -> FieldProfile:
    """Internal field of a stack, back-propagated from unit transmitted wave.

    The exit medium carries only the forward (transmitted) wave, so the
    fields at the exit boundary are (E, H) = (1, eta_exit); each layer then
    maps them toward the incident surface. Sampling is on a uniform grid of
    at most ``grid_step_nm`` within every layer.
    """
    if not grid_step_nm > 0:
        raise ValueError(f"grid step must be > 0, got {grid_step_nm}")
    thicknesses = [layer.thickness for layer in stack.layers]
    if thicknesses and grid_step_nm > min(thicknesses):
        raise ValueError(
            f"grid step {grid_step_nm} nm exceeds thinnest layer "
            f"({min(thicknesses)} nm)"
        )
    boundaries = stack.boundaries()
    e_b = 1.0 + 0j
    h_b = complex(stack.exit_medium.refractive_index)

    z_parts: list[np.ndarray] = []
    e_parts: list[np.ndarray] = []
    n_parts: list[np.ndarray] = []
    # exit boundary sample (index of the exit medium)
    z_parts.append(np.array([boundaries[-1]]))
    e_parts.append(np.array([e_b]))
    n_parts.append(np.array([stack.exit_medium.n]))

    for j in range(len(stack.layers) - 1, -1, -1):
        layer = stack.layers[j]
        eta = layer.material.refractive_index
        k = TWO_PI * eta / wavelength_nm
        d = layer.thickness
        n_samples = max(2, int(math.ceil(d / grid_step_nm)) + 1)
        x = np.linspace(0.0, d, n_samples)[:-1]  # the back boundary belongs to next layer
        s = d - x  # distance from sample plane to the layer's back boundary
        cs = np.cos(k * s)
        sn = np.sin(k * s)
        e = cs * e_b - 1j * sn / eta * h_b
        z_parts.append(boundaries[j] + x)
        e_parts.append(e)
        n_parts.append(np.full(len(x), layer.material.n))
        # fields at the front of this layer feed the next (shallower) one
        c0 = cmath.cos(k * d)
        s0 = cmath.sin(k * d)
        e_b, h_b = c0 * e_b - 1j * s0 / eta * h_b, -1j * eta * s0 * e_b + c0 * h_b

    z = np.concatenate(z_parts[::-1])
    e_field = np.concatenate(e_parts[::-1])
    n_profile = np.concatenate(n_parts[::-1])
    antinodes, nodes = _local_extrema(z, np.abs(e_field))
    return FieldProfile(
        z_nm=z,
        amplitude=e_field,
        index_profile=n_profile,
        layer_boundaries=tuple(boundaries),
        antinode_positions=tuple(antinodes),
        node_positions=tuple(nodes),
    )


def penetration_depth(
    mirror: Stack,
    wavelength_nm: float,
    dlambda_nm: float = 0.01,
) -> float:
    """Field penetration depth of a mirror in um.

    Hard-mirror equivalence through the reflection-phase dispersion,
    L_pen = -(lambda^2 / 4 pi) dphi_r/dlambda, with the derivative taken by
    central finite difference and referenced to the incident medium. The
    angle of r(lambda+)/r(lambda-) avoids branch-cut trouble.
    """
    if reflectance(mirror, wavelength_nm).R < 0.5:
        raise NotAMirrorError(
            f"stack reflects less than 50% at {wavelength_nm} nm; "
            "penetration depth is not meaningful"
        )
    r_plus = reflectance(mirror, wavelength_nm + dlambda_nm).r
    r_minus = reflectance(mirror, wavelength_nm - dlambda_nm).r
    dphi_dlambda = cmath.phase(r_plus / r_minus) / (2.0 * dlambda_nm)
    return -(wavelength_nm**2 / (4.0 * math.pi)) * dphi_dlambda / 1000.0


# ---------------------------------------------------------------------------
# tunable cavity: gap scans, resonances, effective length, vacuum field
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CavityTemplate:
    """A tunable cavity: fixed top mirror, variable vacuum gap, fixed bottom.

    ``top_layers`` are listed incident side first (the last one faces the
    gap); ``bottom`` is a Stack whose incident side faces the gap.
    """

    bottom: Stack
    top_layers: tuple[Layer, ...]
    incident_medium: Material = SILICA

    @classmethod
    def with_dbr_top(
        cls,
        bottom: Stack,
        top_dbr_pairs: int = DEFAULT_DBR_PAIRS,
        design_wavelength_nm: float = 940.0,
    ) -> "CavityTemplate":
        top = build_dbr(top_dbr_pairs, design_wavelength_nm=design_wavelength_nm)
        return cls(bottom=bottom, top_layers=top.layers, incident_medium=SILICA)

    def with_gap(self, gap_nm: float) -> Stack:
        if gap_nm < 0:
            raise ValueError(f"air gap must be >= 0, got {gap_nm}")
        layers = list(self.top_layers)
        if gap_nm > 0:
            layers.append(Layer(VACUUM, gap_nm))
        layers.extend(self.bottom.layers)
        offset = sum(l.thickness for l in self.top_layers) + gap_nm
        marks = tuple((name, depth + offset) for name, depth in self.bottom.marks)
        return Stack(self.incident_medium, tuple(layers), self.bottom.exit_medium, marks)

    def top_mirror_from_gap(self) -> Stack:
        """The top mirror as seen from inside the gap (vacuum incidence)."""
        return Stack(VACUUM, tuple(reversed(self.top_layers)), self.incident_medium)


def transmission_vs_gap(
    template: CavityTemplate,
    wavelength_nm: float,
    gaps_nm: np.ndarray,
) -> np.ndarray:
    """Power transmission of the assembled cavity for each gap value.

    The fixed top and bottom matrices are factored out, so each gap costs a
    single 2x2 product regardless of mirror size.
    """
    gaps = np.asarray(gaps_nm, dtype=float)
    m_top = TransferMatrix.identity()
    for layer in template.top_layers:
        m_top = m_top @ layer_matrix(layer, wavelength_nm)
    m_bot = TransferMatrix.identity()
    for layer in template.bottom.layers:
        m_bot = m_bot @ layer_matrix(layer, wavelength_nm)

    eta_in = complex(template.incident_medium.refractive_index)
    eta_exit = complex(template.bottom.exit_medium.refractive_index)
    vb = m_bot.m11 + m_bot.m12 * eta_exit
    vc = m_bot.m21 + m_bot.m22 * eta_exit

    k = TWO_PI / wavelength_nm
    c = np.cos(k * gaps)
    s = np.sin(k * gaps)
    gb = c * vb - 1j * s * vc      # vacuum gap: eta = 1
    gc = -1j * s * vb + c * vc
    b = m_top.m11 * gb + m_top.m12 * gc
    cc = m_top.m21 * gb + m_top.m22 * gc
    t = 2.0 * eta_in / (eta_in * b + cc)
    return (eta_exit.real / eta_in.real) * np.abs(t) ** 2


@dataclass(frozen=True)
class GapScan:
    """Transmission-vs-gap trace with detected resonances."""

    gaps_nm: np.ndarray
    transmission: np.ndarray
    resonance_gaps_nm: tuple[float, ...]

    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.gaps_nm.tolist(), self.transmission.tolist()))


def _detect_peaks(x: np.ndarray, y: np.ndarray, threshold_frac: float = 0.5) -> list[float]:
    """Local maxima above threshold_frac of the global maximum, refined."""
    if len(y) < 3:
        return []
    cut = threshold_frac * float(np.max(y))
    out = []
    for i in range(1, len(y) - 1):
        if y[i] > y[i - 1] and y[i] >= y[i + 1] and y[i] >= cut:
            out.append(_refine_extremum(x, y, i))
    return out


def scan_air_gap(
    template: CavityTemplate,
    wavelength_nm: float,
    gap_from_nm: float,
    gap_to_nm: float,
    step_nm: float,
) -> GapScan:
    """Scan the vacuum gap and report transmission plus resonance positions.

    Resonances are local maxima above half the global maximum, refined by
    parabolic interpolation of the three samples around each peak.
    """
    if not step_nm > 0:
        raise ValueError(f"step must be > 0, got {step_nm}")
    if gap_to_nm <= gap_from_nm:
        raise ValueError("empty gap range")
    gaps = np.arange(gap_from_nm, gap_to_nm + 0.5 * step_nm, step_nm)
    trans = transmission_vs_gap(template, wavelength_nm, gaps)
    peaks = _detect_peaks(gaps, trans)
    return GapScan(gaps, trans, tuple(peaks))


def tune_air_gap(
    template: CavityTemplate,
    wavelength_nm: float,
    near_gap_nm: float,
    half_window_nm: float = 4.0,
    fine_step_nm: float = 0.002,
) -> float:
    """Refine a resonant gap near a guess to sub-pm accuracy.

    Iterative zoom: each pass recenters on the transmission maximum and
    shrinks the grid, which converges even when the resonance is far
    narrower than the initial window (the Airy tails fall off monotonically,
    so the coarse argmax always points toward the peak). Ends with parabolic
    refinement on the finest grid.
    """
    center = near_gap_nm
    step = max(half_window_nm / 50.0, fine_step_nm)
    window = half_window_nm
    while True:
        gaps = np.arange(center - window, center + window + 0.5 * step, step)
        gaps = gaps[gaps >= 0]
        trans = transmission_vs_gap(template, wavelength_nm, gaps)
        center = float(gaps[int(np.argmax(trans))])
        if step <= fine_step_nm:
            break
        window = 6.0 * step
        step = max(step / 15.0, fine_step_nm)
    i = int(np.argmax(trans))
    i = max(1, min(len(gaps) - 2, i))
    return _refine_extremum(gaps, trans, i)


def resonant_wavelengths(
    template: CavityTemplate,
    gap_nm: float,
    wavelength_from_nm: float,
    wavelength_to_nm: float,
    step_nm: float = 0.02,
    threshold_frac: float = 0.3,
) -> list[float]:
    """Transmission peaks of the assembled cavity in a wavelength window."""
    lams = np.arange(wavelength_from_nm, wavelength_to_nm, step_nm)
    stack = template.with_gap(gap_nm)
    trans = np.array([reflectance(stack, lam).T for lam in lams])
    return _detect_peaks(lams, trans, threshold_frac)


class ResonanceNotFound(ValueError):
    """Fewer resonances than needed in the scanned window."""


def effective_cavity_length(
    template: CavityTemplate,
    resonant_gap_nm: float,
    wavelength_nm: float,
    method: str = "slope",
    dlambda_nm: float = 0.5,
) -> float:
    """Effective (FSR-defining) cavity length in um, gap pre-tuned on resonance.

    method="slope" (default) tracks the resonant gap while the wavelength is
    stepped by +-dlambda and evaluates l = lambda * (dd/dlambda) = q lambda/2,
    the local form of l = lambda^2 / (2 FSR). This works for any cavity whose
    adjacent longitudinal orders fall outside the mirror stopband (true for
    the bonded designs here, which support a single in-band resonance).

    method="fsr" scans the wavelength at fixed geometry, takes the two
    resonances bracketing the operating one and evaluates
    l = lambda_+ lambda_- / (lambda_+ - lambda_-), the discretization-exact
    form of lambda^2 / (2 FSR) with FSR = (lambda_+ - lambda_-) / 2. Raises
    ResonanceNotFound when the window does not contain both brackets.
    """
    if method == "slope":
        half_window = wavelength_nm / 8.0
        g_plus = tune_air_gap(
            template, wavelength_nm + dlambda_nm, resonant_gap_nm, half_window
        )
        g_minus = tune_air_gap(
            template, wavelength_nm - dlambda_nm, resonant_gap_nm, half_window
        )
        slope = (g_plus - g_minus) / (2.0 * dlambda_nm)
        mode_index = 2.0 * slope
        return mode_index * wavelength_nm / 2.0 / 1000.0
    if method == "fsr":
        span = 0.35 * wavelength_nm
        candidates = resonant_wavelengths(
            template, resonant_gap_nm, wavelength_nm - span, wavelength_nm + span
        )
        # keep genuine longitudinal orders: both mirrors must still reflect
        # (band-edge transmission ripple otherwise masquerades as resonances)
        top = template.top_mirror_from_gap()
        peaks = [
            p for p in candidates
            if reflectance(template.bottom, p).R >= 0.9 and reflectance(top, p).R >= 0.9
        ]
        center = min(peaks, key=lambda p: abs(p - wavelength_nm), default=None)
        if center is None:
            raise ResonanceNotFound("no resonance near the operating wavelength")
        above = [p for p in peaks if p > center + 1.0]
        below = [p for p in peaks if p < center - 1.0]
        if not above or not below:
            raise ResonanceNotFound(
                "fewer than two bracketing resonances in the scan window"
            )
        lam_hi, lam_lo = min(above), max(below)
        return lam_hi * lam_lo / (lam_hi - lam_lo) / 1000.0
    raise ValueError(f"unknown method {method!r}")


def cavity_length_breakdown(
    template: CavityTemplate,
    resonant_gap_nm: float,
    wavelength_nm: float,
) -> dict[str, float]:
    """Decompose the effective length into mirror penetrations plus gap (um).

    The sum reproduces the slope-derived effective length to within the
    finite-difference tolerances, which settles how much of the total sits
    inside each mirror.
    """
    bottom_pen = penetration_depth(template.bottom, wavelength_nm)
    top_pen = penetration_depth(template.top_mirror_from_gap(), wavelength_nm)
    total = bottom_pen + top_pen + resonant_gap_nm / 1000.0
    return {
        "bottom_penetration_um": bottom_pen,
        "top_penetration_um": top_pen,
        "air_gap_um": resonant_gap_nm / 1000.0,
        "total_um": total,
    }


@dataclass(frozen=True)
class VacuumFieldProfile:
    """Field profile rescaled to the physical zero-point amplitude (V/m)."""

    field: FieldProfile
    mode_area_um2: float
    total_energy_j: float
    wavelength_nm: float

    @property
    def z_nm(self) -> np.ndarray:
        return self.field.z_nm

    @property
    def magnitude_v_per_m(self) -> np.ndarray:
        return self.field.magnitude

    def e_vac_at(self, z_nm: float) -> float:
        return self.field.amplitude_at(z_nm)


def vacuum_field(
    cavity: Stack,
    wavelength_nm: float,
    mode_area_um2: float,
    grid_step_nm: float = 0.25,
) -> VacuumFieldProfile:
    """Rescale the on-resonance cavity field to zero-point units.

    Normalization: integral of eps0 n(z)^2 |E(z)|^2 * mode_area dz over the
    stack equals hbar omega / 2. The supplied stack must already be tuned to
    a transmission maximum at ``wavelength_nm``.
    """
    if not mode_area_um2 > 0:
        raise ValueError(f"mode area must be > 0, got {mode_area_um2}")
    profile = field_profile(cavity, wavelength_nm, grid_step_nm)
    area_m2 = mode_area_um2 * 1e-12
    z_m = profile.z_nm * 1e-9
    density = EPSILON_0 * profile.index_profile**2 * np.abs(profile.amplitude) ** 2
    integral = float(np.trapezoid(density, z_m)) * area_m2
    if integral == 0:
        raise NumericalFailure("zero field norm; cannot normalize vacuum field")
    omega = angular_frequency(wavelength_nm)
    target = HBAR * omega / 2.0
    scale = math.sqrt(target / integral)
    scaled = FieldProfile(
        z_nm=profile.z_nm,
        amplitude=profile.amplitude * scale,
        index_profile=profile.index_profile,
        layer_boundaries=profile.layer_boundaries,
        antinode_positions=profile.antinode_positions,
        node_positions=profile.node_positions,
    )
    return VacuumFieldProfile(
        field=scaled,
        mode_area_um2=mode_area_um2,
        total_energy_j=target,
        wavelength_nm=wavelength_nm,
    )


def transmission_spectrum(
    stack: Stack,
    wavelength_from_nm: float,
    wavelength_to_nm: float,
    step_nm: float,
) -> tuple[np.ndarray, list[ComplexResponse]]:
    """Reflectance/transmittance of a fixed stack over a wavelength range."""
    if not step_nm > 0:
        raise ValueError(f"step must be > 0, got {step_nm}")
    if wavelength_to_nm <= wavelength_from_nm:
        raise ValueError("empty wavelength range")
    lams = np.arange(wavelength_from_nm, wavelength_to_nm + 0.5 * step_nm, step_nm)
    return lams, [reflectance(stack, lam) for lam in lams]
