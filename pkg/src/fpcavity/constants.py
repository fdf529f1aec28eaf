"""Physical constants and unit conversions used throughout the package.

All constants are CODATA-2018 exact/recommended values. Every energy-domain
conversion goes through EV_NM so no literal is repeated elsewhere.
"""

EPSILON_0 = 8.8541878128e-12   # vacuum permittivity, F/m
HBAR = 1.054571817e-34         # reduced Planck constant, J s
C_LIGHT = 2.99792458e8         # speed of light, m/s
E_CHARGE = 1.602176634e-19     # elementary charge, C

HBAR_EV = HBAR / E_CHARGE      # reduced Planck constant, eV s

EV_NM = 1239.841984            # photon energy [eV] * wavelength [nm]


def photon_energy_ev(wavelength_nm: float) -> float:
    """Photon energy in eV for a vacuum wavelength in nm."""
    return EV_NM / wavelength_nm


def photon_energy_uev(wavelength_nm: float) -> float:
    """Photon energy in micro-eV for a vacuum wavelength in nm."""
    return photon_energy_ev(wavelength_nm) * 1e6


def angular_frequency(wavelength_nm: float) -> float:
    """Angular frequency omega = 2 pi c / lambda in rad/s."""
    return 2.0 * 3.141592653589793 * C_LIGHT / (wavelength_nm * 1e-9)


def rate_to_uev(rate_per_s: float) -> float:
    """Convert an angular rate in s^-1 to an energy hbar*rate in micro-eV."""
    return HBAR_EV * rate_per_s * 1e6


def uev_to_rate(energy_uev: float) -> float:
    """Convert an energy in micro-eV to an angular rate energy/hbar in s^-1."""
    return energy_uev * 1e-6 / HBAR_EV
