"""Materials, layers, stacks and builders for the mirror/cavity geometries.

A Stack is an ordered multilayer between two semi-infinite media, listed from
the incident side. Stacks are immutable after construction and may be shared
freely across sweep workers. Dispersion is not modeled: each material carries
a single complex index n + ik valid near the design wavelength.

Named depth marks (e.g. the quantum-dot plane inside the epilayer) ride along
with the stack so downstream field evaluations can locate them after
composition.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

DESIGN_WAVELENGTH_NM = 940.0

# Minimal pair count for which the terminated Ta2O5/SiO2 quarter-wave mirror
# on silica reaches R >= 0.9998 at 940 nm (found by sweep, pinned by test).
DEFAULT_DBR_PAIRS = 13


class UnknownMaterialError(KeyError):
    """Raised when a material name is not present in a library."""


@dataclass(frozen=True)
class Material:
    """Optical material with a constant complex refractive index n + ik."""

    name: str
    refractive_index: complex

    def __post_init__(self):
        n = complex(self.refractive_index)
        if n.real <= 0:
            raise ValueError(f"material {self.name!r}: need Re(n) > 0, got {n.real}")
        if n.imag < 0:
            raise ValueError(f"material {self.name!r}: need k >= 0, got {n.imag}")
        object.__setattr__(self, "refractive_index", n)

    @property
    def n(self) -> float:
        return self.refractive_index.real

    @property
    def k(self) -> float:
        return self.refractive_index.imag

    @property
    def is_lossless(self) -> bool:
        return self.refractive_index.imag == 0.0


@dataclass(frozen=True)
class Layer:
    """A single homogeneous film of finite thickness (nm)."""

    material: Material
    thickness: float

    def __post_init__(self):
        if not self.thickness > 0:
            raise ValueError(f"layer thickness must be > 0, got {self.thickness}")

    @property
    def optical_thickness(self) -> float:
        """n * d in nm (real part of the index)."""
        return self.material.n * self.thickness


@dataclass(frozen=True)
class Stack:
    """Ordered multilayer between two semi-infinite media.

    ``layers`` are listed incident side first. ``marks`` are named depths in
    nm measured from the incident surface; they survive stack composition.
    """

    incident_medium: Material
    layers: tuple[Layer, ...]
    exit_medium: Material
    marks: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "marks", tuple(self.marks))

    @property
    def layer_count(self) -> int:
        return len(self.layers)

    @property
    def total_thickness(self) -> float:
        return sum(layer.thickness for layer in self.layers)

    def boundaries(self) -> list[float]:
        """Depths of all layer interfaces, starting at 0 (incident surface)."""
        z = [0.0]
        for layer in self.layers:
            z.append(z[-1] + layer.thickness)
        return z

    def mark(self, name: str) -> float:
        for key, depth in self.marks:
            if key == name:
                return depth
        raise KeyError(f"no mark named {name!r} on this stack")

    def has_mark(self, name: str) -> bool:
        return any(key == name for key, _ in self.marks)

    def with_marks(self, **named_depths: float) -> "Stack":
        merged = dict(self.marks)
        merged.update(named_depths)
        return replace(self, marks=tuple(sorted(merged.items())))


def _mat(name: str, n: complex) -> Material:
    return Material(name, complex(n))


class MaterialLibrary:
    """Named material table; lookups are exact and unknown names raise."""

    def __init__(self, materials: dict[str, Material] | None = None):
        self._table: dict[str, Material] = dict(materials or {})

    def get(self, name: str) -> Material:
        try:
            return self._table[name]
        except KeyError:
            raise UnknownMaterialError(name) from None

    def __contains__(self, name: str) -> bool:
        return name in self._table

    def names(self) -> tuple[str, ...]:
        return tuple(self._table)

    def add(self, material: Material) -> None:
        self._table[material.name] = material

    def copy(self) -> "MaterialLibrary":
        return MaterialLibrary(self._table)


# The five indices of the reference design plus generic ambient media.
# "alas" (the sacrificial layer of the fabrication flow) is carried for
# completeness only; no builder uses it.
DEFAULT_LIBRARY = MaterialLibrary({
    "vacuum": _mat("vacuum", 1.0),
    "air": _mat("air", 1.0),
    "water": _mat("water", 1.33),
    "algaas": _mat("algaas", 3.009),
    "gaas": _mat("gaas", 3.54),
    "ta2o5": _mat("ta2o5", 2.06),
    "sio2": _mat("sio2", 1.46),
    "silica": _mat("silica", 1.46),
    "elo": _mat("elo", 3.332),
    "alas": _mat("alas", 2.95),
})

VACUUM = DEFAULT_LIBRARY.get("vacuum")
TA2O5 = DEFAULT_LIBRARY.get("ta2o5")
SIO2 = DEFAULT_LIBRARY.get("sio2")
SILICA = DEFAULT_LIBRARY.get("silica")
ELO = DEFAULT_LIBRARY.get("elo")

# Name of the quantum-dot plane mark set by the bottom-mirror builder.
QD_PLANE = "qd_plane"
BOND_INTERFACE = "bond_interface"


def quarter_wave_thickness(material: Material, design_wavelength_nm: float) -> float:
    """Physical thickness (nm) of a quarter-wave layer: lambda0 / (4 Re(n))."""
    if not design_wavelength_nm > 0:
        raise ValueError(f"design wavelength must be > 0, got {design_wavelength_nm}")
    return design_wavelength_nm / (4.0 * material.n)


def build_dbr(
    pairs: int,
    high: Material = TA2O5,
    low: Material = SIO2,
    design_wavelength_nm: float = DESIGN_WAVELENGTH_NM,
    terminate_high: bool = True,
    incident_medium: Material = VACUUM,
    exit_medium: Material = SILICA,
) -> Stack:
    """Quarter-wave Bragg mirror of ``pairs`` high/low bilayers on a substrate.

    With ``terminate_high`` the stack is the alternating odd sequence
    H L H L ... H (2*pairs + 1 layers): the high-index material faces both
    the incident medium and the substrate, which is the arrangement that
    actually alternates everywhere and presents Ta2O5 at the bonding face.
    Without termination the stack is (H L) * pairs.
    """
    if pairs < 1:
        raise ValueError(f"pair count must be >= 1, got {pairs}")
    d_high = quarter_wave_thickness(high, design_wavelength_nm)
    d_low = quarter_wave_thickness(low, design_wavelength_nm)
    layers: list[Layer] = []
    for _ in range(pairs):
        layers.append(Layer(high, d_high))
        layers.append(Layer(low, d_low))
    if terminate_high:
        layers.append(Layer(high, d_high))
    return Stack(incident_medium, tuple(layers), exit_medium)


def build_bottom_mirror(
    gap_thickness_nm: float,
    gap_material: Material = VACUUM,
    design_wavelength_nm: float = DESIGN_WAVELENGTH_NM,
    dbr_pairs: int = DEFAULT_DBR_PAIRS,
    elo_quarter_waves: int = 3,
    sio2_terminated: bool = False,
) -> Stack:
    """Bonded bottom mirror: epilayer, optional bonding gap, dielectric DBR.

    Incident medium is vacuum and the incident side is the epilayer surface;
    the exit medium is the silica substrate. The epilayer is modeled as one
    homogeneous film of index 3.332 and optical thickness
    ``elo_quarter_waves * lambda0/4`` (3 -> the 3 lambda/4 bonded design,
    4 -> the lambda-layer variant). A zero gap omits the gap layer entirely.

    With ``sio2_terminated`` the mirror under the epilayer starts with SiO2
    (the variant that trades a bonding-interface antinode for a shorter
    penetration depth); otherwise it is the Ta2O5-faced terminated DBR.

    Marks: ``qd_plane`` at lambda0/2 optical depth below the epilayer
    surface, ``bond_interface`` at the back of the epilayer.
    """
    if gap_thickness_nm < 0:
        raise ValueError(f"gap thickness must be >= 0, got {gap_thickness_nm}")
    elo_thickness = elo_quarter_waves * design_wavelength_nm / (4.0 * ELO.n)
    layers: list[Layer] = [Layer(ELO, elo_thickness)]
    if gap_thickness_nm > 0:
        layers.append(Layer(gap_material, gap_thickness_nm))
    d_high = quarter_wave_thickness(TA2O5, design_wavelength_nm)
    d_low = quarter_wave_thickness(SIO2, design_wavelength_nm)
    if sio2_terminated:
        for _ in range(dbr_pairs):
            layers.append(Layer(SIO2, d_low))
            layers.append(Layer(TA2O5, d_high))
    else:
        for _ in range(dbr_pairs):
            layers.append(Layer(TA2O5, d_high))
            layers.append(Layer(SIO2, d_low))
        layers.append(Layer(TA2O5, d_high))
    qd_depth = (design_wavelength_nm / 2.0) / ELO.n
    return Stack(
        VACUUM,
        tuple(layers),
        SILICA,
        marks=((BOND_INTERFACE, elo_thickness), (QD_PLANE, qd_depth)),
    )


def build_full_cavity(
    bottom: Stack,
    air_gap_nm: float,
    top_dbr_pairs: int = DEFAULT_DBR_PAIRS,
    design_wavelength_nm: float = DESIGN_WAVELENGTH_NM,
) -> Stack:
    """Complete plane-plane cavity: top DBR, vacuum gap, bottom mirror.

    The concave top mirror is treated as a planar DBR at normal incidence
    (curvature only enters the transverse Gaussian geometry). Both exits are
    silica. ``air_gap_nm = 0`` concatenates the mirrors with no gap layer.
    Marks of ``bottom`` are shifted past the top mirror and gap.
    """
    if air_gap_nm < 0:
        raise ValueError(f"air gap must be >= 0, got {air_gap_nm}")
    top = build_dbr(top_dbr_pairs, design_wavelength_nm=design_wavelength_nm)
    layers = list(top.layers)
    if air_gap_nm > 0:
        layers.append(Layer(VACUUM, air_gap_nm))
    layers.extend(bottom.layers)
    offset = top.total_thickness + air_gap_nm
    marks = tuple((name, depth + offset) for name, depth in bottom.marks)
    return Stack(SILICA, tuple(layers), SILICA, marks=marks)
