"""fpcavity: transfer-matrix design and analysis of open microcavities.

Subpackages cover the multilayer stack model, the 1D transfer-matrix solver,
closed-form cavity figures, the cavity-QED parameter chain, the
cross-polarized two-mode detection model, nonlinear least-squares fitting,
and a plain-text stack-description language with a CLI on top.
"""

from .materials import (
    DEFAULT_DBR_PAIRS,
    DEFAULT_LIBRARY,
    DESIGN_WAVELENGTH_NM,
    Layer,
    Material,
    MaterialLibrary,
    Stack,
    build_bottom_mirror,
    build_dbr,
    build_full_cavity,
    quarter_wave_thickness,
)
from .tmm import (
    CavityTemplate,
    ComplexResponse,
    FieldProfile,
    TransferMatrix,
    VacuumFieldProfile,
    effective_cavity_length,
    field_profile,
    layer_matrix,
    penetration_depth,
    reflectance,
    scan_air_gap,
    stack_matrix,
    tune_air_gap,
    vacuum_field,
)
from .cavity import (
    CavityFigures,
    GaussianGeometry,
    cavity_figures,
    finesse_from_scan,
    gaussian_waist,
    linewidth_energy,
    mode_index_from_length,
    mode_index_from_slope,
    quality_factor,
)
from .cqed import (
    CouplingReport,
    EmitterParams,
    PurcellModel,
    build_coupling_report,
    cooperativity,
    coupling_g,
    dipole_from_lifetime,
    implied_purcell_factor,
    mode_volume_from_purcell,
    purcell_from_mode_volume,
    relative_decay_rate,
    strong_coupling_check,
    vacuum_field_from_g,
)
from .fitting import (
    DecayHistogram,
    FitResult,
    InstrumentResponse,
    Trace,
    fit_decay,
    fit_lorentzian,
    fit_purcell_map,
    generate_synthetic,
    least_squares,
)
from .stacklang import Diagnostic, StackDocument, format_document, parse_stack

__version__ = "0.1.0"
