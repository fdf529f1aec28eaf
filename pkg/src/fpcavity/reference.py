"""Reference design targets and the acceptance table.

The published characterization of the bonded-epilayer microcavity pins a set
of numbers (penetration depths, cavity lengths, closed-form figures, the
coupling chain, fitted decay-map parameters). This module holds those targets
as data together with their tolerances, and evaluates every row against this
implementation. The CLI ``reproduce-paper`` subcommand and the acceptance
test suite both run the same table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import cavity, cqed, fitting, polarization, stacklang, tmm
from .materials import (
    DEFAULT_DBR_PAIRS,
    DESIGN_WAVELENGTH_NM,
    QD_PLANE,
    Layer,
    Material,
    Stack,
    build_bottom_mirror,
    build_dbr,
)

# --- measured/simulated reference values (targets as data, not code) -------

DESIGN_REFLECTIVITY = 0.9998
GAMMA_FREE_GHZ = 1.25
QD_WAVELENGTH_NM = 933.0
CHAIN_Q_FACTOR = 33_000
ELO_INDEX = 3.332
ASSUMED_PURCELL = 5.0
HBAR_KAPPA_UEV = 40.0
HBAR_KAPPA_TRANSMISSION_UEV = 44.0

REFERENCE_PURCELL_FIT = cqed.PurcellModel(
    fp1=1.27,
    fp2=0.79,
    linewidth1_uev=121.83,
    linewidth2_uev=106.93,
    mode_splitting_uev=100.14,
    alpha=1.12,
)
# one-sigma uncertainties quoted with that fit, same parameter order
REFERENCE_PURCELL_SIGMAS = (0.04, 0.04, 5.8, 10.71, 5.11, 0.01)

MEASURED_LIFETIME_RESONANT_PS = (318.0, 70.0)
MEASURED_LIFETIME_DETUNED_PS = (665.0, 10.0)
MODE_SPLITTING_UEV = 57.65
MODE_LINEWIDTHS_UEV = (38.53, 40.29)
RADIUS_OF_CURVATURE_UM = 13.0

TARGET_PENETRATION_BONDED_UM = 6.70
TARGET_PENETRATION_GAP22_UM = 2.06
TARGET_PENETRATION_LAMBDA_LAYER_UM = 4.30
TARGET_MIN_LENGTH_UM = 7.32
TARGET_GAP22_LENGTH_UM = 3.00
TARGET_VACUUM_FIELD_GAIN = 1.4
TARGET_HBAR_G_UEV = 11.75
TARGET_DIPOLE_ENM = 1.2
TARGET_E_VAC_CHAIN = 1.0e4
TARGET_E_VAC_TMM = 2.5e4


@dataclass
class RowResult:
    key: str
    description: str
    passed: bool
    value: str
    target: str
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.key}: {self.description}: {self.value} (target {self.target})"
        if self.detail:
            text += f" -- {self.detail}"
        return text


def _within_rel(value: float, target: float, rel: float) -> bool:
    return abs(value - target) <= rel * abs(target)


def _within_abs(value: float, target: float, tol: float) -> bool:
    return abs(value - target) <= tol


class ReferenceContext:
    """Caches the simulation artifacts shared between acceptance rows."""

    def __init__(self):
        self.wavelength = DESIGN_WAVELENGTH_NM

    @cached_property
    def bottom_bonded(self) -> Stack:
        return build_bottom_mirror(0.0)

    @cached_property
    def bottom_gap22(self) -> Stack:
        return build_bottom_mirror(22.0)

    @cached_property
    def bottom_lambda_layer(self) -> Stack:
        return build_bottom_mirror(0.0, elo_quarter_waves=4, sio2_terminated=True)

    @cached_property
    def template_bonded(self) -> tmm.CavityTemplate:
        return tmm.CavityTemplate.with_dbr_top(self.bottom_bonded)

    @cached_property
    def template_gap22(self) -> tmm.CavityTemplate:
        return tmm.CavityTemplate.with_dbr_top(self.bottom_gap22)

    @cached_property
    def template_lambda_layer(self) -> tmm.CavityTemplate:
        return tmm.CavityTemplate.with_dbr_top(self.bottom_lambda_layer)

    def _minimal_resonant_gap(self, template: tmm.CavityTemplate) -> float:
        scan = tmm.scan_air_gap(template, self.wavelength, 30.0, 650.0, 1.0)
        if not scan.resonance_gaps_nm:
            raise tmm.ResonanceNotFound("no resonance in the minimal-gap window")
        return tmm.tune_air_gap(template, self.wavelength, scan.resonance_gaps_nm[0])

    @cached_property
    def gap_bonded(self) -> float:
        return self._minimal_resonant_gap(self.template_bonded)

    @cached_property
    def gap_gap22(self) -> float:
        # the as-built cavity sits near half a micron of air gap
        scan = tmm.scan_air_gap(self.template_gap22, self.wavelength, 300.0, 700.0, 1.0)
        return tmm.tune_air_gap(self.template_gap22, self.wavelength,
                                scan.resonance_gaps_nm[0])

    @cached_property
    def gap_lambda_layer(self) -> float:
        return self._minimal_resonant_gap(self.template_lambda_layer)

    @cached_property
    def length_bonded_um(self) -> float:
        return tmm.effective_cavity_length(self.template_bonded, self.gap_bonded, self.wavelength)

    @cached_property
    def length_gap22_um(self) -> float:
        return tmm.effective_cavity_length(self.template_gap22, self.gap_gap22, self.wavelength)

    @cached_property
    def length_lambda_layer_um(self) -> float:
        return tmm.effective_cavity_length(
            self.template_lambda_layer, self.gap_lambda_layer, self.wavelength
        )

    def _vacuum_field_at_qd(self, template, gap_nm, length_um) -> float:
        geometry = cavity.gaussian_waist(RADIUS_OF_CURVATURE_UM, length_um, self.wavelength)
        stack = template.with_gap(gap_nm)
        profile = tmm.vacuum_field(stack, self.wavelength, geometry.mode_area_um2)
        return profile.e_vac_at(stack.mark(QD_PLANE))

    @cached_property
    def e_vac_bonded(self) -> float:
        return self._vacuum_field_at_qd(self.template_bonded, self.gap_bonded,
                                        self.length_bonded_um)

    @cached_property
    def e_vac_gap22(self) -> float:
        return self._vacuum_field_at_qd(self.template_gap22, self.gap_gap22,
                                        self.length_gap22_um)

    @cached_property
    def e_vac_lambda_layer(self) -> float:
        return self._vacuum_field_at_qd(self.template_lambda_layer, self.gap_lambda_layer,
                                        self.length_lambda_layer_um)

    @cached_property
    def implied_purcell(self) -> float:
        return cqed.implied_purcell_factor(
            TARGET_HBAR_G_UEV, GAMMA_FREE_GHZ, QD_WAVELENGTH_NM, CHAIN_Q_FACTOR, ELO_INDEX
        )

    @cached_property
    def coupling_report(self) -> cqed.CouplingReport:
        return cqed.build_coupling_report(
            GAMMA_FREE_GHZ,
            QD_WAVELENGTH_NM,
            CHAIN_Q_FACTOR,
            ELO_INDEX,
            ASSUMED_PURCELL,
            hbar_kappa_uev=HBAR_KAPPA_UEV,
        )


# ---------------------------------------------------------------------------
# acceptance rows
# ---------------------------------------------------------------------------

def _row_penetration_bonded(ctx: ReferenceContext) -> RowResult:
    value = tmm.penetration_depth(ctx.bottom_bonded, ctx.wavelength)
    return RowResult(
        "pen-bonded", "penetration depth, bonded mirror",
        _within_rel(value, TARGET_PENETRATION_BONDED_UM, 0.05),
        f"{value:.3f} um", f"{TARGET_PENETRATION_BONDED_UM} um +-5%",
    )


def _row_penetration_gap22(ctx: ReferenceContext) -> RowResult:
    value = tmm.penetration_depth(ctx.bottom_gap22, ctx.wavelength)
    return RowResult(
        "pen-gap22", "penetration depth, 22 nm bonding gap",
        _within_rel(value, TARGET_PENETRATION_GAP22_UM, 0.05),
        f"{value:.3f} um", f"{TARGET_PENETRATION_GAP22_UM} um +-5%",
    )


def _row_length_gap22(ctx: ReferenceContext) -> RowResult:
    value = ctx.length_gap22_um
    detail = f"air gap {ctx.gap_gap22:.0f} nm"
    return RowResult(
        "len-gap22", "total cavity length, 22 nm gap + ~0.5 um air gap",
        _within_rel(value, TARGET_GAP22_LENGTH_UM, 0.05),
        f"{value:.3f} um", f"{TARGET_GAP22_LENGTH_UM} um +-5%", detail,
    )


def _row_length_bonded(ctx: ReferenceContext) -> RowResult:
    value = ctx.length_bonded_um
    breakdown = tmm.cavity_length_breakdown(ctx.template_bonded, ctx.gap_bonded, ctx.wavelength)
    detail = (
        f"breakdown: bottom {breakdown['bottom_penetration_um']:.2f} + gap "
        f"{breakdown['air_gap_um']:.2f} + top {breakdown['top_penetration_um']:.2f} um"
    )
    return RowResult(
        "len-bonded", "minimal total cavity length, gap-free design",
        _within_rel(value, TARGET_MIN_LENGTH_UM, 0.05),
        f"{value:.3f} um", f"{TARGET_MIN_LENGTH_UM} um +-5%", detail,
    )


def _row_lambda_layer(ctx: ReferenceContext) -> RowResult:
    pen = tmm.penetration_depth(ctx.bottom_lambda_layer, ctx.wavelength)
    gain = ctx.e_vac_lambda_layer / ctx.e_vac_gap22
    ok = _within_rel(pen, TARGET_PENETRATION_LAMBDA_LAYER_UM, 0.05) and _within_rel(
        gain, TARGET_VACUUM_FIELD_GAIN, 0.10
    )
    detail = (
        f"gain vs as-built cavity; vs ideal-bonded design: "
        f"{ctx.e_vac_lambda_layer / ctx.e_vac_bonded:.2f}"
    )
    return RowResult(
        "lambda-layer", "lambda-layer variant: penetration and field gain",
        ok,
        f"{pen:.3f} um, gain {gain:.3f}",
        f"{TARGET_PENETRATION_LAMBDA_LAYER_UM} um +-5%, {TARGET_VACUUM_FIELD_GAIN} +-10%",
        detail,
    )


def _row_field_positions(ctx: ReferenceContext) -> RowResult:
    profile = tmm.field_profile(ctx.bottom_bonded, ctx.wavelength, 1.0)
    bond = ctx.bottom_bonded.mark("bond_interface")
    qd = ctx.bottom_bonded.mark(QD_PLANE)
    node_err = min(abs(z - bond) for z in profile.node_positions)
    anti_err = min(abs(z - qd) for z in profile.antinode_positions)
    return RowResult(
        "field-positions", "field node at bond interface, antinode at emitter plane",
        node_err <= 2.0 and anti_err <= 5.0,
        f"node off by {node_err:.2f} nm, antinode by {anti_err:.2f} nm",
        "<= 2 nm and <= 5 nm",
    )


def _row_closed_forms(ctx: ReferenceContext) -> RowResult:
    finesse = cavity.finesse_from_scan(940.0, 115.0)
    q_factor = cavity.quality_factor(3.4, 4100.0, 940.0)
    linewidth = cavity.linewidth_energy(940.0, 30_000.0)
    length = cavity.length_from_mode_index(7.26, 940.0)
    index_back = cavity.mode_index_from_length(length, 940.0)
    ok = (
        _within_abs(finesse, 4087.0, 0.5)
        and _within_abs(q_factor, 29_660.0, 1.0)
        and _within_abs(linewidth, 44.0, 0.1)
        and abs(index_back - 7.26) < 1e-12
    )
    return RowResult(
        "closed-forms", "finesse/Q/linewidth/mode-index chain",
        ok,
        f"F={finesse:.1f}, Q={q_factor:.1f}, hk={linewidth:.3f} ueV, l={length:.4f} um",
        "4087+-0.5, 29660+-1, 44.0+-0.1 ueV, q=7.26 exactly",
    )


def _row_cqed_chain(ctx: ReferenceContext) -> RowResult:
    dipole = cqed.dipole_from_lifetime(GAMMA_FREE_GHZ, QD_WAVELENGTH_NM)
    report = ctx.coupling_report
    e_vac_chain = cqed.vacuum_field_from_g(TARGET_HBAR_G_UEV, TARGET_DIPOLE_ENM)
    ok = (
        _within_rel(dipole, TARGET_DIPOLE_ENM, 0.02)
        and _within_rel(e_vac_chain, TARGET_E_VAC_CHAIN, 0.10)
        and _within_rel(report.hbar_g_uev, TARGET_HBAR_G_UEV, 0.15)
        and _within_rel(ctx.e_vac_gap22, TARGET_E_VAC_TMM, 0.25)
    )
    detail = (
        f"implied Purcell factor {ctx.implied_purcell:.2f} (assumed {ASSUMED_PURCELL}); "
        f"mode volume {report.mode_volume_um3:.1f} um3"
    )
    return RowResult(
        "cqed-chain", "dipole, coupling, vacuum-field chain",
        ok,
        f"mu={dipole:.3f} e nm, hg={report.hbar_g_uev:.2f} ueV, "
        f"E_chain={e_vac_chain:.3g} V/m, E_tmm={ctx.e_vac_gap22:.3g} V/m",
        f"{TARGET_DIPOLE_ENM}+-2%, {TARGET_HBAR_G_UEV}+-15%, "
        f"{TARGET_E_VAC_CHAIN:.0e}+-10%, {TARGET_E_VAC_TMM:.0e}+-25%",
        detail,
    )


def _lifetime_prediction_sigma(detuning_uev: float) -> float:
    """Propagate the quoted fit-parameter uncertainties into the lifetime."""
    model = REFERENCE_PURCELL_FIT
    base = cqed.lifetime_at_detuning(detuning_uev, model, GAMMA_FREE_GHZ)
    fields = ("fp1", "fp2", "linewidth1_uev", "linewidth2_uev",
              "mode_splitting_uev", "alpha")
    var = 0.0
    for name, sigma in zip(fields, REFERENCE_PURCELL_SIGMAS):
        bumped = {f: getattr(model, f) for f in fields}
        bumped[name] += sigma
        shifted = cqed.lifetime_at_detuning(
            detuning_uev, cqed.PurcellModel(
                fp1=bumped["fp1"], fp2=bumped["fp2"],
                linewidth1_uev=bumped["linewidth1_uev"],
                linewidth2_uev=bumped["linewidth2_uev"],
                mode_splitting_uev=bumped["mode_splitting_uev"],
                alpha=bumped["alpha"],
            ), GAMMA_FREE_GHZ)
        var += (shifted - base) ** 2
    return math.sqrt(var)


def _row_lifetime_model(ctx: ReferenceContext) -> RowResult:
    tau0 = cqed.lifetime_at_detuning(0.0, REFERENCE_PURCELL_FIT, GAMMA_FREE_GHZ)
    tau300 = cqed.lifetime_at_detuning(300.0, REFERENCE_PURCELL_FIT, GAMMA_FREE_GHZ)
    # agreement with the measurement within combined one-sigma error
    # (measured error bar plus the prediction's own propagated uncertainty)
    ok0 = abs(tau0 - MEASURED_LIFETIME_RESONANT_PS[0]) <= (
        MEASURED_LIFETIME_RESONANT_PS[1] + _lifetime_prediction_sigma(0.0)
    )
    ok300 = abs(tau300 - MEASURED_LIFETIME_DETUNED_PS[0]) <= (
        MEASURED_LIFETIME_DETUNED_PS[1] + _lifetime_prediction_sigma(300.0)
    )
    return RowResult(
        "lifetime-model", "decay-map forward model vs measured lifetimes",
        ok0 and ok300,
        f"{tau0:.1f} ps at resonance, {tau300:.1f} ps at 300 ueV",
        "318+-70 ps and 665+-10 ps (combined error)",
        f"prediction sigmas {_lifetime_prediction_sigma(0.0):.1f} / "
        f"{_lifetime_prediction_sigma(300.0):.1f} ps",
    )


def _row_fit_roundtrips(ctx: ReferenceContext) -> RowResult:
    failures = []

    trace = fitting.generate_synthetic(
        "lorentzian",
        {"center": 12.0, "fwhm": 115.0, "amplitude": 1.0, "offset": 0.05,
         "x_from": -400.0, "x_to": 400.0},
        None, seed=0,
    )
    fit = fitting.fit_lorentzian(trace)
    truth = {"center": 12.0, "fwhm": 115.0, "amplitude": 1.0, "offset": 0.05}
    for name, target in truth.items():
        if abs(fit.value(name) - target) > 1e-6 * max(abs(target), 1e-12):
            failures.append(f"lorentzian {name}")

    model = REFERENCE_PURCELL_FIT
    trace = fitting.generate_synthetic(
        "purcell",
        {"fp1": model.fp1, "fp2": model.fp2, "linewidth1": model.linewidth1_uev,
         "linewidth2": model.linewidth2_uev, "splitting": model.mode_splitting_uev,
         "alpha": model.alpha},
        None, seed=0,
    )
    fit = fitting.fit_purcell_map(trace)
    for name, target in zip(fitting.PURCELL_PARAMS,
                            (model.fp1, model.fp2, model.linewidth1_uev,
                             model.linewidth2_uev, model.mode_splitting_uev, model.alpha)):
        if abs(fit.value(name) - target) > 1e-6 * abs(target):
            failures.append(f"purcell {name}")

    hist = fitting.generate_synthetic(
        "decay", {"tau": 665.0, "amplitude": 500.0, "background": 2.0}, None, seed=0
    )
    fit = fitting.fit_decay(hist, fitting.InstrumentResponse.delta())
    if abs(fit.value("tau") - 665.0) > 1e-6 * 665.0:
        failures.append("decay tau")

    return RowResult(
        "fit-roundtrips", "noiseless round trips, all three fit families",
        not failures,
        "all parameters within 1e-6 relative" if not failures else ", ".join(failures),
        "<= 1e-6 relative",
    )


def _row_fit_montecarlo(ctx: ReferenceContext, seeds: int = 100) -> RowResult:
    inside = 0
    total = 0
    model = REFERENCE_PURCELL_FIT
    truth_map = dict(zip(fitting.PURCELL_PARAMS,
                         (model.fp1, model.fp2, model.linewidth1_uev,
                          model.linewidth2_uev, model.mode_splitting_uev, model.alpha)))

    for seed in range(seeds):
        trace = fitting.generate_synthetic(
            "lorentzian",
            {"center": 0.0, "fwhm": 115.0, "amplitude": 1.0, "offset": 0.02,
             "x_from": -400.0, "x_to": 400.0},
            {"sigma": 0.02}, seed=seed,
        )
        fit = fitting.fit_lorentzian(trace)
        for name, target in (("center", 0.0), ("fwhm", 115.0),
                             ("amplitude", 1.0), ("offset", 0.02)):
            total += 1
            inside += abs(fit.value(name) - target) <= 2.0 * fit.sigma(name)

        trace = fitting.generate_synthetic(
            "purcell",
            {"fp1": model.fp1, "fp2": model.fp2, "linewidth1": model.linewidth1_uev,
             "linewidth2": model.linewidth2_uev, "splitting": model.mode_splitting_uev,
             "alpha": model.alpha},
            {"sigma_rel": 0.10}, seed=seed,
        )
        fit = fitting.fit_purcell_map(trace)
        for name, target in truth_map.items():
            total += 1
            inside += abs(fit.value(name) - target) <= 2.0 * fit.sigma(name)

        hist = fitting.generate_synthetic(
            "decay",
            {"tau": 318.0, "amplitude": 15000.0, "background": 5.0, "irf_fwhm": 340.0},
            {"poisson": True}, seed=seed,
        )
        fit = fitting.fit_decay(hist, fitting.InstrumentResponse.from_fwhm(340.0),
                                weighted=True)
        total += 1
        inside += abs(fit.value("tau") - 318.0) <= 2.0 * fit.sigma("tau")

    coverage = inside / total

    # one seeded noisy realization against the reference decay-map parameters
    trace = fitting.generate_synthetic(
        "purcell",
        {"fp1": model.fp1, "fp2": model.fp2, "linewidth1": model.linewidth1_uev,
         "linewidth2": model.linewidth2_uev, "splitting": model.mode_splitting_uev,
         "alpha": model.alpha},
        {"sigma_rel": 0.10}, seed=0,
    )
    fit = fitting.fit_purcell_map(trace)
    recovered = all(
        abs(fit.value(name) - truth_map[name]) <= 2.0 * fit.sigma(name)
        for name in ("fp1", "fp2", "alpha")
    )
    return RowResult(
        "fit-montecarlo", "Monte-Carlo 2-sigma coverage and noisy recovery",
        coverage >= 0.9 and recovered,
        f"coverage {coverage:.3f} over {seeds} seeds; "
        f"fp1={fit.value('fp1'):.2f}, fp2={fit.value('fp2'):.2f}, "
        f"alpha={fit.value('alpha'):.2f}",
        ">= 0.9; fp1/fp2/alpha within 2 sigma",
    )


def _row_polarization(ctx: ReferenceContext) -> RowResult:
    modes = polarization.TwoModeCavity(
        polarization.CavityMode(0.0, MODE_LINEWIDTHS_UEV[0]),
        polarization.CavityMode(MODE_SPLITTING_UEV, MODE_LINEWIDTHS_UEV[1]),
    )
    geometry = polarization.DetectionGeometry(phi_rad=85.0 * math.pi / 180.0)
    detunings = np.linspace(-150.0, 210.0, 1201)
    i_r, i_t = polarization.detuning_sweep(modes, geometry, detunings)
    n_r = polarization.count_resolved_peaks(i_r)
    n_t = polarization.count_resolved_peaks(i_t)
    return RowResult(
        "polarization", "two peaks in reflection, one in transmission",
        n_r == 2 and n_t == 1,
        f"{n_r} reflection peaks, {n_t} transmission peaks",
        "2 and 1",
    )


def _random_lossless_stack(rng) -> Stack:
    n_layers = int(rng.integers(2, 12))
    layers = tuple(
        Layer(Material(f"m{i}", float(rng.uniform(1.1, 4.0))), float(rng.uniform(5.0, 400.0)))
        for i in range(n_layers)
    )
    media = Material("inc", float(rng.uniform(1.0, 2.0))), Material("out", float(rng.uniform(1.0, 3.0)))
    return Stack(media[0], layers, media[1])


def _row_properties(ctx: ReferenceContext) -> RowResult:
    rng = np.random.default_rng(2024)
    wavelength = 940.0
    worst = {"det": 0.0, "energy": 0.0, "subdivision": 0.0, "halfwave": 0.0}
    for _ in range(40):
        stack = _random_lossless_stack(rng)
        m = tmm.stack_matrix(stack, wavelength)
        worst["det"] = max(worst["det"], abs(m.determinant - 1.0))
        resp = tmm.reflectance(stack, wavelength)
        worst["energy"] = max(worst["energy"], abs(resp.R + resp.T - 1.0))
        # split a random layer in two
        i = int(rng.integers(0, len(stack.layers)))
        frac = float(rng.uniform(0.2, 0.8))
        layer = stack.layers[i]
        split = (
            stack.layers[:i]
            + (Layer(layer.material, layer.thickness * frac),
               Layer(layer.material, layer.thickness * (1.0 - frac)))
            + stack.layers[i + 1:]
        )
        r_split = tmm.reflectance(Stack(stack.incident_medium, split, stack.exit_medium),
                                  wavelength).r
        worst["subdivision"] = max(worst["subdivision"], abs(r_split - resp.r))
        # insert a half-wave layer at a random position
        half_mat = Material("hw", float(rng.uniform(1.2, 3.5)))
        half_layer = Layer(half_mat, wavelength / (2.0 * half_mat.n))
        j = int(rng.integers(0, len(stack.layers) + 1))
        inserted = stack.layers[:j] + (half_layer,) + stack.layers[j:]
        r_ins = tmm.reflectance(Stack(stack.incident_medium, inserted, stack.exit_medium),
                                wavelength).r
        worst["halfwave"] = max(worst["halfwave"], abs(r_ins - resp.r))

    # parser: canonical example round-trips to a fixed point
    source = (
        "wavelength 940 nm\n"
        "material mytio n = 2.3\n"
        "stack from vacuum to silica {\n"
        "  repeat 2 { qw mytio qw sio2 }\n"
        "  layer elo 211.59 nm\n"
        "}\n"
    )
    first = stacklang.parse_stack(source)
    printed = stacklang.format_document(first.document)
    second = stacklang.parse_stack(printed)
    parser_ok = first.ok and second.ok and first.document == second.document

    bad_sources = [
        "material a n = 2.0\nstack from vacuum to silica { }",  # missing header
        "wavelength 940 nm\nstack from vacuum to silica { layer nosuch 10 nm }",
        "wavelength 940 nm\nstack from vacuum to silica { layer elo -5 nm }",
        "wavelength 940 nm\nstack from vacuum to silica { layer elo 10 nm",
    ]
    diagnostics_ok = all(not stacklang.parse_stack(s).ok for s in bad_sources)

    # analytic Jacobians vs central differences
    rng = np.random.default_rng(5)
    x = np.linspace(-300.0, 300.0, 41)
    worst_jac = 0.0
    for _ in range(100):
        p = np.array([rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0),
                      rng.uniform(40.0, 200.0), rng.uniform(40.0, 200.0),
                      rng.uniform(-150.0, 150.0), rng.uniform(0.0, 2.0)])
        analytic = fitting.purcell_map_jacobian(x, p)
        numeric = fitting._numeric_jacobian(lambda q: fitting.purcell_map_model(x, q), p)
        scale = np.maximum(np.abs(analytic), 1.0)
        worst_jac = max(worst_jac, float(np.max(np.abs(analytic - numeric) / scale)))

    tol = 1e-9
    props_ok = all(v <= tol for v in worst.values())
    ok = props_ok and parser_ok and diagnostics_ok and worst_jac <= 1e-6
    return RowResult(
        "properties", "matrix/energy/parser/Jacobian property suites",
        ok,
        f"worst dev {max(worst.values()):.1e}, jac {worst_jac:.1e}, "
        f"parser {'ok' if parser_ok and diagnostics_ok else 'FAIL'}",
        "<= 1e-9 matrices, <= 1e-6 jacobian, parser fixed point",
    )


def _row_strong_coupling(ctx: ReferenceContext) -> RowResult:
    hbar_gamma = ctx.coupling_report.hbar_gamma_uev
    coop = cqed.cooperativity(TARGET_HBAR_G_UEV, HBAR_KAPPA_UEV, hbar_gamma)
    strong, margin = cqed.strong_coupling_check(TARGET_HBAR_G_UEV, HBAR_KAPPA_UEV, hbar_gamma)
    ok = strong and _within_abs(margin, 7.8, 0.1) and _within_abs(coop, 8.4, 0.05)
    return RowResult(
        "strong-coupling", "cooperativity and polariton-splitting margin",
        ok,
        f"C={coop:.2f}, margin=+{margin:.2f} ueV",
        "C~8.4, margin ~+7.8 ueV",
        "margin is small: the system sits close to the strong-coupling "
        "threshold rather than safely past it",
    )


def _row_dbr_reflectivity(ctx: ReferenceContext) -> RowResult:
    mirror = build_dbr(DEFAULT_DBR_PAIRS)
    value = tmm.reflectance(mirror, ctx.wavelength).R
    return RowResult(
        "dbr-reflectivity", "terminated quarter-wave mirror reflectivity",
        value >= DESIGN_REFLECTIVITY,
        f"{value:.6f} with {DEFAULT_DBR_PAIRS} pairs",
        f">= {DESIGN_REFLECTIVITY}",
    )


ACCEPTANCE_ROWS = (
    _row_penetration_bonded,
    _row_penetration_gap22,
    _row_length_gap22,
    _row_length_bonded,
    _row_lambda_layer,
    _row_field_positions,
    _row_closed_forms,
    _row_cqed_chain,
    _row_lifetime_model,
    _row_fit_roundtrips,
    _row_fit_montecarlo,
    _row_polarization,
    _row_properties,
    _row_strong_coupling,
    _row_dbr_reflectivity,
)


def run_acceptance() -> list[RowResult]:
    """Evaluate every acceptance row; returns results in table order."""
    ctx = ReferenceContext()
    return [row(ctx) for row in ACCEPTANCE_ROWS]
