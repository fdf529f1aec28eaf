import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpcavity.fitting import Trace, fit_lorentzian
from fpcavity.materials import (
    DEFAULT_DBR_PAIRS,
    ELO,
    SILICA,
    SIO2,
    TA2O5,
    VACUUM,
    Layer,
    Material,
    Stack,
    build_bottom_mirror,
    build_dbr,
)
from fpcavity.tmm import (
    CavityTemplate,
    NotAMirrorError,
    ResonanceNotFound,
    effective_cavity_length,
    field_profile,
    layer_matrix,
    penetration_depth,
    reflectance,
    scan_air_gap,
    stack_matrix,
    transmission_vs_gap,
    tune_air_gap,
    vacuum_field,
)

GAAS = Material("gaas", 3.54)


def random_lossless_stack(rng, max_layers=12) -> Stack:
    n_layers = int(rng.integers(1, max_layers))
    layers = tuple(
        Layer(Material(f"m{i}", float(rng.uniform(1.1, 4.0))),
              float(rng.uniform(5.0, 400.0)))
        for i in range(n_layers)
    )
    return Stack(
        Material("inc", float(rng.uniform(1.0, 2.0))),
        layers,
        Material("out", float(rng.uniform(1.0, 3.0))),
    )


class TestLayerMatrix:
    def test_vanishing_thickness_gives_identity(self):
        m = layer_matrix(Layer(TA2O5, 1e-9), 940.0)
        assert m.m11 == pytest.approx(1.0, abs=1e-9)
        assert abs(m.m12) < 1e-9 and abs(m.m21) < 1e-9

    def test_quarter_wave(self):
        layer = Layer(TA2O5, 940.0 / (4 * 2.06))
        m = layer_matrix(layer, 940.0)
        assert abs(m.m11) < 1e-15 and abs(m.m22) < 1e-15
        assert abs(m.m12 * m.m21) == pytest.approx(1.0, rel=1e-12)

    def test_half_wave_is_minus_identity(self):
        layer = Layer(TA2O5, 940.0 / (2 * 2.06))
        m = layer_matrix(layer, 940.0)
        assert m.m11 == pytest.approx(-1.0, rel=1e-12)
        assert m.m22 == pytest.approx(-1.0, rel=1e-12)
        assert abs(m.m12) < 1e-12 and abs(m.m21) < 1e-12

    @given(n=st.floats(1.0, 4.0), d=st.floats(1.0, 500.0))
    def test_determinant_one(self, n, d):
        m = layer_matrix(Layer(Material("x", n), d), 940.0)
        assert abs(m.determinant - 1.0) < 1e-12

    def test_rejects_bad_wavelength(self):
        with pytest.raises(ValueError):
            layer_matrix(Layer(TA2O5, 10.0), 0.0)


class TestStackMatrix:
    def test_empty_stack_identity(self):
        stack = Stack(VACUUM, (), SILICA)
        m = stack_matrix(stack, 940.0)
        assert m.m11 == 1.0 and m.m22 == 1.0 and m.m12 == 0.0 and m.m21 == 0.0

    def test_single_layer_equals_layer_matrix(self):
        layer = Layer(ELO, 123.0)
        assert stack_matrix(Stack(VACUUM, (layer,), SILICA), 940.0) == layer_matrix(layer, 940.0)

    def test_determinant_random_stacks(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            stack = random_lossless_stack(rng)
            m = stack_matrix(stack, 940.0)
            assert abs(m.determinant - 1.0) < 1e-10


class TestReflectance:
    def test_bare_gaas_interface_fresnel_oracle(self):
        # Fresnel by hand: r = (1 - 3.54) / (1 + 3.54)
        r_oracle = (1.0 - 3.54) / (1.0 + 3.54)
        resp = reflectance(Stack(VACUUM, (), GAAS), 940.0)
        assert resp.r == pytest.approx(r_oracle, rel=1e-12)
        assert resp.R == pytest.approx(r_oracle**2, rel=1e-12)
        assert resp.r.real == pytest.approx(-0.5595, abs=5e-5)

    def test_equal_media_empty_stack(self):
        resp = reflectance(Stack(VACUUM, (), Material("vac2", 1.0)), 940.0)
        assert resp.r == 0
        assert resp.T == pytest.approx(1.0, rel=1e-12)

    def test_design_mirror_reflectivity(self):
        assert reflectance(build_dbr(DEFAULT_DBR_PAIRS), 940.0).R >= 0.9998

    def test_energy_conservation_random_lossless(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            stack = random_lossless_stack(rng)
            resp = reflectance(stack, 940.0)
            assert abs(resp.R + resp.T - 1.0) < 1e-10
            assert resp.R <= 1.0 + 1e-12

    def test_absorbing_layer_dissipates(self):
        lossy = Material("lossy", complex(3.0, 0.05))
        resp = reflectance(Stack(VACUUM, (Layer(lossy, 500.0),), SILICA), 940.0)
        assert resp.R + resp.T < 1.0
        assert resp.R < 1.0 and resp.T > 0.0

    def test_subdivision_invariance(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            stack = random_lossless_stack(rng)
            r_ref = reflectance(stack, 940.0).r
            i = int(rng.integers(0, len(stack.layers)))
            frac = float(rng.uniform(0.1, 0.9))
            layer = stack.layers[i]
            split = (
                stack.layers[:i]
                + (Layer(layer.material, layer.thickness * frac),
                   Layer(layer.material, layer.thickness * (1 - frac)))
                + stack.layers[i + 1:]
            )
            r_split = reflectance(
                Stack(stack.incident_medium, split, stack.exit_medium), 940.0
            ).r
            assert abs(r_split - r_ref) < 1e-10

    def test_half_wave_insertion_invariance(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            stack = random_lossless_stack(rng)
            r_ref = reflectance(stack, 940.0).r
            mat = Material("hw", float(rng.uniform(1.2, 3.5)))
            half = Layer(mat, 940.0 / (2 * mat.n))
            j = int(rng.integers(0, len(stack.layers) + 1))
            inserted = stack.layers[:j] + (half,) + stack.layers[j:]
            r_ins = reflectance(
                Stack(stack.incident_medium, inserted, stack.exit_medium), 940.0
            ).r
            assert abs(r_ins - r_ref) < 1e-9

    def test_anti_reflection_condition(self):
        # n_Ta2O5^2 is close to n_ELO * n_SiO2: the quarter-wave interlayer
        # suppresses the epilayer/silica reflection
        triple = Stack(ELO, (Layer(TA2O5, 940.0 / (4 * 2.06)),), SIO2)
        double = Stack(ELO, (), SIO2)
        assert reflectance(triple, 940.0).R < reflectance(double, 940.0).R


class TestFieldProfile:
    def test_node_at_bond_interface(self, bottom_bonded):
        profile = field_profile(bottom_bonded, 940.0, 1.0)
        bond = bottom_bonded.mark("bond_interface")
        assert min(abs(z - bond) for z in profile.node_positions) <= 2.0

    def test_antinode_at_emitter_plane(self, bottom_bonded):
        profile = field_profile(bottom_bonded, 940.0, 1.0)
        qd = bottom_bonded.mark("qd_plane")
        assert min(abs(z - qd) for z in profile.antinode_positions) <= 5.0

    def test_uniform_medium_constant_magnitude(self):
        stack = Stack(VACUUM, (Layer(Material("vac2", 1.0), 500.0),), Material("vac3", 1.0))
        profile = field_profile(stack, 940.0, 1.0)
        assert np.ptp(np.abs(profile.amplitude)) < 1e-9

    def test_magnitude_continuous_across_boundaries(self, bottom_bonded):
        profile = field_profile(bottom_bonded, 940.0, 0.5)
        mag = profile.magnitude
        jumps = np.abs(np.diff(mag))
        assert np.max(jumps) < 0.05 * np.max(mag)

    def test_grid_step_exceeding_thinnest_layer(self, bottom_gap22):
        with pytest.raises(ValueError):
            field_profile(bottom_gap22, 940.0, 25.0)  # 22 nm gap is thinner

    def test_nonpositive_grid_step(self, bottom_bonded):
        with pytest.raises(ValueError):
            field_profile(bottom_bonded, 940.0, 0.0)


class TestPenetrationDepth:
    def test_bonded_mirror(self, bottom_bonded):
        assert penetration_depth(bottom_bonded, 940.0) == pytest.approx(6.70, rel=0.05)

    def test_gap22_mirror(self, bottom_gap22):
        assert penetration_depth(bottom_gap22, 940.0) == pytest.approx(2.06, rel=0.05)

    def test_lambda_layer_mirror(self):
        mirror = build_bottom_mirror(0.0, elo_quarter_waves=4, sio2_terminated=True)
        assert penetration_depth(mirror, 940.0) == pytest.approx(4.30, rel=0.05)

    def test_displaced_hard_mirror_equals_gap(self):
        # a vacuum standoff in front of a near-perfect mirror adds exactly
        # its own length to the penetration depth
        big = Material("big", 5000.0)
        bare = Stack(VACUUM, (), big)
        standoff = Stack(VACUUM, (Layer(VACUUM, 1500.0),), big)
        base = penetration_depth(bare, 940.0)
        assert penetration_depth(standoff, 940.0) - base == pytest.approx(1.5, rel=1e-4)

    def test_non_mirror_rejected(self):
        with pytest.raises(NotAMirrorError):
            penetration_depth(Stack(VACUUM, (), SILICA), 940.0)


class TestGapScan:
    def test_adjacent_resonances_half_wave_apart(self, template_bonded):
        scan = scan_air_gap(template_bonded, 940.0, 30.0, 900.0, 0.5)
        assert len(scan.resonance_gaps_nm) >= 2
        spacing = scan.resonance_gaps_nm[1] - scan.resonance_gaps_nm[0]
        assert spacing == pytest.approx(470.0, rel=0.01)

    def test_scan_order_independence(self, template_bonded):
        gaps = np.arange(200.0, 300.0, 0.5)
        forward = transmission_vs_gap(template_bonded, 940.0, gaps)
        backward = transmission_vs_gap(template_bonded, 940.0, gaps[::-1])[::-1]
        assert np.array_equal(forward, backward)

    def test_resonance_lineshape_is_lorentzian(self, template_bonded):
        gap = tune_air_gap(template_bonded, 940.0, 235.0)
        span = 0.6
        gaps = np.linspace(gap - span, gap + span, 401)
        trans = transmission_vs_gap(template_bonded, 940.0, gaps)
        fit = fit_lorentzian(Trace(gaps, trans, x_unit="nm"))
        assert fit.converged
        peak = float(np.max(trans))
        assert fit.residual_norm < 0.01 * peak

    def test_empty_range_rejected(self, template_bonded):
        with pytest.raises(ValueError):
            scan_air_gap(template_bonded, 940.0, 500.0, 100.0, 1.0)
        with pytest.raises(ValueError):
            scan_air_gap(template_bonded, 940.0, 100.0, 500.0, 0.0)

    def test_half_wave_gap_shift(self, template_bonded):
        low = scan_air_gap(template_bonded, 940.0, 100.0, 400.0, 0.5)
        high = scan_air_gap(template_bonded, 940.0, 570.0, 870.0, 0.5)
        assert low.resonance_gaps_nm and high.resonance_gaps_nm
        assert high.resonance_gaps_nm[0] - low.resonance_gaps_nm[0] == pytest.approx(
            470.0, abs=0.5
        )


def ideal_cavity_template(length_medium_index=2000.0):
    mirror = Material("hard", length_medium_index)
    bottom = Stack(VACUUM, (), mirror)
    return CavityTemplate(bottom=bottom, top_layers=(), incident_medium=mirror)


class TestEffectiveLength:
    def test_ideal_cavity_slope_method(self):
        # resonances of the hard-mirror cavity sit at multiples of lambda/2
        template = ideal_cavity_template()
        gap = tune_air_gap(template, 940.0, 4700.0, half_window_nm=40.0)
        l_eff = effective_cavity_length(template, gap, 940.0, method="slope")
        assert l_eff == pytest.approx(gap / 1000.0, rel=1e-3)

    def test_ideal_cavity_fsr_method(self):
        template = ideal_cavity_template()
        gap = tune_air_gap(template, 940.0, 4700.0, half_window_nm=40.0)
        l_eff = effective_cavity_length(template, gap, 940.0, method="fsr")
        assert l_eff == pytest.approx(gap / 1000.0, rel=1e-3)

    def test_bonded_design_minimal_length(self, template_bonded):
        gap = tune_air_gap(template_bonded, 940.0, 235.0)
        l_eff = effective_cavity_length(template_bonded, gap, 940.0)
        assert l_eff == pytest.approx(7.32, rel=0.05)

    def test_gap22_cavity_length(self, template_gap22):
        gap = tune_air_gap(template_gap22, 940.0, 551.0)
        l_eff = effective_cavity_length(template_gap22, gap, 940.0)
        assert l_eff == pytest.approx(3.00, rel=0.05)

    def test_fsr_method_requires_bracketing_resonances(self, template_bonded):
        # only one longitudinal order exists inside the mirror stopband
        gap = tune_air_gap(template_bonded, 940.0, 235.0)
        with pytest.raises(ResonanceNotFound):
            effective_cavity_length(template_bonded, gap, 940.0, method="fsr")

    def test_unknown_method(self, template_bonded):
        with pytest.raises(ValueError):
            effective_cavity_length(template_bonded, 235.0, 940.0, method="guess")


@pytest.fixture(scope="module")
def tuned_cavity(template_gap22):
    gap = tune_air_gap(template_gap22, 940.0, 551.0)
    return template_gap22.with_gap(gap)


class TestVacuumField:
    def test_normalization_integral(self, tuned_cavity):
        from fpcavity.constants import EPSILON_0, HBAR, angular_frequency

        profile = vacuum_field(tuned_cavity, 940.0, 2.5)
        density = (
            EPSILON_0
            * profile.field.index_profile**2
            * np.abs(profile.field.amplitude) ** 2
            * 2.5e-12
        )
        integral = np.trapezoid(density, profile.z_nm * 1e-9)
        target = HBAR * angular_frequency(940.0) / 2.0
        assert integral == pytest.approx(target, rel=1e-6)
        assert profile.total_energy_j == pytest.approx(target, rel=1e-12)

    def test_area_scaling(self, tuned_cavity):
        qd = tuned_cavity.mark("qd_plane")
        e1 = vacuum_field(tuned_cavity, 940.0, 2.0).e_vac_at(qd)
        e2 = vacuum_field(tuned_cavity, 940.0, 4.0).e_vac_at(qd)
        assert e2 == pytest.approx(e1 / math.sqrt(2.0), rel=1e-9)

    def test_node_positions_unchanged_by_normalization(self, tuned_cavity):
        raw = field_profile(tuned_cavity, 940.0, 0.25)
        scaled = vacuum_field(tuned_cavity, 940.0, 2.0)
        assert raw.node_positions == scaled.field.node_positions

    def test_mode_area_must_be_positive(self, tuned_cavity):
        with pytest.raises(ValueError):
            vacuum_field(tuned_cavity, 940.0, 0.0)
