import io
import math

import numpy as np
import pytest

from fpcavity.fitting import (
    DecayHistogram,
    InstrumentResponse,
    Trace,
    _numeric_jacobian,
    decay_model,
    fit_decay,
    fit_lorentzian,
    fit_purcell_map,
    generate_synthetic,
    least_squares,
    lorentzian_jacobian,
    lorentzian_model,
    purcell_map_jacobian,
    purcell_map_model,
    read_histogram,
    read_trace,
)
from fpcavity.reporting import write_csv

REFERENCE_PURCELL = {
    "fp1": 1.27, "fp2": 0.79, "linewidth1": 121.83, "linewidth2": 106.93,
    "splitting": 100.14, "alpha": 1.12,
}
PURCELL_TRUTH = (1.27, 0.79, 121.83, 106.93, 100.14, 1.12)


class TestDataTypes:
    def test_trace_requires_increasing_x(self):
        with pytest.raises(ValueError):
            Trace(np.array([0.0, 1.0, 1.0]), np.zeros(3))
        with pytest.raises(ValueError):
            Trace(np.array([0.0, 1.0]), np.zeros(3))

    def test_histogram_validation(self):
        with pytest.raises(ValueError):
            DecayHistogram(np.array([0.0, 1.0, 2.0]), np.array([1.0, -1.0, 0.0]), 1.0)
        with pytest.raises(ValueError):
            DecayHistogram(np.array([0.0, 1.0, 3.0]), np.zeros(3), 1.0)

    def test_irf_kernel_normalized(self):
        kernel = InstrumentResponse.from_fwhm(340.0).sampled_kernel(48.8)
        assert kernel.sum() == pytest.approx(1.0, abs=1e-12)
        assert len(kernel) % 2 == 1
        with pytest.raises(ValueError):
            InstrumentResponse(kernel=np.array([0.5, 0.6]))
        with pytest.raises(ValueError):
            InstrumentResponse(gaussian_sigma_ps=100.0, kernel=np.array([1.0]))

    def test_gaussian_sigma_from_fwhm(self):
        irf = InstrumentResponse.from_fwhm(340.0)
        assert irf.gaussian_sigma_ps == pytest.approx(340.0 / 2.355, rel=1e-12)


class TestLeastSquaresCore:
    def test_linear_model_converges_immediately(self):
        x = np.linspace(0.0, 10.0, 30)
        y = 2.5 * x + 1.0
        residual = lambda p: (p[0] * x + p[1]) - y
        p, info = least_squares(residual, np.array([0.0, 0.0]))
        assert info["converged"]
        assert info["iterations"] <= 2
        assert p == pytest.approx([2.5, 1.0], rel=1e-9)

    def test_starting_at_optimum(self):
        x = np.linspace(0.0, 10.0, 30)
        y = 2.5 * x + 1.0
        residual = lambda p: (p[0] * x + p[1]) - y
        p, info = least_squares(residual, np.array([2.5, 1.0]))
        assert info["converged"]
        assert info["iterations"] == 0
        assert p == pytest.approx([2.5, 1.0], rel=1e-14)

    def test_rosenbrock_valley(self):
        residual = lambda p: np.array([10.0 * (p[1] - p[0] ** 2), 1.0 - p[0]])
        p, info = least_squares(residual, np.array([-1.2, 1.0]))
        assert info["converged"]
        assert p == pytest.approx([1.0, 1.0], abs=1e-6)

    def test_unrecoverable_model_flagged(self):
        residual = lambda p: np.array([math.nan, math.nan])
        _, info = least_squares(residual, np.array([1.0]))
        assert not info["converged"]


class TestLorentzianFit:
    def test_noiseless_round_trip(self):
        trace = generate_synthetic(
            "lorentzian",
            {"center": 3.0, "fwhm": 115.0, "amplitude": 1.0, "offset": 0.1,
             "x_from": -400.0, "x_to": 400.0},
            None, seed=0,
        )
        fit = fit_lorentzian(trace)
        assert fit.converged
        assert fit.value("center") == pytest.approx(3.0, abs=1e-6)
        assert fit.value("fwhm") == pytest.approx(115.0, rel=1e-6)
        assert fit.value("amplitude") == pytest.approx(1.0, rel=1e-6)
        assert fit.value("offset") == pytest.approx(0.1, rel=1e-6)

    def test_noisy_fwhm_stays_in_uncertainty_band(self):
        # ensemble of seeded 2%-noise fits against the quoted 115 +- 3 pm band
        values = []
        for seed in range(100):
            trace = generate_synthetic(
                "lorentzian",
                {"center": 0.0, "fwhm": 115.0, "amplitude": 1.0, "offset": 0.0,
                 "x_from": -400.0, "x_to": 400.0},
                {"sigma": 0.02}, seed=seed,
            )
            values.append(fit_lorentzian(trace).value("fwhm"))
        values = np.asarray(values)
        assert abs(values.mean() - 115.0) < 1.0  # unbiased estimator
        assert np.mean(np.abs(values - 115.0) < 3.0) >= 0.9

    def test_scan_finesse_matches_mirror_reflectivity(self, template_bonded):
        from fpcavity.cavity import finesse_from_scan
        from fpcavity.tmm import reflectance, transmission_vs_gap, tune_air_gap

        gap = tune_air_gap(template_bonded, 940.0, 235.0)
        gaps = np.linspace(gap - 0.6, gap + 0.6, 401)
        trans = transmission_vs_gap(template_bonded, 940.0, gaps)
        fit = fit_lorentzian(Trace(gaps, trans, x_unit="nm"))
        finesse = finesse_from_scan(940.0, abs(fit.value("fwhm")) * 1000.0)

        r_bottom = reflectance(template_bonded.bottom, 940.0).R
        r_top = reflectance(template_bonded.top_mirror_from_gap(), 940.0).R
        mean_r = math.sqrt(r_bottom * r_top)
        predicted = math.pi * mean_r**0.5 / (1.0 - mean_r)
        assert finesse == pytest.approx(predicted, rel=0.10)

    def test_flat_trace_does_not_converge(self):
        trace = Trace(np.linspace(0, 10, 20), np.full(20, 1.5))
        fit = fit_lorentzian(trace)
        assert not fit.converged
        assert any("flat" in w for w in fit.warnings)

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            fit_lorentzian(Trace(np.arange(5.0), np.arange(5.0)))

    def test_y_rescaling_invariance(self):
        trace = generate_synthetic(
            "lorentzian",
            {"center": 0.0, "fwhm": 115.0, "amplitude": 1.0, "offset": 0.2,
             "x_from": -400.0, "x_to": 400.0},
            {"sigma": 0.01}, seed=5,
        )
        scaled = Trace(trace.x, 7.0 * trace.y, y_sigma=7.0 * trace.y_sigma)
        fit = fit_lorentzian(trace)
        fit_scaled = fit_lorentzian(scaled)
        assert fit_scaled.value("center") == pytest.approx(fit.value("center"), abs=1e-8)
        assert fit_scaled.value("fwhm") == pytest.approx(fit.value("fwhm"), rel=1e-8)
        assert fit_scaled.value("amplitude") == pytest.approx(7 * fit.value("amplitude"), rel=1e-8)

    def test_x_translation_invariance(self):
        trace = generate_synthetic(
            "lorentzian",
            {"center": 0.0, "fwhm": 115.0, "amplitude": 1.0, "offset": 0.2,
             "x_from": -400.0, "x_to": 400.0},
            {"sigma": 0.01}, seed=6,
        )
        shifted = Trace(trace.x + 250.0, trace.y, y_sigma=trace.y_sigma)
        fit = fit_lorentzian(trace)
        fit_shifted = fit_lorentzian(shifted)
        assert fit_shifted.value("center") == pytest.approx(
            fit.value("center") + 250.0, abs=1e-7
        )
        assert fit_shifted.value("fwhm") == pytest.approx(fit.value("fwhm"), rel=1e-8)


class TestPurcellFit:
    def test_noiseless_round_trip(self):
        trace = generate_synthetic("purcell", REFERENCE_PURCELL, None, seed=0)
        fit = fit_purcell_map(trace)
        assert fit.converged
        for name, target in zip(fit.parameter_names, PURCELL_TRUTH):
            assert fit.value(name) == pytest.approx(target, rel=1e-6)

    def test_noisy_recovery_within_two_sigma(self):
        # the enhancement amplitudes and the leaky-mode floor are the solidly
        # determined parameters of the overlapped two-mode bump
        trace = generate_synthetic("purcell", REFERENCE_PURCELL, {"sigma_rel": 0.10}, seed=0)
        fit = fit_purcell_map(trace)
        for name, target in (("fp1", 1.27), ("fp2", 0.79), ("alpha", 1.12)):
            assert abs(fit.value(name) - target) <= 2.0 * fit.sigma(name)

    def test_constant_data_recovers_alpha_only(self):
        x = np.linspace(-300.0, 300.0, 41)
        y = np.full_like(x, 1.37)
        fit = fit_purcell_map(Trace(x, y))
        assert abs(fit.value("fp1")) < 1e-6
        assert abs(fit.value("fp2")) < 1e-6
        assert fit.value("alpha") == pytest.approx(1.37, rel=1e-9)
        assert any("singular" in w for w in fit.warnings)

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            fit_purcell_map(Trace(np.arange(8.0), np.ones(8)))


class TestDecayFit:
    def test_delta_irf_round_trip(self):
        hist = generate_synthetic(
            "decay", {"tau": 665.0, "amplitude": 300.0, "background": 1.0}, None, seed=0
        )
        fit = fit_decay(hist, InstrumentResponse.delta())
        assert fit.converged
        assert fit.value("tau") == pytest.approx(665.0, rel=1e-6)
        assert fit.value("amplitude") == pytest.approx(300.0, rel=1e-6)
        assert fit.value("background") == pytest.approx(1.0, rel=1e-4)

    def test_gaussian_irf_round_trip(self):
        hist = generate_synthetic(
            "decay",
            {"tau": 318.0, "amplitude": 500.0, "background": 2.0, "irf_fwhm": 340.0},
            None, seed=0,
        )
        fit = fit_decay(hist, InstrumentResponse.from_fwhm(340.0))
        assert fit.value("tau") == pytest.approx(318.0, rel=1e-6)

    def test_poisson_monte_carlo_within_quoted_band(self):
        # short-lifetime histograms with realistic统计 land inside +-70 ps
        for seed in range(20):
            hist = generate_synthetic(
                "decay",
                {"tau": 318.0, "amplitude": 15000.0, "background": 5.0,
                 "irf_fwhm": 340.0},
                {"poisson": True}, seed=seed,
            )
            fit = fit_decay(hist, InstrumentResponse.from_fwhm(340.0), weighted=True)
            assert abs(fit.value("tau") - 318.0) < 70.0

    def test_background_only_flagged(self):
        rng = np.random.default_rng(0)
        centers = np.arange(0.0, 12500.0, 48.828125) + 24.4140625
        counts = rng.poisson(20.0, size=len(centers)).astype(float)
        hist = DecayHistogram(centers, counts, 48.828125)
        fit = fit_decay(hist, InstrumentResponse.from_fwhm(340.0))
        assert abs(fit.value("amplitude")) < 3.0
        assert any("amplitude" in w for w in fit.warnings)

    def test_lifetime_below_bin_width_flagged(self):
        hist = generate_synthetic(
            "decay", {"tau": 10.0, "amplitude": 50000.0, "background": 1.0}, None, seed=0
        )
        fit = fit_decay(hist, InstrumentResponse.delta())
        assert not fit.converged
        assert any("bin width" in w for w in fit.warnings)

    def test_requires_counts(self):
        hist = DecayHistogram(np.arange(0.0, 100.0, 10.0), np.ones(10), 10.0)
        with pytest.raises(ValueError):
            fit_decay(hist, InstrumentResponse.delta())


class TestSyntheticGeneration:
    def test_deterministic_for_fixed_seed(self):
        a = generate_synthetic("purcell", REFERENCE_PURCELL, {"sigma_rel": 0.1}, seed=42)
        b = generate_synthetic("purcell", REFERENCE_PURCELL, {"sigma_rel": 0.1}, seed=42)
        assert np.array_equal(a.y, b.y)
        c = generate_synthetic("purcell", REFERENCE_PURCELL, {"sigma_rel": 0.1}, seed=43)
        assert not np.array_equal(a.y, c.y)

    def test_zero_noise_is_exact_model(self):
        trace = generate_synthetic("purcell", REFERENCE_PURCELL, None, seed=0)
        expected = purcell_map_model(trace.x, PURCELL_TRUTH)
        assert np.array_equal(trace.y, expected)

    def test_poisson_mean_matches_model(self):
        params = {"tau": 665.0, "amplitude": 73400.0, "background": 0.0}
        noiseless = generate_synthetic("decay", params, None, seed=0)
        noisy = generate_synthetic("decay", params, {"poisson": True}, seed=0)
        assert noiseless.total_counts > 0.9e6
        ratio = noisy.total_counts / noiseless.total_counts
        assert abs(ratio - 1.0) < 0.01

    def test_repetition_window_span(self):
        hist = generate_synthetic(
            "decay", {"tau": 665.0, "amplitude": 10.0, "background": 0.0}, None, seed=0
        )
        assert hist.bin_centers[-1] < 12500.0 <= hist.bin_centers[-1] + hist.bin_width

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            generate_synthetic("exotic", {}, None, seed=0)


class TestJacobians:
    def test_lorentzian_matches_finite_differences(self):
        rng = np.random.default_rng(17)
        x = np.linspace(-300.0, 300.0, 31)
        for _ in range(100):
            p = np.array([rng.uniform(-50, 50), rng.uniform(20, 200),
                          rng.uniform(0.1, 5.0), rng.uniform(-1, 1)])
            analytic = lorentzian_jacobian(x, p)
            numeric = _numeric_jacobian(lambda q: lorentzian_model(x, q), p)
            scale = np.maximum(np.abs(analytic), 1.0)
            assert np.max(np.abs(analytic - numeric) / scale) < 1e-6

    def test_purcell_matches_finite_differences(self):
        rng = np.random.default_rng(18)
        x = np.linspace(-300.0, 300.0, 31)
        for _ in range(100):
            p = np.array([rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0),
                          rng.uniform(40, 200), rng.uniform(40, 200),
                          rng.uniform(-150, 150), rng.uniform(0, 2)])
            analytic = purcell_map_jacobian(x, p)
            numeric = _numeric_jacobian(lambda q: purcell_map_model(x, q), p)
            scale = np.maximum(np.abs(analytic), 1.0)
            assert np.max(np.abs(analytic - numeric) / scale) < 1e-6


class TestCsvIngestion:
    def test_trace_round_trip(self):
        trace = generate_synthetic("purcell", REFERENCE_PURCELL, {"sigma_rel": 0.1}, seed=9)
        buffer = io.StringIO()
        write_csv(buffer, ["detuning_uev", "rate_ratio"], list(zip(trace.x, trace.y)),
                  comments=["synthetic decay-enhancement map"])
        loaded = read_trace(io.StringIO(buffer.getvalue()))
        assert loaded.x_unit == "uev"
        assert np.allclose(loaded.x, trace.x)
        assert np.allclose(loaded.y, trace.y)

    def test_histogram_round_trip(self):
        hist = generate_synthetic(
            "decay", {"tau": 400.0, "amplitude": 100.0, "background": 1.0},
            {"poisson": True}, seed=3,
        )
        buffer = io.StringIO()
        write_csv(buffer, ["time_ps", "counts"], list(zip(hist.bin_centers, hist.counts)))
        loaded = read_histogram(io.StringIO(buffer.getvalue()))
        assert loaded.bin_width == pytest.approx(hist.bin_width)
        assert np.array_equal(loaded.counts, hist.counts)

    def test_column_selection(self):
        buffer = io.StringIO("a_nm,b,c\n1,10,100\n2,20,200\n3,30,300\n")
        trace = read_trace(buffer, x_column="a_nm", y_column="c")
        assert list(trace.y) == [100.0, 200.0, 300.0]
        assert trace.x_unit == "nm"
