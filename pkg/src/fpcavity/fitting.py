"""Nonlinear least-squares estimation for the three measurement families.

Families: Lorentzian resonance scans, the two-mode decay-enhancement map,
and exponential decays convolved with an instrument response. A compact
Levenberg-Marquardt driver backs all of them; analytic Jacobians are wired
in where they are cheap (Lorentzian, decay map) and finite differences cover
the rest.

Fitting is single-threaded per call and reentrant. Monte-Carlo repetitions
use independent seeded generators, so results are reproducible regardless of
how repetitions are scheduled.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cqed import PurcellModel, relative_decay_rate

_TINY = 1e-300


@dataclass(frozen=True)
class Trace:
    """Ordered (x, y) samples with an optional per-point uncertainty."""

    x: np.ndarray
    y: np.ndarray
    y_sigma: np.ndarray | None = None
    x_unit: str = ""

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.shape != y.shape:
            raise ValueError("x and y must have equal length")
        if np.any(np.diff(x) <= 0):
            raise ValueError("x must be strictly increasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if self.y_sigma is not None:
            s = np.asarray(self.y_sigma, dtype=float)
            if s.shape != x.shape:
                raise ValueError("y_sigma must match x in length")
            object.__setattr__(self, "y_sigma", s)

    def __len__(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class DecayHistogram:
    """Uniformly binned photon-arrival counts."""

    bin_centers: np.ndarray
    counts: np.ndarray
    bin_width: float

    def __post_init__(self):
        t = np.asarray(self.bin_centers, dtype=float)
        c = np.asarray(self.counts, dtype=float)
        if t.shape != c.shape:
            raise ValueError("bin_centers and counts must have equal length")
        if np.any(c < 0):
            raise ValueError("counts must be non-negative")
        steps = np.diff(t)
        if len(steps) and not np.allclose(steps, self.bin_width, rtol=1e-9, atol=1e-9):
            raise ValueError("bins must be uniform with the stated width")
        object.__setattr__(self, "bin_centers", t)
        object.__setattr__(self, "counts", c)

    @property
    def total_counts(self) -> float:
        return float(np.sum(self.counts))


@dataclass(frozen=True)
class InstrumentResponse:
    """Timing response: a Gaussian of given sigma, or an explicit kernel.

    An explicit kernel must be sampled on the histogram's bin grid and is
    renormalized to unit area (required within 1e-9 of unity to begin with).
    """

    gaussian_sigma_ps: float | None = None
    kernel: np.ndarray | None = None

    def __post_init__(self):
        if (self.gaussian_sigma_ps is None) == (self.kernel is None):
            raise ValueError("provide exactly one of gaussian_sigma_ps or kernel")
        if self.kernel is not None:
            k = np.asarray(self.kernel, dtype=float)
            if abs(k.sum() - 1.0) > 1e-9:
                raise ValueError("explicit kernel must be normalized to unit area")
            object.__setattr__(self, "kernel", k)

    @classmethod
    def from_fwhm(cls, fwhm_ps: float) -> "InstrumentResponse":
        return cls(gaussian_sigma_ps=fwhm_ps / 2.355)

    @classmethod
    def delta(cls) -> "InstrumentResponse":
        return cls(kernel=np.array([1.0]))

    def sampled_kernel(self, bin_width_ps: float) -> np.ndarray:
        """Odd-length normalized kernel on the histogram grid."""
        if self.kernel is not None:
            k = self.kernel
            if len(k) % 2 == 0:
                k = np.append(k, 0.0)
            return k / k.sum()
        sigma = self.gaussian_sigma_ps
        half = max(1, int(math.ceil(5.0 * sigma / bin_width_ps)))
        offsets = np.arange(-half, half + 1) * bin_width_ps
        k = np.exp(-0.5 * (offsets / sigma) ** 2)
        return k / k.sum()


@dataclass(frozen=True)
class FitResult:
    """Parameter estimates with one-sigma uncertainties from the Jacobian."""

    parameter_names: tuple[str, ...]
    values: np.ndarray
    uncertainties: np.ndarray
    residual_norm: float
    converged: bool
    iterations: int
    warnings: tuple[str, ...] = ()

    def param(self, name: str) -> tuple[float, float]:
        i = self.parameter_names.index(name)
        return float(self.values[i]), float(self.uncertainties[i])

    def value(self, name: str) -> float:
        return self.param(name)[0]

    def sigma(self, name: str) -> float:
        return self.param(name)[1]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.parameter_names, map(float, self.values)))


# ---------------------------------------------------------------------------
# Levenberg-Marquardt core
# ---------------------------------------------------------------------------

def _numeric_jacobian(residual_fn, p: np.ndarray, step_scale: float = 1e-6) -> np.ndarray:
    m = len(residual_fn(p))
    jac = np.empty((m, len(p)))
    for j in range(len(p)):
        h = step_scale * max(abs(p[j]), 1.0)
        pp = p.copy()
        pm = p.copy()
        pp[j] += h
        pm[j] -= h
        jac[:, j] = (residual_fn(pp) - residual_fn(pm)) / (2.0 * h)
    return jac


def least_squares(
    residual_fn,
    p0,
    jacobian_fn=None,
    max_iter: int = 200,
    ftol: float = 1e-10,
    xtol: float = 1e-12,
    lambda0: float = 0.0,
) -> tuple[np.ndarray, dict]:
    """Damped Gauss-Newton minimization of 0.5 * sum(residuals^2).

    Terminates when the relative cost change drops below ``ftol``, the step
    norm below ``xtol`` (relative to the parameter norm), or after
    ``max_iter`` accepted iterations. Singular normal equations trigger
    damped retries; persistent failure is reported, not raised.

    Returns the solution and an info dict with cost, iterations (accepted
    steps that moved), convergence flag and a message.
    """
    p = np.asarray(p0, dtype=float).copy()
    r = np.asarray(residual_fn(p), dtype=float)
    cost = 0.5 * float(r @ r)
    lam = lambda0
    moved = 0
    converged = False
    message = "max iterations reached"

    for _ in range(max_iter):
        jac = jacobian_fn(p) if jacobian_fn is not None else _numeric_jacobian(residual_fn, p)
        grad = jac.T @ r
        hess = jac.T @ jac
        diag = np.maximum(np.diag(hess), 1e-30)

        accepted = False
        for _attempt in range(15):
            try:
                step = np.linalg.solve(hess + lam * np.diag(diag), -grad)
            except np.linalg.LinAlgError:
                lam = max(10.0 * lam, 1e-7)
                continue
            if not np.all(np.isfinite(step)):
                lam = max(10.0 * lam, 1e-7)
                continue
            p_new = p + step
            r_new = np.asarray(residual_fn(p_new), dtype=float)
            cost_new = 0.5 * float(r_new @ r_new)
            if math.isfinite(cost_new) and cost_new <= cost:
                accepted = True
                break
            lam = max(10.0 * lam, 1e-7)
        if not accepted:
            message = "no acceptable step (singular or stalled normal equations)"
            break

        drop = cost - cost_new
        rel_drop = drop / max(cost, _TINY)
        step_norm = float(np.linalg.norm(step))
        if drop > 0:
            moved += 1
        p, r, cost = p_new, r_new, cost_new
        lam /= 3.0
        if lam < 1e-14:
            lam = 0.0
        if rel_drop < ftol:
            converged = True
            message = "relative cost change below ftol"
            break
        if step_norm < xtol * (float(np.linalg.norm(p)) + xtol):
            converged = True
            message = "step norm below xtol"
            break

    return p, {
        "cost": cost,
        "residuals": r,
        "iterations": moved,
        "converged": converged,
        "message": message,
    }


def _finish_fit(
    names: tuple[str, ...],
    p: np.ndarray,
    info: dict,
    residual_fn,
    jacobian_fn=None,
    weighted: bool = False,
    extra_warnings: tuple[str, ...] = (),
) -> FitResult:
    """Covariance from the residual Jacobian at the solution."""
    jac = jacobian_fn(p) if jacobian_fn is not None else _numeric_jacobian(residual_fn, p)
    r = info["residuals"]
    m, n = jac.shape
    hess = jac.T @ jac
    warnings = list(extra_warnings)
    if not info["converged"]:
        warnings.append(f"fit did not converge: {info['message']}")
    try:
        cov = np.linalg.inv(hess)
        if np.linalg.cond(hess) > 1e12:
            warnings.append("near-singular covariance")
    except np.linalg.LinAlgError:
        cov = np.linalg.pinv(hess)
        warnings.append("near-singular covariance")
    if not weighted:
        dof = max(m - n, 1)
        cov = cov * (float(r @ r) / dof)
    sigmas = np.sqrt(np.maximum(np.diag(cov), 0.0))
    return FitResult(
        parameter_names=names,
        values=p,
        uncertainties=sigmas,
        residual_norm=float(np.linalg.norm(r)),
        converged=info["converged"],
        iterations=info["iterations"],
        warnings=tuple(warnings),
    )


def _make_residual(model_fn, x, y, sigma):
    if sigma is None:
        return lambda p: model_fn(x, p) - y
    return lambda p: (model_fn(x, p) - y) / sigma


# ---------------------------------------------------------------------------
# Lorentzian resonance scans
# ---------------------------------------------------------------------------

LORENTZIAN_PARAMS = ("center", "fwhm", "amplitude", "offset")


def lorentzian_model(x, p):
    center, fwhm, amplitude, offset = p
    half = fwhm / 2.0
    return offset + amplitude * half**2 / ((np.asarray(x) - center) ** 2 + half**2)


def lorentzian_jacobian(x, p):
    center, fwhm, amplitude, _offset = p
    x = np.asarray(x, dtype=float)
    half = fwhm / 2.0
    u = x - center
    denom = u**2 + half**2
    jac = np.empty((len(x), 4))
    jac[:, 0] = amplitude * half**2 * 2.0 * u / denom**2
    jac[:, 1] = amplitude * half * u**2 / denom**2
    jac[:, 2] = half**2 / denom
    jac[:, 3] = 1.0
    return jac


def _lorentzian_init(x, y):
    i_max = int(np.argmax(y))
    offset = float(np.min(y))
    amplitude = float(y[i_max] - offset)
    half_level = offset + amplitude / 2.0
    left = x[0]
    for i in range(i_max, 0, -1):
        if y[i - 1] < half_level <= y[i]:
            left = np.interp(half_level, [y[i - 1], y[i]], [x[i - 1], x[i]])
            break
    right = x[-1]
    for i in range(i_max, len(x) - 1):
        if y[i + 1] < half_level <= y[i]:
            right = np.interp(half_level, [y[i + 1], y[i]], [x[i + 1], x[i]])
            break
    fwhm = max(right - left, (x[-1] - x[0]) / len(x))
    return np.array([x[i_max], fwhm, amplitude, offset])


def fit_lorentzian(trace: Trace) -> FitResult:
    """Least-squares Lorentzian: center, FWHM, amplitude, offset.

    Initialized from the peak position and the half-maximum crossings. A
    flat trace has no peak to fit and is reported as non-converged.
    """
    if len(trace) < 8:
        raise ValueError("need at least 8 points spanning the peak")
    x, y, sigma = trace.x, trace.y, trace.y_sigma
    p0 = _lorentzian_init(x, y)
    if np.ptp(y) == 0:
        return FitResult(
            LORENTZIAN_PARAMS,
            p0,
            np.full(4, np.nan),
            float(np.linalg.norm(y - np.mean(y))),
            converged=False,
            iterations=0,
            warnings=("flat trace: no peak above offset",),
        )
    residual = _make_residual(lorentzian_model, x, y, sigma)
    scale = sigma if sigma is not None else 1.0
    jac_fn = lambda p: lorentzian_jacobian(x, p) / (np.asarray(scale).reshape(-1, 1)
                                                    if sigma is not None else 1.0)
    p, info = least_squares(residual, p0, jac_fn)
    p[1] = abs(p[1])  # model is even in the width
    return _finish_fit(LORENTZIAN_PARAMS, p, info, residual, jac_fn,
                       weighted=sigma is not None)


# ---------------------------------------------------------------------------
# Two-mode decay-enhancement map
# ---------------------------------------------------------------------------

PURCELL_PARAMS = ("fp1", "fp2", "linewidth1", "linewidth2", "splitting", "alpha")


def purcell_map_model(x, p):
    fp1, fp2, w1, w2, splitting, alpha = p
    x = np.asarray(x, dtype=float)
    d2 = x + splitting
    return fp1 * w1**2 / (4.0 * x**2 + w1**2) + fp2 * w2**2 / (4.0 * d2**2 + w2**2) + alpha


def purcell_map_jacobian(x, p):
    fp1, fp2, w1, w2, splitting, _alpha = p
    x = np.asarray(x, dtype=float)
    d2 = x + splitting
    den1 = 4.0 * x**2 + w1**2
    den2 = 4.0 * d2**2 + w2**2
    jac = np.empty((len(x), 6))
    jac[:, 0] = w1**2 / den1
    jac[:, 1] = w2**2 / den2
    jac[:, 2] = 8.0 * fp1 * w1 * x**2 / den1**2
    jac[:, 3] = 8.0 * fp2 * w2 * d2**2 / den2**2
    jac[:, 4] = -8.0 * fp2 * w2**2 * d2 / den2**2
    jac[:, 5] = 1.0
    return jac


def _purcell_inits(x, y):
    """Candidate starting points for the two-mode map.

    The two largest maxima of the lightly smoothed map seed the first
    candidate; because the modes usually overlap into one broad bump, a few
    splitting hypotheses around the bump position are tried as well.
    """
    if len(y) >= 9:
        smooth = np.convolve(y, np.ones(5) / 5.0, mode="same")
        smooth[:2], smooth[-2:] = y[:2], y[-2:]
    else:
        smooth = y
    alpha0 = float(np.min(smooth))
    span = x[-1] - x[0]
    w0 = max(span / 6.0, 30.0)
    peaks = [i for i in range(1, len(smooth) - 1)
             if smooth[i] > smooth[i - 1] and smooth[i] >= smooth[i + 1]]
    peaks.sort(key=lambda i: -smooth[i])
    height = max(float(np.max(smooth)) - alpha0, 0.05)
    x_top = float(x[peaks[0]]) if peaks else float(x[np.argmax(smooth)])

    candidates = []
    if len(peaks) >= 2 and abs(x[peaks[0]] - x[peaks[1]]) > w0 / 2:
        a, b = sorted(peaks[:2], key=lambda i: abs(x[i]))
        candidates.append(np.array([
            max(smooth[a] - alpha0, 0.05), max(smooth[b] - alpha0, 0.05),
            w0, w0, -float(x[b]) if x[b] != 0 else w0, alpha0,
        ]))
    # blended-bump hypotheses: bump midway between the modes, plus coarse scales
    for splitting0 in (-2.0 * x_top, span / 6.0, span / 3.0):
        if abs(splitting0) < 1e-9:
            splitting0 = span / 6.0
        candidates.append(np.array([
            0.7 * height, 0.7 * height, w0, w0, splitting0, alpha0,
        ]))
    return candidates


def fit_purcell_map(trace: Trace) -> FitResult:
    """Fit the two-mode decay-enhancement model to gamma_cav/gamma_free data.

    The abscissa is the detuning from the first mode; the second mode sits
    at -splitting on that axis. Overlapping modes make the cost surface
    multimodal, so a handful of starting points are tried and the best final
    cost wins. Degenerate (single-mode) data shows up as a near-singular
    covariance warning.
    """
    if len(trace) < 12:
        raise ValueError("need at least 12 points covering both modes")
    x, y, sigma = trace.x, trace.y, trace.y_sigma
    residual = _make_residual(purcell_map_model, x, y, sigma)
    jac_fn = lambda p: purcell_map_jacobian(x, p) / (np.asarray(sigma).reshape(-1, 1)
                                                     if sigma is not None else 1.0)
    best = None
    for p0 in _purcell_inits(x, y):
        p, info = least_squares(residual, p0, jac_fn)
        if best is None or info["cost"] < best[1]["cost"]:
            best = (p, info)
    p, info = best
    p[2] = abs(p[2])
    p[3] = abs(p[3])
    return _finish_fit(PURCELL_PARAMS, p, info, residual, jac_fn,
                       weighted=sigma is not None)


def purcell_trace_from_model(model: PurcellModel, detunings_uev) -> Trace:
    """Noiseless gamma_cav/gamma_free trace of a PurcellModel."""
    d = np.asarray(detunings_uev, dtype=float)
    return Trace(d, relative_decay_rate(d, model), x_unit="ueV")


# ---------------------------------------------------------------------------
# Lifetime decays with instrument response
# ---------------------------------------------------------------------------

DECAY_PARAMS = ("tau", "amplitude", "background")


def decay_model(t, p, t0_ps: float, kernel: np.ndarray):
    """counts(t) = A * (exp(-(t-t0)/tau) Theta(t-t0)) conv IRF + background."""
    tau, amplitude, background = p
    t = np.asarray(t, dtype=float)
    decay = np.where(t >= t0_ps, np.exp(-np.clip(t - t0_ps, 0.0, None) / max(tau, 1e-9)), 0.0)
    return amplitude * np.convolve(decay, kernel, mode="same") + background


def _decay_model_log_tau(t, q, t0_ps: float, kernel: np.ndarray):
    # internal parameterization: q = (log tau, amplitude, background); the
    # log keeps the lifetime positive and the cost surface smooth near zero
    return decay_model(t, (math.exp(q[0]), q[1], q[2]), t0_ps, kernel)


def _decay_init(t, y, t0_ps, kernel, bin_width):
    background = float(np.median(y[: max(3, len(y) // 20)])) if t[0] < t0_ps else float(np.min(y))
    i_peak = int(np.argmax(y))
    # log-linear regression on the statistically solid part of the tail
    floor = max(3.0, 0.02 * (float(np.max(y)) - background))
    tail = (np.arange(len(t)) > i_peak + len(kernel) // 2) & (y - background > floor)
    if np.count_nonzero(tail) >= 3:
        excess = y[tail] - background
        coeffs = np.polyfit(t[tail], np.log(excess), 1, w=np.sqrt(excess))
        tau0 = -1.0 / coeffs[0] if coeffs[0] < 0 else (t[-1] - t[0]) / 4.0
    else:
        tau0 = (t[-1] - t[0]) / 4.0
    tau0 = min(max(tau0, bin_width), 10.0 * (t[-1] - t[0]))
    probe = decay_model(t, (tau0, 1.0, 0.0), t0_ps, kernel)
    peak = float(np.max(probe))
    amplitude0 = (float(np.max(y)) - background) / peak if peak > 0 else 1.0
    return np.array([tau0, amplitude0, background])


def fit_decay(
    histogram: DecayHistogram,
    irf: InstrumentResponse,
    t0_ps: float = 2000.0,
    weighted: bool = False,
) -> FitResult:
    """Single-exponential fit of a decay histogram, IRF folded in forward.

    ``t0_ps`` is the excitation-pulse arrival time on the histogram axis.
    Unweighted least squares by default; ``weighted`` applies Poisson
    sigma = sqrt(max(counts, 1)).
    """
    if histogram.total_counts < 1000:
        raise ValueError("need at least 1000 total counts for a meaningful fit")
    t, y = histogram.bin_centers, histogram.counts
    kernel = irf.sampled_kernel(histogram.bin_width)
    sigma = np.sqrt(np.maximum(y, 1.0)) if weighted else None
    model = lambda x, q: _decay_model_log_tau(x, q, t0_ps, kernel)
    residual = _make_residual(model, t, y, sigma)
    p0 = _decay_init(t, y, t0_ps, kernel, histogram.bin_width)
    q0 = np.array([math.log(p0[0]), p0[1], p0[2]])
    q, info = least_squares(residual, q0)
    result = _finish_fit(DECAY_PARAMS, q, info, residual, weighted=weighted)
    # map (log tau, A, bg) back to (tau, A, bg); sigma_tau = tau * sigma_logtau
    tau = math.exp(q[0])
    values = np.array([tau, q[1], q[2]])
    sigmas = result.uncertainties.copy()
    sigmas[0] = tau * sigmas[0]
    converged = result.converged
    warnings = list(result.warnings)
    if tau < histogram.bin_width:
        converged = False
        warnings.append("lifetime collapsed below one bin width")
    if sigmas[1] > 0 and abs(q[1]) < 2.0 * sigmas[1]:
        warnings.append("amplitude consistent with zero")
    return FitResult(
        DECAY_PARAMS,
        values,
        sigmas,
        result.residual_norm,
        converged,
        result.iterations,
        tuple(warnings),
    )


# ---------------------------------------------------------------------------
# Seeded synthetic data
# ---------------------------------------------------------------------------

REPETITION_WINDOW_PS = 12500.0   # 80 MHz repetition rate


def generate_synthetic(kind: str, params: dict, noise: dict | None, seed: int):
    """Deterministic synthetic Trace or DecayHistogram for round-trip tests.

    kinds: "lorentzian" and "purcell" produce traces with optional Gaussian
    noise ({"sigma": absolute} or {"sigma_rel": fraction of the model});
    "decay" produces a histogram over the pulse repetition window with
    optional Poisson noise ({"poisson": True}).
    """
    rng = np.random.default_rng(seed)
    noise = noise or {}
    if kind == "lorentzian":
        x = np.linspace(params["x_from"], params["x_to"], int(params.get("points", 201)))
        p = (params["center"], params["fwhm"], params["amplitude"], params.get("offset", 0.0))
        y = lorentzian_model(x, p)
        y, sigma = _add_gaussian_noise(y, noise, rng)
        return Trace(x, y, y_sigma=sigma, x_unit=params.get("x_unit", "pm"))
    if kind == "purcell":
        x = np.linspace(
            params.get("x_from", -300.0),
            params.get("x_to", 300.0),
            int(params.get("points", 61)),
        )
        model = PurcellModel(
            fp1=params["fp1"],
            fp2=params["fp2"],
            linewidth1_uev=params["linewidth1"],
            linewidth2_uev=params["linewidth2"],
            mode_splitting_uev=params["splitting"],
            alpha=params["alpha"],
        )
        y = relative_decay_rate(x, model)
        y, sigma = _add_gaussian_noise(y, noise, rng)
        return Trace(x, y, y_sigma=sigma, x_unit="ueV")
    if kind == "decay":
        bin_width = float(params.get("bin_width", 48.828125))
        span = float(params.get("span", REPETITION_WINDOW_PS))
        t0 = float(params.get("t0", 2000.0))
        edges = np.arange(0.0, span + 0.5 * bin_width, bin_width)
        centers = edges[:-1] + bin_width / 2.0
        irf = InstrumentResponse.from_fwhm(params["irf_fwhm"]) if params.get("irf_fwhm") \
            else InstrumentResponse.delta()
        kernel = irf.sampled_kernel(bin_width)
        model = decay_model(
            centers,
            (params["tau"], params["amplitude"], params.get("background", 0.0)),
            t0,
            kernel,
        )
        counts = rng.poisson(np.maximum(model, 0.0)).astype(float) if noise.get("poisson") \
            else model
        return DecayHistogram(centers, counts, bin_width)
    raise ValueError(f"unknown synthetic family {kind!r}")


def _add_gaussian_noise(y: np.ndarray, noise: dict, rng):
    """Returns (noisy y, known per-point sigma or None for noiseless)."""
    if "sigma" in noise and noise["sigma"] > 0:
        sigma = np.full(len(y), float(noise["sigma"]))
        return y + rng.normal(0.0, 1.0, size=len(y)) * sigma, sigma
    if "sigma_rel" in noise and noise["sigma_rel"] > 0:
        sigma = noise["sigma_rel"] * np.abs(y)
        return y + rng.normal(0.0, 1.0, size=len(y)) * sigma, sigma
    return y, None


# ---------------------------------------------------------------------------
# CSV ingestion (headers as written by the CLI exporters)
# ---------------------------------------------------------------------------

_UNIT_SUFFIXES = ("pm", "nm", "um", "uev", "ps", "ghz")


def _read_csv_columns(path) -> tuple[list[str], np.ndarray]:
    text = Path(path).read_text() if not hasattr(path, "read") else path.read()
    rows = [
        row for row in csv.reader(io.StringIO(text))
        if row and not row[0].lstrip().startswith("#")
    ]
    if len(rows) < 2:
        raise ValueError("CSV needs a header row and at least one data row")
    header = [h.strip() for h in rows[0]]
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    return header, data


def _unit_from_header(name: str) -> str:
    tail = name.rsplit("_", 1)[-1].lower()
    return tail if tail in _UNIT_SUFFIXES else ""


def read_trace(
    path,
    x_column: str | None = None,
    y_column: str | None = None,
    sigma_column: str | None = None,
) -> Trace:
    """Load a Trace from CSV; defaults to the first two columns."""
    header, data = _read_csv_columns(path)
    ix = header.index(x_column) if x_column else 0
    iy = header.index(y_column) if y_column else 1
    sigma = data[:, header.index(sigma_column)] if sigma_column else None
    order = np.argsort(data[:, ix])
    return Trace(
        data[order, ix],
        data[order, iy],
        y_sigma=None if sigma is None else sigma[order],
        x_unit=_unit_from_header(header[ix]),
    )


def read_histogram(path) -> DecayHistogram:
    """Load a DecayHistogram from CSV (time column, counts column)."""
    header, data = _read_csv_columns(path)
    t, c = data[:, 0], data[:, 1]
    if len(t) < 2:
        raise ValueError("histogram needs at least two bins")
    return DecayHistogram(t, c, float(t[1] - t[0]))
