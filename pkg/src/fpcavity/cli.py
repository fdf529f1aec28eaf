"""Command-line front end.

Subcommands wrap the computational modules and exchange data as CSV plus
plain ``key = value`` reports. Exit codes: 0 success, 1 computational
failure, 2 usage or stack-file parse error. With ``--output`` every
CSV-producing command can also render a matplotlib figure next to the CSV
via ``--plot``.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import cavity, cqed, fitting, polarization, reference, reporting, stacklang, tmm
from .materials import DEFAULT_DBR_PAIRS, QD_PLANE

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_USAGE = 2


class ComputationError(RuntimeError):
    pass


def _load_stack(path: str):
    try:
        source = Path(path).read_text()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    result = stacklang.parse_stack(source)
    for diag in result.diagnostics:
        print(f"{path}:{diag}", file=sys.stderr)
    if not result.ok:
        raise SystemExit(EXIT_USAGE)
    return result.document.to_stack()


def _emit_csv(args, header, rows, comments=None):
    if args.output:
        reporting.write_csv(args.output, header, rows, comments)
        print(f"wrote {args.output}")
    else:
        reporting.write_csv(sys.stdout, header, rows, comments)


def _plot_path(args) -> str | None:
    if not getattr(args, "plot", False):
        return None
    if not args.output:
        print("error: --plot requires --output", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    return str(Path(args.output).with_suffix(".png"))


def _cmd_spectrum(args) -> int:
    stack = _load_stack(args.stack)
    lams, responses = tmm.transmission_spectrum(stack, args.wavelength_from,
                                                args.wavelength_to, args.step)
    rows = [
        [lam, resp.R, resp.T, resp.r.real, resp.r.imag, resp.t.real, resp.t.imag]
        for lam, resp in zip(lams, responses)
    ]
    _emit_csv(args, ["wavelength_nm", "reflectance", "transmittance",
                     "r_re", "r_im", "t_re", "t_im"], rows)
    png = _plot_path(args)
    if png:
        from . import plots

        plots.plot_spectrum(lams, [r.R for r in responses], [r.T for r in responses], png)
        print(f"wrote {png}")
    return EXIT_OK


def _cmd_field(args) -> int:
    stack = _load_stack(args.stack)
    profile = tmm.field_profile(stack, args.wavelength, args.grid_step)
    comments = [
        "antinodes_nm: " + " ".join(f"{z:.2f}" for z in profile.antinode_positions),
        "nodes_nm: " + " ".join(f"{z:.2f}" for z in profile.node_positions),
    ]
    rows = [
        [z, abs(e), e.real, e.imag, n]
        for z, e, n in zip(profile.z_nm, profile.amplitude, profile.index_profile)
    ]
    _emit_csv(args, ["z_nm", "e_abs", "e_re", "e_im", "refractive_index"], rows, comments)
    png = _plot_path(args)
    if png:
        from . import plots

        qd = stack.mark(QD_PLANE) if stack.has_mark(QD_PLANE) else None
        plots.plot_field_profile(profile, png, qd_plane_nm=qd)
        print(f"wrote {png}")
    return EXIT_OK


def _cmd_scan(args) -> int:
    bottom = _load_stack(args.stack)
    template = tmm.CavityTemplate.with_dbr_top(bottom, args.top_pairs)
    scan = tmm.scan_air_gap(template, args.wavelength, args.gap_from, args.gap_to, args.step)
    rows = [[g, t] for g, t in zip(scan.gaps_nm, scan.transmission)]
    _emit_csv(args, ["gap_nm", "transmittance"], rows)
    for gap in scan.resonance_gaps_nm:
        print(f"resonance_gap = {gap:.3f} nm", file=sys.stderr)
    if scan.resonance_gaps_nm:
        gap = tmm.tune_air_gap(template, args.wavelength, scan.resonance_gaps_nm[0])
        fwhm_nm = _resonance_fwhm(template, args.wavelength, gap)
        finesse = cavity.finesse_from_scan(args.wavelength, fwhm_nm * 1000.0)
        print(f"fwhm = {fwhm_nm * 1000.0:.3f} pm", file=sys.stderr)
        print(f"finesse = {finesse:.1f}", file=sys.stderr)
    png = _plot_path(args)
    if png:
        from . import plots

        plots.plot_gap_scan(scan, png)
        print(f"wrote {png}")
    return EXIT_OK


def _resonance_fwhm(template, wavelength_nm, resonant_gap_nm) -> float:
    """FWHM (nm) of one resonance from a fine local scan plus Lorentzian fit."""
    peak = tmm.transmission_vs_gap(template, wavelength_nm, np.array([resonant_gap_nm]))[0]
    # bracket: walk out to the half-maximum on one side to estimate the width
    width = 0.001
    for _ in range(30):
        t = tmm.transmission_vs_gap(
            template, wavelength_nm, np.array([resonant_gap_nm + width]))[0]
        if t < peak / 2:
            break
        width *= 2.0
    gaps = np.linspace(resonant_gap_nm - 4 * width, resonant_gap_nm + 4 * width, 401)
    trans = tmm.transmission_vs_gap(template, wavelength_nm, gaps)
    fit = fitting.fit_lorentzian(fitting.Trace(gaps, trans, x_unit="nm"))
    if not fit.converged:
        raise ComputationError("resonance lineshape fit did not converge")
    return abs(fit.value("fwhm"))


def _cmd_penetration(args) -> int:
    stack = _load_stack(args.stack)
    try:
        depth = tmm.penetration_depth(stack, args.wavelength)
    except tmm.NotAMirrorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    response = tmm.reflectance(stack, args.wavelength)
    print(reporting.write_report({
        "wavelength_nm": args.wavelength,
        "reflectance": response.R,
        "penetration_depth_um": depth,
    }), end="")
    return EXIT_OK


def _cmd_cqed_report(args) -> int:
    report = cqed.build_coupling_report(
        args.gamma, args.wavelength, args.q, args.n, args.fp, hbar_kappa_uev=args.kappa
    )
    print(reporting.write_report(report), end="")
    return EXIT_OK


def _cmd_fit(args) -> int:
    from . import plots

    png = _plot_path(args)
    if args.family == "decay":
        hist = fitting.read_histogram(args.csv)
        irf = fitting.InstrumentResponse.from_fwhm(args.irf_fwhm) if args.irf_fwhm \
            else fitting.InstrumentResponse.delta()
        result = fitting.fit_decay(hist, irf, t0_ps=args.t0, weighted=args.weighted)
        model_y = fitting.decay_model(
            hist.bin_centers, result.values, args.t0, irf.sampled_kernel(hist.bin_width)
        )
        if png:
            plots.plot_decay_fit(hist, model_y, png)
    else:
        trace = fitting.read_trace(args.csv, x_column=args.x_column, y_column=args.y_column)
        if args.family == "lorentzian":
            result = fitting.fit_lorentzian(trace)
            model_y = fitting.lorentzian_model(trace.x, result.values)
        else:
            result = fitting.fit_purcell_map(trace)
            model_y = fitting.purcell_map_model(trace.x, result.values)
        if png:
            plots.plot_trace_fit(trace, model_y, png)
    print(reporting.write_report(result), end="")
    if args.output:
        header, row = reporting.fit_result_csv_row(result)
        reporting.write_csv(args.output, header, [row])
        print(f"wrote {args.output}")
    if png:
        print(f"wrote {png}")
    return EXIT_OK if result.converged else EXIT_COMPUTATION


def _cmd_synth(args) -> int:
    noise = {}
    if args.noise_sigma:
        noise["sigma"] = args.noise_sigma
    if args.noise_rel:
        noise["sigma_rel"] = args.noise_rel
    if args.poisson:
        noise["poisson"] = True
    if args.family == "lorentzian":
        params = {"center": args.center, "fwhm": args.fwhm, "amplitude": args.amplitude,
                  "offset": args.offset, "x_from": args.x_from, "x_to": args.x_to,
                  "points": args.points}
        trace = fitting.generate_synthetic("lorentzian", params, noise, args.seed)
        rows = list(zip(trace.x, trace.y))
        _emit_csv(args, ["x_pm", "signal"], rows)
    elif args.family == "purcell":
        params = {"fp1": args.fp1, "fp2": args.fp2, "linewidth1": args.linewidth1,
                  "linewidth2": args.linewidth2, "splitting": args.splitting,
                  "alpha": args.alpha, "x_from": args.x_from, "x_to": args.x_to,
                  "points": args.points}
        trace = fitting.generate_synthetic("purcell", params, noise, args.seed)
        rows = list(zip(trace.x, trace.y))
        _emit_csv(args, ["detuning_uev", "rate_ratio"], rows)
    else:
        params = {"tau": args.tau, "amplitude": args.amplitude,
                  "background": args.background, "irf_fwhm": args.irf_fwhm,
                  "bin_width": args.bin_width, "t0": args.t0}
        hist = fitting.generate_synthetic("decay", params, noise, args.seed)
        rows = list(zip(hist.bin_centers, hist.counts))
        _emit_csv(args, ["time_ps", "counts"], rows)
    return EXIT_OK


def _cmd_polarization(args) -> int:
    modes = polarization.TwoModeCavity(
        polarization.CavityMode(0.0, args.width1),
        polarization.CavityMode(args.splitting, args.width2),
    )
    geometry = polarization.DetectionGeometry(phi_rad=math.radians(args.phi_deg))
    detunings = np.linspace(args.x_from, args.x_to, args.points)
    i_r, i_t = polarization.detuning_sweep(modes, geometry, detunings)
    rows = list(zip(detunings, i_r, i_t))
    _emit_csv(args, ["detuning_uev", "i_reflect", "i_transmit"], rows)
    png = _plot_path(args)
    if png:
        from . import plots

        plots.plot_polarization_traces(detunings, i_r, i_t, png)
        print(f"wrote {png}")
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    results = reference.run_acceptance()
    for row in results:
        print(row.line())
    failed = [row for row in results if not row.passed]
    print(f"{len(results) - len(failed)}/{len(results)} rows passed")
    return EXIT_OK if not failed else EXIT_COMPUTATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpcavity",
        description="Transfer-matrix design and analysis of open microcavities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p, plot=True):
        p.add_argument("-o", "--output", help="CSV output path (default: stdout)")
        if plot:
            p.add_argument("--plot", action="store_true",
                           help="render a figure next to the CSV (needs --output)")

    p = sub.add_parser("spectrum", help="reflectance/transmittance over wavelength")
    p.add_argument("stack", help="stack description file")
    p.add_argument("--from", dest="wavelength_from", type=float, required=True)
    p.add_argument("--to", dest="wavelength_to", type=float, required=True)
    p.add_argument("--step", type=float, default=0.5)
    add_output(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("field", help="intra-stack field profile")
    p.add_argument("stack")
    p.add_argument("--wavelength", type=float, required=True)
    p.add_argument("--grid-step", type=float, default=1.0)
    add_output(p)
    p.set_defaults(func=_cmd_field)

    p = sub.add_parser("scan", help="cavity transmission vs air gap")
    p.add_argument("stack", help="bottom-mirror stack file (incident side faces the gap)")
    p.add_argument("--wavelength", type=float, default=940.0)
    p.add_argument("--gap-from", dest="gap_from", type=float, required=True)
    p.add_argument("--gap-to", dest="gap_to", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--top-pairs", dest="top_pairs", type=int, default=DEFAULT_DBR_PAIRS)
    add_output(p)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("penetration", help="mirror penetration depth")
    p.add_argument("stack")
    p.add_argument("--wavelength", type=float, required=True)
    p.set_defaults(func=_cmd_penetration)

    p = sub.add_parser("cqed-report", help="coupling chain from decay rate to verdict")
    p.add_argument("--gamma", type=float, required=True, help="free-space decay rate (GHz)")
    p.add_argument("--wavelength", type=float, required=True, help="emitter wavelength (nm)")
    p.add_argument("--q", type=float, required=True, help="cavity quality factor")
    p.add_argument("--n", type=float, required=True, help="refractive index at the emitter")
    p.add_argument("--fp", type=float, required=True, help="Purcell factor for the mode volume")
    p.add_argument("--kappa", type=float, default=None, help="cavity linewidth (ueV)")
    p.set_defaults(func=_cmd_cqed_report)

    p = sub.add_parser("fit", help="fit a CSV trace or histogram")
    p.add_argument("family", choices=["lorentzian", "purcell", "decay"])
    p.add_argument("csv")
    p.add_argument("--irf-fwhm", dest="irf_fwhm", type=float, default=340.0,
                   help="Gaussian IRF FWHM in ps (decay only; 0 = delta)")
    p.add_argument("--t0", type=float, default=2000.0, help="pulse time in ps (decay only)")
    p.add_argument("--weighted", action="store_true", help="Poisson/sigma-weighted fit")
    p.add_argument("--x-column", dest="x_column", default=None)
    p.add_argument("--y-column", dest="y_column", default=None)
    add_output(p)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("synth", help="seeded synthetic data")
    p.add_argument("family", choices=["lorentzian", "purcell", "decay"])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--center", type=float, default=0.0)
    p.add_argument("--fwhm", type=float, default=115.0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--offset", type=float, default=0.0)
    p.add_argument("--fp1", type=float, default=reference.REFERENCE_PURCELL_FIT.fp1)
    p.add_argument("--fp2", type=float, default=reference.REFERENCE_PURCELL_FIT.fp2)
    p.add_argument("--linewidth1", type=float,
                   default=reference.REFERENCE_PURCELL_FIT.linewidth1_uev)
    p.add_argument("--linewidth2", type=float,
                   default=reference.REFERENCE_PURCELL_FIT.linewidth2_uev)
    p.add_argument("--splitting", type=float,
                   default=reference.REFERENCE_PURCELL_FIT.mode_splitting_uev)
    p.add_argument("--alpha", type=float, default=reference.REFERENCE_PURCELL_FIT.alpha)
    p.add_argument("--tau", type=float, default=665.0)
    p.add_argument("--background", type=float, default=0.0)
    p.add_argument("--irf-fwhm", dest="irf_fwhm", type=float, default=340.0)
    p.add_argument("--bin-width", dest="bin_width", type=float, default=48.828125)
    p.add_argument("--t0", type=float, default=2000.0)
    p.add_argument("--x-from", dest="x_from", type=float, default=-400.0)
    p.add_argument("--x-to", dest="x_to", type=float, default=400.0)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--noise-sigma", dest="noise_sigma", type=float, default=0.0)
    p.add_argument("--noise-rel", dest="noise_rel", type=float, default=0.0)
    p.add_argument("--poisson", action="store_true")
    add_output(p, plot=False)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("polarization", help="cross-polarized two-mode detection traces")
    p.add_argument("--splitting", type=float, default=reference.MODE_SPLITTING_UEV)
    p.add_argument("--width1", type=float, default=reference.MODE_LINEWIDTHS_UEV[0])
    p.add_argument("--width2", type=float, default=reference.MODE_LINEWIDTHS_UEV[1])
    p.add_argument("--phi-deg", dest="phi_deg", type=float, default=85.0)
    p.add_argument("--x-from", dest="x_from", type=float, default=-150.0)
    p.add_argument("--x-to", dest="x_to", type=float, default=210.0)
    p.add_argument("--points", type=int, default=1201)
    add_output(p)
    p.set_defaults(func=_cmd_polarization)

    p = sub.add_parser("reproduce-paper",
                       help="run the reference acceptance table, one pass/fail line per row")
    p.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except (ComputationError, tmm.NumericalFailure, tmm.NotAMirrorError,
            tmm.ResonanceNotFound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
