"""Plain-text reports and CSV writers shared by the CLI.

Reports are stable ``key = value unit`` lines with a documented key set per
record type and deterministic ordering: serializing the same object twice is
byte-identical.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .cavity import CavityFigures, GaussianGeometry
from .cqed import CouplingReport
from .fitting import FitResult


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.8g}"
    return str(value)


def _lines(entries: list[tuple[str, object, str]]) -> str:
    out = []
    for key, value, unit in entries:
        line = f"{key} = {_fmt(value)}"
        if unit:
            line += f" {unit}"
        out.append(line)
    return "\n".join(out) + "\n"


def write_report(obj) -> str:
    """Render a known record type (or a plain mapping) as key = value lines."""
    if isinstance(obj, CouplingReport):
        return _lines([
            ("mode_volume", obj.mode_volume_um3, "um3"),
            ("e_vac", obj.e_vac_v_per_m, "V/m"),
            ("hbar_g", obj.hbar_g_uev, "ueV"),
            ("hbar_kappa", obj.hbar_kappa_uev, "ueV"),
            ("hbar_gamma", obj.hbar_gamma_uev, "ueV"),
            ("cooperativity", obj.cooperativity, ""),
            ("strong_coupling", obj.strong_coupling, ""),
            ("margin", obj.margin_uev, "ueV"),
        ])
    if isinstance(obj, CavityFigures):
        entries = [
            ("finesse", obj.finesse, ""),
            ("mode_index", obj.mode_index, ""),
            ("effective_length", obj.effective_length_um, "um"),
            ("q_factor", obj.q_factor, ""),
            ("linewidth", obj.linewidth_uev, "ueV"),
            ("wavelength", obj.wavelength_nm, "nm"),
        ]
        if obj.mode_splitting_uev is not None:
            entries.append(("mode_splitting", obj.mode_splitting_uev, "ueV"))
        return _lines(entries)
    if isinstance(obj, GaussianGeometry):
        return _lines([
            ("radius_of_curvature", obj.radius_of_curvature_um, "um"),
            ("cavity_length", obj.cavity_length_um, "um"),
            ("waist", obj.waist_um, "um"),
            ("mode_area", obj.mode_area_um2, "um2"),
            ("transverse_splitting", obj.transverse_splitting_ghz, "GHz"),
        ])
    if isinstance(obj, FitResult):
        entries = [
            (name, float(value), "")
            for name, value in zip(obj.parameter_names, obj.values)
        ]
        entries += [
            (f"{name}_sigma", float(sigma), "")
            for name, sigma in zip(obj.parameter_names, obj.uncertainties)
        ]
        entries += [
            ("residual_norm", obj.residual_norm, ""),
            ("converged", obj.converged, ""),
            ("iterations", obj.iterations, ""),
        ]
        text = _lines(entries)
        for warning in obj.warnings:
            text += f"# warning: {warning}\n"
        return text
    if isinstance(obj, dict):
        return _lines([(key, value, "") for key, value in obj.items()])
    raise TypeError(f"no report serialization for {type(obj).__name__}")


def fit_result_csv_row(result: FitResult) -> tuple[list[str], list]:
    """Header and single data row for a FitResult export."""
    header = list(result.parameter_names)
    header += [f"{name}_sigma" for name in result.parameter_names]
    header += ["residual_norm", "converged", "iterations"]
    row = [float(v) for v in result.values]
    row += [float(s) for s in result.uncertainties]
    row += [result.residual_norm, int(result.converged), result.iterations]
    return header, row


def write_csv(target, header: list[str], rows, comments: list[str] | None = None) -> None:
    """Write rows to a path or file object with optional leading comments."""
    def _emit(stream):
        for comment in comments or []:
            stream.write(f"# {comment}\n")
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)

    if hasattr(target, "write"):
        _emit(target)
    else:
        with Path(target).open("w", newline="") as stream:
            _emit(stream)
