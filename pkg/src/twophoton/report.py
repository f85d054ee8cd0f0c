"""Scan output: delimited CSV, a human-readable summary, and figures.

The CSV schema is one row per delay:

    tau_fs, singles_<port>..., coinc_<port>_<port>...
    [, counts_singles_<port>..., counts_coinc_<port>_<port>...]

Counts columns appear only when the scan carries sampled counts.  Floats are
written with 17 significant digits so re-reading reproduces them exactly.
"""

from __future__ import annotations

import csv
import math
import os

from .scenarios import CurveSummary, ScanResult, analyze_curve, predicted_rates


def _float_repr(value: float) -> str:
    return format(float(value), ".17g")


def csv_header(result: ScanResult) -> list[str]:
    header = ["tau_fs"]
    header += [f"singles_{port}" for port in result.detector_ports]
    header += [f"coinc_{a}_{b}" for a, b in result.pair_ports]
    if result.has_counts:
        header += [f"counts_singles_{port}" for port in result.detector_ports]
        header += [f"counts_coinc_{a}_{b}" for a, b in result.pair_ports]
    return header


def write_scan_csv(result: ScanResult, path: str) -> None:
    """Write the scan to ``path`` as comma-separated values."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(csv_header(result))
        for i, tau in enumerate(result.tau_fs):
            row = [_float_repr(tau)]
            row += [_float_repr(p) for p in result.singles[i]]
            row += [_float_repr(p) for p in result.coincidences[i]]
            if result.has_counts:
                row += [str(c) for c in result.singles_counts[i]]
                row += [str(c) for c in result.coincidence_counts[i]]
            writer.writerow(row)


def read_scan_csv(path: str) -> tuple[list[str], list[dict[str, float]]]:
    """Read a scan CSV back as (header, rows of name -> value)."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        header = list(reader.fieldnames or [])
        rows = []
        for record in reader:
            rows.append(
                {
                    name: (int(text) if name.startswith("counts_") else float(text))
                    for name, text in record.items()
                }
            )
    return header, rows


def _format_summary_row(name: str, summary: CurveSummary, predicted: tuple[float, float]) -> str:
    fwhm = f"{summary.fwhm_fs:#.6g}" if summary.fwhm_fs is not None else "n/a"
    return (
        f"  {name:<16} {summary.baseline:<12.6g} {summary.extremum:<12.6g} "
        f"{summary.visibility:<11.6g} {fwhm:<10} "
        f"{predicted[0]:.6g} -> {predicted[1]:.6g}"
    )


def format_summary(result: ScanResult) -> str:
    """Multi-line closing summary of a scan."""
    scenario = result.scenario
    lines = [
        f"scenario            {scenario.kind.value}",
        f"center wavelength   {scenario.center_wavelength_nm:g} nm",
        f"filter fwhm         {scenario.filter_fwhm_nm:g} nm",
        f"coherence time      {scenario.coherence_time_fs:.6g} fs",
        f"mode match          {result.mode_match:g}",
        "detectors           "
        + ", ".join(
            f"{port} (efficiency {eta:g})"
            for port, eta in zip(result.detector_ports, scenario.efficiencies)
        ),
        f"rows                {len(result.tau_fs)} over "
        f"[{result.tau_fs[0]:g}, {result.tau_fs[-1]:g}] fs",
    ]
    if scenario.polarizer_angles_deg is not None:
        a, b = scenario.polarizer_angles_deg
        lines.append(f"polarizer angles    {a:g} deg, {b:g} deg")
    if scenario.phase_rad is not None:
        lines.append(f"pair phase          {scenario.phase_rad:g} rad")
    if result.sampling is not None:
        s = result.sampling
        lines.append(
            f"sampling            pair rate {s.pair_rate_hz:g}/s, "
            f"integration {s.integration_time_s:g} s, seed {s.seed}"
        )
    else:
        lines.append("sampling            disabled")

    predicted_far = predicted_rates(scenario, 0.0)
    predicted_zero = predicted_rates(scenario, result.mode_match)
    lines.append("")
    lines.append(
        f"  {'channel':<16} {'baseline':<12} {'extremum':<12} "
        f"{'visibility':<11} {'fwhm_fs':<10} predicted baseline -> zero delay"
    )
    for j, port in enumerate(result.detector_ports):
        summary = analyze_curve(result.tau_fs, [row[j] for row in result.singles])
        lines.append(
            _format_summary_row(
                f"singles_{port}",
                summary,
                (predicted_far[0][j], predicted_zero[0][j]),
            )
        )
    for j, (a, b) in enumerate(result.pair_ports):
        summary = analyze_curve(result.tau_fs, [row[j] for row in result.coincidences])
        lines.append(
            _format_summary_row(
                f"coinc_{a}_{b}",
                summary,
                (predicted_far[1][j], predicted_zero[1][j]),
            )
        )
    return "\n".join(lines)


def figure_path(csv_path: str) -> str:
    root, _ = os.path.splitext(csv_path)
    return root + ".png"


def render_scan_figure(result: ScanResult, path: str) -> None:
    """Render singles and coincidence curves (and sampled counts) to a file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax_singles, ax_coinc) = plt.subplots(
        2, 1, sharex=True, figsize=(7.0, 7.0), constrained_layout=True
    )
    taus = result.tau_fs
    emissions = (
        result.sampling.pair_rate_hz * result.sampling.integration_time_s
        if result.sampling is not None
        else None
    )

    for j, port in enumerate(result.detector_ports):
        ax_singles.plot(taus, [row[j] for row in result.singles], label=f"singles {port}")
        if result.has_counts and emissions:
            ax_singles.plot(
                taus,
                [row[j] / emissions for row in result.singles_counts],
                ".",
                markersize=3,
                alpha=0.6,
                label=f"counts {port} / emissions",
            )
    for j, (a, b) in enumerate(result.pair_ports):
        ax_coinc.plot(taus, [row[j] for row in result.coincidences], label=f"coinc {a}-{b}")
        if result.has_counts and emissions:
            ax_coinc.plot(
                taus,
                [row[j] / emissions for row in result.coincidence_counts],
                ".",
                markersize=3,
                alpha=0.6,
                label=f"counts {a}-{b} / emissions",
            )

    ax_singles.set_ylabel("singles probability per pair")
    ax_coinc.set_ylabel("coincidence probability per pair")
    ax_coinc.set_xlabel("delay tau (fs)")
    title = f"{result.scenario.kind.value}, mode match {result.mode_match:g}"
    ax_singles.set_title(title)
    for ax in (ax_singles, ax_coinc):
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best", fontsize=8)
    fig.savefig(path, dpi=150)
    plt.close(fig)
