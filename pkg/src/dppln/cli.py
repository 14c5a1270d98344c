"""Command-line front end.

Subcommands: index, design, sweep, spectrum, poling.  Every command reads a
YAML config (see `config`), writes either a human-readable report (text) or
machine-readable JSON (records), and is fully deterministic: the same config
produces byte-identical output.  Exit codes: 0 success, 2 configuration
error, 3 physics error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import RunConfig, load_config
from .design_search import EffectiveIndexSolver, design, sweep
from .errors import ConfigurationError, PhysicsError, ToolkitError
from .spdc import spectrum_scan, synthesize_poling

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3

_ROLES = ("pump", "signal_1", "idler_1", "signal_2", "idler_2")


def _machine(value):
    """9-significant-digit machine formatting."""
    return float(format(value, ".9g"))


def _report(value):
    """4-significant-digit report formatting."""
    return format(value, ".4g")


def _write(content: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(content)
    else:
        sys.stdout.write(content)


def _resolve_output(config: RunConfig, args):
    fmt = args.format or config.output.format
    path = args.out or config.output.path
    return fmt, path


def cmd_index(config: RunConfig, args) -> str:
    result = design(config.request(), config.material)
    rows = []
    for role in _ROLES:
        mode = result.modes[role]
        profile = mode.profile
        rows.append(
            dict(
                wave=role,
                wavelength_nm=mode.wavelength_nm,
                polarization=str(mode.polarization),
                n_bulk=profile.bulk_index,
                delta_n=profile.increment,
                n_eff=mode.n_eff,
            )
        )
    fmt, _ = _resolve_output(config, args)
    if fmt == "records":
        payload = [
            {k: (_machine(v) if isinstance(v, float) else v) for k, v in row.items()}
            for row in rows
        ]
        return json.dumps({"waves": payload}, indent=2) + "\n"
    lines = [f"{'wave':>9} {'lambda_nm':>10} {'pol':>13} {'n_bulk':>8} {'delta_n':>9} {'n_eff':>8}"]
    for row in rows:
        lines.append(
            f"{row['wave']:>9} {row['wavelength_nm']:>10.2f} {row['polarization']:>13} "
            f"{row['n_bulk']:>8.4f} {row['delta_n']:>9.4f} {row['n_eff']:>8.4f}"
        )
    return "\n".join(lines) + "\n"


def _design_payload(result):
    return dict(
        scheme=result.request.scheme.value,
        width_um=result.request.geometry.width_um,
        depth_um=result.request.geometry.depth_um,
        length_cm=result.request.geometry.length_cm,
        period1_um=result.period1_um,
        period2_um=result.period2_um,
        gamma=result.gamma,
        weight_1=result.state_weights[0],
        weight_2=result.state_weights[1],
        entropy_bits=result.entropy_bits,
        overlap1_per_um=result.overlap_1,
        overlap2_per_um=result.overlap_2,
        fwhm_signal1_nm=result.spectra["signal_1"].fwhm_nm,
        fwhm_idler1_nm=result.spectra["idler_1"].fwhm_nm,
        fwhm_signal2_nm=result.spectra["signal_2"].fwhm_nm,
        fwhm_idler2_nm=result.spectra["idler_2"].fwhm_nm,
    )


def cmd_design(config: RunConfig, args) -> str:
    result = design(config.request(), config.material)
    payload = _design_payload(result)
    fmt, _ = _resolve_output(config, args)
    if fmt == "records":
        machine = {
            k: (_machine(v) if isinstance(v, float) else v) for k, v in payload.items()
        }
        return json.dumps(machine, indent=2) + "\n"
    lines = [
        f"scheme            {payload['scheme']}",
        f"geometry          w = {_report(payload['width_um'])} um, "
        f"h = {_report(payload['depth_um'])} um, L = {_report(payload['length_cm'])} cm",
        f"period_1          {_report(payload['period1_um'])} um",
        f"period_2          {_report(payload['period2_um'])} um",
        f"gamma             {_report(payload['gamma'])}",
        f"state weights     ({_report(payload['weight_1'])}, {_report(payload['weight_2'])})",
        f"entropy           {_report(payload['entropy_bits'])} bits",
        f"overlaps          ({_report(payload['overlap1_per_um'])}, "
        f"{_report(payload['overlap2_per_um'])}) 1/um",
        "bandwidth (FWHM)  "
        f"signal_1 {_report(payload['fwhm_signal1_nm'])} nm, "
        f"idler_1 {_report(payload['fwhm_idler1_nm'])} nm, "
        f"signal_2 {_report(payload['fwhm_signal2_nm'])} nm, "
        f"idler_2 {_report(payload['fwhm_idler2_nm'])} nm",
    ]
    return "\n".join(lines) + "\n"


def cmd_sweep(config: RunConfig, args) -> str:
    template = config.request()
    block = config.require_sweep()
    depths = args.depths or block.depths_um
    widths = args.widths or block.widths_um
    result = sweep(
        template,
        depths,
        widths,
        material=config.material,
        pairing=block.pairing,
        max_workers=args.parallel,
    )
    fmt, _ = _resolve_output(config, args)
    if fmt == "records":
        rows = []
        for row in result.rows:
            rows.append(
                dict(
                    depth_um=_machine(row.depth_um),
                    width_um=_machine(row.width_um),
                    gamma=None if row.gamma is None else _machine(row.gamma),
                    period1_um=None if row.period1_um is None else _machine(row.period1_um),
                    period2_um=None if row.period2_um is None else _machine(row.period2_um),
                    status="ok" if row.error is None else row.error,
                )
            )
        return json.dumps({"scheme": result.scheme.value, "rows": rows}, indent=2) + "\n"
    lines = ["depth_um,width_um,gamma,period1_um,period2_um,status"]
    for row in result.rows:
        if row.error is None:
            lines.append(
                f"{row.depth_um:g},{row.width_um:g},{row.gamma:.4f},"
                f"{row.period1_um:.4f},{row.period2_um:.4f},ok"
            )
        else:
            message = row.error.replace(",", ";")
            lines.append(f"{row.depth_um:g},{row.width_um:g},,,,{message}")
    return "\n".join(lines) + "\n"


def cmd_spectrum(config: RunConfig, args) -> str:
    result = design(config.request(), config.material)
    scan = config.require_scan()
    process = result.process_1 if scan.axis.endswith("_1") else result.process_2
    axis = "signal" if scan.axis.startswith("signal") else "idler"
    provider = None
    if scan.index_model == "dispersive":
        provider = EffectiveIndexSolver(config.material, config.request().geometry).index
    spectrum = spectrum_scan(
        process,
        axis,
        scan.span_nm,
        scan.samples,
        config.request().geometry.length_cm,
        index_provider=provider,
        index_model=scan.index_model,
    )
    fmt, _ = _resolve_output(config, args)
    if fmt == "records":
        payload = dict(
            axis=scan.axis,
            center_nm=_machine(spectrum.center_nm),
            fwhm_nm=_machine(spectrum.fwhm_nm),
            wavelength_nm=[_machine(v) for v in spectrum.wavelengths_nm],
            gain=[_machine(v) for v in spectrum.gain],
        )
        return json.dumps(payload, indent=2) + "\n"
    lines = [
        f"# axis = {scan.axis}",
        f"# center_nm = {format(spectrum.center_nm, '.9g')}",
        f"# fwhm_nm = {format(spectrum.fwhm_nm, '.9g')}",
        "# wavelength_nm gain",
    ]
    for lam, g in zip(spectrum.wavelengths_nm, spectrum.gain):
        lines.append(f"{lam:.6f} {g:.9e}")
    return "\n".join(lines) + "\n"


def cmd_poling(config: RunConfig, args) -> str:
    result = design(config.request(), config.material)
    pattern = synthesize_poling(
        result.period1_um, result.period2_um, config.request().geometry.length_cm
    )
    fmt, _ = _resolve_output(config, args)
    if fmt == "records":
        payload = dict(
            length_um=_machine(pattern.length_um),
            first_sign=pattern.first_sign,
            boundaries_um=[float(format(b, ".6f")) for b in pattern.boundaries_um],
        )
        return json.dumps(payload, indent=2) + "\n"
    return "\n".join(f"{b:.6f}" for b in pattern.boundaries_um) + "\n"


_COMMANDS = {
    "index": cmd_index,
    "design": cmd_design,
    "sweep": cmd_sweep,
    "spectrum": cmd_spectrum,
    "poling": cmd_poling,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dppln",
        description="Dual-period quasi-phase-matched waveguide design toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("index", "bulk and effective indices of the five interacting waves"),
        ("design", "periods, degree of entanglement, weights and bandwidths"),
        ("sweep", "one design row per geometry"),
        ("spectrum", "two-column sinc^2 gain spectrum with FWHM summary"),
        ("poling", "dual-period domain-boundary list"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="path to the YAML run config")
        cmd.add_argument("--out", default=None, help="write output to this file")
        cmd.add_argument("--format", choices=("text", "records"), default=None,
                         help="override the output block's format")
        if name == "sweep":
            cmd.add_argument("--depths", type=_float_csv, default=None,
                             help="comma-separated depths in um (overrides config)")
            cmd.add_argument("--widths", type=_float_csv, default=None,
                             help="comma-separated widths in um (overrides config)")
            cmd.add_argument("--parallel", type=int, default=None,
                             help="number of worker processes")
    return parser


def _float_csv(text):
    try:
        return tuple(float(part) for part in text.split(",") if part)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        content = _COMMANDS[args.command](config, args)
        _, out_path = _resolve_output(config, args)
        _write(content, out_path)
    except ConfigurationError as error:
        print(f"configuration error: {error}", file=sys.stderr)
        return EXIT_CONFIG
    except PhysicsError as error:
        print(f"physics error: {error}", file=sys.stderr)
        return EXIT_PHYSICS
    except ToolkitError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_PHYSICS
    return EXIT_OK


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
