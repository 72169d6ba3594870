"""Command-line front end.

Subcommands:
    forward         operator JSON -> classified spectrum JSON
    inverse         three-spectra JSON -> recovered {alpha, potential}
    synth           spectrum JSON -> admissibility report (+ operator)
    validate        operator JSON -> identity-residual report
    oracle-compare  operator JSON -> solver vs oracle eigenvalue table

Outputs are deterministic JSON (fixed key order, 17-significant-digit
floats). Exit status is 0 only when every verdict in the produced report
passed; input or computation errors exit with status 2 and a machine-
readable {"error", "detail"} record.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import diagnostics, io, recovery, spectrum
from .errors import SpectralError
from .potential import OperatorSpec
from .spectrum import ClassifiedSpectrum


def _default_window(order: int) -> float:
    return 4.0 * (order + 1) ** 2


def _emit(args, payload: dict) -> None:
    if args.output:
        io.write_json(args.output, payload)
    else:
        sys.stdout.write(io.dumps_canonical(payload))


def _plot_path(args) -> Path:
    if args.output:
        return Path(args.output).with_suffix(".csv")
    return Path("plot.csv")


def _cmd_forward(args) -> int:
    op = OperatorSpec.from_dict(io.read_json(args.input))
    window = args.window if args.window is not None else max(
        40.0, _default_window(op.potential.K)
    )
    cs = spectrum.classify_spectrum(op, window)
    _emit(args, cs.to_dict())
    if args.emit_plot:
        rows = diagnostics.char_samples(op, lam_max=max(6.0, window ** 0.5))
        io.write_csv(_plot_path(args), ["lambda", "char_real"], rows)
    return 0


def _cmd_inverse(args) -> int:
    record = io.read_json(args.input)
    try:
        order = int(record["K"]) if args.order is None else args.order
        base = ClassifiedSpectrum.from_dict(record["base"])
        shifted = ClassifiedSpectrum.from_dict(record["shifted"])
        squared = ClassifiedSpectrum.from_dict(record["squared"])
    except KeyError as exc:
        raise ValueError(f"three-spectra record missing field {exc}") from exc
    ts = recovery.ThreeSpectra.from_classified(base, shifted, squared, order)
    alpha, pot = recovery.invert_three_spectra(ts)
    norms_v = {k: x / alpha for k, x in recovery.weights_from_spectrum(ts.base).weights.items()}
    residuals = []
    for k in range(0, order + 1):
        c, s = pot.coefficient(k)
        residuals.append(
            {"k": k, "norm_residual": abs(c * c + s * s - norms_v.get(k, 0.0))}
        )
    _emit(
        args,
        {"alpha": float(alpha), "potential": pot.to_dict(), "residuals": residuals},
    )
    return 0


def _cmd_synth(args) -> int:
    cs = ClassifiedSpectrum.from_dict(io.read_json(args.input))
    data = recovery.SpectralData.from_classified(cs)
    report = recovery.check_admissibility(data)
    payload = {"report": report.to_dict(), "operator": None}
    if report.accepted:
        payload["operator"] = recovery.synthesize_from_admissible(report).to_dict()
    _emit(args, payload)
    return 0 if report.accepted else 1


def _cmd_validate(args) -> int:
    op = OperatorSpec.from_dict(io.read_json(args.input))
    report = diagnostics.identity_report(op)
    _emit(args, report)
    if args.emit_plot:
        rows = diagnostics.validation_csv_rows(op)
        io.write_csv(
            _plot_path(args),
            ["lambda", "char_real", "secular_factorization_residual"],
            rows,
        )
    return 0 if report["passed"] else 1


def _cmd_oracle_compare(args) -> int:
    op = OperatorSpec.from_dict(io.read_json(args.input))
    window = args.window if args.window is not None else max(
        40.0, _default_window(op.potential.K)
    )
    report = diagnostics.oracle_comparison(op, window, n=args.truncation)
    _emit(args, report)
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankonespec",
        description="Direct and inverse spectral problems for the periodic "
        "second-derivative operator with a rank-one non-local potential.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "forward": (_cmd_forward, "compute and classify the spectrum of an operator"),
        "inverse": (_cmd_inverse, "reconstruct the operator from three spectra"),
        "synth": (_cmd_synth, "check admissibility of a spectrum and synthesize an operator"),
        "validate": (_cmd_validate, "evaluate identity residuals for an operator"),
        "oracle-compare": (_cmd_oracle_compare, "compare solver eigenvalues with the matrix oracle"),
    }
    for name, (fn, help_text) in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", required=True, help="input JSON path")
        p.add_argument("--output", help="output JSON path (stdout when omitted)")
        p.add_argument("--window", type=float, help="spectral window")
        p.add_argument("--order", type=int, help="reconstruction order override")
        p.add_argument("--truncation", type=int, help="oracle truncation level")
        p.add_argument(
            "--emit-plot", action="store_true", help="write CSV plot samples next to the output"
        )
        p.set_defaults(handler=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (SpectralError, ValueError, OSError) as exc:
        payload = {"error": type(exc).__name__, "detail": {"message": str(exc)}}
        if args.output:
            io.write_json(args.output, payload)
        sys.stderr.write(io.dumps_canonical(payload))
        return 2


if __name__ == "__main__":
    sys.exit(main())
