"""Command-line entry point: ``clarkframes <command> --measure FILE ...``.

Exit codes are 0 on success, 1 when a computed check fails (or the
numerics break down) and 2 for unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .clark import BlaschkeProduct, clark_measure, clark_poisson_residual
from .errors import ClarkFramesError, NumericError
from .frames import frame_deviation_curve, kernel_double_series
from .kaczmarz import DEFAULT_ATOMIZE_DEPTH, L2Vector, carrier, kaczmarz_run
from .measure import AtomicMeasure, fourier_coeffs, measure_from_dict
from .model import InnerFunctionHandle, SERIES, disc_grid, model_kernel
from .report import SCHEMA_VERSION, dumps, spec_hash, write_csv
from .series import frame_polynomial, u_coefficients
from .verify import run_verification

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
PHI_TOL = 1e-9
CLARK_TOL = 1e-9


class UsageError(Exception):
    pass


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _complex_list(text: str) -> list:
    return [_complex(p) for p in text.split(",") if p.strip()]


def _cx(z: complex) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def _load_spec(path: Optional[str]) -> dict:
    if path is None:
        raise UsageError("--measure is required for this command")
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read measure spec {path}: {exc}") from exc


def _check_config(args) -> None:
    if args.terms < 1:
        raise UsageError("--terms must be >= 1")
    if args.tol is not None and not 0 < args.tol < 1:
        raise UsageError("--tol must lie in (0, 1)")
    if not 0 < args.grid_radius < 1:
        raise UsageError("--grid-radius must lie in (0, 1)")
    if args.grid_count < 1:
        raise UsageError("--grid-count must be >= 1")
    if args.depth < 1:
        raise UsageError("--depth must be >= 1")


class _Output:
    """One table (for CSV) plus the full payload (for JSON)."""

    def __init__(self, header, rows, payload: dict, provenance: Optional[dict] = None):
        self.header = header
        self.rows = rows
        self.payload = payload
        self.provenance = provenance

    def render(self, fmt: str, command: str, provenance: dict) -> str:
        if fmt == "csv":
            return write_csv(self.header, self.rows)
        doc = {"schemaVersion": SCHEMA_VERSION, "command": command, "provenance": provenance}
        doc.update(self.payload)
        return dumps(doc) + "\n"


def cmd_coeffs(mu, args) -> tuple[_Output, int]:
    c = fourier_coeffs(mu, args.terms)
    rows = [(n, float(v.real), float(v.imag)) for n, v in enumerate(c)]
    return _Output(["n", "re", "im"], rows,
                   {"coefficients": [{"n": n, "re": r, "im": i} for n, r, i in rows]}), EXIT_OK


def cmd_phi(mu, args) -> tuple[_Output, int]:
    tol = PHI_TOL if args.tol is None else args.tol
    h = InnerFunctionHandle(mu, terms=args.terms)
    grid = disc_grid(args.grid_radius, args.grid_count)
    ratio = np.asarray(h(grid))
    series = np.asarray(h.with_mode(SERIES)(grid))
    residual = float(np.max(np.abs(ratio - series)))
    coeffs = h.series.coefficients
    rows = [(n, float(v.real), float(v.imag)) for n, v in enumerate(coeffs)]
    payload = {
        "taylor": [{"n": n, "re": r, "im": i} for n, r, i in rows],
        "grid": [{"z": _cx(z), "ratio": _cx(a), "series": _cx(b)} for z, a, b in zip(grid, ratio, series)],
        "twoPathResidual": residual, "tolerance": tol, "pass": residual < tol,
    }
    return _Output(["n", "re", "im"], rows, payload), EXIT_OK if residual < tol else EXIT_FAIL


def cmd_verify(mu, args, spec) -> tuple[_Output, int]:
    report = run_verification(mu, terms=args.terms, tol=1e-6 if args.tol is None else args.tol,
                              grid_radius=args.grid_radius, grid_count=args.grid_count,
                              depth=args.depth, phi_zeros=args.phi_zeros, spec=spec)
    d = report.as_dict()
    out = _Output(["name", "residual", "tolerance", "sense", "pass"],
                  [(c.name, c.residual, c.tolerance, c.sense, c.passed) for c in report.checks],
                  {k: v for k, v in d.items() if k not in ("schemaVersion", "provenance")},
                  provenance=d["provenance"])
    return out, EXIT_OK if report.passed else EXIT_FAIL


def cmd_frame(mu, args) -> tuple[_Output, int]:
    u = u_coefficients(mu, args.terms)
    polys = [frame_polynomial(n, u) for n in range(args.terms + 1)]
    rows = [(p.n, k, float(c.real), float(c.imag))
            for p in polys for k, c in enumerate(p.coefficients)]
    payload = {"polynomials": [{"n": p.n, "coefficients": [_cx(c) for c in p.coefficients]}
                               for p in polys]}
    if isinstance(mu, AtomicMeasure):
        curve = frame_deviation_curve(mu, u, list(range(args.terms + 1)))
        payload["deviation"] = [{"N": n, "value": float(v)} for n, v in enumerate(curve)]
    return _Output(["n", "k", "re", "im"], rows, payload), EXIT_OK


def cmd_kaczmarz(mu, args) -> tuple[_Output, int]:
    cmu = carrier(mu, args.depth)
    if not 0 <= args.target_atom < len(cmu):
        raise UsageError(f"--target-atom must lie in [0, {len(cmu) - 1}]")
    trace = kaczmarz_run(cmu, L2Vector.indicator(cmu, args.target_atom), args.terms)
    rows = [(n, float(r)) for n, r in enumerate(trace.residual_norms)]
    payload = {"targetAtom": args.target_atom, "atoms": len(cmu),
               "residuals": [{"n": n, "residual": r} for n, r in rows],
               "monotone": trace.is_monotone()}
    return _Output(["n", "residual"], rows, payload), EXIT_OK


def cmd_clark(args) -> tuple[_Output, int]:
    if not args.zeros:
        raise UsageError("--zeros is required for clark")
    B = BlaschkeProduct(args.zeros)
    atoms = clark_measure(B, args.alpha)
    grid = disc_grid(args.grid_radius, args.grid_count)
    residual = float(np.max(clark_poisson_residual(B, atoms, grid)))
    tol = CLARK_TOL if args.tol is None else args.tol
    rows = [(float(t), float(z.real), float(z.imag), float(w))
            for t, z, w in zip(atoms.t, atoms.points, atoms.weights)]
    payload = {"zeros": [_cx(a) for a in B.zeros], "alpha": _cx(atoms.alpha),
               "atoms": [{"t": t, "re": r, "im": i, "weight": w} for t, r, i, w in rows],
               "poissonResidual": residual, "tolerance": tol, "pass": residual < tol}
    return _Output(["t", "re", "im", "weight"], rows, payload), EXIT_OK if residual < tol else EXIT_FAIL


def cmd_kernel(mu, args) -> tuple[_Output, int]:
    h = InnerFunctionHandle(mu, terms=args.terms)
    value = complex(model_kernel(h, args.z, args.w))
    payload = {"z": _cx(args.z), "w": _cx(args.w), "kernel": _cx(value)}
    row = [float(value.real), float(value.imag)]
    header = ["re", "im"]
    if isinstance(mu, AtomicMeasure) and max(abs(args.z), abs(args.w)) <= 0.8:
        u = u_coefficients(mu, args.terms)
        res = kernel_double_series(mu, u, h, args.z, args.w, args.terms)
        payload["doubleSeries"] = _cx(res.value)
        payload["difference"] = res.difference
        payload["tailEstimate"] = res.tail_estimate
        header += ["series_re", "series_im", "difference"]
        row += [float(res.value.real), float(res.value.imag), res.difference]
    return _Output(header, [row], payload), EXIT_OK


COMMANDS = ("coeffs", "phi", "verify", "frame", "kaczmarz", "clark", "kernel")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clarkframes",
                                description="Fourier frames, inner functions and Clark measures on the circle.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--measure", metavar="FILE", help="measure spec (JSON)")
    p.add_argument("--terms", type=int, default=256, metavar="N")
    p.add_argument("--tol", type=float, default=None, metavar="X")
    p.add_argument("--grid-radius", type=float, default=0.9, metavar="R")
    p.add_argument("--grid-count", type=int, default=100, metavar="K")
    p.add_argument("--depth", type=int, default=DEFAULT_ATOMIZE_DEPTH, metavar="D",
                   help="atomization depth for self-similar measures")
    p.add_argument("--output", metavar="FILE", help="write here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--zeros", type=_complex_list, help="Blaschke zeros, comma separated (clark)")
    p.add_argument("--alpha", type=_complex, default=1.0, help="unimodular parameter (clark)")
    p.add_argument("--z", type=_complex, default=0.0)
    p.add_argument("--w", type=_complex, default=0.0)
    p.add_argument("--target-atom", type=int, default=0,
                   help="index of the atom whose indicator is reconstructed (kaczmarz)")
    p.add_argument("--phi-zeros", type=_complex_list,
                   help="test membership against this Blaschke product instead (verify)")
    return p


def run(args) -> tuple[str, int]:
    _check_config(args)
    provenance: dict = {"terms": args.terms, "depth": args.depth}
    if args.command == "clark":
        out, code = cmd_clark(args)
    else:
        spec = _load_spec(args.measure)
        mu = measure_from_dict(spec)
        provenance["measureSpecHash"] = spec_hash(spec)
        if args.command == "verify":
            out, code = cmd_verify(mu, args, spec)
            provenance = out.provenance
        else:
            handler = {"coeffs": cmd_coeffs, "phi": cmd_phi, "frame": cmd_frame,
                       "kaczmarz": cmd_kaczmarz, "kernel": cmd_kernel}[args.command]
            out, code = handler(mu, args)
    return out.render(args.format, args.command, provenance), code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        text, code = run(args)
    except NumericError as exc:
        print(f"clarkframes: numeric failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, ClarkFramesError, ValueError, IndexError, MemoryError) as exc:
        print(f"clarkframes: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
