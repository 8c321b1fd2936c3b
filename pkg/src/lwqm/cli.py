"""
Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO

from ._version import __version__
from .errors import DegenerateMap, DomainError, LwqmError, VanishingTransform
from .export import TableArtifact, render, write_atomic
from .grids import (GRID_KINDS, Axis, default_x_axis, dirac_density_grid, phi_energydep_grid,
                    potential_grid, psi_grid, susy_grid, thread_count, u_energydep_grid)
from .model import PAPER_REFERENCE, ModelParams
from .numerics import Tolerance
from .spectrum import SPECTRUM_TOL, solve_spectrum
from .verification import VERIFY_KINDS, verify

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

#: errors caused by the request rather than by the numerics
CONFIG_ERRORS = (DomainError, DegenerateMap, VanishingTransform, IndexError, ValueError)


class ConfigError(Exception):
    """Invalid command-line configuration."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _floats(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _range(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from exc


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model")
    g.add_argument("--sigma", type=float, help="width sigma > 0")
    g.add_argument("--x0", type=float, help="shift x0")
    g.add_argument("--v0", type=float, help="depth V0 > 0")
    g.add_argument("--paper-reference", action="store_true",
                   help="sigma = 5, x0 = -5, V0 = 5 (also the default when no model flag is given)")
    o = p.add_argument_group("output")
    o.add_argument("--format", choices=("csv", "json"), default="csv")
    o.add_argument("--out", type=Path, help="output file (default: standard output)")
    o.add_argument("--tol", type=float, help="relative tolerance")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lwqm", description="Exactly solvable Lambert-W quantum models.")
    parser.add_argument("--version", action="version", version=f"lwqm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("spectrum", help="bound-state energies")
    _common(sp)

    gp = sub.add_parser("grid", help="sampled curves for plotting")
    _common(gp)
    gp.add_argument("--which", required=True, choices=GRID_KINDS)
    gp.add_argument("--n", type=_ints, help="state indices, comma separated")
    gp.add_argument("--energy", type=_floats, help="energies (psi) or map parameters E (u-energydep)")
    gp.add_argument("--cal-energy", type=_floats, help="stationary energies (u-energydep)")
    gp.add_argument("--ky", help="transverse wave numbers, numbers or sqrt-E<n>, comma separated")
    gp.add_argument("--range", type=_range, help="sampling interval LO:HI (use --range=LO:HI if LO < 0)")
    gp.add_argument("--samples", type=int, default=400)
    gp.add_argument("--plot", type=Path, help="also render the curves to this PNG file")

    vp = sub.add_parser("verify", help="compare with published tables")
    _common(vp)
    vp.add_argument("--which", required=True, choices=VERIFY_KINDS)

    rp = sub.add_parser("report", help="all figure data, images and verification tables")
    _common(rp)
    rp.add_argument("--no-images", action="store_true", help="skip PNG rendering")

    mp = sub.add_parser("repro", help="replay an expectation manifest")
    mp.add_argument("manifest", type=Path, help="manifest file")
    mp.add_argument("-v", "--verbose", action="store_true")
    return parser


def resolve_params(args) -> ModelParams:
    given = {k: getattr(args, k) for k in ("sigma", "x0", "v0") if getattr(args, k) is not None}
    if args.paper_reference and given:
        raise ConfigError("--paper-reference cannot be combined with --sigma/--x0/--v0")
    ref = {"sigma": PAPER_REFERENCE.sigma, "x0": PAPER_REFERENCE.x0, "v0": PAPER_REFERENCE.v0}
    ref.update(given)
    return ModelParams(**ref)


def _axis(args, params: ModelParams, default: Optional[Axis]) -> Optional[Axis]:
    if args.samples < 1:
        raise ConfigError(f"--samples must be positive, got {args.samples}")
    if args.range is not None:
        return Axis(args.range[0], args.range[1], args.samples)
    if default is None:
        return None
    return Axis(default.lo, default.hi, args.samples)


def cmd_spectrum(args, params: ModelParams) -> tuple[TableArtifact, int]:
    search = SPECTRUM_TOL if args.tol is None else Tolerance(SPECTRUM_TOL.abs_tol, args.tol, SPECTRUM_TOL.max_iter)
    spec = solve_spectrum(params, search)
    meta = {"kind": "spectrum", "sigma": params.sigma, "x0": params.x0, "v0": params.v0,
            "count": spec.count, "version": __version__}
    return TableArtifact.build(("n", "energy"), list(enumerate(spec.energies)), meta), EXIT_OK


def cmd_grid(args, params: ModelParams) -> tuple[TableArtifact, int]:
    which = args.which
    if which == "potential":
        table = potential_grid(params, _axis(args, params, default_x_axis(params)))
    elif which == "psi":
        table = psi_grid(params, _axis(args, params, default_x_axis(params)), ns=args.n,
                         energies=args.energy)
    elif which == "phi-energydep":
        table = phi_energydep_grid(params, _axis(args, params, None), ns=args.n,
                                   samples=args.samples)
    elif which == "u-energydep":
        table = u_energydep_grid(params, _axis(args, params, None), energies=args.energy,
                                 cal_energies=args.cal_energy, samples=args.samples)
    elif which in ("susy1", "susy2", "susy-confluent"):
        table = susy_grid(which, params, _axis(args, params, default_x_axis(params)), ns=args.n)
    else:
        kys = args.ky.split(",") if args.ky else None
        d = Axis(params.left + 1e-3 * params.sigma, params.left + 3.0 * params.sigma, args.samples)
        table = dirac_density_grid(params, _axis(args, params, d), kys)
    if args.plot is not None:
        from .plotting import save_png
        save_png(table, args.plot, title=which, scale_each=which not in ("potential", "dirac-density"))
    return table, EXIT_OK


def cmd_verify(args, params: ModelParams) -> tuple[TableArtifact, int]:
    res = verify(args.which, params, args.tol)
    return res.table, EXIT_OK if res.passed else EXIT_VERIFY


def _emit(table: TableArtifact, args, stdout: TextIO) -> None:
    text = render(table, args.format)
    if args.out is None:
        stdout.write(text)
    else:
        write_atomic(args.out, text)


def _run(args, stdout: TextIO) -> int:
    thread_count()  # validate LWQM_THREADS early
    if args.command == "repro":
        from .manifest import load_manifest, run_manifest
        report = run_manifest(load_manifest(args.manifest))
        stdout.write(report.render())
        return EXIT_OK if report.passed else EXIT_VERIFY
    params = resolve_params(args)
    if args.tol is not None and not args.tol > 0:
        raise ConfigError(f"--tol must be positive, got {args.tol}")
    if args.command == "report":
        if args.out is None:
            raise ConfigError("report needs --out DIRECTORY")
        from .report import run_report
        summary = run_report(params, args.out, args.format, images=not args.no_images)
        ok = all(summary["verification"].values())
        stdout.write(f"wrote {len(summary['figures'])} figure data sets to {args.out}\n")
        return EXIT_OK if ok else EXIT_VERIFY
    handler = {"spectrum": cmd_spectrum, "grid": cmd_grid, "verify": cmd_verify}[args.command]
    table, code = handler(args, params)
    _emit(table, args, stdout)
    return code


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
         stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        stderr.write(f"lwqm: configuration error: {exc}\n")
        return EXIT_CONFIG
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if getattr(args, "verbose", False):
        logging.basicConfig(level=logging.INFO, stream=stderr, format="%(name)s: %(message)s")
    try:
        return _run(args, stdout)
    except ConfigError as exc:
        stderr.write(f"lwqm: configuration error: {exc}\n")
        return EXIT_CONFIG
    except CONFIG_ERRORS as exc:
        stderr.write(f"lwqm: configuration error: {type(exc).__name__}: {exc}\n")
        return EXIT_CONFIG
    except (LwqmError, ArithmeticError) as exc:
        stderr.write(f"lwqm: numerical failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
