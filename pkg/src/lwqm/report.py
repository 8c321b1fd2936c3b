"""Full reproduction run: every figure data set as CSV plus PNG, and every verification table."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from .export import TableArtifact, render, write_atomic
from .grids import (Axis, default_x_axis, dirac_density_grid, phi_energydep_grid, potential_grid,
                    psi_grid, susy_grid, u_energydep_grid)
from .errors import DomainError
from .model import PAPER_REFERENCE, ModelParams
from .plotting import save_png
from .spectrum import Spectrum, solve_spectrum
from .verification import VERIFY_KINDS, verify

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PlotView:
    """One image drawn from a figure table."""

    suffix: str
    columns: Optional[Tuple[str, ...]] = None
    scale_each: bool = False
    ylim: Optional[Tuple[float, float]] = None


@dataclass(frozen=True)
class FigureSpec:
    name: str
    title: str
    build: Callable[[ModelParams, Spectrum], TableArtifact]
    views: Tuple[PlotView, ...] = field(default=(PlotView(""),))


def _vwin(params: ModelParams) -> Tuple[float, float]:
    return (-3.0 * params.v0, 1.5 * params.v0)


def _susy(kind: str):
    return lambda p, s: susy_grid(kind, p, default_x_axis(p), spectrum=s)


def figure_catalog(params: ModelParams) -> Tuple[FigureSpec, ...]:
    near = Axis(params.left + 1e-3 * params.sigma, params.left + 3.0 * params.sigma, 400)
    states = PlotView("_states", scale_each=False)
    return (
        FigureSpec("potential", "Lambert-W potential",
                   lambda p, s: potential_grid(p, default_x_axis(p)),
                   (PlotView("", ylim=_vwin(params)),)),
        FigureSpec("psi", "Bound states (unnormalised, scaled)",
                   lambda p, s: psi_grid(p, default_x_axis(p), spectrum=s),
                   (PlotView("", scale_each=True),)),
        FigureSpec("u_energydep", "Energy-dependent potential (scaled)",
                   lambda p, s: u_energydep_grid(p),
                   (PlotView("", scale_each=True),)),
        FigureSpec("phi_energydep", "Energy-dependent states (scaled)",
                   lambda p, s: phi_energydep_grid(p, spectrum=s),
                   (PlotView("", scale_each=True),)),
        FigureSpec("susy1", "First-order SUSY partner", _susy("susy1"),
                   (states, PlotView("_potential", ("V1", "V2"), ylim=_vwin(params)))),
        FigureSpec("susy2", "Second-order SUSY partner", _susy("susy2"),
                   (states, PlotView("_potential", ("V1", "V2"), ylim=_vwin(params)))),
        FigureSpec("susy_confluent", "Confluent SUSY partner", _susy("susy-confluent"),
                   (states, PlotView("_potential", ("V1", "V2"), ylim=_vwin(params)))),
        FigureSpec("dirac_density", "Zero-energy Dirac densities, V21 = i/x, V22 = 1",
                   lambda p, s: dirac_density_grid(p, near, spectrum=s)),
    )


def _state_columns(table: TableArtifact, view: PlotView) -> Optional[Tuple[str, ...]]:
    if view.suffix == "_states":
        return tuple(c for c in table.columns[1:] if c.startswith("phi_"))
    return view.columns


def run_report(params: ModelParams, out_dir: Path, fmt: str = "csv",
               images: bool = True, verify_tables: bool = True) -> Dict[str, object]:
    """Write figure data, images and verification tables into ``out_dir``; return a summary.

    Figures that need more bound states than the model has are listed under
    ``skipped``.  Published tables exist only for the reference parameters,
    so verification runs only there.
    """
    out_dir = Path(out_dir)
    spectrum = solve_spectrum(params)
    summary: Dict[str, object] = {"figures": [], "skipped": {}, "verification": {}}
    write_atomic(out_dir / f"spectrum.{fmt}", render(TableArtifact.build(
        ("n", "energy"), list(enumerate(spectrum.energies)), {"count": spectrum.count}), fmt))
    for fig in figure_catalog(params):
        log.info("building %s", fig.name)
        try:
            table = fig.build(params, spectrum)
        except (DomainError, IndexError) as exc:
            # e.g. a SUSY variant whose transformation level does not exist here
            log.info("skipping %s: %s", fig.name, exc)
            summary["skipped"][fig.name] = str(exc)
            continue
        write_atomic(out_dir / f"{fig.name}.{fmt}", render(table, fmt))
        files: List[str] = [f"{fig.name}.{fmt}"]
        if images:
            for view in fig.views:
                png = f"{fig.name}{view.suffix}.png"
                save_png(table, out_dir / png, title=fig.title, scale_each=view.scale_each,
                         columns=_state_columns(table, view), ylim=view.ylim)
                files.append(png)
        summary["figures"].append({"name": fig.name, "files": files})
    if verify_tables and params == PAPER_REFERENCE:
        for kind in VERIFY_KINDS:
            res = verify(kind, params, spectrum=spectrum)
            write_atomic(out_dir / f"verify_{kind}.{fmt}", render(res.table, fmt))
            summary["verification"][kind] = res.passed
    write_atomic(out_dir / "summary.json", json.dumps(summary, indent=1, sort_keys=True) + "\n")
    return summary
