"""
Sampled curves of the model and its transforms, as :class:`~lwqm.export.TableArtifact`.

Every builder takes the abscissae explicitly and returns one table with the
abscissa in the first column and one column per curve.  Point evaluations
are independent, so they may be spread over threads (see :func:`sample`).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ._version import __version__
from .dirac import inverse_x_potential, matrix_zero_energy_state, probability_density
from .energydep import _rate, energy_cal, phi, potential_u
from .errors import DomainError, PrecisionLoss
from .export import TableArtifact
from .model import ModelParams, potential_v, psi
from .spectrum import Spectrum, bound_state, solve_spectrum
from .susy import (confluent_chain, normalize, susy_confluent, susy_order1, susy_order2,
                   transformed_potential)

GRID_KINDS = ("potential", "psi", "phi-energydep", "susy1", "susy2", "susy-confluent",
              "u-energydep", "dirac-density")


def thread_count() -> int:
    """Worker count from ``LWQM_THREADS``: unset or 1 is sequential, 0 means one per CPU."""
    raw = os.environ.get("LWQM_THREADS")
    if raw is None or raw.strip() == "":
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise DomainError(f"LWQM_THREADS must be an integer, got {raw!r}") from exc
    if n < 0:
        raise DomainError(f"LWQM_THREADS must be non-negative, got {n}")
    return n if n > 0 else (os.cpu_count() or 1)


def sample(f: Callable[[float], float], xs: Sequence[float]) -> List[float]:
    """``[f(x) for x in xs]``, possibly in parallel; the order of results is always that of ``xs``."""
    xs = [float(x) for x in xs]
    n = thread_count()
    if n == 1 or len(xs) < 2:
        return [f(x) for x in xs]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(f, xs))


def nan_on_precision_loss(f: Callable[[float], float]) -> Callable[[float], float]:
    """``f`` with points it cannot evaluate accurately reported as NaN (null in JSON)."""
    def g(x: float) -> float:
        try:
            return f(x)
        except PrecisionLoss:
            return math.nan
    return g


@dataclass(frozen=True)
class Axis:
    """Closed sampling interval ``[lo, hi]`` with ``samples`` equally spaced points."""

    lo: float
    hi: float
    samples: int

    def __post_init__(self):
        if self.samples < 1:
            raise DomainError(f"need at least one sample, got {self.samples}")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo <= self.hi:
            raise DomainError(f"invalid range {self.lo}:{self.hi}")

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.samples)


def _meta(kind: str, params: ModelParams, **extra) -> Dict:
    meta = {"kind": kind, "sigma": params.sigma, "x0": params.x0, "v0": params.v0,
            "version": __version__}
    meta.update(extra)
    return meta


def _require_inside(axis: Axis, params: ModelParams, what: str = "x") -> None:
    if not axis.lo > params.left:
        raise DomainError(f"{what} range must lie strictly right of sigma + x0 = {params.left}")


def default_x_axis(params: ModelParams, samples: int = 400) -> Axis:
    return Axis(params.left + 1e-3 * params.sigma, params.left + 6.0 * params.sigma, samples)


def _states(spec: Spectrum, ns: Sequence[int]):
    return [bound_state(spec, n) for n in ns]


# ---------------------------------------------------------------------------
# base model
# ---------------------------------------------------------------------------

def potential_grid(params: ModelParams, axis: Axis) -> TableArtifact:
    _require_inside(axis, params)
    xs = axis.points()
    v = sample(lambda x: potential_v(x, params), xs)
    return TableArtifact.build(("x", "V"), zip(xs, v), _meta("potential", params))


def psi_grid(params: ModelParams, axis: Axis, ns: Optional[Sequence[int]] = None,
             energies: Optional[Sequence[float]] = None,
             spectrum: Optional[Spectrum] = None) -> TableArtifact:
    """Unnormalised solutions psi at the levels ``ns`` (default: all) or at explicit energies."""
    _require_inside(axis, params)
    xs = axis.points()
    if energies is not None:
        labels = [f"psi_E{j}" for j in range(len(energies))]
        es = list(energies)
    else:
        spectrum = spectrum or solve_spectrum(params)
        ns = list(range(spectrum.count)) if ns is None else list(ns)
        es = [bound_state(spectrum, n).energy for n in ns]
        labels = [f"psi_{n}" for n in ns]
    cols = [sample(lambda x, E=E: psi(x, E, params), xs) for E in es]
    return TableArtifact.build(("x", *labels), zip(xs, *cols),
                               _meta("psi", params, energies=[float(e) for e in es]))


# ---------------------------------------------------------------------------
# energy-dependent picture
# ---------------------------------------------------------------------------

def default_y_axis(rates: Sequence[float], samples: int = 400, overlap: bool = False) -> Axis:
    """y from t = exp(-k y) = 60 down to t = 1e-6 for the slowest map among ``rates``.

    With ``overlap`` the left end is taken from the fastest map instead, so
    that no curve is sampled where its t overflows.
    """
    k = min(rates)
    k_left = max(rates) if overlap else k
    return Axis(-math.log(60.0) / k_left, math.log(1e6) / k, samples)


def phi_energydep_grid(params: ModelParams, axis: Optional[Axis] = None,
                       ns: Optional[Sequence[int]] = None, samples: int = 400,
                       spectrum: Optional[Spectrum] = None) -> TableArtifact:
    """Energy-dependent states at the levels ``ns`` (default: the first three that exist)."""
    spectrum = spectrum or solve_spectrum(params)
    if ns is None:
        ns = tuple(range(min(3, spectrum.count)))
    if not ns:
        raise DomainError("the model has no bound states")
    states = _states(spectrum, ns)
    axis = axis or default_y_axis([_rate(s.energy) for s in states], samples)
    ys = axis.points()
    cols = [sample(lambda y, s=s: phi(y, s), ys) for s in states]
    cal = [energy_cal(s.energy) for s in states]
    return TableArtifact.build(("y", *[f"phi_{n}" for n in ns]), zip(ys, *cols),
                               _meta("phi-energydep", params, cal_energies=cal))


def u_energydep_grid(params: ModelParams, axis: Optional[Axis] = None,
                     energies: Optional[Sequence[float]] = None,
                     cal_energies: Optional[Sequence[float]] = None,
                     samples: int = 400) -> TableArtifact:
    """U(y, cal_E) for parameter values E (mapped forward) or for stationary energies directly."""
    if cal_energies is None:
        from .reference_values import POTENTIAL_CURVE_ENERGIES
        energies = POTENTIAL_CURVE_ENERGIES if energies is None else energies
        cal_energies = [energy_cal(E) for E in energies]
        labels = [f"U_E{E:g}" for E in energies]
    else:
        labels = [f"U_cal{c:g}" for c in cal_energies]
    for c in cal_energies:
        if not c > 0:
            raise DomainError(f"cal_E must be positive, got {c}")
    axis = axis or default_y_axis([math.sqrt(2.0 * c) for c in cal_energies], samples, overlap=True)
    ys = axis.points()
    cols = [sample(lambda y, c=c: potential_u(y, c, params), ys) for c in cal_energies]
    return TableArtifact.build(("y", *labels), zip(ys, *cols),
                               _meta("u-energydep", params, cal_energies=list(cal_energies)))


# ---------------------------------------------------------------------------
# SUSY partners
# ---------------------------------------------------------------------------

#: default target states and transformation functions of the three SUSY variants
SUSY_DEFAULTS = {"susy1": ((1, 2, 3), (0,)), "susy2": ((2, 3, 4), (0, 1)),
                 "susy-confluent": ((0, 1), (2,))}


def susy_grid(kind: str, params: ModelParams, axis: Axis, ns: Optional[Sequence[int]] = None,
              spectrum: Optional[Spectrum] = None) -> TableArtifact:
    """Initial potential V1, partner V2 and L2-normalised partner states phi_n."""
    _require_inside(axis, params)
    default_ns, us = SUSY_DEFAULTS[kind]
    spectrum = spectrum or solve_spectrum(params)
    if max(us) >= spectrum.count:
        raise DomainError(f"{kind} needs bound state {max(us)}, the model has {spectrum.count}")
    ns = tuple(n for n in default_ns if n < spectrum.count) if ns is None else tuple(ns)
    us_states = _states(spectrum, us)
    partners = []
    for n in ns:
        target = bound_state(spectrum, n)
        if kind == "susy1":
            partners.append(susy_order1(target, us_states[0]))
        elif kind == "susy2":
            partners.append(susy_order2(target, (us_states[0], us_states[1])))
        else:
            partners.append(susy_confluent(target, confluent_chain(us_states[0])))
    spec = partners[0].spec if partners else None
    xs = axis.points()
    v1 = sample(lambda x: potential_v(x, params), xs)
    cols = [v1]
    labels = ["V1"]
    if spec is not None:
        cols.append(sample(nan_on_precision_loss(lambda x: transformed_potential(spec, x)), xs))
        labels.append("V2")
    for n, st in zip(ns, partners):
        f = normalize(st, params, st.energy)
        cols.append(sample(nan_on_precision_loss(f), xs))
        labels.append(f"phi_{n}")
    return TableArtifact.build(("x", *labels), zip(xs, *cols),
                               _meta(kind, params, states=list(ns), transformation=list(us)))


# ---------------------------------------------------------------------------
# Dirac densities
# ---------------------------------------------------------------------------

def parse_ky(token: str, spectrum_energies: Optional[Sequence[float]] = None) -> Tuple[str, float]:
    """A number, or ``sqrt-E<n>`` meaning ``sqrt(-E_n)`` of the computed spectrum."""
    t = token.strip()
    if t.lower().startswith("sqrt-e"):
        if spectrum_energies is None:
            raise DomainError(f"{t!r} needs the spectrum")
        try:
            n = int(t[6:])
            return t, math.sqrt(-spectrum_energies[n])
        except (ValueError, IndexError) as exc:
            raise DomainError(f"bad k_y level reference {t!r}") from exc
    try:
        return t, float(t)
    except ValueError as exc:
        raise DomainError(f"k_y must be a number or sqrt-E<n>, got {t!r}") from exc


def dirac_density_grid(params: ModelParams, axis: Axis, kys: Optional[Sequence[str]] = None,
                       spectrum: Optional[Spectrum] = None) -> TableArtifact:
    """Normalised zero-energy densities for V21 = i/x, V22 = 1 at each k_y.

    Each k_y must equal sqrt(-E_n) for a bound-state energy E_n.  The default
    is ``sqrt-E0, sqrt-E1, sqrt-E2``, limited to the levels that exist.
    """
    _require_inside(axis, params)
    spectrum = spectrum or solve_spectrum(params)
    if kys is None:
        kys = [f"sqrt-E{n}" for n in range(min(3, spectrum.count))]
    xs = axis.points()
    cols, labels, norms, kvals = [], [], [], []
    for tok in kys:
        label, k = parse_ky(tok, spectrum.energies)
        match = [n for n, E in enumerate(spectrum.energies) if abs(E + k * k) <= 1e-8 * max(1.0, abs(E))]
        if not match:
            raise DomainError(f"k_y={k} does not match any bound-state energy -k_y^2")
        z = matrix_zero_energy_state(inverse_x_potential(params, k), bound_state(spectrum, match[0]))
        g = probability_density(xs, z)
        cols.append(list(g.y))
        labels.append(f"rho_{label.replace('-', '_')}")
        norms.append(g.norm)
        kvals.append(k)
    return TableArtifact.build(("x", *labels), zip(xs, *cols),
                               _meta("dirac-density", params, k_y=kvals, raw_density_integrals=norms))
