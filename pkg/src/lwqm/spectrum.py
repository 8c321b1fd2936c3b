"""Discrete spectrum of the Dirichlet problem on (sigma + x0, inf)."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import PoleError
from .model import ModelParams, SolutionHandle, hyp_params
from .numerics import Bracket, Tolerance, find_root
from .specialfn import kummer_1f1

log = logging.getLogger(__name__)

#: tight defaults for spectral refinement; levels near 0 need a small absolute floor
SPECTRUM_TOL = Tolerance(abs_tol=1e-15, rel_tol=1e-15, max_iter=200)


@dataclass(frozen=True)
class BoundState:
    index: int
    energy: float
    solution: SolutionHandle

    def __call__(self, x: float) -> float:
        return self.solution(x)

    def dx(self, x: float) -> float:
        return self.solution.dx(x)

    def dE(self, x: float) -> float:
        return self.solution.dE(x)


@dataclass(frozen=True)
class Spectrum:
    params: ModelParams
    energies: Tuple[float, ...]

    @property
    def count(self) -> int:
        return len(self.energies)

    def __len__(self) -> int:
        return len(self.energies)

    def __iter__(self):
        return iter(self.energies)


def _terms(E: float, params: ModelParams) -> tuple[float, float]:
    a, c, s = hyp_params(E, params)
    num = (s - c) * kummer_1f1(a + 1, c + 1, s)
    den = 2.0 * c * kummer_1f1(a, c, s)
    return num, den


def eigenvalue_equation(E: float, params: ModelParams) -> float:
    """``1 + (s - c) M(a+1, c+1, s) / (2 c M(a, c, s))``; zero at bound-state energies."""
    num, den = _terms(E, params)
    if den == 0.0 or not math.isfinite(den):
        raise PoleError(f"eigenvalue equation has a pole at E={E}", location=E)
    return 1.0 + num / den


def _denominator(E: float, params: ModelParams) -> float:
    return _terms(E, params)[1]


def scan_grid(params: ModelParams, n_points: int = 2000, floor_factor: float = 4.0,
              eps: float = 1e-10) -> np.ndarray:
    """Energies from ``-floor_factor*V0`` up to ``-eps``, log-spaced toward 0-."""
    return -np.geomspace(floor_factor * params.v0, eps, n_points)


def solve_spectrum(params: ModelParams, search: Tolerance = SPECTRUM_TOL,
                   n_points: int = 2000, floor_factor: float = 4.0,
                   eps: float = 1e-10) -> Spectrum:
    """All bound-state energies, ascending.

    The eigenvalue equation is sampled on :func:`scan_grid`.  A sign change of
    the equation counts as a root only if the denominator M(a, c, s) keeps its
    sign over the cell; cells containing a pole are split at the pole first.
    """
    grid = scan_grid(params, n_points, floor_factor, eps)
    f = lambda e: eigenvalue_equation(e, params)  # noqa: E731
    den = lambda e: _denominator(e, params)  # noqa: E731
    num_vals = []
    den_vals = []
    for e in grid:
        n_, d_ = _terms(float(e), params)
        num_vals.append(n_)
        den_vals.append(d_)
    roots = []
    for i in range(len(grid) - 1):
        lo, hi = float(grid[i]), float(grid[i + 1])
        dlo, dhi = den_vals[i], den_vals[i + 1]
        flo = 1.0 + num_vals[i] / dlo
        fhi = 1.0 + num_vals[i + 1] / dhi
        if np.sign(dlo) == np.sign(dhi):
            if np.sign(flo) != np.sign(fhi):
                roots.append(find_root(f, Bracket(lo, hi, flo, fhi), search))
            continue
        # pole inside: locate it and test both sides separately
        pole = find_root(den, Bracket(lo, hi, dlo, dhi), search)
        log.debug("pole of the eigenvalue equation near E=%.12g", pole)
        delta = max(1e-12 * abs(pole), 1e-300)
        for a, b in ((lo, pole - delta), (pole + delta, hi)):
            if not a < b:
                continue
            try:
                fa, fb = f(a), f(b)
            except PoleError:
                continue
            # across the pole f jumps through infinity; only same-side sign changes are roots
            if np.sign(fa) != np.sign(fb) and np.sign(den(a)) == np.sign(den(b)):
                roots.append(find_root(f, Bracket(a, b, fa, fb), search))
    roots.sort()
    return Spectrum(params, tuple(roots))


def bound_state(spectrum: Spectrum, n: int) -> BoundState:
    """The n-th bound state (n = 0 is the ground state)."""
    if not 0 <= n < spectrum.count:
        raise IndexError(f"state index {n} out of range for N={spectrum.count}")
    E = spectrum.energies[n]
    return BoundState(n, E, SolutionHandle(spectrum.params, E, "kummer"))
