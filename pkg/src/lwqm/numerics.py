"""
Numerical kernels: bracketed root refinement, adaptive quadrature on finite
and semi-infinite intervals, and Richardson-extrapolated differentiation.

Root finding and finite quadrature delegate to ``scipy.optimize.brentq`` and
QUADPACK's adaptive Gauss-Kronrod driver (``scipy.integrate.quad``); this
module owns the contracts, error types and the semi-infinite mapping.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, optimize

from .errors import DivergentTail, InvalidBracket, NoConvergence, StepUnderflow


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if int(self.max_iter) < 1:
            raise ValueError("max_iter must be >= 1")


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidBracket(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if np.sign(self.f_lo) == np.sign(self.f_hi) and self.f_lo != 0 and self.f_hi != 0:
            raise InvalidBracket(
                f"f has the same sign at both ends of [{self.lo}, {self.hi}]")

    @classmethod
    def from_function(cls, f: Callable[[float], float], lo: float, hi: float) -> "Bracket":
        return cls(lo, hi, f(lo), f(hi))


def find_root(f: Callable[[float], float], bracket: Bracket,
              tol: Tolerance = DEFAULT_TOL) -> float:
    """Root of ``f`` inside ``bracket`` by Brent's method.

    The result stays inside the initial bracket.  Raises ``NoConvergence`` if
    ``tol.max_iter`` is exhausted.
    """
    if bracket.f_lo == 0:
        return bracket.lo
    if bracket.f_hi == 0:
        return bracket.hi
    rtol = max(tol.rel_tol, 4 * np.finfo(float).eps)
    try:
        root, info = optimize.brentq(f, bracket.lo, bracket.hi, xtol=tol.abs_tol,
                                     rtol=rtol, maxiter=int(tol.max_iter),
                                     full_output=True, disp=False)
    except ValueError as exc:
        raise InvalidBracket(str(exc)) from exc
    if not info.converged:
        raise NoConvergence(f"brentq stopped after {info.iterations} iterations")
    return float(root)


def quad_finite(f: Callable[[float], float], a: float, b: float,
                tol: Tolerance = DEFAULT_TOL,
                points: Optional[Sequence[float]] = None,
                limit: int = 500) -> float:
    """Adaptive Gauss-Kronrod quadrature of a real integrand over ``[a, b]``.

    Integrable endpoint singularities are fine (QUADPACK's extrapolation
    handles them).  ``points`` are optional interior breakpoints.
    """
    if a == b:
        return 0.0
    if points is not None:
        points = [p for p in points if min(a, b) < p < max(a, b)] or None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, info = _quad(f, a, b, tol, points, limit)[:3]
    target = max(tol.abs_tol, tol.rel_tol * abs(val))
    if not math.isfinite(val) or err > 100 * target and err > 1e3 * np.finfo(float).eps * abs(val):
        raise NoConvergence(
            f"quadrature on [{a}, {b}] reached error {err:.3g} (target {target:.3g})")
    return float(val)


def _quad(f, a, b, tol, points, limit):
    out = integrate.quad(f, a, b, epsabs=tol.abs_tol, epsrel=tol.rel_tol,
                         points=points, limit=limit, full_output=1)
    return out[0], out[1], out[2]


def quad_semi_infinite(f: Callable[[float], float], a: float,
                       tol: Tolerance = DEFAULT_TOL, scale: float = 1.0) -> float:
    """Integral of ``f`` over ``[a, inf)``.

    Maps ``t = a + scale * u / (1 - u)`` onto ``u in [0, 1)`` and integrates
    the transformed integrand with :func:`quad_finite`.  ``scale`` should be of
    the order of the decay length of ``f``.
    """
    def g(u: float) -> float:
        if u >= 1.0:
            return 0.0
        om = 1.0 - u
        return f(a + scale * u / om) * scale / (om * om)

    with np.errstate(over="ignore", invalid="ignore"):
        near = abs(g(1.0 - 1e-4))
        far = abs(g(1.0 - 1e-8))
    if not math.isfinite(far) or far > 100.0 * max(near, 1e-300) and far > 1e-300:
        raise DivergentTail(f"integrand tail does not decay beyond t={a}")
    return quad_finite(g, 0.0, 1.0, tol)


#: restarts of the Ridders tableau from ten times smaller first steps
RIDDERS_RESTARTS = 4
#: error estimate, relative to the derivative, below which no restart is tried
RIDDERS_ACCEPT = 1e-8


def derivative(f: Callable[[float], complex], x: float, order: int = 1,
               tol: Tolerance = DEFAULT_TOL, h: Optional[float] = None):
    """Central-difference derivative of order 1 or 2 with Richardson extrapolation.

    Ridders' tableau: the step shrinks by 1.4 per row and the best
    extrapolated entry is returned.  Works for real- and complex-valued ``f``.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if h is None:
        h = 0.1 * max(1.0, abs(x)) if order == 1 else 0.2 * max(1.0, abs(x))
    best, err = _ridders(f, x, order, tol, h)
    # a first step over which f changes by many orders of magnitude spoils
    # the whole tableau; start again from smaller steps in that case
    for _ in range(RIDDERS_RESTARTS):
        if err <= RIDDERS_ACCEPT * abs(best):
            break
        h /= 10.0
        try:
            cand, cerr = _ridders(f, x, order, tol, h)
        except StepUnderflow:
            break
        if cerr < err:
            best, err = cand, cerr
    return best


def _ridders(f, x: float, order: int, tol: Tolerance, h: float):
    con, con2 = 1.4, 1.96
    ntab = 12

    def stencil(hh):
        if hh <= 8 * np.finfo(float).eps * max(1.0, abs(x)):
            raise StepUnderflow(f"difference step {hh:.3g} underflowed at x={x}")
        if order == 1:
            return (f(x + hh) - f(x - hh)) / (2.0 * hh)
        return (f(x + hh) - 2.0 * f(x) + f(x - hh)) / (hh * hh)

    a = [[0j] * ntab for _ in range(ntab)]
    a[0][0] = stencil(h)
    best, err = a[0][0], math.inf
    for i in range(1, ntab):
        h /= con
        a[0][i] = stencil(h)
        fac = con2
        for j in range(1, i + 1):
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0)
            fac *= con2
            e = max(abs(a[j][i] - a[j - 1][i]), abs(a[j][i] - a[j - 1][i - 1]))
            if e <= err:
                err, best = e, a[j][i]
        if abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * err:
            break
        # converged relative to the value itself; an absolute test would stop
        # immediately for functions that are tiny in magnitude
        if err <= 1e-3 * tol.rel_tol * abs(best):
            break
    return best, err
