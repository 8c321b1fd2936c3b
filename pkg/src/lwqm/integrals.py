"""
Wronskian integration identities for the Lambert-W solutions.

With psi_E = d psi/dE and W[f, g] = f g' - f' g:

    int_p^x psi^2                       = W[psi, psi_E](p) - W[psi, psi_E](x)
    int_p^x int_p^x1 (psi(x2)/psi(x1))^2 = psi_E/psi |_p - psi_E/psi |_x
                                          + W[psi, psi_E](p) int_p^x psi^-2

and the last integral is replaced by v/psi |_p^x with v = psi_dagger / W[psi, psi_dagger].
Each identity comes with a direct-quadrature counterpart so the two sides can
be compared (``verify_table``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Literal, Optional

import numpy as np

from .errors import DivergentTail, NodeInInterval, SingularData
from .model import ModelParams, SolutionHandle, psi, psi_all, psi_dagger, psi_dx
from .numerics import Tolerance, quad_finite, quad_semi_infinite
from .spectrum import solve_spectrum

#: quadrature defaults; the absolute floor sits far below the smallest Table-1 value (5e-12)
INTEGRAL_TOL = Tolerance(abs_tol=1e-30, rel_tol=1e-11, max_iter=200)
#: double-integral defaults (the inner integral is re-evaluated at every outer node)
DOUBLE_TOL = Tolerance(abs_tol=1e-14, rel_tol=1e-10, max_iter=200)

#: sub-interval of [p, x] below which psi is scanned for nodes
NODE_SCAN_POINTS = 500


def wronskian_psi_psiE(x: float, E: float, params: ModelParams) -> float:
    """W[psi, d psi/dE](x)."""
    f, fx, fe, fxe = psi_all(x, E, params)
    return f * fxe - fx * fe


def _neville_at_zero(ts, vals) -> float:
    """Polynomial extrapolation of ``vals(ts)`` to t = 0."""
    p = list(vals)
    n = len(ts)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (ts[i + m] * p[i] - ts[i] * p[i + 1]) / (ts[i + m] - ts[i])
    return p[0]


def wronskian_left_limit(E: float, params: ModelParams, h: float = 1e-4,
                         levels: int = 4) -> float:
    """lim_{x -> (sigma + x0)+} W[psi, psi_E](x) by Richardson on a geometric sequence."""
    ts = [h * params.sigma * 0.5 ** k for k in range(levels)]
    vals = [wronskian_psi_psiE(params.left + t, E, params) for t in ts]
    return _neville_at_zero(ts, vals)


def decay_length(E: float) -> float:
    return 1.0 / math.sqrt(-E)


def wronskian_right_limit(E: float, params: ModelParams, rtol: float = 1e-14) -> float:
    """lim_{x -> inf} W[psi, psi_E](x); zero for decaying psi, ``DivergentTail`` otherwise."""
    x = params.left + 10.0 * params.sigma
    ref = abs(wronskian_psi_psiE(params.left + params.sigma, E, params))
    prev = wronskian_psi_psiE(x, E, params)
    for _ in range(60):
        x = params.left + 2.0 * (x - params.left)
        cur = wronskian_psi_psiE(x, E, params)
        if abs(cur - prev) <= rtol * max(ref, abs(cur)) or (cur == 0.0 and prev == 0.0):
            return cur
        if abs(cur) > 1e6 * max(abs(prev), ref) and abs(cur) > 1e-300:
            raise DivergentTail(f"W[psi, psi_E] grows without bound at E={E}")
        prev = cur
    raise DivergentTail(f"W[psi, psi_E] has no limit at infinity for E={E}")


def _wronskian_at(y: float, E: float, params: ModelParams) -> float:
    if y <= params.left:
        return wronskian_left_limit(E, params)
    if math.isinf(y):
        return wronskian_right_limit(E, params)
    return wronskian_psi_psiE(y, E, params)


def single_integral_rhs(E: float, params: ModelParams, p: Optional[float] = None,
                        x: float = math.inf) -> float:
    """Closed form of ``int_p^x psi^2``.

    ``p=None`` (or any ``p <= sigma + x0``) means the left endpoint, taken as a
    limit; ``x=inf`` means the limit at infinity.
    """
    p = params.left if p is None else p
    if p == x:
        return 0.0
    return _wronskian_at(p, E, params) - _wronskian_at(x, E, params)


def single_integral_lhs(E: float, params: ModelParams, p: Optional[float] = None,
                        x: float = math.inf, tol: Tolerance = INTEGRAL_TOL) -> float:
    """Direct quadrature of ``int_p^x psi(t)^2 dt``."""
    p = params.left if p is None else max(p, params.left)
    if p == x:
        return 0.0
    f = lambda t: psi(t, E, params) ** 2  # noqa: E731
    if math.isinf(x):
        # split: finite core with breakpoints, then a mapped tail
        core = params.left + params.sigma + 20.0 * decay_length(E)
        if p < core:
            brk = list(np.linspace(p, core, 12)[1:-1])
            return quad_finite(f, p, core, tol, points=brk) + quad_semi_infinite(
                f, core, tol, scale=decay_length(E))
        return quad_semi_infinite(f, p, tol, scale=decay_length(E))
    return quad_finite(f, p, x, tol)


@dataclass(frozen=True)
class SecondSolution:
    """v = psi_dagger / W[psi, psi_dagger], normalised so that W[psi, v] = 1."""

    params: ModelParams
    energy: float
    wronskian: float

    def __call__(self, x: float) -> float:
        return psi_dagger(x, self.energy, self.params) / self.wronskian

    def dx(self, x: float) -> float:
        return psi_dx(x, self.energy, self.params, "tricomi") / self.wronskian


def second_solution_v(E: float, params: ModelParams, x_ref: Optional[float] = None) -> SecondSolution:
    x_ref = params.left + params.sigma if x_ref is None else x_ref
    f = SolutionHandle(params, E, "kummer")
    g = SolutionHandle(params, E, "tricomi")
    a1, a2 = f(x_ref) * g.dx(x_ref), f.dx(x_ref) * g(x_ref)
    w = a1 - a2
    if abs(w) <= 1e-12 * max(abs(a1), abs(a2)):
        raise SingularData(f"psi and psi_dagger are linearly dependent at E={E}")
    return SecondSolution(params, E, w)


def inverse_square_integral(E: float, params: ModelParams, p: float, x: float,
                            v: Optional[SecondSolution] = None) -> float:
    """``int_p^x psi^-2`` through reduction of order: v/psi |_p^x."""
    v = second_solution_v(E, params) if v is None else v
    return v(x) / psi(x, E, params) - v(p) / psi(p, E, params)


def check_nodes(E: float, params: ModelParams, p: float, x: float,
                n: int = NODE_SCAN_POINTS) -> None:
    lo, hi = min(p, x), max(p, x)
    vals = np.array([psi(t, E, params) for t in np.linspace(lo, hi, n)])
    if np.any(vals == 0.0) or np.any(np.sign(vals[1:]) != np.sign(vals[:-1])):
        raise NodeInInterval(f"psi changes sign on [{lo}, {hi}] at E={E}")


def double_integral_rhs(E: float, params: ModelParams, p: float, x: float) -> float:
    """Integral-free closed form of the nested ratio integral."""
    if p == x:
        return 0.0
    check_nodes(E, params, p, x)
    fp, _, fe_p, _ = psi_all(p, E, params)
    fx, _, fe_x, _ = psi_all(x, E, params)
    w_p = wronskian_psi_psiE(p, E, params)
    return fe_p / fp - fe_x / fx + w_p * inverse_square_integral(E, params, p, x)


def double_integral_lhs(E: float, params: ModelParams, p: float, x: float,
                        tol: Tolerance = DOUBLE_TOL) -> float:
    """Iterated adaptive quadrature of ``int_p^x int_p^x1 (psi(x2)/psi(x1))^2``."""
    if p == x:
        return 0.0
    check_nodes(E, params, p, x)
    f2 = lambda t: psi(t, E, params) ** 2  # noqa: E731

    def outer(x1: float) -> float:
        return quad_finite(f2, p, x1, tol) / f2(x1)

    return quad_finite(outer, p, x, tol)


@dataclass(frozen=True)
class IntegralReport:
    energy: float
    lhs: float
    rhs: float

    @property
    def abs_diff(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_diff(self) -> float:
        return self.abs_diff / max(abs(self.lhs), abs(self.rhs), 1e-300)


#: integration window of the double-integral table
TABLE2_WINDOW = (0.1, 1.0)


def verify_table(which: Literal["table1", "table2"], params: ModelParams,
                 tol: Optional[Tolerance] = None,
                 energies: Optional[List[float]] = None) -> List[IntegralReport]:
    """Compare both sides of the single (table1) or double (table2) identity per level."""
    if energies is None:
        energies = list(solve_spectrum(params).energies)
    rows = []
    for E in energies:
        if which == "table1":
            lhs = single_integral_lhs(E, params, tol=tol or INTEGRAL_TOL)
            rhs = single_integral_rhs(E, params)
        elif which == "table2":
            p, x = TABLE2_WINDOW
            lhs = double_integral_lhs(E, params, p, x, tol=tol or DOUBLE_TOL)
            rhs = double_integral_rhs(E, params, p, x)
        else:
            raise ValueError(f"unknown table {which!r}")
        rows.append(IntegralReport(E, lhs, rhs))
    return rows
