"""
Energy-dependent reformulation of the Lambert-W model.

The point transformation

    x(y) = sigma + x0 + exp(-y / (E - 1)^4),    phi(y) = |x'(y)|^(-1/2) psi(x(y))

maps the Dirichlet problem on (sigma + x0, inf) onto the whole line, where
phi solves a Schroedinger equation ``phi'' + [cal_E - U(y, cal_E)] phi = 0``
with stationary energy ``cal_E = 1 / (2 (E - 1)^8)`` and a potential U that
depends on that energy.  Such systems carry the modified norm

    ||phi|| = int (1 - dU/d cal_E) phi^2 dy.

Throughout, ``k = (E - 1)^-4 = sqrt(2 cal_E)`` and ``t = x - (sigma + x0) = exp(-k y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateMap, DomainError, NoConvergence
from .model import ModelParams, lambert_point_t, psi_offset
from .numerics import Tolerance, quad_finite
from .spectrum import BoundState

#: quadrature defaults for the modified norm
NORM_TOL = Tolerance(abs_tol=1e-30, rel_tol=1e-10, max_iter=200)

#: t = exp(-k y) below which the y -> +inf tail is treated as negligible (units of sigma)
NORM_T_FLOOR = 1e-12
#: number of window extensions allowed before the norm integral is declared divergent
NORM_MAX_EXTENSIONS = 30


@dataclass(frozen=True)
class EnergyMap:
    """A parameter value E and the stationary energy it induces."""

    E: float
    calE: float

    @classmethod
    def from_parameter(cls, E: float) -> "EnergyMap":
        return cls(E, energy_cal(E))

    @classmethod
    def from_energy(cls, calE: float) -> "EnergyMap":
        return cls(energy_inv(calE), calE)


def _rate(E: float) -> float:
    if E == 1.0:
        raise DegenerateMap("the point transformation is undefined at E = 1")
    return 1.0 / (E - 1.0) ** 4


def x_of_y(y: float, E: float, params: ModelParams) -> float:
    """``sigma + x0 + exp(-y / (E-1)^4)``, a decreasing bijection of R onto the domain."""
    return params.left + math.exp(-y * _rate(E))


def energy_cal(E: float) -> float:
    """Stationary energy ``1 / (2 (E-1)^8)``."""
    if E == 1.0:
        raise DegenerateMap("cal_E is undefined at E = 1")
    return 0.5 / (E - 1.0) ** 8


def energy_inv(calE: float) -> float:
    """Inverse of :func:`energy_cal` on the branch E < 1."""
    if not calE > 0:
        raise DomainError(f"cal_E must be positive, got {calE}")
    return 1.0 - (0.5 / calE) ** 0.125


def _lambert_at(y: float, k: float, params: ModelParams):
    """(t, W, 1 + W) at y; ``None`` when t underflows (y -> +inf) ."""
    t = math.exp(-k * y) if -k * y < 709.0 else math.inf
    if t == 0.0:
        return None
    lp = lambert_point_t(t, params)
    return t, lp.w, lp.w1


def potential_u(y: float, calE: float, params: ModelParams) -> float:
    """The energy-dependent potential U(y, cal_E).

    Evaluated in the expanded form

        U = e^(-2ky) [(2 cal_E)^(7/8) - 2 cal_E] + 3 cal_E / 2 + 2 V0 cal_E e^(-2ky) W / (1 + W)

    which is algebraically identical to the grouped closed form but avoids the
    product ``e^(-2ky) * e^(2ky)`` that overflows for large |y|.
    """
    if not calE > 0:
        raise DomainError(f"cal_E must be positive, got {calE}")
    k = math.sqrt(2.0 * calE)
    base = 1.5 * calE
    data = _lambert_at(y, k, params)
    if data is None:
        return base
    t, w, w1 = data
    if math.isinf(t):
        return math.inf if (2.0 * calE) ** 0.875 > 2.0 * calE else -math.inf
    t2 = t * t
    # t^2 W / (1 + W) ~ -t^(3/2) as t -> 0, also when 1 + W underflows
    well = t2 * w / w1 if w1 != 0.0 else 0.0
    return t2 * ((2.0 * calE) ** 0.875 - 2.0 * calE) + base + 2.0 * params.v0 * calE * well


def potential_u_dE(y: float, calE: float, params: ModelParams) -> float:
    """dU/d cal_E at fixed y by a 4-point Richardson-extrapolated central difference."""
    h = max(1e-6 * calE, 1e-12)
    h = min(h, 0.5 * calE)

    def central(step):
        return (potential_u(y, calE + step, params) - potential_u(y, calE - step, params)) / (2.0 * step)

    return (4.0 * central(0.5 * h) - central(h)) / 3.0


def liouville_coefficient(y: float, E: float, params: ModelParams) -> float:
    """Coefficient of phi in the transformed equation, written in terms of E.

    ``x'(y)^2 (E - V(x(y))) + S/2`` where the Schwarzian part is ``-k^2/4``;
    it must equal ``cal_E - U(y, cal_E)`` on the branch E < 1.
    """
    k = _rate(E)
    data = _lambert_at(y, k, params)
    if data is None:
        return -0.25 * k * k
    t, w, w1 = data
    if w1 == 0.0:
        return -0.25 * k * k     # t^2 (E - V) ~ t^(3/2) -> 0
    v = params.v0 * w / w1
    return k * k * (t * t * (E - v) - 0.25)


#: t (units of sigma) below which bound states use their endpoint expansion
ENDPOINT_T = 1e-8


@lru_cache(maxsize=64)
def _endpoint_coefficients(E: float, params: ModelParams) -> tuple[float, float]:
    t1 = ENDPOINT_T * params.sigma
    t2 = 4.0 * t1
    r1 = psi_offset(t1, E, params) / t1
    r2 = psi_offset(t2, E, params) / t2
    return 2.0 * r1 - r2, (r2 - r1) / math.sqrt(t1)


def bound_psi_offset(t: float, E: float, params: ModelParams) -> float:
    """A bound state at ``x = sigma + x0 + t``, resolved down to t = 0.

    Next to the singular endpoint the potential behaves like t^(-1/2), so a
    bound state vanishes like ``t (alpha + beta sqrt(t) + ...)``.  The closed
    form evaluated at the floating-point eigenvalue stops following this once
    ``|psi|`` drops to the level set by the last bit of E (about 1e-18 for
    the reference setting).  Below ``ENDPOINT_T * sigma`` the two-term
    expansion, matched to the closed form at t1 and 4 t1, is used instead.
    """
    if t >= ENDPOINT_T * params.sigma:
        return psi_offset(t, E, params)
    alpha, beta = _endpoint_coefficients(E, params)
    return t * (alpha + beta * math.sqrt(t))


def phi(y: float, state: BoundState) -> float:
    """Transformed bound state ``|x'(y)|^(-1/2) psi(x(y))``."""
    return _phi(y, state.energy, state.solution.params)


def _phi(y: float, E: float, params: ModelParams) -> float:
    k = _rate(E)
    arg = -k * y
    if arg < -745.0:
        return 0.0          # t underflows: psi vanishes at the endpoint
    if arg > 709.0:
        return 0.0          # t overflows: psi has decayed
    t = math.exp(arg)
    # psi / sqrt(k t) = sqrt(t / k) (alpha + beta sqrt(t)) near the endpoint
    if t < ENDPOINT_T * params.sigma:
        alpha, beta = _endpoint_coefficients(E, params)
        return math.sqrt(t / k) * (alpha + beta * math.sqrt(t))
    return psi_offset(t, E, params) / math.sqrt(k * t)


@dataclass(frozen=True)
class TransformedState:
    """A bound state carried over to the energy-dependent picture."""

    source: BoundState
    calE: float

    def __call__(self, y: float) -> float:
        return phi(y, self.source)

    @property
    def k(self) -> float:
        return _rate(self.source.energy)


def transform_state(state: BoundState) -> TransformedState:
    return TransformedState(state, energy_cal(state.energy))


def modified_norm(state: BoundState, quad_tol: Tolerance = NORM_TOL) -> float:
    """``int (1 - dU/d cal_E) phi^2 dy`` over the real line.

    The integral is taken in ``u = log t = -k y``, where it reads
    ``int (1 - dU/d cal_E) psi(t)^2 / (k^2 t) du``; this spreads the slow
    ``exp(-k y)`` decay at y -> +inf and the fast decay at y -> -inf over a
    window of moderate length.  The window grows until each end segment
    contributes less than ``quad_tol.rel_tol`` of the total.
    """
    E = state.energy
    params = state.solution.params
    calE = energy_cal(E)
    k = _rate(E)

    def integrand(u: float) -> float:
        t = math.exp(u)
        f = bound_psi_offset(t, E, params)
        if f == 0.0:
            return 0.0
        return (1.0 - potential_u_dE(-u / k, calE, params)) * f * f / (k * k * t)

    u_lo = math.log(NORM_T_FLOOR * params.sigma)
    u_hi = math.log(params.sigma + 40.0 / math.sqrt(-E))
    nodes = list(np.arange(math.ceil(u_lo), u_hi, 0.5))
    total = quad_finite(integrand, u_lo, u_hi, quad_tol, points=nodes, limit=1000)
    # end segments only need to be resolved relative to the running total
    edge_tol = Tolerance(max(quad_tol.abs_tol, 1e-3 * quad_tol.rel_tol * abs(total)),
                         quad_tol.rel_tol, quad_tol.max_iter)
    for _ in range(NORM_MAX_EXTENSIONS):
        left = quad_finite(integrand, u_lo - 10.0, u_lo, edge_tol)
        right = quad_finite(integrand, u_hi, u_hi + math.log(2.0), edge_tol)
        total += left + right
        u_lo -= 10.0
        u_hi += math.log(2.0)
        if max(abs(left), abs(right)) <= quad_tol.rel_tol * abs(total):
            return total
    raise NoConvergence("modified norm integral does not settle as the window grows")
