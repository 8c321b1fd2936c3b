"""
Singular Lambert-W Schroedinger model.

    psi''(x) + [E - V(x)] psi(x) = 0,      x in (sigma + x0, inf)
    V(x) = V0 - V0 / (1 + W0(-exp((x0 - x)/sigma)))

For E < 0 the two solutions used throughout the package are

    psi(x)  = exp(s W/2) |W|^(c/2) [ (c-s)/2 F(t) + s F'(t) ],   t = -s W,

with F = M(a, c, .) (regular, ``kind="kummer"``) or F = U(a, c, .)
(``kind="tricomi"``, the function psi-dagger).  This is the closed form of
``exp(cW/2) W^(c/2) d/dz[exp((c-s)z/2) F(s z)]`` at z = -W with the constant
phase of W^(c/2) dropped; it carries no further normalisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

from .errors import DomainError, NearSingularity
from .specialfn import kummer_1f1, kummer_dparams, lambert_w0, lambert_w0_branch, tricomi_u

Kind = Literal["kummer", "tricomi"]

#: distance (in units of sigma) from the left endpoint inside which x-derivatives are refused
NEAR_SINGULAR = 1e-8


@dataclass(frozen=True)
class ModelParams:
    sigma: float
    x0: float
    v0: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if not self.v0 > 0:
            raise DomainError(f"V0 must be positive, got {self.v0}")

    @property
    def left(self) -> float:
        """Left end of the domain, ``sigma + x0`` (the singular point)."""
        return self.sigma + self.x0


#: sigma = -x0 = V0 = 5, the setting of every table and figure
PAPER_REFERENCE = ModelParams(5.0, -5.0, 5.0)


class HypParams(NamedTuple):
    a: float
    c: float
    s: float


class LambertPoint(NamedTuple):
    w: float         # W0(-exp((x0 - x)/sigma)), in (-1, 0)
    w1: float        # 1 + W, computed without cancellation
    log_abs_w: float
    dw_dx: float


def lambert_point(x: float, params: ModelParams) -> LambertPoint:
    """Lambert-W data at ``x``, accurate both near the branch point and far out."""
    return lambert_point_t(x - params.left, params)


def lambert_point_t(t: float, params: ModelParams) -> LambertPoint:
    """Lambert-W data at distance ``t = x - (sigma + x0)`` from the singular endpoint."""
    if not t > 0:
        raise DomainError(f"x = left + {t} is outside the domain ({params.left}, inf)")
    u = t / params.sigma
    if u < 1.0:
        # q = 1 + e*z = -expm1(-u) keeps 1 + W accurate next to the branch point
        w, w1 = lambert_w0_branch(-math.expm1(-u))
    else:
        z = -math.exp(-1.0 - u)
        w = lambert_w0(z) if z != 0.0 else 0.0
        w1 = 1.0 + w
    # log|W| = log|z| - W  (from W e^W = z), finite even when z underflows
    log_abs_w = -1.0 - u - w
    # dW/dx diverges at the endpoint, where 1 + W underflows to zero
    dw_dx = -w / (params.sigma * w1) if w1 != 0.0 else math.inf
    return LambertPoint(w, w1, log_abs_w, dw_dx)


def potential_v(x: float, params: ModelParams) -> float:
    """The singular Lambert-W potential ``V0 - V0/(1 + W)``."""
    lp = lambert_point(x, params)
    return params.v0 - params.v0 / lp.w1


def potential_v_dx(x: float, params: ModelParams) -> float:
    """dV/dx = V0 W'(x) / (1 + W)^2."""
    lp = lambert_point(x, params)
    return params.v0 * lp.dw_dx / (lp.w1 * lp.w1)


# d^k V / dx^k = -V0 W P_k(W) / (sigma^k (1 + W)^(2k+1)), k >= 1
_V_JET_POLY = ((1.0,), (2.0, -1.0), (6.0, -8.0, 1.0), (24.0, -58.0, 22.0, -1.0))


def potential_v_jet(x: float, params: ModelParams, order: int = 2) -> tuple[float, ...]:
    """``(V, V', ..., V^(order))`` at ``x`` for ``order <= 4``."""
    if not 0 <= order <= len(_V_JET_POLY):
        raise ValueError(f"order must lie in [0, {len(_V_JET_POLY)}]")
    lp = lambert_point(x, params)
    w, w1 = lp.w, lp.w1
    out = [params.v0 * w / w1]
    for k in range(1, order + 1):
        poly = 0.0
        for coef in _V_JET_POLY[k - 1]:
            poly = poly * w + coef
        out.append(-params.v0 * w * poly / (params.sigma ** k * w1 ** (2 * k + 1)))
    return tuple(out)


def hyp_params(E: float, params: ModelParams) -> HypParams:
    """The abbreviations (a, c, s) of the bound-state sector (E < 0)."""
    if not E < 0:
        raise DomainError(f"hyp_params needs E < 0, got {E}")
    p = math.sqrt(-E)
    q = math.sqrt(params.v0 - E)
    a = -(p - q) ** 2 * params.sigma / (2.0 * q)
    return HypParams(a, 2.0 * p * params.sigma, 2.0 * q * params.sigma)


def hyp_params_dE(E: float, params: ModelParams) -> HypParams:
    """Energy derivatives (da/dE, dc/dE, ds/dE)."""
    sig = params.sigma
    p = math.sqrt(-E)
    q = math.sqrt(params.v0 - E)
    dp = -0.5 / p
    dq = -0.5 / q
    d = p - q
    da = -sig * (d * (dp - dq) / q - 0.5 * d * d * dq / (q * q))
    return HypParams(da, 2.0 * sig * dp, 2.0 * sig * dq)


class _Eval(NamedTuple):
    psi: float
    psi_w: float
    psi_e: float
    psi_we: float
    lp: LambertPoint


def _dM_dE(a, c, t, da, dc, dt, order):
    """M(a+order, c+order, t) and its total E-derivative."""
    ao, co = a + order, c + order
    m, ma, mc = kummer_dparams(ao, co, t)
    mt = ao / co * kummer_1f1(ao + 1, co + 1, t)
    return m, ma * da + mc * dc + mt * dt


def _evaluate(x: float, E: float, params: ModelParams, kind: Kind, want_e: bool) -> _Eval:
    return _evaluate_lp(lambert_point(x, params), E, params, kind, want_e)


def _evaluate_lp(lp: LambertPoint, E: float, params: ModelParams, kind: Kind,
                 want_e: bool) -> _Eval:
    w = lp.w
    a, c, s = hyp_params(E, params)
    t = -s * w
    k1 = 0.5 * (c - s)
    L = 0.5 * s * w + 0.5 * c * lp.log_abs_w
    eL = math.exp(L)
    if eL == 0.0 or w == 0.0:
        # |W|^(c/2) underflowed: the regular solution is below representable range
        if kind == "kummer":
            return _Eval(0.0, 0.0, 0.0, 0.0, lp)
        raise DomainError(f"psi_dagger overflows at W={w}")
    L_w = 0.5 * s + 0.5 * c / w

    if kind == "tricomi":
        u1 = tricomi_u(a, c, t).real
        u2 = tricomi_u(a + 1, c + 1, t).real
        u3 = tricomi_u(a + 2, c + 2, t).real
        f1 = -a * u2                    # U'
        f2 = a * (a + 1) * u3           # U''
        B = k1 * u1 + s * f1
        B_w = -s * (k1 * f1 + s * f2)
        psi_w = eL * (L_w * B + B_w)
        if want_e:
            raise NotImplementedError("energy derivative of psi-dagger is not provided")
        return _Eval(eL * B, psi_w, math.nan, math.nan, lp)
    if kind != "kummer":
        raise ValueError(f"unknown solution kind {kind!r}")

    k2 = a * s / c
    r1 = a / c
    r2 = (a + 1) / (c + 1)
    if not want_e:
        m1 = kummer_1f1(a, c, t)
        m2 = kummer_1f1(a + 1, c + 1, t)
        m3 = kummer_1f1(a + 2, c + 2, t)
        B = k1 * m1 + k2 * m2
        B_w = -s * (k1 * r1 * m2 + k2 * r2 * m3)
        return _Eval(eL * B, eL * (L_w * B + B_w), math.nan, math.nan, lp)

    da, dc, ds = hyp_params_dE(E, params)
    dt = -ds * w
    m1, m1e = _dM_dE(a, c, t, da, dc, dt, 0)
    m2, m2e = _dM_dE(a, c, t, da, dc, dt, 1)
    m3, m3e = _dM_dE(a, c, t, da, dc, dt, 2)
    dk1 = 0.5 * (dc - ds)
    dk2 = (da * s * c + a * ds * c - a * s * dc) / (c * c)
    dr1 = (da * c - a * dc) / (c * c)
    dr2 = (da * (c + 1) - (a + 1) * dc) / ((c + 1) ** 2)

    B = k1 * m1 + k2 * m2
    B_w = -s * (k1 * r1 * m2 + k2 * r2 * m3)
    B_e = dk1 * m1 + k1 * m1e + dk2 * m2 + k2 * m2e
    B_we = (-ds * (k1 * r1 * m2 + k2 * r2 * m3)
            - s * (dk1 * r1 * m2 + k1 * dr1 * m2 + k1 * r1 * m2e
                   + dk2 * r2 * m3 + k2 * dr2 * m3 + k2 * r2 * m3e))
    L_e = 0.5 * ds * w + 0.5 * dc * lp.log_abs_w
    L_we = 0.5 * ds + 0.5 * dc / w
    inner_w = L_w * B + B_w
    return _Eval(
        eL * B,
        eL * inner_w,
        eL * (L_e * B + B_e),
        eL * (L_e * inner_w + L_we * B + L_w * B_e + B_we),
        lp,
    )


def _check_near(x: float, params: ModelParams) -> None:
    if x - params.left < NEAR_SINGULAR * params.sigma:
        raise NearSingularity(
            f"x={x} is within {NEAR_SINGULAR:g} sigma of the singular endpoint")


def psi(x: float, E: float, params: ModelParams) -> float:
    """Regular (Kummer) solution at energy ``E < 0``."""
    return _evaluate(x, E, params, "kummer", False).psi


def psi_offset(t: float, E: float, params: ModelParams) -> float:
    """Regular solution at ``x = sigma + x0 + t``, without forming ``x`` (exact for tiny t)."""
    return _evaluate_lp(lambert_point_t(t, params), E, params, "kummer", False).psi


def psi_dagger(x: float, E: float, params: ModelParams) -> float:
    """Second solution built from Tricomi's U (real for real E < 0)."""
    return _evaluate(x, E, params, "tricomi", False).psi


def psi_dx(x: float, E: float, params: ModelParams, kind: Kind = "kummer") -> float:
    """Analytic x-derivative through dW/dx = -W / (sigma (1 + W))."""
    _check_near(x, params)
    ev = _evaluate(x, E, params, kind, False)
    return ev.psi_w * ev.lp.dw_dx


def psi_dE(x: float, E: float, params: ModelParams) -> float:
    """Partial derivative of the regular solution with respect to E at fixed x."""
    return _evaluate(x, E, params, "kummer", True).psi_e


def psi_dE_dx(x: float, E: float, params: ModelParams) -> float:
    """Mixed derivative d^2 psi / dx dE."""
    _check_near(x, params)
    ev = _evaluate(x, E, params, "kummer", True)
    return ev.psi_we * ev.lp.dw_dx


def psi_all(x: float, E: float, params: ModelParams) -> tuple[float, float, float, float]:
    """``(psi, psi_x, psi_E, psi_xE)`` from a single series pass."""
    _check_near(x, params)
    ev = _evaluate(x, E, params, "kummer", True)
    return ev.psi, ev.psi_w * ev.lp.dw_dx, ev.psi_e, ev.psi_we * ev.lp.dw_dx


@dataclass(frozen=True)
class SolutionHandle:
    """An immutable evaluator for one solution of the model at fixed E."""

    params: ModelParams
    energy: float
    kind: Kind = "kummer"

    def __call__(self, x: float) -> float:
        if self.kind == "kummer":
            return psi(x, self.energy, self.params)
        return psi_dagger(x, self.energy, self.params)

    def dx(self, x: float) -> float:
        return psi_dx(x, self.energy, self.params, self.kind)

    def dE(self, x: float) -> float:
        if self.kind != "kummer":
            raise NotImplementedError("energy derivative is only provided for the Kummer solution")
        return psi_dE(x, self.energy, self.params)

    def dE_dx(self, x: float) -> float:
        return psi_dE_dx(x, self.energy, self.params)


def wronskian_psi_dagger(E: float, params: ModelParams, x: float | None = None) -> float:
    """W[psi, psi_dagger](x); constant in x by Abel's identity."""
    if x is None:
        x = params.left + params.sigma
    f = SolutionHandle(params, E, "kummer")
    g = SolutionHandle(params, E, "tricomi")
    return f(x) * g.dx(x) - f.dx(x) * g(x)
