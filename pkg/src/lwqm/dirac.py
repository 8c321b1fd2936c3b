"""
Two-dimensional massless Dirac equation with Lambert-W potentials.

Two constructions are provided.

Scalar potential
    ``[s1 p_x + s2 p_y + V(x)] Psi = E Psi`` with the Lambert-W potential V.
    The ansatz ``Psi = exp(i k_y y) [Psi1 + Psi2, Psi1 - Psi2]`` with
    ``Psi2 = -(i/k_y) (i Psi1' - (E - V) Psi1)`` decouples the system when the
    momenta act as ``p = +i d``; Psi1 then solves

        Psi1'' + [(V - E)^2 - k_y^2 - i V'] Psi1 = 0,

    whose general solution is a z-derivative of confluent hypergeometric
    functions at z = W(-exp(-(x - x0)/sigma)).

Matrix potential at zero energy
    ``[s1 p_x + s2 p_y + V] Psi = 0`` with ``p = -i d`` and a 2x2 matrix V
    whose entries V21, V22 are free.  Choosing V11 and V12 from the two
    matching constraints turns the Schroedinger solutions psi_n at E_n = -k_y^2
    into zero-energy Dirac bound states.

``s1``, ``s2`` are the Pauli matrices in the standard representation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import (DegenerateK0, DomainError, EnergyMismatch, NoConvergence, PrecisionLoss,
                     ZeroKy, ZeroV22)
from .model import ModelParams, lambert_point, potential_v_jet
from .model import psi as psi_value
from .model import psi_dx
from .numerics import Tolerance, derivative, quad_finite, quad_semi_infinite
from .specialfn import kummer_1f1_err, tricomi_u_err
from .spectrum import BoundState

ComplexFn = Callable[[float], complex]

#: relative tolerance on E_n = -k_y^2 for the zero-energy construction
ENERGY_MATCH_RTOL = 1e-8
#: largest accepted relative rounding-error estimate of the scalar-potential solution
SCALAR_PRECISION_BUDGET = 1e-7


# ---------------------------------------------------------------------------
# Scalar potential
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiracScalarParams:
    """Scalar-potential problem: model, energy, transverse wave number, linear factors.

    ``branch`` multiplies the principal square roots K0, K1 by +1 or -1.
    """

    model: ModelParams
    E: float
    k_y: float
    c1: complex = 1.0
    c2: complex = 0.0
    branch: Tuple[int, int] = (1, 1)

    def __post_init__(self):
        if any(b not in (1, -1) for b in self.branch):
            raise ValueError("branch entries must be +1 or -1")


class DiracAbbrevs(NamedTuple):
    K0: complex
    K1: complex
    alpha: complex
    gamma: complex
    delta: complex
    s0: complex


def _csqrt(v: float) -> complex:
    # principal branch; a negative real argument maps to +i sqrt(|v|)
    return cmath.sqrt(complex(v, 0.0))


def dirac_abbrevs(p: DiracScalarParams) -> DiracAbbrevs:
    """K0, K1, alpha, gamma, delta and s0 of the scalar problem."""
    sig, v0 = p.model.sigma, p.model.v0
    k0 = p.branch[0] * _csqrt(p.k_y ** 2 - (p.E - v0) ** 2)
    k1 = p.branch[1] * _csqrt(p.k_y ** 2 - p.E ** 2)
    if k0 == 0:
        raise DegenerateK0(f"K0 vanishes for k_y^2 = (E - V0)^2 (k_y={p.k_y}, E={p.E})")
    alpha = sig / (2.0 * k0) * ((k0 + k1) ** 2 + v0 ** 2)
    return DiracAbbrevs(k0, k1, alpha, 2.0 * sig * k1, 2.0 * sig * (k1 + 1j * v0), 2.0 * sig * k0)


def _hyp_derivs(kind: str, a: complex, c: complex, zeta: complex):
    """F, F', F'', F''' in the argument for F = M(a, c, .) or U(a, c, .), with error estimates."""
    out, errs = [], []
    poch = 1.0 + 0j
    cpoch = 1.0 + 0j
    for k in range(4):
        if kind == "kummer":
            v, e = kummer_1f1_err(a + k, c + k, zeta)
            fac = poch / cpoch
            cpoch *= c + k
        else:
            v, e = tricomi_u_err(a + k, c + k, zeta)
            fac = (-1) ** k * poch
        out.append(fac * v)
        errs.append(abs(fac) * e)
        poch *= a + k
    return out, errs


def _psi1_z_jet(z: float, p: DiracScalarParams, ab: DiracAbbrevs) -> tuple[complex, complex, complex]:
    """G, dG/dz, d2G/dz2 of ``z^(g/2) e^(d z/2) d/dz[e^(-(d+s0) z/2) F(s0 z)]`` (both branches)."""
    zc = complex(z, 0.0)
    # G = P(z) H(z), P = z^(g/2) e^(-s0 z/2), H = A F(s0 z) + s0 F'(s0 z)
    P = cmath.exp(0.5 * ab.gamma * cmath.log(zc) - 0.5 * ab.s0 * zc)
    L1 = 0.5 * ab.gamma / zc - 0.5 * ab.s0
    L1p = -0.5 * ab.gamma / (zc * zc)
    A = -0.5 * (ab.delta + ab.s0)
    s0 = ab.s0
    H = [0j, 0j, 0j]
    err = [0.0, 0.0, 0.0]
    for coef, kind in ((p.c1, "kummer"), (p.c2, "tricomi")):
        if coef == 0:
            continue
        f, e = _hyp_derivs(kind, ab.alpha, ab.gamma, s0 * zc)
        for j in range(3):
            H[j] += coef * s0 ** j * (A * f[j] + s0 * f[j + 1])
            err[j] += abs(coef * s0 ** j) * (abs(A) * e[j] + abs(s0) * e[j + 1])
    for j in range(3):
        if err[j] > SCALAR_PRECISION_BUDGET * abs(H[j]):
            raise PrecisionLoss(
                f"confluent series cancel at s0*z={s0 * zc:.4g}: estimated relative error "
                f"{err[j] / max(abs(H[j]), 1e-300):.2g} in derivative {j}")
    g0 = P * H[0]
    g1 = P * (L1 * H[0] + H[1])
    g2 = P * ((L1 * L1 + L1p) * H[0] + 2.0 * L1 * H[1] + H[2])
    return g0, g1, g2


def dirac_scalar_psi1_jet(x: float, p: DiracScalarParams) -> tuple[complex, complex, complex]:
    """``(Psi1, Psi1', Psi1'')`` in x."""
    ab = dirac_abbrevs(p)
    lp = lambert_point(x, p.model)
    g0, g1, g2 = _psi1_z_jet(lp.w, p, ab)
    wx = lp.dw_dx
    wxx = -wx / (p.model.sigma * lp.w1 * lp.w1)
    return g0, g1 * wx, g2 * wx * wx + g1 * wxx


def dirac_scalar_psi1(x: float, p: DiracScalarParams) -> complex:
    """Component Psi1 of the scalar-potential solution, ``c1`` (Kummer) plus ``c2`` (Tricomi)."""
    return dirac_scalar_psi1_jet(x, p)[0]


def klein_gordon_residual(x: float, p: DiracScalarParams) -> tuple[complex, float]:
    """``Psi1'' + [(V - E)^2 - k_y^2 - i V'] Psi1`` and the scale of its terms."""
    f0, _, f2 = dirac_scalar_psi1_jet(x, p)
    v, vp = potential_v_jet(x, p.model, order=1)
    rest = ((v - p.E) ** 2 - p.k_y ** 2 - 1j * vp) * f0
    return f2 + rest, max(abs(f2), abs(rest))


@dataclass(frozen=True)
class Spinor:
    """Upper and lower components at a point, including the plane-wave phase."""

    psi1: complex
    psi2: complex
    plane_wave_ky: float

    @property
    def density(self) -> float:
        return abs(self.psi1) ** 2 + abs(self.psi2) ** 2


def _scalar_parts(x: float, p: DiracScalarParams):
    if p.k_y == 0:
        raise ZeroKy("the decoupling divides by k_y; k_y = 0 is not supported")
    f0, f1, f2 = dirac_scalar_psi1_jet(x, p)
    v, vp = potential_v_jet(x, p.model, order=1)
    ev = p.E - v
    g0 = -1j / p.k_y * (1j * f1 - ev * f0)
    g1 = -1j / p.k_y * (1j * f2 + vp * f0 - ev * f1)
    return f0, f1, g0, g1, v


def dirac_scalar_spinor(x: float, y: float, p: DiracScalarParams) -> Spinor:
    """``exp(i k_y y) [Psi1 + Psi2, Psi1 - Psi2]``."""
    f0, _, g0, _, _ = _scalar_parts(x, p)
    ph = cmath.exp(1j * p.k_y * y)
    return Spinor(ph * (f0 + g0), ph * (f0 - g0), p.k_y)


def dirac_scalar_residual(x: float, p: DiracScalarParams) -> tuple[complex, complex, float]:
    """Both rows of ``[s1 p_x + s2 p_y + V - E] Psi`` (with p = +i d), and a term scale.

    The y-phase is divided out.
    """
    f0, f1, g0, g1, v = _scalar_parts(x, p)
    a, b = f0 + g0, f0 - g0
    ax, bx = f1 + g1, f1 - g1
    k = p.k_y
    # p_x = i d/dx, p_y on exp(i k y) gives -k
    top = 1j * bx + 1j * k * b + (v - p.E) * a
    bot = 1j * ax - 1j * k * a + (v - p.E) * b
    scale = max(abs(bx), abs(k * b), abs((v - p.E) * a), abs(ax), abs(k * a), abs((v - p.E) * b))
    return top, bot, scale


# ---------------------------------------------------------------------------
# Matrix potential at zero energy
# ---------------------------------------------------------------------------

def _num_deriv(f: ComplexFn, order: int, left: float) -> ComplexFn:
    # the initial step keeps every stencil point inside (left, inf)
    return lambda x: derivative(f, x, order=order, h=min(0.1, 0.4 * (x - left)))


@dataclass(frozen=True)
class DiracMatrixPotential:
    """Matrix potential with free entries V21, V22 and V11, V12 fixed by the constraints.

    Derivatives of the free entries may be supplied; otherwise they are taken
    by Richardson-extrapolated differences.  ``log_prefactor``, if given, is an
    antiderivative of ``-(i V12 + i V21 - V22'/V22)/2`` used instead of quadrature.
    """

    model: ModelParams
    k_y: float
    v21: ComplexFn
    v22: ComplexFn
    dv21: Optional[ComplexFn] = None
    dv22: Optional[ComplexFn] = None
    d2v22: Optional[ComplexFn] = None
    log_prefactor: Optional[ComplexFn] = None

    def _dv21(self, x):
        return (self.dv21 or _num_deriv(self.v21, 1, self.model.left))(x)

    def _dv22(self, x):
        return (self.dv22 or _num_deriv(self.v22, 1, self.model.left))(x)

    def _d2v22(self, x):
        return (self.d2v22 or _num_deriv(self.v22, 2, self.model.left))(x)

    def _v22_checked(self, x) -> complex:
        v = self.v22(x)
        if v == 0:
            raise ZeroV22(f"V22 vanishes at x={x}")
        return v

    def v11(self, x: float) -> complex:
        return -potential_v_jet(x, self.model, order=0)[0] / self._v22_checked(x)

    def v12(self, x: float) -> complex:
        return self.v21(x) - 1j * self._dv22(x) / self._v22_checked(x)

    def dv12(self, x: float) -> complex:
        v22 = self._v22_checked(x)
        d1 = self._dv22(x)
        return self._dv21(x) - 1j * (self._d2v22(x) / v22 - (d1 / v22) ** 2)

    def matrix(self, x: float) -> np.ndarray:
        return np.array([[self.v11(x), self.v12(x)], [self.v21(x), self.v22(x)]], dtype=complex)

    def constraint_residuals(self, x: float) -> tuple[complex, complex]:
        """Residuals of the two matching constraints (first-order and potential)."""
        v12, v21, v22 = self.v12(x), self.v21(x), self._v22_checked(x)
        d22, dd22 = self._dv22(x), self._d2v22(x)
        first = 1j * v12 - 1j * v21 - d22 / v22
        rhs = (-(v12 ** 2 + v21 ** 2) / 4.0 + v12 * v21 / 2.0 - self.v11(x) * v22
               + (1j * self.dv12(x) - 1j * self._dv21(x)) / 2.0
               + (1j * v21 * d22 - 1j * v12 * d22) / (2.0 * v22)
               + 0.75 * (d22 / v22) ** 2 - dd22 / (2.0 * v22))
        return first, potential_v_jet(x, self.model, order=0)[0] - rhs

    def schroedinger_coefficient(self, x: float) -> complex:
        """Coefficient C in ``psi'' - C psi = 0`` obtained from the Dirac system.

        With the constraints satisfied it equals ``k_y^2 + V(x)``.
        """
        v12, v21, v22 = self.v12(x), self.v21(x), self._v22_checked(x)
        d22, dd22 = self._dv22(x), self._d2v22(x)
        k = self.k_y
        return (k * k + k * (1j * v12 - 1j * v21 - d22 / v22)
                - (v12 ** 2 + v21 ** 2) / 4.0 + v12 * v21 / 2.0 - self.v11(x) * v22
                + (1j * self.dv12(x) - 1j * self._dv21(x)) / 2.0
                + (1j * v21 * d22 - 1j * v12 * d22) / (2.0 * v22)
                + 0.75 * (d22 / v22) ** 2 - dd22 / (2.0 * v22))

    def log_prefactor_rate(self, x: float) -> complex:
        """q(x) = -(i V12 + i V21 - V22'/V22) / 2, the log-derivative of the Psi1 prefactor."""
        return -0.5 * (1j * self.v12(x) + 1j * self.v21(x) - self._dv22(x) / self._v22_checked(x))

    def log_prefactor_rate_dx(self, x: float) -> complex:
        v22 = self._v22_checked(x)
        d1 = self._dv22(x)
        return -0.5 * (1j * self.dv12(x) + 1j * self._dv21(x) - (self._d2v22(x) / v22 - (d1 / v22) ** 2))


def matrix_potential_from_free_entries(v21: ComplexFn, v22: ComplexFn, k_y: float,
                                       model: ModelParams, **derivs) -> DiracMatrixPotential:
    """Complete a matrix potential from its free entries.

    ``derivs`` may carry ``dv21``, ``dv22``, ``d2v22`` and ``log_prefactor``.
    """
    return DiracMatrixPotential(model, k_y, v21, v22, **derivs)


def inverse_x_potential(model: ModelParams, k_y: float) -> DiracMatrixPotential:
    """V21 = i/x, V22 = 1, for which V12 = i/x and the Psi1 prefactor is x (up to a constant).

    The entries are singular at x = 0, so the domain x > sigma + x0 must not contain it.
    """
    if model.left < 0:
        raise DomainError(f"V21 = i/x is singular at x = 0, inside the domain x > {model.left}")
    return DiracMatrixPotential(
        model, k_y,
        v21=lambda x: 1j / x,
        v22=lambda x: 1.0 + 0j,
        dv21=lambda x: -1j / (x * x),
        dv22=lambda x: 0j,
        d2v22=lambda x: 0j,
        log_prefactor=lambda x: complex(math.log(x)),
    )


def default_anchor(model: ModelParams) -> float:
    return model.left + 1.0


@dataclass(frozen=True)
class ZeroEnergyState:
    """Zero-energy Dirac bound state built on a Schroedinger bound state."""

    potential: DiracMatrixPotential
    state: BoundState
    anchor: float

    def _log_prefactor(self, x: float) -> complex:
        pot = self.potential
        if pot.log_prefactor is not None:
            return pot.log_prefactor(x) - pot.log_prefactor(self.anchor)
        tol = Tolerance(abs_tol=1e-13, rel_tol=1e-11)
        re = quad_finite(lambda t: pot.log_prefactor_rate(t).real, self.anchor, x, tol)
        im = quad_finite(lambda t: pot.log_prefactor_rate(t).imag, self.anchor, x, tol)
        return complex(re, im)

    def components(self, x: float) -> tuple[complex, complex, complex, complex]:
        """``(Psi1, Psi1', Psi2, Psi2')`` without the plane-wave phase."""
        pot = self.potential
        k = pot.k_y
        E = self.state.energy
        pre = cmath.exp(self._log_prefactor(x))
        q = pot.log_prefactor_rate(x)
        qx = pot.log_prefactor_rate_dx(x)
        f = psi_value(x, E, pot.model)
        fx = psi_dx(x, E, pot.model)
        fxx = (potential_v_jet(x, pot.model, order=0)[0] - E) * f
        p0 = pre * f
        p1 = pre * (q * f + fx)
        p2 = pre * ((qx + q * q) * f + 2.0 * q * fx + fxx)
        v21, v22 = pot.v21(x), pot._v22_checked(x)
        d21, d22 = pot._dv21(x), pot._dv22(x)
        s0 = 1j / v22 * p1 - (1j * k + v21) / v22 * p0
        s1 = (1j * (p2 / v22 - p1 * d22 / v22 ** 2)
              - ((d21 * v22 - (1j * k + v21) * d22) / v22 ** 2) * p0
              - (1j * k + v21) / v22 * p1)
        return p0, p1, s0, s1

    def spinor(self, x: float, y: float = 0.0) -> Spinor:
        p0, _, s0, _ = self.components(x)
        ph = cmath.exp(1j * self.potential.k_y * y)
        return Spinor(ph * p0, ph * s0, self.potential.k_y)

    def density(self, x: float) -> float:
        p0, _, s0, _ = self.components(x)
        return abs(p0) ** 2 + abs(s0) ** 2

    def residual(self, x: float) -> tuple[complex, complex, float]:
        """Both rows of ``[s1 p_x + s2 p_y + V] Psi`` with p = -i d, and a term scale."""
        pot = self.potential
        k = pot.k_y
        p0, p1, s0, s1 = self.components(x)
        m = pot.matrix(x)
        top = -1j * s1 - 1j * k * s0 + m[0, 0] * p0 + m[0, 1] * s0
        bot = -1j * p1 + 1j * k * p0 + m[1, 0] * p0 + m[1, 1] * s0
        scale = max(abs(s1), abs(k * s0), abs(m[0, 0] * p0), abs(m[0, 1] * s0),
                    abs(p1), abs(k * p0), abs(m[1, 0] * p0), abs(m[1, 1] * s0))
        return top, bot, scale


def matrix_zero_energy_state(pot: DiracMatrixPotential, state: BoundState,
                             anchor: Optional[float] = None) -> ZeroEnergyState:
    E = state.energy
    if abs(E + pot.k_y ** 2) > ENERGY_MATCH_RTOL * max(1.0, abs(E)):
        raise EnergyMismatch(f"E_n = {E} does not equal -k_y^2 = {-pot.k_y ** 2}")
    anchor = default_anchor(pot.model) if anchor is None else anchor
    return ZeroEnergyState(pot, state, anchor)


def matrix_zero_energy_spinor(x: float, pot: DiracMatrixPotential, state: BoundState,
                              anchor: Optional[float] = None) -> Spinor:
    """``[Psi1, Psi2]`` at x for the zero-energy problem (y-phase at y = 0)."""
    return matrix_zero_energy_state(pot, state, anchor).spinor(x)


@dataclass(frozen=True)
class GridFunction:
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    norm: float = 1.0


def density_norm(density: Callable[[float], float], model: ModelParams, decay: float,
                 tol: Tolerance = Tolerance(abs_tol=1e-30, rel_tol=1e-10)) -> float:
    """``int rho dx`` over the full domain (sigma + x0, inf)."""
    lo = model.left + 1e-7 * model.sigma
    core = model.left + model.sigma + 20.0 * decay
    brk = list(np.linspace(lo, core, 12)[1:-1])
    total = quad_finite(density, lo, core, tol, points=brk)
    total += quad_semi_infinite(density, core, tol, scale=decay)
    if not total > 0 or not math.isfinite(total):
        raise NoConvergence("probability density is not integrable")
    return total


def probability_density(xs: Sequence[float], zstate: ZeroEnergyState) -> GridFunction:
    """``rho = |Psi1|^2 + |Psi2|^2`` on ``xs``, scaled so that its integral over the domain is 1."""
    decay = 1.0 / math.sqrt(-zstate.state.energy)
    norm = density_norm(zstate.density, zstate.potential.model, decay)
    xs = np.asarray(xs, dtype=float)
    return GridFunction(xs, np.array([zstate.density(float(x)) for x in xs]) / norm, norm)
