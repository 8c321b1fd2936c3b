"""
Supersymmetric (Darboux) partners of the Lambert-W model.

A transformation of order m uses functions u_1..u_m and maps a solution psi
at energy E to

    phi = W[u_1, ..., u_m, psi] / W[u_1, ..., u_m],
    V2  = V1 - 2 (log W[u_1, ..., u_m])''.

Every function handled here is a member of a Jordan chain of the base
equation, ``u'' = (V - lam) u - u_prev`` (``u_prev = 0`` for a plain
solution), so all derivatives beyond the first follow from the ODE.  The
Wronskians and their x-derivatives are therefore assembled from values and
first derivatives only; nothing is differenced numerically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Tuple

import numpy as np

from .errors import PoleInDomain, PrecisionLoss, SingularData, VanishingTransform
from .model import ModelParams, potential_v_jet, psi_all, psi_dx
from .model import psi as psi_value
from .numerics import Bracket, Tolerance, find_root, quad_finite
from .spectrum import BoundState

#: points of the sign-change scan used to detect interior zeros of a denominator
POLE_SCAN_POINTS = 400
#: decay lengths beyond the core region covered by :func:`l2_norm`
L2_TAIL_DECAYS = 5.0
#: assumed relative accuracy of the values and slopes that enter a Wronskian
INPUT_REL_ERR = 1e-14
#: largest accepted estimated relative error of a Wronskian-based result
SUSY_PRECISION_BUDGET = 1e-8
#: share of the squared norm that the extrapolated piece next to the endpoint may carry
L2_SKIP_BUDGET = 1e-6


@dataclass(frozen=True)
class ChainMember:
    """``d^order psi / dE^order`` at energy ``energy`` (order 0 or 1).

    ``order=0`` is a solution of the base equation; ``order=1`` is the second
    member of the Jordan chain headed by the ``order=0`` function at the same
    energy.
    """

    params: ModelParams
    energy: float
    order: int = 0
    label: str = ""

    def __post_init__(self):
        if self.order not in (0, 1):
            raise ValueError("only chain members of order 0 and 1 are provided")

    @property
    def prev(self) -> Optional["ChainMember"]:
        if self.order == 0:
            return None
        return ChainMember(self.params, self.energy, self.order - 1, self.label)

    def value_and_slope(self, x: float) -> tuple[float, float]:
        if self.order == 0:
            return psi_value(x, self.energy, self.params), psi_dx(x, self.energy, self.params)
        _, _, fe, fxe = psi_all(x, self.energy, self.params)
        return fe, fxe

    def jet(self, x: float, n: int, vjet: Sequence[float]) -> list[float]:
        """Derivatives ``f, f', ..., f^(n)`` from the ODE; ``vjet`` holds V and its derivatives."""
        f0, f1 = self.value_and_slope(x)
        out = [f0, f1]
        prev = self.prev.jet(x, n, vjet) if self.prev is not None else [0.0] * (n + 1)
        # q = V - lam; f^(k+2) = sum_j C(k, j) q^(j) f^(k-j) - prev^(k)
        q = [vjet[0] - self.energy] + list(vjet[1:])
        for k in range(n - 1):
            acc = -prev[k]
            for j in range(k + 1):
                acc += math.comb(k, j) * q[j] * out[k - j]
            out.append(acc)
        return out[: n + 1]


def member_from_state(state: BoundState, order: int = 0) -> ChainMember:
    return ChainMember(state.solution.params, state.energy, order, f"psi_{state.index}")


@dataclass(frozen=True)
class WronskianStack:
    """An ordered family of chain members sharing one base potential."""

    functions: Tuple[ChainMember, ...]

    def __post_init__(self):
        if not self.functions:
            raise ValueError("a Wronskian stack needs at least one function")
        ps = {f.params for f in self.functions}
        if len(ps) != 1:
            raise ValueError("all members of a stack must share the model parameters")

    @property
    def size(self) -> int:
        return len(self.functions)

    @property
    def params(self) -> ModelParams:
        return self.functions[0].params

    def extended(self, member: ChainMember) -> "WronskianStack":
        return WronskianStack(self.functions + (member,))

    def columns(self, x: float) -> np.ndarray:
        """Jets ``f_j, f_j', ..., f_j^(m+1)`` of every member, one per column."""
        m = self.size
        vjet = potential_v_jet(x, self.params, order=max(m - 1, 0))
        return np.array([f.jet(x, m + 1, vjet) for f in self.functions]).T

    def derivatives(self, x: float, normalized: bool = False) -> tuple[float, float, float]:
        """``(W, W', W'')`` at ``x`` from determinant derivative identities.

        With rows r_i = (f_1^(i), ..., f_m^(i)):
        W' = det(r_0..r_{m-2}, r_m) and
        W'' = det(r_0..r_{m-3}, r_{m-1}, r_m) + det(r_0..r_{m-2}, r_{m+1}).

        With ``normalized`` every column is first divided by its largest
        entry.  That rescales all three numbers by one common factor, which
        leaves W'/W and W''/W unchanged but keeps products of decaying
        functions from underflowing.
        """
        cols = self.columns(x)
        if normalized:
            cols = cols / column_scales(cols)
        return _wronskian_dets(cols)


def column_scales(cols: np.ndarray) -> np.ndarray:
    s = np.max(np.abs(cols), axis=0)
    return np.where(s > 0, s, 1.0)


def _wronskian_dets(rows: np.ndarray) -> tuple[float, float, float]:
    # rows[i, j] = f_j^(i); needs m + 2 rows for m columns
    m = rows.shape[1]
    base = list(range(m))
    w = _det(rows[base])
    w1 = _det(rows[base[:-1] + [m]])
    w2 = _det(rows[base[:-1] + [m + 1]])
    if m >= 2:
        w2 += _det(rows[base[:-2] + [m - 1, m]])
    return w, w1, w2


def _wronskian_errs(rows: np.ndarray) -> tuple[float, float, float]:
    """Rounding bounds for :func:`_wronskian_dets`: input accuracy times the permanent of |rows|.

    Near the singular endpoint all solutions share their leading behaviour,
    so their Wronskians are small differences of large products; the ratio
    of these bounds to the determinants measures that cancellation.
    """
    m = rows.shape[1]
    base = list(range(m))
    e = _perm_abs(rows[base])
    e1 = _perm_abs(rows[base[:-1] + [m]])
    e2 = _perm_abs(rows[base[:-1] + [m + 1]])
    if m >= 2:
        e2 += _perm_abs(rows[base[:-2] + [m - 1, m]])
    return INPUT_REL_ERR * e, INPUT_REL_ERR * e1, INPUT_REL_ERR * e2


def _perm_abs(mat: np.ndarray) -> float:
    a = np.abs(mat)
    n = a.shape[0]
    return float(sum(math.prod(a[i, s[i]] for i in range(n))
                     for s in itertools.permutations(range(n))))


def _check_cancellation(x: float, vals, errs, length: float, what: str) -> None:
    # a size measure that stays positive at simple zeros of the value
    size = abs(vals[0]) + length * abs(vals[1]) + 0.5 * length * length * abs(vals[2])
    if errs[0] > SUSY_PRECISION_BUDGET * size:
        raise PrecisionLoss(f"the {what} Wronskian cancels at x={x:.6g}: estimated relative "
                            f"error {errs[0] / max(size, 1e-300):.2g}")


def _det(mat: np.ndarray) -> float:
    n = mat.shape[0]
    if n == 1:
        return float(mat[0, 0])
    if n == 2:
        return float(mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0])
    return float(np.linalg.det(mat))


def wronskian(stack: WronskianStack, x: float) -> float:
    """Determinant of the m x m derivative matrix of the stack at ``x``."""
    return stack.derivatives(x)[0]


def log_wronskian_dxx(stack: WronskianStack, x: float) -> float:
    """(log W)'' = W''/W - (W'/W)^2."""
    cols = stack.columns(x)
    cols = cols / column_scales(cols)
    w, w1, w2 = _wronskian_dets(cols)
    if w == 0.0:
        raise PoleInDomain(f"the Wronskian vanishes at x={x}", location=x)
    r = w1 / w
    out = w2 / w - r * r
    e0, e1, e2 = _wronskian_errs(cols)
    err = (e2 + 2.0 * abs(r) * e1 + (abs(w2 / w) + 2.0 * r * r) * e0) / abs(w)
    v1 = potential_v_jet(x, stack.params, order=0)[0]
    # measured against the size of the terms: far out W''/W and (W'/W)^2 both
    # approach lam^2 and their small difference is harmless next to them
    if err > SUSY_PRECISION_BUDGET * (abs(v1) + abs(w2 / w) + r * r):
        raise PrecisionLoss(f"(log W)'' cancels at x={x:.6g}: estimated error {err:.2g}")
    return out


@dataclass(frozen=True)
class SusySpec:
    """A SUSY transformation: its transformation functions and their energies."""

    order: int
    mode: Literal["standard", "confluent"]
    transformation_functions: Tuple[ChainMember, ...]

    def __post_init__(self):
        if self.order != len(self.transformation_functions):
            raise ValueError("order must equal the number of transformation functions")
        if self.mode == "standard":
            lams = [f.energy for f in self.transformation_functions]
            if len(set(lams)) != len(lams) or any(f.order for f in self.transformation_functions):
                raise ValueError("standard SUSY needs solutions at pairwise different energies")
        elif self.mode == "confluent":
            fs = self.transformation_functions
            if any(f.energy != fs[0].energy for f in fs) or [f.order for f in fs] != list(range(len(fs))):
                raise ValueError("confluent SUSY needs a Jordan chain u_1, u_2, ... at one energy")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def factorization_energies(self) -> Tuple[float, ...]:
        return tuple(f.energy for f in self.transformation_functions)

    @property
    def stack(self) -> WronskianStack:
        return WronskianStack(self.transformation_functions)

    @property
    def params(self) -> ModelParams:
        return self.transformation_functions[0].params


def transformed_potential(spec: SusySpec, x: float) -> float:
    """``V2 = V1 - 2 (log W)''`` with W the Wronskian of the transformation functions."""
    v1 = potential_v_jet(x, spec.params, order=0)[0]
    return v1 - 2.0 * log_wronskian_dxx(spec.stack, x)


@dataclass(frozen=True)
class SusyState:
    """phi = W[u_1..u_m, psi] / W[u_1..u_m] for a target solution psi at energy E."""

    spec: SusySpec
    target: ChainMember

    @property
    def energy(self) -> float:
        return self.target.energy

    def _parts(self, x: float):
        # numerator and denominator share the scaled transformation columns,
        # so only the target column's scale survives in the quotient
        stack = self.spec.stack
        m = stack.size
        vjet = potential_v_jet(x, stack.params, order=m)
        funcs = stack.functions + (self.target,)
        cols = np.array([f.jet(x, m + 2, vjet) for f in funcs]).T
        if not np.all(np.any(cols[:, :m] != 0.0, axis=0)):
            raise SingularData(f"a transformation function underflows to zero at x={x}")
        scales = column_scales(cols)
        cols = cols / scales
        den = _wronskian_dets(cols[:, :m])
        if den[0] == 0.0:
            raise PoleInDomain(f"the transformation Wronskian vanishes at x={x}", location=x)
        num = _wronskian_dets(cols)
        length = x - stack.params.left
        _check_cancellation(x, den, _wronskian_errs(cols[:, :m]), length, "denominator")
        _check_cancellation(x, num, _wronskian_errs(cols), length, "numerator")
        return tuple(v * scales[-1] for v in num), den

    def __call__(self, x: float) -> float:
        num, den = self._parts(x)
        return num[0] / den[0]

    def dx(self, x: float) -> float:
        (n0, n1, _), (d0, d1, _) = self._parts(x)
        return (n1 - n0 * d1 / d0) / d0

    def dxx(self, x: float) -> float:
        (n0, n1, n2), (d0, d1, d2) = self._parts(x)
        r1 = d1 / d0
        return (n2 - 2.0 * n1 * r1 + n0 * (2.0 * r1 * r1 - d2 / d0)) / d0

    def residual(self, x: float) -> tuple[float, float]:
        """``(phi'' + (E - V2) phi, scale)`` with scale = max(|phi''|, |(E - V2) phi|)."""
        f = self(x)
        f2 = self.dxx(x)
        rest = (self.energy - transformed_potential(self.spec, x)) * f
        return f2 + rest, max(abs(f2), abs(rest))


@dataclass(frozen=True)
class ChainQuotient:
    """u_1 / W[u_1, u_2]: the partner solution at the chain energy.

    With u_2 = d psi / dE taken from the solution that decays at +infinity,
    W[u_1, u_2](x) equals the tail integral of u_1^2 from x onwards and tends
    to zero at +infinity, so this quotient grows there and is not a bound
    state of the partner.
    """

    spec: SusySpec

    @property
    def energy(self) -> float:
        return self.spec.factorization_energies[0]

    def __call__(self, x: float) -> float:
        u1 = self.spec.transformation_functions[0]
        return u1.value_and_slope(x)[0] / wronskian(self.spec.stack, x)


def _trusted_wronskian(stack: WronskianStack, x: float) -> float:
    # near the left end W can be pure rounding noise; report 0 there so that
    # noise is not mistaken for a sign change.  The rounding estimate is only
    # good to a factor of a few, so the full evaluation budget is demanded.
    cols = stack.columns(x)
    cols = cols / column_scales(cols)
    w = _wronskian_dets(cols)[0]
    err = _wronskian_errs(cols)[0]
    return w if err <= SUSY_PRECISION_BUDGET * abs(w) else 0.0


def check_denominator(stack: WronskianStack, lo: Optional[float] = None,
                      hi: Optional[float] = None, n: int = POLE_SCAN_POINTS) -> None:
    """Raise ``PoleInDomain`` if W[stack] changes sign in the interior of [lo, hi].

    Sample points where the value fails the cancellation budget are left
    out of the sign scan; no partner value can be evaluated there anyway.
    """
    params = stack.params
    lo = params.left + 1e-6 * params.sigma if lo is None else lo
    hi = params.left + 10.0 * params.sigma if hi is None else hi
    xs = np.linspace(lo, hi, n)
    vals = np.array([_trusted_wronskian(stack, float(x)) for x in xs])
    nz = vals != 0.0
    sg = np.sign(vals[nz])
    flips = np.nonzero(sg[1:] != sg[:-1])[0]
    if flips.size:
        i = int(flips[0])
        lo_x, hi_x = float(xs[nz][i]), float(xs[nz][i + 1])
        w = lambda x: wronskian(stack, x)  # noqa: E731
        x_at = find_root(w, Bracket(lo_x, hi_x, float(vals[nz][i]), float(vals[nz][i + 1])))
        raise PoleInDomain(f"the transformation Wronskian vanishes at x={x_at:.6g}",
                           location=x_at)


def susy_order1(state_n: BoundState, ground: BoundState) -> SusyState:
    """First-order partner ``psi_n' - (u'/u) psi_n`` with ``u = ground``."""
    if state_n.index == ground.index or state_n.energy == ground.energy:
        raise VanishingTransform(
            f"psi_{state_n.index} coincides with the transformation function")
    spec = SusySpec(1, "standard", (member_from_state(ground),))
    check_denominator(spec.stack)
    return SusyState(spec, member_from_state(state_n))


def susy_order2(state_n: BoundState, u_pair: Tuple[BoundState, BoundState]) -> SusyState:
    """Second-order partner ``W[u_1, u_2, psi_n] / W[u_1, u_2]``."""
    if state_n.index in (u_pair[0].index, u_pair[1].index):
        raise VanishingTransform(
            f"psi_{state_n.index} is one of the transformation functions")
    spec = SusySpec(2, "standard", tuple(member_from_state(s) for s in u_pair))
    check_denominator(spec.stack)
    return SusyState(spec, member_from_state(state_n))


def confluent_chain(state: BoundState) -> Tuple[ChainMember, ChainMember]:
    """``(u_1, u_2) = (psi_n, d psi_n / dE)`` at E = E_n."""
    return member_from_state(state, 0), member_from_state(state, 1)


def susy_confluent(state_n: BoundState, chain: Tuple[ChainMember, ChainMember],
                   same_level: Literal["literal", "quotient"] = "literal"):
    """Confluent second-order partner ``W[u_1, u_2, psi_n] / W[u_1, u_2]``.

    For ``psi_n`` at the chain energy the literal Wronskian repeats u_1 and
    vanishes identically.  ``same_level="literal"`` reports that as
    ``VanishingTransform``; ``same_level="quotient"`` returns u_1/W[u_1, u_2],
    the solution of the partner equation at that energy which the
    transformation generates.
    """
    spec = SusySpec(2, "confluent", tuple(chain))
    check_denominator(spec.stack)
    if state_n.energy == chain[0].energy:
        if same_level == "quotient":
            return ChainQuotient(spec)
        raise VanishingTransform(
            "the literal confluent Wronskian repeats the chain head and vanishes")
    return SusyState(spec, member_from_state(state_n))


def l2_norm(f, params: ModelParams, decay: float,
            tol: Tolerance = Tolerance(abs_tol=1e-30, rel_tol=1e-10)) -> float:
    """``sqrt(int f^2)`` over the domain, for f decaying like ``exp(-x / decay)``.

    The core region already extends 20 decay lengths past ``sigma + x0 + sigma``;
    the integral stops ``L2_TAIL_DECAYS`` decay lengths further out, where f^2
    is below ``exp(-50)`` of its size at the core.  Going further would only
    reach points where the transformation functions underflow to zero.

    Where Wronskian cancellation makes f unusable next to the singular
    endpoint (``PrecisionLoss``), the integral starts at the first accurate
    point and the piece before it is integrated as a power law fitted to
    two values.  That piece may carry at most ``L2_SKIP_BUDGET`` of the total.
    """
    g = lambda t: f(t) ** 2  # noqa: E731
    # start where f can be evaluated to full accuracy; next to the endpoint
    # f vanishes like a power t^p, which integrates the skipped piece
    lo = params.left + 1e-7 * params.sigma
    while True:
        try:
            f_lo, f_2lo = f(lo), f(params.left + 2.0 * (lo - params.left))
            break
        except PrecisionLoss:
            if lo - params.left >= params.sigma:
                raise
            lo = params.left + 2.0 * (lo - params.left)
    if lo - params.left > 1e-7 * params.sigma:
        if not f_lo * f_2lo > 0:
            raise PrecisionLoss(f"f changes sign next to the endpoint (x={lo:.3g})")
        power = math.log(f_2lo / f_lo) / math.log(2.0)
        if not power > -0.5:
            raise PrecisionLoss(f"f is not square integrable at the endpoint (power {power:.3g})")
        skipped = (lo - params.left) * f_lo * f_lo / (2.0 * power + 1.0)
    else:
        skipped = 0.0
    core = params.left + params.sigma + 20.0 * decay
    far = core + L2_TAIL_DECAYS * decay
    brk = list(np.linspace(lo, core, 12)[1:-1])
    tail = list(np.linspace(core, far, 8)[1:-1])
    total = skipped + quad_finite(g, lo, core, tol, points=brk) + quad_finite(g, core, far, tol, points=tail)
    if not total > 0:
        raise SingularData("function has zero L2 norm")
    if skipped > L2_SKIP_BUDGET * total:
        raise PrecisionLoss(f"f cannot be evaluated close enough to the endpoint (from x={lo:.3g})")
    return math.sqrt(total)


@dataclass(frozen=True)
class Normalized:
    """A real function on the domain scaled to unit L2 norm."""

    func: object
    norm: float

    def __call__(self, x: float) -> float:
        return self.func(x) / self.norm


def normalize(f, params: ModelParams, energy: float) -> Normalized:
    return Normalized(f, l2_norm(f, params, 1.0 / math.sqrt(-energy)))
