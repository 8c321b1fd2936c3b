"""
Special functions
=================

Double-precision implementations of the functions the Lambert-W models are
built from:

* ``lambert_w0``  -- principal real branch of the product logarithm on [-1/e, 0]
* ``gamma_complex`` -- Lanczos approximation with reflection
* ``kummer_1f1``  -- Kummer's regular confluent hypergeometric function M(a, c, z)
* ``tricomi_u``   -- Tricomi's irregular solution U(a, c, z)

plus the argument and parameter derivatives of M and U that the model needs.

All routines accept real or complex scalars.  When every input is real the
arithmetic stays real, so callers in the bound-state sector get plain floats.
"""

from __future__ import annotations

import cmath
import math
from typing import NamedTuple, Union

from .errors import ConnectionPole, DomainError, NoConvergence, ParameterPole, PoleError

Number = Union[float, complex]

INV_E = math.exp(-1.0)
EPS = 2.0 ** -52

#: maximal number of series terms before giving up
SERIES_TERM_BUDGET = 5000
#: |z| beyond which the power series is refused
SERIES_CUTOFF = 500.0
#: offset used for the limiting evaluation of U at integer c
INTEGER_C_OFFSET = 1e-3


class HypArgs(NamedTuple):
    a: Number
    c: Number
    z: Number


# ---------------------------------------------------------------------------
# Lambert W
# ---------------------------------------------------------------------------

# Expansion of W0 about the branch point in p = sqrt(2 (1 + e z)).
_BRANCH_SERIES = (-1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0,
                  769.0 / 17280.0, -221.0 / 8505.0, 680863.0 / 43545600.0)


def _branch_series(p: float) -> float:
    """Return 1 + W0 from the branch-point expansion (without the -1 term)."""
    acc = 0.0
    for coef in reversed(_BRANCH_SERIES[1:]):
        acc = (acc + coef) * p
    return acc


def _halley(z: float, w: float) -> float:
    for _ in range(50):
        ew = math.exp(w)
        f = w * ew - z
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= 1e-16 * (1.0 + abs(w)):
            break
    return w


def lambert_w0(z: float) -> float:
    """Principal real branch W0 of the Lambert-W function on [-1/e, 0].

    Halley iteration seeded by the branch-point series near ``-1/e`` and by a
    Taylor/logarithmic seed elsewhere.

    Raises
    ------
    DomainError
        If ``z`` lies outside ``[-1/e, 0]``.
    """
    z = float(z)
    if math.isnan(z) or z > 0.0 or z < -INV_E - 1e-17:
        raise DomainError(f"lambert_w0 needs z in [-1/e, 0], got {z!r}")
    if z == 0.0:
        return 0.0
    if z > -0.25:
        # away from the branch point; z itself carries the full precision
        return _w0_regular(z)
    q = 1.0 + math.e * z
    if q <= 0.0:
        return -1.0
    return lambert_w0_branch(q)[0]


def _w0_regular(z: float) -> float:
    if abs(z) < 1e-9:
        return z * (1.0 - z + 1.5 * z * z)   # Taylor series, exact to rounding here
    return _halley(z, z * (1.0 - z + 1.5 * z * z))


def lambert_w0_branch(q: float) -> tuple[float, float]:
    """Return ``(W0(z), 1 + W0(z))`` for ``z = (q - 1)/e``.

    Passing ``q = 1 + e z`` directly keeps ``1 + W`` accurate when ``z`` sits
    next to the branch point, where forming ``q`` from ``z`` would lose every
    significant digit.
    """
    if q < 0.0 or q > 1.0:
        raise DomainError(f"branch offset q must lie in [0, 1], got {q!r}")
    if q == 0.0:
        return -1.0, 0.0
    p = math.sqrt(2.0 * q)
    if p < 2e-3:
        wp1 = _branch_series(p)
        return wp1 - 1.0, wp1
    z = (q - 1.0) * INV_E
    if z == 0.0:
        return 0.0, 1.0
    if z < -0.25:
        w = _halley(z, _branch_series(p) - 1.0)
    else:
        w = _w0_regular(z)
    return w, w + 1.0


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS = (0.99999999999980993, 676.5203681218851, -1259.1392167224028,
            771.32342877765313, -176.61502916214059, 12.507343278686905,
            -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7)


def _is_nonpositive_integer(z: Number) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def gamma_complex(z: Number) -> complex:
    """Gamma function for complex argument (Lanczos, g=7, with reflection)."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z.real:g}", location=z.real)
    if z.real < 0.5:
        return cmath.pi / (cmath.sin(cmath.pi * z) * gamma_complex(1.0 - z))
    z -= 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return cmath.sqrt(2.0 * cmath.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def rgamma(z: Number) -> complex:
    """1/Gamma(z); zero at the poles of Gamma."""
    if _is_nonpositive_integer(z):
        return 0j
    return 1.0 / gamma_complex(z)


# ---------------------------------------------------------------------------
# Kummer 1F1
# ---------------------------------------------------------------------------

def _kummer_series(a: Number, c: Number, z: Number, derivs: bool = False,
                   want_err: bool = False):
    """Plain power series of M(a, c, z), optionally with d/da and d/dc.

    The rising factorials are carried with their derivatives by the product
    rule, so a vanishing (a)_k does not spoil d/da.  With ``want_err`` an
    absolute rounding-error bound ``eps * sum (k+1) |t_k|`` is appended.
    """
    if _is_nonpositive_integer(c):
        raise ParameterPole(f"1F1 second parameter is a pole: c={c!r}", location=c)
    if abs(z) > SERIES_CUTOFF:
        raise NoConvergence(f"|z|={abs(z):.3g} exceeds the 1F1 series cutoff")
    # term = (a)_k / (c)_k z^k / k!
    term = 1.0
    da = 0.0   # d term / da
    dc = 0.0   # d term / dc
    s = 1.0
    sa = 0.0
    sc = 0.0
    small = 0
    absum = 1.0
    for k in range(SERIES_TERM_BUDGET):
        ak = a + k
        ck = c + k
        f = z / (ck * (k + 1))
        if derivs:
            da = (da * ak + term) * f
            dc = dc * ak * f - term * ak * f / ck
        term = term * ak * f
        s += term
        absum += (k + 2) * abs(term)
        if derivs:
            sa += da
            sc += dc
        mag = abs(term)
        scale = abs(s)
        if derivs:
            mag += abs(da) + abs(dc)
            scale += abs(sa) + abs(sc)
        if mag == 0.0:
            break
        if mag <= 0.25 * EPS * scale and abs(ak) * abs(z) < abs(ck) * (k + 1):
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    else:
        raise NoConvergence("1F1 series exceeded the term budget")
    if want_err:
        return s, sa, sc, EPS * absum
    return s, sa, sc


def kummer_1f1(a: Number, c: Number, z: Number) -> Number:
    """Kummer's function M(a, c, z) = 1F1(a; c; z).

    Power series, with Kummer's transformation ``M(a,c,z) = e^z M(c-a,c,-z)``
    applied when ``Re z < 0``.
    """
    if z == 0:
        if _is_nonpositive_integer(c):
            raise ParameterPole(f"1F1 second parameter is a pole: c={c!r}", location=c)
        return 1.0
    if z.real < 0 if isinstance(z, complex) else z < 0:
        ez = cmath.exp(z) if isinstance(z, complex) else math.exp(z)
        return ez * _kummer_series(c - a, c, -z)[0]
    return _kummer_series(a, c, z)[0]


def kummer_1f1_err(a: Number, c: Number, z: Number) -> tuple[Number, float]:
    """M(a, c, z) together with an absolute rounding-error estimate.

    The estimate grows with the cancellation in the power series, which is
    severe for large |z| off the positive real axis.
    """
    if z == 0:
        return kummer_1f1(a, c, z), 0.0
    if z.real < 0 if isinstance(z, complex) else z < 0:
        ez = cmath.exp(z) if isinstance(z, complex) else math.exp(z)
        s, _, _, err = _kummer_series(c - a, c, -z, want_err=True)
        return ez * s, abs(ez) * err
    s, _, _, err = _kummer_series(a, c, z, want_err=True)
    return s, err


def kummer_dz(a: Number, c: Number, z: Number) -> Number:
    """d/dz M(a, c, z) = (a/c) M(a+1, c+1, z)."""
    if _is_nonpositive_integer(c):
        raise ParameterPole(f"1F1 second parameter is a pole: c={c!r}", location=c)
    return a / c * kummer_1f1(a + 1, c + 1, z)


def kummer_dparams(a: Number, c: Number, z: Number) -> tuple[Number, Number, Number]:
    """Return ``(M, dM/da, dM/dc)`` at ``(a, c, z)``."""
    if z == 0:
        if _is_nonpositive_integer(c):
            raise ParameterPole(f"1F1 second parameter is a pole: c={c!r}", location=c)
        return 1.0, 0.0, 0.0
    neg = z.real < 0 if isinstance(z, complex) else z < 0
    if not neg:
        return _kummer_series(a, c, z, derivs=True)
    ez = cmath.exp(z) if isinstance(z, complex) else math.exp(z)
    m, m1, m2 = _kummer_series(c - a, c, -z, derivs=True)
    return ez * m, -ez * m1, ez * (m1 + m2)


def kummer_dparam(a: Number, c: Number, z: Number, which: str = "first") -> Number:
    """Partial derivative of M(a, c, z) in its first (``a``) or second (``c``) parameter."""
    _, da, dc = kummer_dparams(a, c, z)
    if which in ("first", "a"):
        return da
    if which in ("second", "c"):
        return dc
    raise ValueError(f"which must be 'first' or 'second', got {which!r}")


# ---------------------------------------------------------------------------
# Tricomi U
# ---------------------------------------------------------------------------

def _tricomi_connection_err(a: Number, c: Number, z: Number) -> tuple[complex, float]:
    if abs(c - round(c.real if isinstance(c, complex) else c)) == 0:
        raise ConnectionPole(f"connection formula singular for integer c={c!r}", location=c)
    m1, e1 = kummer_1f1_err(a, c, z)
    m2, e2 = kummer_1f1_err(a - c + 1, 2 - c, z)
    f1 = gamma_complex(1 - c) * rgamma(a - c + 1)
    f2 = gamma_complex(c - 1) * rgamma(a) * complex(z) ** (1 - c)
    t1, t2 = f1 * m1, f2 * m2
    # Gamma carries ~1e-13 relative error; the two terms may cancel
    err = abs(f1) * e1 + abs(f2) * e2 + 1e-13 * (abs(t1) + abs(t2))
    return t1 + t2, err


def _tricomi_connection(a: Number, c: Number, z: Number) -> complex:
    return _tricomi_connection_err(a, c, z)[0]


def tricomi_u(a: Number, c: Number, z: Number) -> complex:
    """Tricomi's confluent hypergeometric function U(a, c, z).

    Uses the two-term connection formula in M; for integer ``c`` the value is
    a Richardson-extrapolated average of the formula at ``c +/- h`` and
    ``c +/- 2h`` with ``h = INTEGER_C_OFFSET``.  ``z`` is on the principal
    branch, so negative real ``z`` is taken from above the cut.
    """
    if z == 0:
        raise DomainError("tricomi_u is singular at z = 0")
    if _is_nonpositive_integer(a):
        # terminating case: U(-n, c, z) = (-1)^n (c)_n M(-n, c, z) is a polynomial
        n = int(-complex(a).real)
        val = 0j
        term = 1.0 + 0j
        # U(-n,c,z) = sum_k C(n,k) (-1)^k ... evaluate as z^n 2F0 finite sum
        # U(a,c,z) = z^{-a} sum_k (a)_k (a-c+1)_k / k! (-1/z)^k, exact for a = -n
        for k in range(n + 1):
            val += term
            term = term * (a + k) * (a - c + 1 + k) / (k + 1) * (-1.0 / z)
        return complex(z) ** n * val
    if _is_integer(c):
        return _integer_c_limit(a, c, z)[0]
    return _tricomi_connection(a, c, z)


def tricomi_u_err(a: Number, c: Number, z: Number) -> tuple[complex, float]:
    """U(a, c, z) together with an absolute error estimate (see :func:`kummer_1f1_err`)."""
    if z == 0 or _is_nonpositive_integer(a):
        val = tricomi_u(a, c, z)
        return val, 8.0 * EPS * abs(val)
    if _is_integer(c):
        return _integer_c_limit(a, c, z)
    return _tricomi_connection_err(a, c, z)


def _is_integer(c: Number) -> bool:
    creal = c.real if isinstance(c, complex) else c
    cimag = c.imag if isinstance(c, complex) else 0.0
    return cimag == 0.0 and creal == round(creal)


def _integer_c_limit(a: Number, c: Number, z: Number) -> tuple[complex, float]:
    """U at integer c from two-sided averages at offsets h and 2h, Richardson-combined.

    Each symmetric average is even in the offset, so ``(4 A(h) - A(2h)) / 3``
    cancels the h^2 term.  The offset balances the remaining h^4 term against
    the rounding error of the connection formula, which grows like 1/h.
    """
    h = INTEGER_C_OFFSET
    avg, err = [], 0.0
    for step, weight in ((h, 4.0 / 3.0), (2.0 * h, 1.0 / 3.0)):
        up, eu = _tricomi_connection_err(a, c + step, z)
        dn, ed = _tricomi_connection_err(a, c - step, z)
        avg.append(0.5 * (up + dn))
        err += weight * 0.5 * (eu + ed)
    val = (4.0 * avg[0] - avg[1]) / 3.0
    # the h^4 remainder is far below the h^2 correction that was removed
    return val, err + h * abs(avg[0] - avg[1])


def tricomi_dz(a: Number, c: Number, z: Number) -> complex:
    """d/dz U(a, c, z) = -a U(a+1, c+1, z)."""
    return -a * tricomi_u(a + 1, c + 1, z)
