"""Shared fixtures: the reference model and its (cached) spectrum."""

import mpmath
import pytest

from lwqm.model import PAPER_REFERENCE
from lwqm.spectrum import bound_state, solve_spectrum

mpmath.mp.dps = 30


@pytest.fixture(scope="session")
def ref():
    return PAPER_REFERENCE


@pytest.fixture(scope="session")
def spectrum(ref):
    return solve_spectrum(ref)


@pytest.fixture(scope="session")
def states(spectrum):
    return [bound_state(spectrum, n) for n in range(spectrum.count)]


def rel(a, b):
    """Relative difference scaled by the larger magnitude."""
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def mp_psi(x, E, params=PAPER_REFERENCE):
    """High-precision closed form built from mpmath's Lambert W and 1F1."""
    sig, x0, v0 = (mpmath.mpf(v) for v in (params.sigma, params.x0, params.v0))
    x, E = mpmath.mpf(x), mpmath.mpf(E)
    W = mpmath.lambertw(-mpmath.exp((x0 - x) / sig)).real
    p, q = mpmath.sqrt(-E), mpmath.sqrt(v0 - E)
    a, c, s = -(p - q) ** 2 * sig / (2 * q), 2 * p * sig, 2 * q * sig
    t = -s * W
    return mpmath.exp(s * W / 2) * abs(W) ** (c / 2) * (
        (c - s) / 2 * mpmath.hyp1f1(a, c, t) + a * s / c * mpmath.hyp1f1(a + 1, c + 1, t))


def mp_potential(x, params=PAPER_REFERENCE):
    W = mpmath.lambertw(-mpmath.exp((mpmath.mpf(params.x0) - x) / params.sigma)).real
    return params.v0 - params.v0 / (1 + W)


#: acceptance results, criterion -> [(part, passed, detail)], printed after the run
ACCEPTANCE = {}


def record(criterion, part, passed, detail):
    """Register one checked part of an acceptance criterion."""
    ACCEPTANCE.setdefault(criterion, []).append((part, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for crit in sorted(ACCEPTANCE, key=int):
        parts = ACCEPTANCE[crit]
        ok = all(p for _, p, _ in parts)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {crit}")
        for part, passed, detail in parts:
            terminalreporter.write_line(f"    {'ok  ' if passed else 'FAIL'} {part}: {detail}")
