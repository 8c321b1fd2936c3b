import math

import numpy as np
import pytest

from lwqm.errors import PoleError
from lwqm.model import ModelParams, psi
from lwqm.reference_values import SPECTRUM
from lwqm.spectrum import bound_state, eigenvalue_equation, scan_grid, solve_spectrum

from conftest import rel


def test_reference_levels(spectrum):
    assert spectrum.count == 5
    for got, published in zip(spectrum.energies, SPECTRUM):
        assert abs(got - published) <= 1e-5


@pytest.mark.parametrize("published", [SPECTRUM[0], SPECTRUM[4]])
def test_sign_change_across_published_levels(ref, published):
    d = 1e-5 * max(1.0, abs(published))
    assert eigenvalue_equation(published - d, ref) * eigenvalue_equation(published + d, ref) < 0


def test_equation_vanishes_at_levels(spectrum, ref):
    for E in spectrum.energies:
        assert abs(eigenvalue_equation(E, ref)) <= 1e-9


def test_shallow_model_has_no_levels():
    tiny = ModelParams(0.1, 0.0, 0.1)
    es = -np.geomspace(1.0, 1e-8, 3000)
    from lwqm.spectrum import _denominator
    vals = np.sign([eigenvalue_equation(float(e), tiny) for e in es])
    dens = np.sign([_denominator(float(e), tiny) for e in es])
    flips = vals[1:] != vals[:-1]
    # every sign change of the equation is a pole: the denominator flips in the same cell
    assert np.all(dens[1:][flips] != dens[:-1][flips])
    assert solve_spectrum(tiny).count == 0
    assert len(solve_spectrum(tiny)) == 0


def test_count_grows_with_width():
    counts = [solve_spectrum(ModelParams(s, -5.0, 5.0)).count for s in (5.0, 2.0, 0.5)]
    assert counts[0] >= counts[1] >= counts[2]
    assert counts[0] > counts[2]


def test_count_grows_with_depth():
    counts = [solve_spectrum(ModelParams(5.0, -5.0, v)).count for v in (10.0, 5.0, 1.0)]
    assert counts[0] >= counts[1] >= counts[2]


def test_refinement_stable(spectrum, ref):
    fine = solve_spectrum(ref, n_points=4000)
    assert fine.count == spectrum.count
    for a, b in zip(fine.energies, spectrum.energies):
        assert abs(a - b) <= 1e-9


def test_levels_sorted_and_negative(spectrum):
    es = spectrum.energies
    assert list(es) == sorted(es)
    assert all(e < 0 for e in es)
    assert min(es) > -4.0 * 5.0


def test_scan_grid_accumulates_at_zero(ref):
    g = scan_grid(ref)
    assert g[0] == pytest.approx(-20.0) and g[-1] == pytest.approx(-1e-10)
    assert np.all(np.diff(g) > 0)


def test_pole_reported():
    # the denominator M(a, c, s) vanishes somewhere between two levels
    ref = ModelParams(5.0, -5.0, 5.0)
    from lwqm.spectrum import _denominator
    from lwqm.numerics import Bracket, find_root
    f = lambda e: _denominator(e, ref)
    grid = scan_grid(ref, 400)
    for lo, hi in zip(grid, grid[1:]):
        if np.sign(f(lo)) != np.sign(f(hi)):
            pole = find_root(f, Bracket.from_function(f, float(lo), float(hi)))
            break
    else:
        pytest.fail("no pole found")
    big = abs(eigenvalue_equation(pole * (1 + 1e-12), ref))
    assert big > 1e3
    with pytest.raises(PoleError):
        from unittest import mock
        with mock.patch("lwqm.spectrum._terms", return_value=(1.0, 0.0)):
            eigenvalue_equation(-1.0, ref)


class TestBoundState:
    def test_ground(self, spectrum):
        s = bound_state(spectrum, 0)
        assert s.index == 0
        assert s.energy == pytest.approx(-3.842367, abs=1e-6)

    @pytest.mark.parametrize("n", [-1, 5])
    def test_out_of_range(self, spectrum, n):
        with pytest.raises(IndexError):
            bound_state(spectrum, n)

    def test_node_counts(self, states, ref):
        for st in states:
            cut = 5.0 + 30.0 / math.sqrt(-st.energy)
            xs = np.linspace(1e-4, cut, 6000)
            vals = np.array([st(x) for x in xs])
            vals = vals[np.abs(vals) > 1e-10 * np.abs(vals).max()]
            assert int(np.sum(np.sign(vals[1:]) != np.sign(vals[:-1]))) == st.index

    def test_ode_residual(self, states, ref):
        from lwqm.model import potential_v
        from lwqm.numerics import derivative
        for st in states:
            for x in (0.4, 3.0, 11.0):
                f2 = derivative(st.dx, x, h=min(0.2, 0.1 * x))
                rest = (st.energy - potential_v(x, ref)) * st(x)
                assert abs(f2 + rest) <= 1e-8 * max(abs(f2), abs(rest))

    def test_dirichlet_condition(self, states, ref):
        for st in states:
            assert st(1e-12) == pytest.approx(0.0, abs=1e-9 * abs(st(1.0)))
