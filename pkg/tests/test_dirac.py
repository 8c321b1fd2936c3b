"""Dirac equation: scalar Lambert-W potential and zero-energy matrix potential."""

import cmath
import math
import random

import mpmath
import numpy as np
import pytest

from lwqm.dirac import (DiracMatrixPotential, DiracScalarParams, dirac_abbrevs, dirac_scalar_psi1,
                        dirac_scalar_psi1_jet, dirac_scalar_residual, dirac_scalar_spinor,
                        inverse_x_potential, klein_gordon_residual, matrix_potential_from_free_entries,
                        matrix_zero_energy_spinor, matrix_zero_energy_state, probability_density)
from lwqm.errors import DegenerateK0, EnergyMismatch, PrecisionLoss, ZeroKy, ZeroV22
from lwqm.model import ModelParams, potential_v
from lwqm.numerics import derivative

XS = np.linspace(0.2, 30.0, 40)


def evaluable(fn, xs=XS):
    """Values of fn on xs, skipping points refused with PrecisionLoss."""
    out = []
    for x in xs:
        try:
            out.append((float(x), fn(float(x))))
        except PrecisionLoss:
            pass
    return out


class TestAbbreviations:
    def test_golden_values(self, ref):
        ab = dirac_abbrevs(DiracScalarParams(ref, 1.0, 2.0))
        golden = dict(K0=3.4641016151377546j, K1=1.7320508075688772 + 0j,
                      alpha=8.660254037844387 - 11.547005383792516j, gamma=17.320508075688775 + 0j,
                      delta=17.320508075688775 + 50j, s0=34.64101615137755j)
        for name, value in golden.items():
            assert abs(getattr(ab, name) - value) <= 1e-14 * abs(value), name

    def test_against_high_precision_arithmetic(self, ref):
        for E, k in ((1.0, 2.0), (0.0, 1.3), (-0.7, 6.2), (3.0, 0.4)):
            ab = dirac_abbrevs(DiracScalarParams(ref, E, k))
            sig, v0 = mpmath.mpf(5), mpmath.mpf(5)
            k0 = mpmath.sqrt(mpmath.mpc(k * k - (E - 5.0) ** 2))
            k1 = mpmath.sqrt(mpmath.mpc(k * k - E * E))
            alpha = sig / (2 * k0) * ((k0 + k1) ** 2 + v0 ** 2)
            for got, want in ((ab.K0, k0), (ab.K1, k1), (ab.alpha, alpha), (ab.gamma, 2 * sig * k1),
                              (ab.delta, 2 * sig * (k1 + 1j * v0)), (ab.s0, 2 * sig * k0)):
                assert abs(got - complex(want)) <= 1e-14 * abs(complex(want))

    def test_gamma_over_s0(self, ref):
        rng = random.Random(3)
        for _ in range(20):
            ab = dirac_abbrevs(DiracScalarParams(ref, rng.uniform(-2, 3), rng.uniform(0.1, 8)))
            assert abs(ab.gamma / ab.s0 - ab.K1 / ab.K0) <= 1e-14 * abs(ab.K1 / ab.K0)

    def test_weak_potential_limit(self):
        model = ModelParams(5.0, -5.0, 1e-12)
        ab = dirac_abbrevs(DiracScalarParams(model, 0.0, 1.3))
        assert ab.K0 == pytest.approx(1.3, abs=1e-11)
        assert ab.K1 == pytest.approx(1.3, abs=1e-11)
        assert ab.gamma == pytest.approx(13.0, abs=1e-10)
        assert ab.delta == pytest.approx(13.0, abs=1e-10)

    def test_branch_signs(self, ref):
        base = dirac_abbrevs(DiracScalarParams(ref, 1.0, 2.0))
        flip = dirac_abbrevs(DiracScalarParams(ref, 1.0, 2.0, branch=(-1, 1)))
        assert flip.K0 == -base.K0
        assert flip.K1 == base.K1
        with pytest.raises(ValueError):
            DiracScalarParams(ref, 1.0, 2.0, branch=(2, 1))

    def test_degenerate_k0(self, ref):
        with pytest.raises(DegenerateK0):
            dirac_abbrevs(DiracScalarParams(ref, 1.0, 4.0))


class TestScalarSolution:
    @pytest.mark.parametrize("branch", [(1, 1), (-1, 1), (1, -1), (-1, -1)])
    @pytest.mark.parametrize("coef", [(1, 0), (0, 1)])
    def test_klein_gordon_residual(self, ref, branch, coef):
        p = DiracScalarParams(ref, 2.0, 0.7, *coef, branch=branch)
        pts = evaluable(lambda x: klein_gordon_residual(x, p))
        assert len(pts) >= 20
        assert max(abs(r) / s for _, (r, s) in pts) <= 1e-6

    def test_klein_gordon_at_100_random_points(self, ref):
        rng = random.Random(11)
        p = DiracScalarParams(ref, 1.0, 2.0, 1.0, 0.5j)
        xs = [rng.uniform(0.05, 40.0) for _ in range(100)]
        pts = evaluable(lambda x: klein_gordon_residual(x, p), xs)
        assert len(pts) >= 60
        assert max(abs(r) / s for _, (r, s) in pts) <= 1e-6

    def test_jet_against_difference_quotients(self, ref):
        p = DiracScalarParams(ref, 2.0, 0.7, 0.3, 1.0)
        for x in (1.0, 6.0):
            f0, f1, f2 = dirac_scalar_psi1_jet(x, p)
            h = 1e-4
            fp, fm = dirac_scalar_psi1(x + h, p), dirac_scalar_psi1(x - h, p)
            assert abs((fp - fm) / (2 * h) - f1) <= 1e-7 * abs(f1)
            assert abs((fp - 2 * f0 + fm) / (h * h) - f2) <= 1e-5 * abs(f2)

    def test_linearity(self, ref):
        c1, c2 = 2.0 - 1j, 0.5 + 3j
        pa = DiracScalarParams(ref, 2.0, 0.7, 1.0, 0.0)
        pb = DiracScalarParams(ref, 2.0, 0.7, 0.0, 1.0)
        pc = DiracScalarParams(ref, 2.0, 0.7, c1, c2)
        for x in (0.5, 3.0, 12.0):
            combo = c1 * dirac_scalar_psi1(x, pa) + c2 * dirac_scalar_psi1(x, pb)
            assert abs(dirac_scalar_psi1(x, pc) - combo) <= 1e-13 * abs(combo)

    @pytest.mark.parametrize("E, k", [(1.0, 2.0), (0.0, 1.96), (-0.5, 1.2)])
    def test_branches_are_independent(self, ref, E, k):
        # no first-derivative term: the Wronskian of two solutions is constant
        pa = DiracScalarParams(ref, E, k, 1.0, 0.0)
        pb = DiracScalarParams(ref, E, k, 0.0, 1.0)

        def w(x):
            a, b = dirac_scalar_psi1_jet(x, pa), dirac_scalar_psi1_jet(x, pb)
            return a[0] * b[1] - a[1] * b[0], abs(a[0] * b[1]) + abs(a[1] * b[0])

        vals = [w(x) for x in (6.0, 9.0, 14.0, 20.0)]
        assert all(abs(v) > 1e-3 * size for v, size in vals)
        assert max(abs(v - vals[0][0]) for v, _ in vals) <= 1e-7 * abs(vals[0][0])

    def test_branches_degenerate_for_large_imaginary_gamma(self, ref):
        # K1 imaginary: U(alpha, gamma, .) = C M(alpha, gamma, .) up to terms of
        # size |Gamma(gamma - 1) / Gamma(alpha)| ~ exp(-pi |gamma| / 2)
        E, k = 2.0, 0.7
        ab = dirac_abbrevs(DiracScalarParams(ref, E, k))
        assert abs(complex(mpmath.gamma(ab.gamma - 1) / mpmath.gamma(ab.alpha))) < 1e-12
        pa = DiracScalarParams(ref, E, k, 1.0, 0.0)
        pb = DiracScalarParams(ref, E, k, 0.0, 1.0)
        ratios = [dirac_scalar_psi1(x, pa) / dirac_scalar_psi1(x, pb) for x in (0.5, 3.0, 12.0)]
        assert max(abs(r - ratios[0]) for r in ratios) <= 1e-10 * abs(ratios[0])

    def test_free_limit_tricomi_branch(self):
        # V0 -> 0: Psi1'' = (k^2 - E^2) Psi1
        model = ModelParams(5.0, -5.0, 1e-12)
        for E, k in ((0.0, 1.3), (2.0, 0.7)):
            p = DiracScalarParams(model, E, k, 0.0, 1.0)
            for x in (0.5, 2.0, 6.0, 15.0):
                f0, _, f2 = dirac_scalar_psi1_jet(x, p)
                assert abs(f2 - (k * k - E * E) * f0) <= 1e-8 * abs(f2)
                top, bot, scale = dirac_scalar_residual(x, p)
                assert max(abs(top), abs(bot)) <= 1e-8 * scale

    def test_free_limit_kummer_branch_degenerates(self):
        # alpha = gamma makes M(alpha, gamma, .) = exp, and its two terms cancel
        model = ModelParams(5.0, -5.0, 1e-12)
        with pytest.raises(PrecisionLoss):
            dirac_scalar_psi1(2.0, DiracScalarParams(model, 0.0, 1.3, 1.0, 0.0))

    def test_precision_guard_near_endpoint(self, ref):
        p = DiracScalarParams(ref, 0.0, math.sqrt(3.8423672328765575))
        with pytest.raises(PrecisionLoss):
            dirac_scalar_psi1(0.5, p)
        dirac_scalar_psi1(10.0, p)


class TestScalarSpinor:
    def test_dirac_residual_at_20_random_settings(self, ref):
        rng = random.Random(7)
        for _ in range(20):
            E, k = rng.uniform(-1.0, 3.0), rng.uniform(0.3, 3.0)
            for coef in ((1, 0), (0, 1)):
                p = DiracScalarParams(ref, E, k, *coef)
                pts = evaluable(lambda x: dirac_scalar_residual(x, p))
                assert len(pts) >= 25, (E, k, coef)
                worst = max(max(abs(t), abs(b)) / s for _, (t, b, s) in pts)
                assert worst <= 1e-6, (E, k, coef)

    def test_residual_against_difference_quotients(self, ref):
        # first row rebuilt from the spinor alone: i d/dx Psi_b + i k Psi_b + (V - E) Psi_a
        p = DiracScalarParams(ref, 2.0, 0.7, 1.0, 0.4)
        for x in (1.0, 5.0):
            sp = lambda t: dirac_scalar_spinor(t, 0.0, p)  # noqa: E731
            db = derivative(lambda t: sp(t).psi2, x, h=0.05)
            s = sp(x)
            top = 1j * db + 1j * p.k_y * s.psi2 + (potential_v(x, ref) - p.E) * s.psi1
            assert abs(top) <= 1e-7 * abs(s.psi1)

    def test_y_dependence_is_a_phase(self, ref):
        p = DiracScalarParams(ref, 2.0, 0.7)
        a = dirac_scalar_spinor(3.0, 0.0, p)
        for y in (0.4, -2.0, 17.0):
            b = dirac_scalar_spinor(3.0, y, p)
            assert b.density == pytest.approx(a.density, rel=1e-14)
            assert abs(b.psi1 - cmath.exp(0.7j * y) * a.psi1) <= 1e-14 * abs(a.psi1)
            assert b.plane_wave_ky == 0.7

    def test_zero_ky(self, ref):
        with pytest.raises(ZeroKy):
            dirac_scalar_spinor(3.0, 0.0, DiracScalarParams(ref, 2.0, 0.0))


FIG8_LEVELS = (0, 1, 2)


def generic_potential(ref, k):
    """Free entries with nonconstant V22; derivatives left to the difference scheme."""
    return matrix_potential_from_free_entries(
        lambda x: 0.3 + 1j / (1.0 + x), lambda x: 2.0 + 0.5 * math.sin(x) + 0.2j, k, ref)


class TestMatrixPotential:
    def test_inverse_x_entries(self, ref):
        pot = inverse_x_potential(ref, 1.5)
        for x in (0.3, 2.0, 9.0):
            assert abs(pot.v12(x) - 1j / x) <= 1e-15
            assert abs(pot.v11(x) + potential_v(x, ref)) <= 1e-15 * abs(potential_v(x, ref))

    @pytest.mark.parametrize("build", ["inverse_x", "generic"])
    def test_constraints(self, ref, build):
        k = 1.2
        pot = inverse_x_potential(ref, k) if build == "inverse_x" else generic_potential(ref, k)
        for x in np.linspace(0.1, 25.0, 100):
            first, second = pot.constraint_residuals(float(x))
            assert abs(first) <= 1e-9
            assert abs(second) <= 1e-7 * max(1.0, abs(potential_v(float(x), ref)))

    @pytest.mark.parametrize("build", ["inverse_x", "generic"])
    def test_schroedinger_coefficient(self, ref, build):
        k = 0.9
        pot = inverse_x_potential(ref, k) if build == "inverse_x" else generic_potential(ref, k)
        for x in (0.2, 1.5, 7.0, 20.0):
            target = k * k + potential_v(x, ref)
            assert abs(pot.schroedinger_coefficient(x) - target) <= 1e-7 * max(1.0, abs(target))

    def test_zero_v22(self, ref):
        pot = matrix_potential_from_free_entries(lambda x: 1j / x, lambda x: 0j, 1.0, ref)
        with pytest.raises(ZeroV22):
            pot.v11(1.0)


class TestZeroEnergyStates:
    @pytest.mark.parametrize("n", FIG8_LEVELS)
    def test_dirac_residual(self, ref, states, n):
        k = math.sqrt(-states[n].energy)
        z = matrix_zero_energy_state(inverse_x_potential(ref, k), states[n])
        worst = 0.0
        for x in np.linspace(0.05, 30.0, 60):
            top, bot, scale = z.residual(float(x))
            worst = max(worst, abs(top) / scale, abs(bot) / scale)
        assert worst <= 1e-6

    def test_generic_potential_residual(self, ref, states):
        k = math.sqrt(-states[1].energy)
        z = matrix_zero_energy_state(generic_potential(ref, k), states[1])
        for x in (0.3, 2.0, 6.0, 14.0):
            top, bot, scale = z.residual(x)
            assert max(abs(top), abs(bot)) <= 1e-6 * scale

    def test_underlying_schroedinger_equation(self, ref, states):
        # Psi1 / prefactor is psi_n, which solves psi'' = (k^2 + V) psi
        n = 1
        k = math.sqrt(-states[n].energy)
        z = matrix_zero_energy_state(inverse_x_potential(ref, k), states[n])
        anchor = z.anchor
        for x in (0.5, 3.0, 10.0):
            f = lambda t: z.components(t)[0] * anchor / t  # noqa: E731
            h = 1e-3
            d2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)
            rest = (k * k + potential_v(x, ref)) * f(x)
            assert abs(d2 - rest) <= 1e-5 * max(abs(d2), abs(rest))

    def test_gauge_fixed_at_anchor(self, ref, states):
        k = math.sqrt(-states[2].energy)
        z = matrix_zero_energy_state(inverse_x_potential(ref, k), states[2], anchor=2.5)
        assert abs(z.components(2.5)[0] - states[2](2.5)) <= 1e-9 * abs(states[2](2.5))
        assert abs(z.components(5.0)[0] - 2.0 * states[2](5.0)) <= 1e-9 * abs(states[2](5.0))

    def test_quadrature_prefactor_matches_closed_form(self, ref, states):
        k = math.sqrt(-states[0].energy)
        closed = inverse_x_potential(ref, k)
        quad = DiracMatrixPotential(ref, k, closed.v21, closed.v22, closed.dv21, closed.dv22,
                                    closed.d2v22)
        za = matrix_zero_energy_state(closed, states[0])
        zb = matrix_zero_energy_state(quad, states[0])
        for x in (0.2, 1.0, 4.0, 12.0):
            a, b = za.components(x), zb.components(x)
            assert all(abs(u - v) <= 1e-9 * abs(u) for u, v in zip(a, b))

    def test_spinor_helper(self, ref, states):
        k = math.sqrt(-states[0].energy)
        pot = inverse_x_potential(ref, k)
        s = matrix_zero_energy_spinor(3.0, pot, states[0])
        z = matrix_zero_energy_state(pot, states[0])
        assert s.density == pytest.approx(z.density(3.0), rel=1e-14)

    def test_energy_mismatch(self, ref, states):
        # the level rounded to seven digits is 6e-8 relative off
        with pytest.raises(EnergyMismatch):
            matrix_zero_energy_state(inverse_x_potential(ref, math.sqrt(3.842367)), states[0])


@pytest.fixture(scope="module")
def densities(ref, states):
    out = {}
    for n in FIG8_LEVELS:
        k = math.sqrt(-states[n].energy)
        z = matrix_zero_energy_state(inverse_x_potential(ref, k), states[n])
        xs = np.linspace(1e-3, 40.0, 2000)
        out[n] = (z, probability_density(xs, z))
    return out


class TestDensity:
    @pytest.mark.parametrize("n", FIG8_LEVELS)
    def test_integrates_to_one(self, ref, densities, n):
        z, g = densities[n]
        rho = lambda x: z.density(float(x)) / g.norm  # noqa: E731
        # rho ~ t^2 at the endpoint, so the first 1e-6 carries below 1e-18
        with mpmath.workdps(15):
            total = mpmath.quad(rho, [ref.left + 1e-6, 1, 3, 6, 12, 25, 50, mpmath.inf])
        assert abs(float(total) - 1.0) <= 1e-6

    @pytest.mark.parametrize("n", FIG8_LEVELS)
    def test_nonnegative(self, densities, n):
        assert np.all(densities[n][1].y >= 0.0)

    @pytest.mark.parametrize("n", FIG8_LEVELS)
    def test_maxima_follow_level(self, densities, n):
        y = densities[n][1].y
        peak = y.max()
        maxima = [i for i in range(1, len(y) - 1)
                  if y[i] > y[i - 1] and y[i] >= y[i + 1] and y[i] > 1e-2 * peak]
        assert len(maxima) == n + 1

    def test_ground_density_has_no_interior_zero(self, densities):
        y = densities[0][1].y
        assert np.all(y[1:] > 0.0)
