"""Sampling helpers, figure grids and the full report run."""

import json
import math

import numpy as np
import pytest

from conftest import mp_potential, mp_psi
from lwqm.errors import DomainError, PrecisionLoss
from lwqm.grids import (Axis, default_x_axis, dirac_density_grid, nan_on_precision_loss,
                        parse_ky, phi_energydep_grid, potential_grid, psi_grid, sample, susy_grid,
                        thread_count)
from lwqm.model import PAPER_REFERENCE, ModelParams
from lwqm.report import run_report
from lwqm.spectrum import solve_spectrum

SMALL = ModelParams(3.0, -5.0, 5.0)  # three levels, domain x > -2 contains x = 0


@pytest.fixture(scope="module")
def spectrum():
    return solve_spectrum(PAPER_REFERENCE)


class TestThreads:
    @pytest.mark.parametrize("raw, expected", [(None, 1), ("", 1), ("1", 1), ("3", 3)])
    def test_values(self, monkeypatch, raw, expected):
        if raw is None:
            monkeypatch.delenv("LWQM_THREADS", raising=False)
        else:
            monkeypatch.setenv("LWQM_THREADS", raw)
        assert thread_count() == expected

    def test_zero_means_all_cpus(self, monkeypatch):
        monkeypatch.setenv("LWQM_THREADS", "0")
        assert thread_count() >= 1

    @pytest.mark.parametrize("raw", ["-1", "two", "1.5"])
    def test_invalid(self, monkeypatch, raw):
        monkeypatch.setenv("LWQM_THREADS", raw)
        with pytest.raises(DomainError):
            thread_count()

    def test_parallel_sample_keeps_order(self, monkeypatch):
        monkeypatch.setenv("LWQM_THREADS", "4")
        xs = np.linspace(0, 1, 57)
        assert sample(lambda x: x * x, xs) == [x * x for x in xs]


class TestAxis:
    def test_points(self):
        assert list(Axis(1.0, 2.0, 3).points()) == [1.0, 1.5, 2.0]
        assert list(Axis(1.0, 1.0, 1).points()) == [1.0]

    @pytest.mark.parametrize("lo, hi, n", [(0, 1, 0), (2, 1, 5), (0, math.inf, 5), (math.nan, 1, 5)])
    def test_invalid(self, lo, hi, n):
        with pytest.raises(DomainError):
            Axis(lo, hi, n)

    def test_range_must_be_inside_domain(self):
        with pytest.raises(DomainError, match="strictly right"):
            potential_grid(PAPER_REFERENCE, Axis(0.0, 1.0, 3))


class TestParseKy:
    def test_number(self):
        assert parse_ky(" 1.25 ") == ("1.25", 1.25)

    def test_level_reference(self, spectrum):
        assert parse_ky("sqrt-E1", spectrum.energies)[1] == math.sqrt(-spectrum.energies[1])

    @pytest.mark.parametrize("tok", ["sqrt-E9", "sqrt-Ex", "abc"])
    def test_invalid(self, tok, spectrum):
        with pytest.raises(DomainError):
            parse_ky(tok, spectrum.energies)

    def test_level_needs_spectrum(self):
        with pytest.raises(DomainError, match="needs the spectrum"):
            parse_ky("sqrt-E0")


class TestGridValues:
    def test_potential_against_mpmath(self):
        t = potential_grid(PAPER_REFERENCE, Axis(0.5, 20.0, 7))
        for x, v in t.rows:
            assert v == pytest.approx(float(mp_potential(x)), rel=1e-11)

    def test_psi_against_mpmath(self, spectrum):
        t = psi_grid(PAPER_REFERENCE, Axis(1.0, 15.0, 5), ns=[1, 3], spectrum=spectrum)
        assert t.columns == ("x", "psi_1", "psi_3")
        for x, p1, p3 in t.rows:
            for n, got in ((1, p1), (3, p3)):
                ref = float(mp_psi(x, spectrum.energies[n]))
                assert got == pytest.approx(ref, rel=1e-10, abs=1e-13 * abs(got) + 1e-300)

    def test_psi_explicit_energy(self):
        t = psi_grid(PAPER_REFERENCE, Axis(2.0, 2.0, 1), energies=[-1.0])
        assert t.columns == ("x", "psi_E0")
        assert t.meta["energies"] == [-1.0]

    def test_default_axis(self):
        a = default_x_axis(PAPER_REFERENCE, 10)
        assert a.lo > PAPER_REFERENCE.left and a.samples == 10


class TestSusyGrid:
    def test_nan_where_cancellation(self, spectrum):
        t = susy_grid("susy2", PAPER_REFERENCE, Axis(1e-3, 2.0, 9), spectrum=spectrum)
        v2 = t.column("V2")
        assert math.isnan(v2[0])
        assert all(math.isfinite(v) for v in v2[-4:])
        assert all(math.isfinite(v) for v in t.column("V1"))

    def test_defaults(self, spectrum):
        t = susy_grid("susy-confluent", PAPER_REFERENCE, Axis(1.0, 5.0, 3), spectrum=spectrum)
        assert t.columns == ("x", "V1", "V2", "phi_0", "phi_1")
        assert t.meta["transformation"] == [2]

    def test_defaults_trimmed_to_existing_levels(self):
        t = susy_grid("susy1", SMALL, Axis(-1.0, 3.0, 3))
        assert t.columns == ("x", "V1", "V2", "phi_1", "phi_2")

    def test_missing_transformation_level(self):
        with pytest.raises(DomainError, match="needs bound state 2"):
            susy_grid("susy-confluent", ModelParams(2.0, 1.0, 4.0), Axis(3.5, 5.0, 3))

    def test_wrapper_only_catches_precision_loss(self):
        def f(x):
            if x < 0:
                raise PrecisionLoss("lost")
            raise ZeroDivisionError
        g = nan_on_precision_loss(f)
        assert math.isnan(g(-1.0))
        with pytest.raises(ZeroDivisionError):
            g(1.0)


class TestOtherGrids:
    def test_phi_defaults_trimmed(self):
        assert phi_energydep_grid(ModelParams(2.0, 1.0, 4.0), samples=5).columns == ("y", "phi_0", "phi_1")

    def test_phi_no_levels(self):
        with pytest.raises(DomainError, match="no bound states"):
            phi_energydep_grid(ModelParams(0.1, 0.0, 0.1), samples=5)

    def test_dirac_density_needs_level_energy(self, spectrum):
        with pytest.raises(DomainError, match="does not match"):
            dirac_density_grid(PAPER_REFERENCE, Axis(0.1, 1.0, 3), ["1.3"], spectrum=spectrum)

    def test_dirac_density_singular_domain(self):
        with pytest.raises(DomainError, match="singular at x = 0"):
            dirac_density_grid(SMALL, Axis(-1.0, 1.0, 3))

    def test_dirac_density_normalised(self, spectrum):
        xs = Axis(1e-4, 60.0, 6001)
        t = dirac_density_grid(PAPER_REFERENCE, xs, spectrum=spectrum)
        assert t.columns == ("x", "rho_sqrt_E0", "rho_sqrt_E1", "rho_sqrt_E2")
        assert all(r > 0 for r in t.meta["raw_density_integrals"])
        x = np.array(t.column("x"))
        for c in t.columns[1:]:
            # trapezoid on a 0.01 grid; the tail beyond 60 and the piece below 1e-4 are negligible
            assert np.trapezoid(np.array(t.column(c)), x) == pytest.approx(1.0, abs=2e-4)


@pytest.fixture(scope="module")
def reference_report(tmp_path_factory):
    out = tmp_path_factory.mktemp("report")
    return out, run_report(PAPER_REFERENCE, out)


class TestReport:
    def test_files(self, reference_report):
        out, summary = reference_report
        assert len(summary["figures"]) == 8 and summary["skipped"] == {}
        for fig in summary["figures"]:
            for name in fig["files"]:
                data = (out / name).read_bytes()
                if name.endswith(".png"):
                    assert data[:8] == b"\x89PNG\r\n\x1a\n"
                else:
                    assert data.startswith(b"x,") or data.startswith(b"y,")
        assert json.loads((out / "summary.json").read_text()) == summary

    def test_verification_tables(self, reference_report):
        out, summary = reference_report
        assert summary["verification"] == {"table1": True, "table2": True, "norms": True, "calE": True}
        for kind in summary["verification"]:
            assert (out / f"verify_{kind}.csv").is_file()

    def test_small_model_without_images(self, tmp_path):
        summary = run_report(SMALL, tmp_path, fmt="json", images=False)
        assert set(summary["skipped"]) == {"dirac_density"}
        assert summary["verification"] == {}  # published tables exist only for the reference model
        assert not list(tmp_path.glob("*.png"))
        assert json.loads((tmp_path / "susy2.json").read_text())["meta"]["kind"] == "susy2"
