"""
Published reference numbers for the setting sigma = -x0 = V0 = 5.

These are the values the ``verify`` command and the acceptance suite compare
against.  They are quoted to the digits in which they were published.
"""

from __future__ import annotations

#: bound-state energies E_0 .. E_4
SPECTRUM = (-3.842367, -1.319311, -0.505219, -0.161364, -0.024529)

#: int psi_n^2 over the whole domain, for the unnormalised closed-form solutions
NORMALIZATION_INTEGRALS = (5.38183e-12, 8.40188e-9, 2.46982e-6, 0.00173697, 18.2922)

#: nested ratio integral over (0.1, 1), evaluated at the energies of ``SPECTRUM``
DOUBLE_INTEGRALS = (0.280879, 0.540471, 0.838775, 1.11869, 1.29632)
DOUBLE_INTEGRAL_WINDOW = (0.1, 1.0)

#: modified norms of the energy-dependent states phi_0, phi_1, phi_2
MODIFIED_NORMS = (1.96965e-6, 4.07894e-6, 2.44908e-5)

#: stationary energies cal_E_0, cal_E_1, cal_E_2 of the energy-dependent picture
CAL_ENERGIES = (1.6539e-6, 5.9717e-4, 1.8975e-2)

#: parameter values E of the three energy-dependent potential curves
POTENTIAL_CURVE_ENERGIES = (1.5, -1.0, -0.5)

#: default relative tolerances of the verification tables
DEFAULT_TOLERANCES = {"table1": 1e-3, "table2": 1e-4, "norms": 1e-3, "calE": 1e-4}
