"""
Exactly solvable quantum models built on the Lambert W function.

The base model is the Schroedinger equation on (sigma + x0, inf) with the
potential ``V(x) = V0 W / (1 + W)``, ``W = W0(-exp(-(x - x0)/sigma))``.  The
package evaluates its closed-form solutions and spectrum, transforms them
into an energy-dependent picture and into SUSY partners, checks Wronskian
integral identities, and assembles solutions of the massless Dirac equation.
"""

from ._version import __version__
from .dirac import (DiracMatrixPotential, DiracScalarParams, Spinor, ZeroEnergyState,
                    dirac_abbrevs, dirac_scalar_psi1, dirac_scalar_residual, dirac_scalar_spinor,
                    inverse_x_potential, klein_gordon_residual, matrix_potential_from_free_entries,
                    matrix_zero_energy_spinor, matrix_zero_energy_state, probability_density)
from .energydep import (EnergyMap, TransformedState, energy_cal, energy_inv, modified_norm, phi,
                        potential_u, potential_u_dE, transform_state, x_of_y)
from .errors import LwqmError, NumericalError
from .export import TableArtifact
from .integrals import (IntegralReport, double_integral_lhs, double_integral_rhs,
                        second_solution_v, single_integral_lhs, single_integral_rhs, verify_table)
from .model import (PAPER_REFERENCE, ModelParams, SolutionHandle, potential_v, potential_v_dx,
                    psi, psi_dagger, psi_dE, psi_dx, wronskian_psi_dagger)
from .numerics import Tolerance
from .specialfn import gamma_complex, kummer_1f1, lambert_w0, tricomi_u
from .spectrum import BoundState, Spectrum, bound_state, eigenvalue_equation, solve_spectrum
from .susy import (SusySpec, SusyState, confluent_chain, susy_confluent, susy_order1, susy_order2,
                   transformed_potential, wronskian)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
