"""Shape-invariant tridiagonal Hamiltonians: factorization, SUSY partners,
spectra, hierarchy, coherent states and superpotential reconstruction."""

from .errors import (DecoupledChainWarning, DivergenceError, DomainError, NegativityError,
                     NumericDomainError, QuadratureError, SingularityError,
                     TruncationWarning, UnsupportedModelError, WindowError)
from .invariance import (HierarchyLevel, ShapeInvariantModel, SpectrumFunction,
                         commutator_diagonal, epsilon1, epsilon1_n_independence,
                         hierarchy, inverse_construct, model_spectrum, partner_spectrum,
                         shape_invariance_residual, spectrum, telescoping_check)
from .models import (ModelParams, WavefunctionGrid, basis_eval, basis_series,
                     eigenstate_eval_oscillator, kinetic, make_model, morse, morse_m_max,
                     oscillator, partner_potential_residual, potential_eval, shifted)
from .operators import (ExpansionVector, LadderCoefficients, TridiagonalOperator,
                        apply_A, apply_Adagger, compose, factorize, partner,
                        recursion_polynomials)
from .specfun import (hyp2f1_terminating, laguerre, laguerre_generating_sum, ln_gamma,
                      pochhammer)
from .states import (CoherentState, GroundStateExpansion, coherent_coefficients,
                     eigenstate_basis_overlap, ground_state_closed_form,
                     ground_state_coefficients, ground_wavefunction,
                     lowering_check_oscillator, moment_check, morse_product_closed_form,
                     morse_superpotential_closed_form, product_term, raise_state,
                     superpotential_eval)

__version__ = "0.1.0"
