"""dispersa: spectral operators, weighted identities, and gKdV solvers on
periodic desk-scale grids.

The hot singular-integral quadratures run through a compiled extension when
available (``dispersa.kernels.BACKEND`` reports which); everything else is
NumPy.
"""

from .errors import (BlowupDetected, NegativeOrderOnNonzeroMean,
                     NonConvergence, NonFiniteMultiplier, ValidationError,
                     ZeroData)
from .fractional import (NormEquivalenceReport, SteinKernelSpec,
                         bessel_derivative, calibrate_stein_constant,
                         hilbert_transform, norm_equivalence_report,
                         riesz_derivative, stein_derivative,
                         stein_normalizing_constant, stein_reference_constant)
from .kernels import BACKEND
from .norms import SpaceTimeField, WeightedNormSpec, mixed_norm, mu1, mu2, mu3, weighted_norm
from .propagators import (IdentityResidualReport, PhasePolynomial,
                          airy_propagate, dgbo_propagate,
                          gamma_apply, gamma_commutation_residual,
                          phi_operator, strichartz_ratio,
                          weighted_identity_residual,
                          weighted_identity_residual_beta)
from .solver import (ConservedTrajectory, ContractionReport, SolverConfig,
                     conserved_quantities, local_existence_time, picard_solve,
                     quarter_derivative_norm, reference_solve, solitary_wave,
                     solve_global)
from .spectral import (DEFAULT_GRID, Grid1D, GridFunction, PresetDatum,
                       continuum_spectrum, coordinate_weight, edge_taper,
                       forward_transform, from_continuum_spectrum,
                       inverse_transform, multiplier_apply, sample)

__version__ = "0.1.0"
