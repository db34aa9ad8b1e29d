"""Fourier frames for singular measures on the circle.

A probability measure on the circle determines an inner function through
its Herglotz transform; the Taylor data of that function generate a
Parseval frame of polynomials for ``L^2`` of the measure.  The package
computes each piece and checks the identities linking them.
"""

from .errors import (ClarkFramesError, DomainError, InputError, NumericError, RangeError,
                     ResourceError)
from .measure import (AtomicMeasure, DensityMeasure, Measure, SelfSimilarMeasure, TorusPoint,
                      atomize, cauchy, fourier_coeff, fourier_coeffs, herglotz, load_measure,
                      measure_from_dict, measure_to_dict, poisson)
from .series import (FramePolynomial, TruncatedSeries, UCoefficients, frame_polynomial,
                     frame_values, phi_series, series_eval, series_multiply, series_reciprocal,
                     toeplitz_residual, u_coefficients)
from .kaczmarz import (KaczmarzTrace, L2Vector, carrier, dual_sequence, kaczmarz_run,
                       parseval_partial_sums, parseval_sum)
from .model import (BoundaryLimitReport, InnerFunctionHandle, MembershipReport,
                    aleksandrov_membership, aleksandrov_residual, backward_shift,
                    boundary_limit_check, disc_grid, eval_phi, h2_norm, kernel_series,
                    model_kernel, normalized_cauchy, poisson_phi_residual, project_monomial,
                    project_monomial_quadrature, v_alpha, v_alpha_series)
from .clark import (BlaschkeProduct, ClarkAtomSet, ComposedInner, CompositionReport,
                    clark_composition_check, clark_measure, clark_poisson_residual,
                    divisor_check, divisor_gram_check)
from .frames import (Expansion, FrameOperatorSnapshot, KernelSeriesResult, cauchy_frame_series,
                     expand, frame_coefficients, frame_deviation, frame_deviation_curve,
                     frame_operator, gram, kernel_double_series)
from .report import CheckRecord, VerificationReport
from .verify import run_verification

__version__ = "0.1.0"
