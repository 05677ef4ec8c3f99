"""Asymptotic lines on the Clifford torus in S^3 and its normal-graph perturbations."""

from .errors import (BranchAmbiguous, DegenerateJet, IllConditioned, MissingThirdDerivative,
                     NonHyperbolic, PoleSingularity, StepUnderflow)
from .flow import (Branch, IntegratorOptions, LiftedCurve, ReturnMapReport, branch_slope,
                   integrate_line, poincare1, poincare2, quad_coeff_extract, translation_number)
from .forms import (FormPair, first_form, fundamental_forms, hyperbolicity_scan, k_ext,
                    second_form, second_form_closed)
from .linalg4 import det4, dot4, wedge3
from .surface import (EPS_GUARD, PerturbationField, SurfaceJet2, clifford_jet, clifford_normal,
                      paper_h, perturbed_jet, perturbed_point)
from .variational import (QuadraticFamily, VariationTrace, cross_validate, first_variation,
                          paper_family, period_defects, second_variation)

__version__ = "0.1.0"
