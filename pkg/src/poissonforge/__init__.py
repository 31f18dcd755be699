"""poissonforge: a workbench for computational Poisson geometry.

Exact Schouten calculus on polynomial multivector fields, formal
normal-form/linearization machinery in graded truncations, and numerical
symplectic realizations via Poisson sprays.
"""

from .polyalg import Poly, Rational, SolveOutcome, exact_rank, format_poly, \
    parse_poly, solve_linear_exact
from .multivector import GradedPiece, PolyMVF, dilate, grade_component, \
    schouten, truncate_jet, wedge
from .poisson import CohomologyTable, GaugeSingularError, PoissonCheck, \
    casimir_basis, check_poisson, cohomology_dims, conn_rescale, \
    gauge_pointwise, hamiltonian_vf, poisson_bracket, sharp
from .liealg import LieAlgebraSpec, WeylCircleSample, coadjoint_invariance_check, \
    killing_classify, linear_poisson, preset, su3_invariants, validate, \
    weyl_circle_sample
from .formal import FilteredJet, GaugeSolution, HomotopyResult, ProlongResult, \
    ad_exp, bch, formal_linearize, homotopy_solve, mc_equivalence, order_of, \
    prolong_step
from .realize import FlowBlowupError, RealizationReport, SprayField, \
    dh_variation, flow_with_jacobian, realization_form, sphere_leaf_form, \
    symplectic_area, verify_realization

__version__ = "0.1.0"
