"""Closed-form geometries with conformally flat lifts, and their verifiers.

The package constructs the solution families of a coupled metric/two-form
system in exact closed form (:mod:`kkforms.catalog`), evaluates curvature
pointwise with a jet-based differentiation engine (:mod:`kkforms.jets`,
:mod:`kkforms.tensors`, :mod:`kkforms.curvature`), checks every field
equation, curvature identity and structure condition to stated tolerances
(:mod:`kkforms.verify`), and certifies each solution by the vanishing Weyl
tensor of its one-dimension-higher extension (:mod:`kkforms.lift`).  The
``kkforms`` command line drives the whole catalog (:mod:`kkforms.cli`).
"""

from .catalog import (FAMILIES, BlockMetric, CanonicalStructure, ExternalGeometry,
                      SolutionInstance, assemble_block_metric, canonical_blocks,
                      default_grid, make_ckink, make_cpx_space_form, make_kink,
                      make_kink2, make_kink_warped, make_kk_nullity_one,
                      make_product_solution, make_real_space_form, manifest)
from .curvature import (CurvatureBundle, christoffel, covariant_derivative,
                        curvature_bundle, killing_residual, point_geometry,
                        second_bianchi_residual, two_form_laplacian)
from .lift import LiftedMetric, WeylReport, lift, reduce, weyl_vanishing
from .tensors import (ChartPoint, DegenerateMetricError, DerivedTwoForm, Domain,
                      EvaluationError, ScaledField, SignatureMatrix, SmoothField,
                      TensorValue, antisym_pair, contract, jet_eval, metric_inverse)
from .verify import (FundamentalForms, GJEquationSet, ResidualReport,
                     SolutionReport, bianchi_residual, ckink_ode_residual,
                     curvature_identity_residual, estimate_k, fundamental_forms,
                     gj_residual, kink_ode_residual, killing_divergence_residual,
                     run_solution_checks, sample_points, structure_residual,
                     traceless_kink_residual)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # catalog
    "FAMILIES", "BlockMetric", "CanonicalStructure", "ExternalGeometry",
    "SolutionInstance", "assemble_block_metric", "canonical_blocks",
    "default_grid", "make_ckink", "make_cpx_space_form", "make_kink",
    "make_kink2", "make_kink_warped", "make_kk_nullity_one",
    "make_product_solution", "make_real_space_form", "manifest",
    # engine
    "ChartPoint", "DegenerateMetricError", "DerivedTwoForm", "Domain",
    "EvaluationError", "ScaledField", "SignatureMatrix", "SmoothField",
    "TensorValue", "antisym_pair", "contract", "jet_eval", "metric_inverse",
    "CurvatureBundle", "christoffel", "covariant_derivative", "curvature_bundle",
    "killing_residual", "point_geometry", "second_bianchi_residual",
    "two_form_laplacian",
    # verification
    "FundamentalForms", "GJEquationSet", "ResidualReport", "SolutionReport",
    "bianchi_residual", "ckink_ode_residual", "curvature_identity_residual",
    "estimate_k", "fundamental_forms", "gj_residual", "kink_ode_residual",
    "killing_divergence_residual", "run_solution_checks", "sample_points",
    "structure_residual", "traceless_kink_residual",
    # lift
    "LiftedMetric", "WeylReport", "lift", "reduce", "weyl_vanishing",
]
