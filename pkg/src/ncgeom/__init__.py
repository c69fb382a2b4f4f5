"""Levi-Civita connections and curvature for conformally deformed metrics on
free, centrally generated differential calculi: the noncommutative 2-torus and
a structure-constant model of the quantum Heisenberg manifold."""

from .algebra import (AlgebraElement, InvertiblePair, ModeMismatch, NCTorus, NotAMonomial,
                      NotDiagonallyDominant, ToleranceNotMet, derive, l1_norm, monomial_inverse,
                      multiply, neumann_inverse, star, trace)
from .calculus import (CalculusDescriptor, DescriptorMismatch, OneForm, TensorCube, TensorSquare,
                       TwoForm, exterior_d, p_sym, q_inverse, qhm_calculus, sigma, sigma23,
                       torus_calculus, wedge)
from .connection import (Connection, HypothesisViolated, NonScalarCoefficient, NotSymmetric,
                         christoffel_closed_form, compat_residual, conformal_lc_connection,
                         dual_connection_residual, flat_connection, phi_g_apply, pi_g,
                         qhm_lc_connection, qhm_nabla0, torsion, tt_from_nabla0)
from .curvature import (closed_form_curvature, curvature_operator, ricci, scalar_curvature,
                        torus_conformal_reference)
from .metric import MetricSpec, contract_g_left, eval_metric, omega_g0, v_g_apply
from .scalars import (ExactnessUnavailable, GaussianRational, PhasedScalar, evaluate_phase,
                      l1_magnitude, phased_mul)
from .scenarios import SchemaError, UnknownPreset, load_scenario, run_scenario, verify

__version__ = "0.1.0"
