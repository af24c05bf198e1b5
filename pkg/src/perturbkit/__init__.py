"""perturbkit: rank-one nonsymmetric singular perturbations of positive
selfadjoint operators -- Krein-type resolvents, eigenvalue problems,
matching approximation sequences, and the scattering matrix."""

__version__ = "0.1.0"

from .core import (apply_shift, apply_weight, classify_regularity, eta, norm,
                   pairing, projective_deviation, resolvent_apply)
from .eigen import (DualPair, EigenPair, RealInterval, Rectangle, dual_pair,
                    eigen_condition, find_eigenvalues, inverse_problem,
                    verify_eigen)
from .krein import (INFINITE, KreinData, PerturbationSpec, TauAuto,
                    TauExplicit, ZERO_COUPLING, adjoint_spec, b_of_z,
                    cocycle_residual, inverse_at_zero, is_infinite_b,
                    krein_apply, krein_data, regularized_F, tau_auto)
from .operators import LaplaceLine, LaplaceSpace3D, Multiplication
from .quadrature import DEFAULT_QUAD, QuadratureConfig
from .scattering import BoundaryValue, SMatrixPoint, boundary_value, smatrix
from .approx import (ApproxSequenceStep, build_matching_step, matching_spec,
                     resolvent_gap, spectral_truncate)
from .corpus import run_all, run_example
from .vectors import (Delta, ExpAbs, PowerLaw, Sum, Tabulated, Windowed,
                      describe, scaled)
from .weights import ONE, RationalWeight, f_weight, resolvent_weight, \
    shift_weight, tau_weight
