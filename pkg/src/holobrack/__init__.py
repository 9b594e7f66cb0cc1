"""Constrained Hamiltonian mechanics, Dirac brackets and Airy spectra for a ball on an incline."""
from ._accel import backend
from .airy import AiryValue, ai_prime_zero, ai_squared_tail, ai_zero, airy, airy_eval
from .ball import BallParams, ball_system
from .dynamics import Trajectory, eom_vector_field, integrate, intrinsic_acceleration
from .mechanics import (
    Constraint,
    ConstrainedSystem,
    LagrangianSpec,
    ThetaMatrix,
    classify_constraints,
    dirac_bergmann,
    dirac_bracket,
    legendre_transform,
    solve_multipliers,
    theta_matrix,
)
from .operator_quantize import (
    CommutatorTable,
    OperatorExpr,
    build_commutator_table,
    commutator,
    constraint_operators,
    intrinsic_equivalence_check,
    momentum_representation_matrix,
    physical_reduction,
)
from .phase_algebra import PhaseSpace, Poly, evaluate, partial, poisson_bracket
from .quantum_spectrum import (
    Eigenpair,
    IntrinsicParams,
    eigenstate_eval,
    intrinsic_params,
    probability_density,
    wall_spectrum,
    wedge_spectrum,
)

__version__ = "0.1.0"
