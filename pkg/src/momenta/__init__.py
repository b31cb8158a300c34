"""Momentum maps of Poisson-Lie group actions on exact polynomial models."""

from .bialgebra import (
    LieAlgebraData,
    LieBialgebraData,
    check_cocycle,
    check_jacobi,
    coadjoint,
    dual_algebra,
    heisenberg_dual_bialgebra,
)
from .calculus import (
    BivectorField,
    ChartDomain,
    FormField,
    VectorField,
    contract2,
    eval_at,
    exterior_d,
    lie_derivative,
    sharp,
    wedge,
)
from .deform import (
    DeformationCandidate,
    beta_forms,
    deformation_residual,
    hamiltonian_deformation,
)
from .errors import *  # noqa: F401,F403
from .estimator import MomentumMapReconstructor
from .group import (
    GroupModel,
    builtin_group,
    custom_group,
    derive_multiplicative_bivector,
    maurer_cartan_residual,
    multiplicativity_residual,
    theta_bracket_residual,
    theta2_residual,
)
from .imm import AlphaMap, MomentumCandidate, action_fields, gauge_transform, mc_residual, momentum_verify
from .parser import parse_poly
from .poisson import (
    PoissonManifold,
    fn_bracket,
    hamiltonian_field,
    oneform_bracket,
    poisson_action_residual,
    schouten_residual,
)
from .polynomial import Poly
from .reconstruct import (
    LeafSpec,
    MomentumLeaf,
    abelian_analyze,
    heisenberg_analyze,
    involutivity_report,
    leaf_lift,
    leaf_map,
    obstruction_phi,
)
from .report import emit_report
from .scenario import load_scenario

__version__ = "0.1.0"
