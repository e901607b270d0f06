"""Exact algebra of quasi-Jacobi singular forms of index zero.

The ring Q[c, 1/c][P, Pz, E4, E1, E2] with its weight grading, double depth,
derivations and bracket families, plus a numeric layer that checks the
transformation laws.
"""

from .kernels import BACKEND
from .algebra import (
    C,
    E1,
    E2,
    E4,
    ONE,
    P,
    PZ,
    ZERO,
    DepthProfile,
    Form,
    Monomial,
    Scalar,
    Subalgebra,
    add,
    basis_monomials,
    depth_expand,
    depth_of,
    e6,
    in_subalgebra,
    mul,
    profile,
    q_op,
    random_homogeneous,
    weight_components,
    weight_of,
)
from .calculus import (
    d_deriv,
    delta,
    dtau,
    dz,
    eisenstein,
    oberdieck,
    raw_dtau,
    raw_dz,
    theta,
)
from .brackets import (
    BracketFamily,
    associativity_defect,
    e1_exchange_defect,
    rc_bracket,
    rc_d_bracket,
    star_truncated,
    transvectant,
    tv_recurrence_defect,
)
from .cli.grammar import ParseError, parse

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BracketFamily",
    "C",
    "DepthProfile",
    "E1",
    "E2",
    "E4",
    "Form",
    "Monomial",
    "ONE",
    "P",
    "PZ",
    "ParseError",
    "Scalar",
    "Subalgebra",
    "ZERO",
    "add",
    "associativity_defect",
    "basis_monomials",
    "d_deriv",
    "delta",
    "depth_expand",
    "depth_of",
    "dtau",
    "dz",
    "e6",
    "eisenstein",
    "in_subalgebra",
    "e1_exchange_defect",
    "mul",
    "oberdieck",
    "parse",
    "profile",
    "q_op",
    "random_homogeneous",
    "raw_dtau",
    "raw_dz",
    "rc_bracket",
    "rc_d_bracket",
    "star_truncated",
    "theta",
    "transvectant",
    "tv_recurrence_defect",
    "weight_components",
    "weight_of",
]
