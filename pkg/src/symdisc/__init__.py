"""Decide membership in the symmetrized polydisc three independent ways."""
from .consensus import ConsensusReport, classify_consensus
from .errors import (
    HypothesisViolation,
    InputError,
    OracleFailure,
    ReductionUndefinedError,
    SymdiscError,
)
from .numerics import Definiteness, DefinitenessVerdict, HermitianMatrix, binomial, definiteness
from .polydisc import (
    BoundaryVerdict,
    KernelVerdict,
    Region,
    RegionVerdict,
    SymPoint,
    ToleranceConfig,
    associated_polynomial,
    beta_reduce,
    classify_oracle,
    gn_matrix,
    in_gamma_recursive,
    in_gn_recursive,
    in_gn_schur,
    kernel_criterion,
    necessary_bounds,
    on_distinguished_boundary,
    pairwise_bounds,
    reconstruct,
    symmetrize,
)
from .polynomial import MonicPoly, RootSet, elementary_symmetric, evaluate, find_roots, max_root_modulus
from .schur import DiscVerdict, schur_cohn_matrix, zeros_in_open_disc

__version__ = "0.1.0"
