"""Set-indexed Levy process simulation and verification on dyadic rectangles."""

from .indexing import (
    CellUnion,
    DissectionLevel,
    IncrementRegion,
    RectSet,
    atoms,
    canonical_form,
    m_partition,
    measure,
    rect,
    region,
)
from .laws import (
    CompoundJumps,
    GridLaw,
    LevyTriplet,
    NoJumps,
    NormalMark,
    PointMass,
    TruncStableJumps,
    TwoPointMark,
    UniformMark,
    brownian_triplet,
    char_exponent,
    compound_poisson_triplet,
    convolve,
    mu_power_t,
)
from .simulate import (
    ProcessSpec,
    SamplePath,
    evaluate,
    evaluate_incl_excl,
    fdd_char,
    sample_increments,
    sample_path,
)
from .flows import ElementaryFlow, SimpleFlow, diagonal_flow, project
from .markov import (
    TransitionKernel,
    chapman_kolmogorov_check,
    kernel_eval,
    semilattice_fdd,
)
from .jumps import (
    JumpRecord,
    count_jumps,
    extract_jumps,
    gaussian_sup_diagnostic,
    levy_ito_decompose,
    partial_sum,
    point_mass_jump,
)
from .stats import EcfEstimate, ecf, ecf_joint, factorization_gap, ks_two_sample

__version__ = "0.1.0"
