"""Exact finite-scale calculus of submeasures and labeled-partition groups."""

from .algebra import (
    Elem,
    FiniteAlgebra,
    Ideal,
    PartitionOfUnity,
    TwoValuedHom,
    VeeMonoidHom,
    common_refinement,
    enumerate_partitions,
    is_partition_of_unity,
    quotient_by_ideal,
    refines,
)
from .errors import (
    AlgebraMismatch,
    CapacityError,
    InvalidInput,
    L0Error,
    NotAHomomorphism,
    PreconditionError,
    VerificationError,
)
from .pathology import (
    ChristensenWitness,
    DominationCertificate,
    KelleyMeasure,
    christensen_witness,
    generate,
    kappa,
    kelley_greedy,
    max_dominated_measure,
    witness_mass_bound,
)
from .submeasure import (
    AtomMeasure,
    CoverCount,
    MaxOf,
    Pullback,
    SetFunc,
    Table,
    classify,
    continuity_modulus,
    diffuseness,
    pullback,
    two_valued_domination,
)

__version__ = "0.1.0"
