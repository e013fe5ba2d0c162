"""Group calculus of finite G-labeled partitions of unity."""

from .boolean_group import SymmDiffGroup, from_pu, to_pu, to_symm_diff_group
from .core import (
    Complement,
    Predicate,
    PUFunc,
    PUGroup,
    all_pufuncs,
    d_phi,
    eta,
    gamma_contains,
    gamma_decompose,
    identity,
    inverse,
    multiply,
    off_identity_mask,
    power,
    product_of,
    random_pufunc,
    sigma,
    support,
    support_mask,
)
from .escape import (
    Ball,
    EscapeVerdict,
    FiniteSubset,
    FolnerResult,
    PUNbhd,
    folner_check,
    in_nbhd,
    is_escape_function,
    one_over_n,
    one_over_n_replay,
    pu_nbhd_subset,
    stabilization_index,
    trap,
    trap_decompose,
)
from .groups import (
    CayleyTable,
    Cyclic,
    Group,
    Integers,
    RationalsAdditive,
    check_group_axioms,
    group_from_record,
    symmetric_group,
)
from .lifting import (
    PiTable,
    eta_pi,
    f_bullet,
    length_bullet,
    pi_sharp,
    pu_add,
    pu_leq,
    random_hom,
    random_pi,
    upper_set,
    zero_labeled,
)
from .positive import (
    GaussQ,
    PosTypeFn,
    characters,
    hermitian_psd,
    lifted_gram,
    pos_type_check,
    pos_type_lift,
)

pu_identity = identity
pu_multiply = multiply
pu_inverse = inverse
sigma_Q = sigma
