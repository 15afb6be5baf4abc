"""bisetrep: exact-arithmetic bisets, induced bimodules, and Mackey-style
tensor decompositions over catalogs of small finite groups.

The one convention everything else hangs on: a module over a product group
K x G is the same thing as a (K, G)-bimodule through k . m . g^{-1} =
(k, g) . m, and for t in a group, h^t means t^{-1} h t while a left
superscript conjugate of a subgroup is t A t^{-1}.
"""

from .groups import (
    Group,
    ProductGroup,
    Subgroup,
    all_subgroups,
    build_group,
    cayley_dump,
    conjugacy_classes,
    conjugate_subgroup,
    direct_product,
    double_coset_reps,
    left_coset_reps,
    subgroup_generated,
)
from .prodsub import (
    ProductSubgroup,
    conj_t1,
    diagonal,
    full_product_subgroup,
    middle_section,
    product_subgroup,
    product_subgroup_from_pairs,
    star,
)
from .bisets import (
    Biset,
    ComposedBiset,
    TransitiveBiset,
    aut_group,
    compose_bisets,
    disjoint_union,
    hom_set,
    middle_stabilizer,
    orbit_reps,
    stabilizer,
    transitive_biset,
)
from .linalg import (
    GF,
    Matrix,
    QQ,
    QuotientSpace,
    descend_kron,
    inverse,
    is_invertible,
    nullspace_basis,
    parse_field,
    quotient_by,
    rank,
    rref,
    solve_right,
)
from .reps import (
    BimoduleRep,
    Character,
    Rep,
    character,
    direct_sum,
    find_intertwiner_iso,
    induce,
    induced_character_oracle,
    intertwiner_space,
    iso_by_character,
    perm_rep,
    random_rep,
    regular_bimodule,
    regular_rep,
    restrict,
    tensor_over_h,
    tensor_over_subgroup,
    trivial_rep,
)
from .functors import (
    FunctorOverBiset,
    TensorFunctor,
    alpha,
    beta,
    functor_from_module,
    sigma,
    tensor_functors,
)
from .mackey import (
    MackeySummand,
    VerificationReport,
    chain_isomorphism,
    mackey_rhs,
    mackey_summands,
    verify_case,
)
from .harness import CaseSpec, GroupCache, SweepSpec, enumerate_sweep, run_case, run_sweep

__version__ = "0.1.0"
