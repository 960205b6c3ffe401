"""Finite permutation groups, tables of marks, and equivariant MLPs."""

from .actions import (
    ActionProperties,
    GroupAction,
    action_properties,
    core,
    coset_space,
    kernel,
    normalizer,
    orbit,
    orbits,
    stabilizer,
    subaction,
)
from .burnside import (
    RegularOrbitReport,
    TableOfMarks,
    decompose,
    indicator,
    mark,
    mark_vector,
    product,
    regular_orbit_order,
    structure_coefficients,
    table_of_marks,
)
from .eqmlp import (
    EquivariantMLP,
    LayerSpec,
    TrainConfig,
    TrainReport,
    build_regular_net,
    gradients,
    make_target,
    symmetrize,
    train,
)
from .groups import (
    FiniteGroup,
    Subgroup,
    alternating,
    closure,
    cyclic,
    dihedral,
    symmetric,
)
from .gsets import (
    bell,
    diagonal_power,
    diagonal_product,
    disjoint_union,
    orbit_decompose,
    stirling2,
)
from .lattice import (
    ConjugacyClass,
    SubgroupLattice,
    all_subgroups,
    class_leq,
    conjugacy_classes,
    subgroup_lattice,
)
from .perm import compose, from_cycles, identity, inverse
from .sharing import (
    KernelForm,
    SharingPattern,
    check_equivariance,
    instantiate,
    kernel_form,
    make_pattern,
    project_to_pattern,
)

__all__ = [name for name in dir() if not name.startswith("_")]
