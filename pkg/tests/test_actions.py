import pytest

from eqv import (
    GroupAction,
    action_properties,
    alternating,
    core,
    coset_space,
    cyclic,
    diagonal_power,
    dihedral,
    kernel,
    normalizer,
    orbit,
    orbits,
    stabilizer,
    subaction,
    symmetric,
)
from eqv.errors import NotASubgroup, PointOutOfRange
from eqv.groups import Subgroup, closure
from eqv.lattice import all_subgroups
from eqv.perm import compose


def c4_mod2_action():
    """C4 pushed onto 2 points through its order-2 quotient."""
    g = cyclic(4)
    return g, GroupAction.from_generator_images(g, 2, [(1, 0)])


def test_orbit_rotation_is_transitive():
    act = GroupAction.natural(cyclic(4))
    assert orbit(act, 0) == frozenset({0, 1, 2, 3})


def test_orbit_trivial_group():
    act = GroupAction.natural(closure(3, []))
    assert orbit(act, 1) == frozenset({1})


def test_orbit_of_diagonal_pair():
    act = diagonal_power(GroupAction.natural(symmetric(3)), 2)
    # point (0, 0) has index 0; its orbit is the diagonal {(0,0),(1,1),(2,2)}
    assert orbit(act, 0) == frozenset({0, 4, 8})


def test_orbit_point_out_of_range():
    act = GroupAction.natural(cyclic(3))
    with pytest.raises(PointOutOfRange):
        orbit(act, 3)


def test_stabilizer_s3_point():
    g = symmetric(3)
    act = GroupAction.natural(g)
    stab = stabilizer(act, 2)
    assert stab.order == 2
    non_identity = [g.elements[k] for k in stab.member_indices if k != 0]
    assert non_identity == [(1, 0, 2)]


def test_stabilizer_regular_action_is_trivial():
    g = cyclic(4)
    act = coset_space(g, g.trivial_subgroup())
    for p in range(act.point_count):
        assert stabilizer(act, p).order == 1


def test_stabilizer_a5_point_has_order_twelve():
    act = GroupAction.natural(alternating(5))
    assert stabilizer(act, 4).order == 12


def test_kernel_examples():
    assert kernel(GroupAction.natural(symmetric(3))).order == 1
    g, act = c4_mod2_action()
    assert kernel(act).order == 2
    triv = GroupAction.trivial(symmetric(3), 1)
    assert kernel(triv).order == 6


def test_core_of_point_stabilizer_in_a5_is_trivial():
    g = alternating(5)
    stab = stabilizer(GroupAction.natural(g), 4)
    assert core(g, stab).order == 1


def test_core_of_whole_group():
    g = symmetric(3)
    assert core(g, g.full_subgroup()).member_indices == tuple(range(6))


def test_core_in_abelian_group_is_the_subgroup():
    g = cyclic(4)
    sub = Subgroup(g, g.subgroup_closure([g.mul(1, 1)]), validate=False)
    assert sub.order == 2
    assert core(g, sub).member_indices == sub.member_indices


def test_normalizer_of_normal_subgroup_is_whole_group():
    g = symmetric(3)
    c3 = next(s for s in all_subgroups(g) if s.order == 3)
    assert normalizer(g, c3).order == g.order


def test_normalizer_of_transposition_subgroup_is_itself():
    g = symmetric(3)
    swap = g.index[(1, 0, 2)]
    sub = Subgroup(g, (0, swap), validate=False)
    assert normalizer(g, sub).member_indices == sub.member_indices


def test_normalizer_of_point_stabilizer_in_a5_is_itself():
    # the order-12 point stabilizer is self-normalizing, giving index 5
    g = alternating(5)
    stab = stabilizer(GroupAction.natural(g), 4)
    norm = normalizer(g, stab)
    assert norm.member_indices == stab.member_indices
    assert g.order // norm.order == 5


def test_coset_space_of_trivial_subgroup_is_regular():
    g = dihedral(4)
    act = coset_space(g, g.trivial_subgroup())
    props = action_properties(act)
    assert act.point_count == g.order
    assert props.regular


def test_coset_space_of_whole_group_is_a_point():
    g = dihedral(4)
    act = coset_space(g, g.full_subgroup())
    assert act.point_count == 1
    assert action_properties(act).transitive


def test_coset_space_base_stabilizer_is_the_subgroup(bundle):
    group, lattice, _ = bundle
    for cls in lattice.classes:
        act = coset_space(group, cls.representative)
        assert stabilizer(act, 0).member_indices == cls.representative.member_indices
        assert action_properties(act).transitive


def test_a5_coset_space_of_point_stabilizer_matches_natural_action():
    g = alternating(5)
    stab = stabilizer(GroupAction.natural(g), 4)
    act = coset_space(g, stab)
    assert act.point_count == 5
    assert action_properties(act) == action_properties(GroupAction.natural(g))


def test_action_properties_examples():
    c4 = action_properties(GroupAction.natural(cyclic(4)))
    assert (c4.transitive, c4.regular, c4.faithful) == (True, True, True)
    s3 = action_properties(GroupAction.natural(symmetric(3)))
    assert (s3.transitive, s3.regular, s3.faithful) == (True, False, True)
    triv = action_properties(GroupAction.trivial(cyclic(2), 3))
    assert (triv.transitive, triv.regular, triv.faithful) == (False, False, False)


def test_orbit_stabilizer_theorem(bundle):
    group, lattice, _ = bundle
    actions = [GroupAction.natural(group)] + [
        coset_space(group, cls.representative) for cls in lattice.classes
    ]
    for act in actions:
        for p in range(act.point_count):
            assert len(orbit(act, p)) * stabilizer(act, p).order == group.order


def test_homomorphism_property_exhaustive(bundle):
    group, lattice, _ = bundle
    assert group.order <= 200
    actions = [GroupAction.natural(group)] + [
        coset_space(group, cls.representative) for cls in lattice.classes[:3]
    ]
    for act in actions:
        for a in range(group.order):
            for b in range(group.order):
                assert act.images[group.mul(a, b)] == compose(
                    act.images[a], act.images[b]
                )


def test_core_equals_kernel_of_coset_action(bundle):
    group, _, _ = bundle
    for sub in all_subgroups(group):
        assert (
            core(group, sub).member_indices
            == kernel(coset_space(group, sub)).member_indices
        )


def test_faithful_transitive_abelian_actions_are_regular():
    for group in (cyclic(4), cyclic(6), cyclic(8)):
        for sub in all_subgroups(group):
            act = coset_space(group, sub)
            props = action_properties(act)
            if props.faithful and props.transitive:
                assert props.regular


def test_stabilizers_within_an_orbit_are_conjugate(bundle):
    group, lattice, _ = bundle
    act = coset_space(group, lattice.classes[min(1, len(lattice) - 1)].representative)
    base = stabilizer(act, 0).member_set
    for p in orbit(act, 0):
        stab = stabilizer(act, p).member_set
        assert any(
            frozenset(group.conjugate(h, g) for h in base) == stab
            for g in range(group.order)
        )


def test_from_generator_images_rejects_non_homomorphism():
    g = cyclic(4)
    with pytest.raises(ValueError):
        GroupAction.from_generator_images(g, 3, [(1, 2, 0)])


def test_from_generator_images_quotient_action_properties():
    _, act = c4_mod2_action()
    props = action_properties(act)
    assert props.transitive and not props.faithful


def test_subaction_restricts_to_invariant_subset():
    act = diagonal_power(GroupAction.natural(cyclic(2)), 2)
    diag = subaction(act, [0, 3])
    assert action_properties(diag).regular
    assert diag.point_labels == [(0, 0), (1, 1)]
    off = subaction(act, [1, 2])
    assert action_properties(off).transitive
    with pytest.raises(PointOutOfRange):
        subaction(act, [0, 1])


def test_require_subgroup_guards_foreign_subgroups():
    g1, g2 = symmetric(3), symmetric(4)
    sub = g1.trivial_subgroup()
    with pytest.raises(NotASubgroup):
        core(g2, sub)
