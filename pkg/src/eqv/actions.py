"""Group actions on finite point sets, stored as one permutation per element.

Actions are left actions throughout: ``act(g, i) = images[g][i]`` and
``act(g, act(h, i)) = act(g*h, i)``.  The right-coset space H\\G carries the
left action ``g : Hx -> H(x g^-1)``, which keeps H the stabilizer of the
base coset while composing the usual way.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PointOutOfRange
from .groups import FiniteGroup, Subgroup, require_subgroup
from .perm import Perm, compose, identity


class GroupAction:
    """A homomorphism from a group into the permutations of a point set."""

    def __init__(
        self,
        group: FiniteGroup,
        point_count: int,
        images: list[Perm],
        point_labels: list | None = None,
    ):
        if len(images) != group.order:
            raise ValueError(
                f"need {group.order} image permutations, got {len(images)}"
            )
        self.group = group
        self.point_count = point_count
        self.images = images
        self.point_labels = point_labels

    def act(self, g: int, point: int) -> int:
        return self.images[g][point]

    def generator_images(self) -> list[Perm]:
        return [self.images[k] for k in self.group.generator_indices]

    @classmethod
    def natural(cls, group: FiniteGroup) -> "GroupAction":
        """The group's defining action on its degree points."""
        return cls(group, group.degree, list(group.elements))

    @classmethod
    def trivial(cls, group: FiniteGroup, point_count: int) -> "GroupAction":
        ident = identity(point_count) if point_count > 0 else ()
        return cls(group, point_count, [ident] * group.order)

    @classmethod
    def from_generator_images(
        cls,
        group: FiniteGroup,
        point_count: int,
        generator_images: list[Perm],
        validate: bool = True,
    ) -> "GroupAction":
        """Extend images of the generators to the whole group.

        Walks the closure's derivation records, then (by default) checks the
        result is a homomorphism on every (element, generator) pair, which
        pins down all relations.
        """
        if len(generator_images) != len(group.generators):
            raise ValueError(
                f"need {len(group.generators)} generator images, "
                f"got {len(generator_images)}"
            )
        images: list[Perm] = [identity(point_count)] * group.order
        for k in range(1, group.order):
            parent, gen = group.derivation[k]
            images[k] = compose(images[parent], generator_images[gen])
        action = cls(group, point_count, images)
        if validate:
            for a in range(group.order):
                for gi, gimg in zip(group.generator_indices, generator_images):
                    if images[group.mul(a, gi)] != compose(images[a], gimg):
                        raise ValueError(
                            "generator images do not extend to a homomorphism "
                            f"(fails at element {a}, generator index {gi})"
                        )
        return action


@dataclass(frozen=True)
class ActionProperties:
    transitive: bool
    regular: bool
    faithful: bool


def _check_point(action: GroupAction, point: int) -> None:
    if not 0 <= point < action.point_count:
        raise PointOutOfRange(
            f"point {point} outside 0..{action.point_count - 1}"
        )


def orbit(action: GroupAction, point: int) -> frozenset[int]:
    """All points reachable from ``point`` under the group."""
    _check_point(action, point)
    gen_images = action.generator_images()
    seen = {point}
    frontier = [point]
    while frontier:
        new = []
        for p in frontier:
            for img in gen_images:
                q = img[p]
                if q not in seen:
                    seen.add(q)
                    new.append(q)
        frontier = new
    return frozenset(seen)


def orbits(action: GroupAction) -> list[frozenset[int]]:
    """Orbit partition, ordered by smallest contained point."""
    result = []
    assigned = [False] * action.point_count
    for p in range(action.point_count):
        if not assigned[p]:
            orb = orbit(action, p)
            for q in orb:
                assigned[q] = True
            result.append(orb)
    return result


def stabilizer(action: GroupAction, point: int) -> Subgroup:
    _check_point(action, point)
    members = tuple(
        g for g in range(action.group.order) if action.images[g][point] == point
    )
    return Subgroup(action.group, members, validate=False)


def kernel(action: GroupAction) -> Subgroup:
    ident = identity(action.point_count) if action.point_count > 0 else ()
    members = tuple(
        g for g in range(action.group.order) if action.images[g] == ident
    )
    return Subgroup(action.group, members, validate=False)


def core(group: FiniteGroup, sub: Subgroup) -> Subgroup:
    """Largest normal subgroup of the group inside ``sub``.

    Intersection of all conjugates; equals the kernel of the coset action.
    """
    require_subgroup(group, sub)
    mset = sub.member_set
    members = tuple(
        h
        for h in sub.member_indices
        if all(group.conjugate(h, g) in mset for g in range(group.order))
    )
    return Subgroup(group, members, validate=False)


def normalizer(group: FiniteGroup, sub: Subgroup) -> Subgroup:
    require_subgroup(group, sub)
    mset = sub.member_set
    members = tuple(
        g
        for g in range(group.order)
        if all(group.conjugate(h, g) in mset for h in sub.member_indices)
    )
    return Subgroup(group, members, validate=False)


def coset_space(group: FiniteGroup, sub: Subgroup) -> GroupAction:
    """The transitive action on right cosets of ``sub``.

    Points are cosets ordered by their minimal element index; point 0 is the
    base coset, whose stabilizer is ``sub`` itself.
    """
    require_subgroup(group, sub)
    members = sub.member_indices
    coset_of_elem = [-1] * group.order
    reps: list[int] = []
    for x in range(group.order):
        if coset_of_elem[x] == -1:
            point = len(reps)
            reps.append(x)
            for h in members:
                coset_of_elem[group.mul(h, x)] = point
    images: list[Perm] = []
    for g in range(group.order):
        ginv = group.inv(g)
        images.append(tuple(coset_of_elem[group.mul(r, ginv)] for r in reps))
    return GroupAction(group, len(reps), images)


def action_properties(action: GroupAction) -> ActionProperties:
    transitive = (
        action.point_count > 0
        and len(orbit(action, 0)) == action.point_count
    )
    faithful = kernel(action).order == 1
    regular = (
        transitive and faithful and action.group.order == action.point_count
    )
    return ActionProperties(transitive=transitive, regular=regular, faithful=faithful)


def subaction(action: GroupAction, points: list[int]) -> GroupAction:
    """Restrict to an invariant point subset, relabelled 0..k-1 in given order."""
    pos = {p: k for k, p in enumerate(points)}
    images: list[Perm] = []
    for g in range(action.group.order):
        img = action.images[g]
        moved = [img[p] for p in points]
        if any(q not in pos for q in moved):
            raise PointOutOfRange("point subset is not invariant under the group")
        images.append(tuple(pos[q] for q in moved))
    labels = None
    if action.point_labels is not None:
        labels = [action.point_labels[p] for p in points]
    return GroupAction(action.group, len(points), images, point_labels=labels)
