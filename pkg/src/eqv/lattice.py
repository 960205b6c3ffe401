"""Complete subgroup enumeration and conjugacy classes of subgroups.

Subgroups are found by layered generator extension: every cyclic subgroup
seeds the search, and each found subgroup is extended by every outside
element until no new member set appears.  Each extension at least doubles
the order, so per-subgroup generating sets stay logarithmically small.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LatticeCapExceeded
from .groups import FiniteGroup, Subgroup

DEFAULT_LATTICE_CAP = 2_000


def all_subgroups(
    group: FiniteGroup, lattice_cap: int = DEFAULT_LATTICE_CAP
) -> list[Subgroup]:
    """Every subgroup, sorted by (order, member indices)."""
    if group.order > lattice_cap:
        raise LatticeCapExceeded(
            f"group order {group.order} exceeds lattice cap {lattice_cap}"
        )
    group.ensure_mult_table()
    found: dict[tuple[int, ...], list[int]] = {(0,): []}
    for x in range(1, group.order):
        members = group.subgroup_closure([x])
        if members not in found:
            found[members] = [x]
    queue = [(m, g) for m, g in found.items()]
    while queue:
        members, gens = queue.pop()
        mset = set(members)
        for x in range(1, group.order):
            if x in mset:
                continue
            extended = group.subgroup_closure(gens + [x])
            if extended not in found:
                new_gens = gens + [x]
                found[extended] = new_gens
                queue.append((extended, new_gens))
    ordered = sorted(found, key=lambda m: (len(m), m))
    return [Subgroup(group, m, validate=False) for m in ordered]


@dataclass(frozen=True)
class ConjugacyClass:
    """All conjugates of one subgroup; the representative is the member
    with the lexicographically smallest member-index tuple."""

    representative: Subgroup
    members: tuple[Subgroup, ...]
    sub_order: int


class SubgroupLattice:
    """Conjugacy classes of subgroups in canonical topological order.

    Classes are sorted by subgroup order (ties by the representative's
    member tuple), so no class can strictly contain a later one.
    """

    def __init__(self, group: FiniteGroup, classes: list[ConjugacyClass]):
        self.group = group
        self.classes = list(classes)
        self.class_of: dict[frozenset[int], int] = {}
        for i, cls in enumerate(self.classes):
            for member in cls.members:
                self.class_of[member.member_set] = i
        self._leq: list[list[bool]] | None = None

    def __len__(self) -> int:
        return len(self.classes)

    def label(self, i: int) -> str:
        return f"c{i}_o{self.classes[i].sub_order}"

    def labels(self) -> list[str]:
        return [self.label(i) for i in range(len(self.classes))]

    def leq(self, i: int, j: int) -> bool:
        """True iff some conjugate of representative(i) lies inside
        representative(j)."""
        if self._leq is None:
            self._leq = self._build_leq()
        return self._leq[i][j]

    def _build_leq(self) -> list[list[bool]]:
        n = len(self.classes)
        table = [[False] * n for _ in range(n)]
        for i, ci in enumerate(self.classes):
            for j, cj in enumerate(self.classes):
                big = cj.representative.member_set
                table[i][j] = any(
                    m.member_set <= big for m in ci.members
                )
        return table

    def to_json_dict(self) -> dict:
        return {
            "classes": [
                {
                    "order": cls.sub_order,
                    "size": len(cls.members),
                    "representative": list(cls.representative.member_indices),
                }
                for cls in self.classes
            ]
        }


def conjugacy_classes(group: FiniteGroup, subs: list[Subgroup]) -> SubgroupLattice:
    """Partition a complete subgroup list into conjugacy classes."""
    remaining: dict[tuple[int, ...], Subgroup] = {
        s.member_indices: s for s in subs
    }
    classes: list[ConjugacyClass] = []
    for sub in subs:
        if sub.member_indices not in remaining:
            continue
        conj_tuples = {
            sub.conjugate_by(g).member_indices for g in range(group.order)
        }
        members = tuple(
            Subgroup(group, m, validate=False) for m in sorted(conj_tuples)
        )
        for m in conj_tuples:
            remaining.pop(m, None)
        classes.append(
            ConjugacyClass(
                representative=members[0],
                members=members,
                sub_order=sub.order,
            )
        )
    classes.sort(key=lambda c: (c.sub_order, c.representative.member_indices))
    return SubgroupLattice(group, classes)


def subgroup_lattice(
    group: FiniteGroup, lattice_cap: int = DEFAULT_LATTICE_CAP
) -> SubgroupLattice:
    return conjugacy_classes(group, all_subgroups(group, lattice_cap))


def class_leq(lattice: SubgroupLattice, i: int, j: int) -> bool:
    return lattice.leq(i, j)
