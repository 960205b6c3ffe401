"""Finite permutation groups enumerated from generators, plus subgroups.

Element order is canonical: breadth-first closure from the identity with a
lexicographic tie-break inside each BFS layer, so element indices are
reproducible across runs.  Element 0 is always the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotASubgroup, OrderCapExceeded
from .perm import Perm, compose, identity, inverse, is_perm

DEFAULT_ORDER_CAP = 10_080


class FiniteGroup:
    """A finite permutation group as an enumerated element table.

    ``elements[0]`` is the identity; ``derivation[k] = (parent, gen)`` records
    one factorization ``elements[k] = elements[parent] * generators[gen]``,
    used to transport generator data onto the whole group.
    """

    def __init__(
        self,
        degree: int,
        generators: list[Perm],
        elements: list[Perm],
        derivation: list[tuple[int, int] | None],
        name: str | None = None,
    ):
        self.degree = degree
        self.generators = list(generators)
        self.elements = list(elements)
        self.derivation = list(derivation)
        self.name = name
        self.index: dict[Perm, int] = {p: k for k, p in enumerate(self.elements)}
        self.inverse_index: list[int] = [self.index[inverse(p)] for p in self.elements]
        self.generator_indices: list[int] = [self.index[g] for g in self.generators]
        self._mult_table: list[list[int]] | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteGroup)
            and self.degree == other.degree
            and self.elements == other.elements
        )

    def __hash__(self) -> int:
        return hash((self.degree, tuple(self.elements)))

    def __repr__(self) -> str:
        label = self.name or "group"
        return f"<{label}: order {self.order}, degree {self.degree}>"

    def mul(self, a: int, b: int) -> int:
        if self._mult_table is not None:
            return self._mult_table[a][b]
        return self.index[compose(self.elements[a], self.elements[b])]

    def inv(self, a: int) -> int:
        return self.inverse_index[a]

    def conjugate(self, a: int, g: int) -> int:
        """Index of g^-1 * a * g."""
        return self.mul(self.mul(self.inv(g), a), g)

    def ensure_mult_table(self) -> list[list[int]]:
        """Build (once) the full index multiplication table.

        Quadratic in the order; callers working at lattice scale need it,
        closure alone does not.
        """
        if self._mult_table is None:
            idx = self.index
            els = self.elements
            self._mult_table = [
                [idx[compose(p, q)] for q in els] for p in els
            ]
        return self._mult_table

    def subgroup_closure(self, gen_indices: list[int]) -> tuple[int, ...]:
        """Member indices of the subgroup generated by the given elements."""
        table = self.ensure_mult_table()
        member = [False] * self.order
        member[0] = True
        frontier = [0]
        for g in gen_indices:
            if not member[g]:
                member[g] = True
                frontier.append(g)
        while frontier:
            new = []
            for a in frontier:
                row = table[a]
                for g in gen_indices:
                    b = row[g]
                    if not member[b]:
                        member[b] = True
                        new.append(b)
            frontier = new
        return tuple(i for i in range(self.order) if member[i])

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (0,), validate=False)

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)), validate=False)


def closure(
    degree: int,
    generators: list[Perm],
    order_cap: int = DEFAULT_ORDER_CAP,
    name: str | None = None,
) -> FiniteGroup:
    """Enumerate the group generated by ``generators`` on ``degree`` points.

    BFS layers from the identity; within a layer new elements are appended
    in lexicographic order of their image tuples.
    """
    for k, g in enumerate(generators):
        if len(g) != degree:
            raise ValueError(f"generator {k} has degree {len(g)}, expected {degree}")
        if not is_perm(g):
            raise ValueError(f"generator {k} is not a permutation: {g}")
    ident = identity(degree)
    elements: list[Perm] = [ident]
    derivation: list[tuple[int, int] | None] = [None]
    index: dict[Perm, int] = {ident: 0}
    frontier = [0]
    while frontier:
        discovered: dict[Perm, tuple[int, int]] = {}
        for ei in frontier:
            p = elements[ei]
            for gi, g in enumerate(generators):
                q = compose(p, g)
                if q not in index and q not in discovered:
                    discovered[q] = (ei, gi)
        frontier = []
        for q in sorted(discovered):
            if len(elements) >= order_cap:
                raise OrderCapExceeded(
                    f"closure exceeds order cap {order_cap}"
                )
            index[q] = len(elements)
            elements.append(q)
            derivation.append(discovered[q])
            frontier.append(index[q])
    return FiniteGroup(degree, generators, elements, derivation, name=name)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by sorted element indices into the parent group."""

    parent: FiniteGroup
    member_indices: tuple[int, ...]
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        members = tuple(sorted(self.member_indices))
        object.__setattr__(self, "member_indices", members)
        if self.validate:
            _check_subgroup(self.parent, members)

    @property
    def order(self) -> int:
        return len(self.member_indices)

    @property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.member_indices)

    def __contains__(self, element_index: int) -> bool:
        return element_index in self.member_set

    def conjugate_by(self, g: int) -> "Subgroup":
        """The subgroup g^-1 * H * g."""
        conj = tuple(sorted(self.parent.conjugate(h, g) for h in self.member_indices))
        return Subgroup(self.parent, conj, validate=False)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return self.member_set >= other.member_set


def _check_subgroup(group: FiniteGroup, members: tuple[int, ...]) -> None:
    mset = set(members)
    if any(not 0 <= m < group.order for m in members):
        raise NotASubgroup(f"member indices {members} outside group of order {group.order}")
    if 0 not in mset:
        raise NotASubgroup("member set does not contain the identity")
    for a in members:
        if group.inv(a) not in mset:
            raise NotASubgroup(f"member set not closed under inverse at element {a}")
        for b in members:
            if group.mul(a, b) not in mset:
                raise NotASubgroup(f"member set not closed under product at ({a}, {b})")
    if group.order % len(members) != 0:
        raise NotASubgroup("member count does not divide the group order")


def require_subgroup(group: FiniteGroup, sub: Subgroup) -> None:
    if sub.parent is not group and sub.parent != group:
        raise NotASubgroup("subgroup belongs to a different parent group")


# Built-in families; all act naturally on their degree points.

def cyclic(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if n < 1:
        raise ValueError(f"cyclic group order must be >= 1, got {n}")
    if n == 1:
        return closure(1, [], order_cap=order_cap, name="C1")
    rot = tuple((i + 1) % n for i in range(n))
    return closure(n, [rot], order_cap=order_cap, name=f"C{n}")


def dihedral(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if n < 3:
        raise ValueError(f"dihedral group needs n >= 3 polygon vertices, got {n}")
    rot = tuple((i + 1) % n for i in range(n))
    flip = tuple((n - i) % n for i in range(n))
    return closure(n, [rot, flip], order_cap=order_cap, name=f"D{n}")


def symmetric(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if n < 1:
        raise ValueError(f"symmetric group degree must be >= 1, got {n}")
    if n == 1:
        return closure(1, [], order_cap=order_cap, name="S1")
    swap = (1, 0) + tuple(range(2, n))
    if n == 2:
        return closure(2, [swap], order_cap=order_cap, name="S2")
    cycle = tuple((i + 1) % n for i in range(n))
    return closure(n, [swap, cycle], order_cap=order_cap, name=f"S{n}")


def alternating(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if n < 1:
        raise ValueError(f"alternating group degree must be >= 1, got {n}")
    if n <= 2:
        return closure(n, [], order_cap=order_cap, name=f"A{n}")
    three_cycle = (1, 2, 0) + tuple(range(3, n))
    if n == 3:
        return closure(3, [three_cycle], order_cap=order_cap, name="A3")
    if n % 2 == 1:
        big = tuple((i + 1) % n for i in range(n))
    else:
        big = (0,) + tuple(i % (n - 1) + 1 for i in range(1, n))
    return closure(n, [three_cycle, big], order_cap=order_cap, name=f"A{n}")
