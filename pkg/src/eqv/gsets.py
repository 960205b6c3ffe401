"""Explicit product G-sets and their orbit decompositions.

This is the brute-force side of the mark arithmetic: points of powers and
products are materialized (up to a cap), orbits are enumerated, and each
orbit's stabilizer is matched to a lattice class.  Tuple points use a
mixed-radix index so tuple<->index maps are O(1) and representatives are
the minimal encodings.
"""

from __future__ import annotations

from itertools import product as iter_product

from .actions import GroupAction
from .errors import (
    GroupMismatch,
    RangeError,
    SizeCapExceeded,
    StabilizerNotInLattice,
)
from .lattice import SubgroupLattice
from .perm import Perm

DEFAULT_EXPLICIT_CAP = 10_000_000


def disjoint_union(a: GroupAction, b: GroupAction) -> GroupAction:
    """Blockwise action on the points of ``a`` followed by those of ``b``."""
    if a.group != b.group:
        raise GroupMismatch("disjoint union needs actions of the same group")
    na = a.point_count
    images: list[Perm] = []
    for g in range(a.group.order):
        ia, ib = a.images[g], b.images[g]
        images.append(tuple(ia) + tuple(p + na for p in ib))
    return GroupAction(a.group, na + b.point_count, images)


def diagonal_product(
    a: GroupAction, b: GroupAction, cap: int = DEFAULT_EXPLICIT_CAP
) -> GroupAction:
    """Simultaneous action on pairs; point (i, j) has index i*|b| + j."""
    if a.group != b.group:
        raise GroupMismatch("product needs actions of the same group")
    na, nb = a.point_count, b.point_count
    if na * nb > cap:
        raise SizeCapExceeded(
            f"product would have {na * nb} points, cap is {cap}"
        )
    images: list[Perm] = []
    for g in range(a.group.order):
        ia, ib = a.images[g], b.images[g]
        images.append(
            tuple(ia[i] * nb + ib[j] for i in range(na) for j in range(nb))
        )
    labels = [(i, j) for i in range(na) for j in range(nb)]
    return GroupAction(a.group, na * nb, images, point_labels=labels)


def diagonal_power(
    a: GroupAction, D: int, cap: int = DEFAULT_EXPLICIT_CAP
) -> GroupAction:
    """Action on D-tuples of points, componentwise; labels carry the tuples."""
    if D < 1:
        raise RangeError(f"power must be >= 1, got {D}")
    n = a.point_count
    total = n**D
    if total > cap:
        raise SizeCapExceeded(f"power would have {total} points, cap is {cap}")
    tuples = list(iter_product(range(n), repeat=D))
    images: list[Perm] = []
    for g in range(a.group.order):
        img = a.images[g]
        out = []
        for t in tuples:
            enc = 0
            for p in t:
                enc = enc * n + img[p]
            out.append(enc)
        images.append(tuple(out))
    return GroupAction(a.group, total, images, point_labels=tuples)


def orbit_decompose(action: GroupAction, lattice: SubgroupLattice) -> tuple[int, ...]:
    """Class multiplicities of an explicit action: one count per lattice
    class, found by enumerating orbits and matching each representative's
    stabilizer to its conjugacy class."""
    if action.group != lattice.group:
        raise GroupMismatch("lattice belongs to a different group")
    group = action.group
    gen_images = action.generator_images()
    counts = [0] * len(lattice.classes)
    assigned = [False] * action.point_count
    for p in range(action.point_count):
        if assigned[p]:
            continue
        assigned[p] = True
        frontier = [p]
        while frontier:
            new = []
            for q in frontier:
                for img in gen_images:
                    r = img[q]
                    if not assigned[r]:
                        assigned[r] = True
                        new.append(r)
            frontier = new
        stab = frozenset(
            g for g in range(group.order) if action.images[g][p] == p
        )
        cls = lattice.class_of.get(stab)
        if cls is None:
            raise StabilizerNotInLattice(
                f"stabilizer of point {p} matches no lattice class"
            )
        counts[cls] += 1
    return tuple(counts)


_MAX_TABLE_ARG = 20


def stirling2(D: int, d: int) -> int:
    """Partitions of D labelled items into exactly d non-empty blocks."""
    if not 0 <= d <= D <= _MAX_TABLE_ARG:
        raise RangeError(f"need 0 <= d <= D <= {_MAX_TABLE_ARG}, got D={D}, d={d}")
    row = [1]
    for n in range(1, D + 1):
        row = [0] + [k * row[k] + row[k - 1] if k < n else row[k - 1]
                     for k in range(1, n + 1)]
    return row[d]


def bell(D: int) -> int:
    """Number of partitions of a set of D labelled items."""
    if not 0 <= D <= _MAX_TABLE_ARG:
        raise RangeError(f"need 0 <= D <= {_MAX_TABLE_ARG}, got {D}")
    return sum(stirling2(D, d) for d in range(D + 1))
