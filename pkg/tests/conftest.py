"""Shared fixtures: the desk-scale test groups with lattices and tables."""

import pytest

from eqv import (
    alternating,
    cyclic,
    dihedral,
    subgroup_lattice,
    symmetric,
    table_of_marks,
)

GROUP_BUILDERS = {
    "C6": lambda: cyclic(6),
    "S3": lambda: symmetric(3),
    "D4": lambda: dihedral(4),
    "S4": lambda: symmetric(4),
    "A5": lambda: alternating(5),
}

_cache = {}


def group_bundle(name):
    """(group, lattice, table) for one of the standard test groups."""
    if name not in _cache:
        group = GROUP_BUILDERS[name]()
        lattice = subgroup_lattice(group)
        _cache[name] = (group, lattice, table_of_marks(lattice))
    return _cache[name]


@pytest.fixture(params=sorted(GROUP_BUILDERS))
def bundle(request):
    return group_bundle(request.param)
