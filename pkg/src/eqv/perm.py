"""Permutations of {0, ..., n-1} as image tuples.

A permutation is a plain tuple ``p`` with ``p[i]`` the image of point
``i``.  Tuples hash and compare natively, which keeps closure sets and
canonical (lexicographic) ordering trivial.
"""

from __future__ import annotations

from .errors import DegreeMismatch

Perm = tuple[int, ...]


def is_perm(p: Perm) -> bool:
    return sorted(p) == list(range(len(p)))


def identity(n: int) -> Perm:
    if n <= 0:
        raise ValueError(f"permutation degree must be positive, got {n}")
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """Return p∘q, i.e. apply q first: result[i] = p[q[i]]."""
    if len(p) != len(q):
        raise DegreeMismatch(f"degrees {len(p)} and {len(q)} differ")
    return tuple(p[q[i]] for i in range(len(p)))


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def from_cycles(n: int, cycles: list[list[int]]) -> Perm:
    """Build a degree-n permutation from disjoint cycles (missing points fixed)."""
    images = list(range(n))
    for cycle in cycles:
        for k, point in enumerate(cycle):
            images[point] = cycle[(k + 1) % len(cycle)]
    p = tuple(images)
    if not is_perm(p):
        raise ValueError(f"cycles {cycles} do not define a permutation of degree {n}")
    return p


def cycle_string(p: Perm) -> str:
    """Disjoint-cycle notation, fixed points omitted; identity prints as ()."""
    seen = [False] * len(p)
    parts = []
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            seen[start] = True
            continue
        cycle = [start]
        seen[start] = True
        nxt = p[start]
        while nxt != start:
            cycle.append(nxt)
            seen[nxt] = True
            nxt = p[nxt]
        parts.append("(" + " ".join(str(x) for x in cycle) + ")")
    return "".join(parts) if parts else "()"
