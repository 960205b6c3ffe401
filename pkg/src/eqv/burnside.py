"""Table of marks and exact arithmetic in the ring of G-sets.

A G-set is a tuple of non-negative multiplicities over the lattice's
conjugacy classes; its mark vector counts fixed points per class.  All
arithmetic is exact (Python integers, Fractions for the inverse table),
so decomposition failures signal genuinely inconsistent inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .actions import core
from .errors import (
    DimensionMismatch,
    EqvError,
    NegativeMultiplicity,
    NonIntegralDecomposition,
    UnfaithfulAction,
)
from .groups import FiniteGroup, Subgroup, require_subgroup
from .lattice import SubgroupLattice

# Multiplicity and mark vectors are plain int tuples in lattice class order.
GSetExpr = tuple[int, ...]
MarkVector = tuple[int, ...]


def mark(group: FiniteGroup, sub_i: Subgroup, sub_j: Subgroup) -> int:
    """Number of right cosets of sub_i fixed by every element of sub_j.

    The coset (sub_i)x is fixed by h iff x h x^-1 lies in sub_i, which is
    independent of the chosen representative x.
    """
    require_subgroup(group, sub_i)
    require_subgroup(group, sub_j)
    return sum(
        1 for x in _coset_representatives(group, sub_i)
        if _coset_fixed_by(group, sub_i, x, sub_j)
    )


def _coset_representatives(group: FiniteGroup, sub: Subgroup) -> list[int]:
    seen = [False] * group.order
    reps = []
    for x in range(group.order):
        if not seen[x]:
            reps.append(x)
            for h in sub.member_indices:
                seen[group.mul(h, x)] = True
    return reps


def _coset_fixed_by(
    group: FiniteGroup, sub: Subgroup, x: int, fixer: Subgroup
) -> bool:
    mset = sub.member_set
    xinv = group.inv(x)
    return all(
        group.mul(group.mul(x, h), xinv) in mset for h in fixer.member_indices
    )


class TableOfMarks:
    """Square matrix of marks: row i is the coset space of class i, column j
    counts its points fixed by class j's representative.  Lower triangular
    with positive diagonal in lattice order."""

    def __init__(self, lattice: SubgroupLattice, matrix: tuple[tuple[int, ...], ...]):
        self.lattice = lattice
        self.matrix = matrix
        self._inverse: tuple[tuple[Fraction, ...], ...] | None = None

    def __len__(self) -> int:
        return len(self.matrix)

    def row(self, i: int) -> MarkVector:
        return self.matrix[i]

    def determinant(self) -> int:
        det = 1
        for i in range(len(self.matrix)):
            det *= self.matrix[i][i]
        return det

    def inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        """Exact inverse of the (lower-triangular) mark matrix."""
        if self._inverse is None:
            n = len(self.matrix)
            cols = []
            for c in range(n):
                x = [Fraction(0)] * n
                for r in range(n):
                    acc = Fraction(1 if r == c else 0)
                    for k in range(r):
                        if self.matrix[r][k]:
                            acc -= self.matrix[r][k] * x[k]
                    x[r] = acc / self.matrix[r][r]
                cols.append(x)
            self._inverse = tuple(
                tuple(cols[c][r] for c in range(n)) for r in range(n)
            )
        return self._inverse

    def to_json_dict(self) -> dict:
        return {
            "classes": self.lattice.labels(),
            "matrix": [list(row) for row in self.matrix],
        }


def table_of_marks(lattice: SubgroupLattice) -> TableOfMarks:
    group = lattice.group
    matrix = []
    for ci in lattice.classes:
        sub_i = ci.representative
        reps = _coset_representatives(group, sub_i)
        row = tuple(
            sum(
                1 for x in reps
                if _coset_fixed_by(group, sub_i, x, cj.representative)
            )
            for cj in lattice.classes
        )
        matrix.append(row)
    return TableOfMarks(lattice, tuple(matrix))


def mark_vector(table: TableOfMarks, expr: GSetExpr) -> MarkVector:
    """Marks of the G-set with the given class multiplicities."""
    n = len(table)
    if len(expr) != n:
        raise DimensionMismatch(f"expected {n} multiplicities, got {len(expr)}")
    return tuple(
        sum(expr[i] * table.matrix[i][j] for i in range(n)) for j in range(n)
    )


def decompose(table: TableOfMarks, v: MarkVector) -> GSetExpr:
    """Recover multiplicities from a mark vector by forward substitution
    on the triangular system, last class first.  Exact; non-integer or
    negative solutions mean the vector is not the marks of any G-set."""
    n = len(table)
    if len(v) != n:
        raise DimensionMismatch(f"expected {n} marks, got {len(v)}")
    p = [0] * n
    for j in range(n - 1, -1, -1):
        residue = v[j] - sum(
            p[i] * table.matrix[i][j] for i in range(j + 1, n)
        )
        quotient, remainder = divmod(residue, table.matrix[j][j])
        if remainder != 0:
            raise NonIntegralDecomposition(
                f"mark vector is not an integer combination at class {j}"
            )
        if quotient < 0:
            raise NegativeMultiplicity(
                f"mark vector gives multiplicity {quotient} at class {j}"
            )
        p[j] = quotient
    return tuple(p)


def product(table: TableOfMarks, a: GSetExpr, b: GSetExpr) -> GSetExpr:
    """Cartesian product of G-sets: elementwise product of mark vectors,
    decomposed back into multiplicities."""
    va = mark_vector(table, a)
    vb = mark_vector(table, b)
    return decompose(table, tuple(x * y for x, y in zip(va, vb)))


def indicator(table: TableOfMarks, i: int) -> GSetExpr:
    e = [0] * len(table)
    e[i] = 1
    return tuple(e)


def expr_points(table: TableOfMarks, expr: GSetExpr) -> int:
    return mark_vector(table, expr)[0]


def structure_coefficients(table: TableOfMarks, i: int, j: int) -> tuple[int, ...]:
    """Multiplicities of the product of coset spaces i and j, from the
    table and its exact inverse; asserted integral and non-negative."""
    n = len(table)
    inv = table.inverse()
    out = []
    for ell in range(n):
        acc = Fraction(0)
        for l in range(n):
            acc += table.matrix[i][l] * table.matrix[j][l] * inv[l][ell]
        if acc.denominator != 1 or acc < 0:
            raise EqvError(
                f"non-integral structure coefficient {acc} at class {ell}; "
                "table of marks is inconsistent"
            )
        out.append(int(acc))
    return tuple(out)


@dataclass(frozen=True)
class RegularOrbitReport:
    minimal_D: int
    log_bound: int
    stirling_bound: int


def log2_order_bound(h_order: int) -> int:
    """ceil(log2 |H|), with 1 for the trivial subgroup since at least one
    product factor is needed."""
    if h_order <= 1:
        return 1
    return (h_order - 1).bit_length()


def stirling_degree_bound(n_points: int) -> int:
    """Group-agnostic bound on the power producing a regular orbit, from
    the factorial bound on the largest possible point stabilizer."""
    if n_points <= 2:
        return 1
    n = n_points
    value = (n - 0.5) * math.log2(n - 1) - (n - 2) * math.log2(math.e)
    return math.ceil(value)


def regular_orbit_order(table: TableOfMarks, h_class: int) -> RegularOrbitReport:
    """Smallest power of the class's coset space containing a regular
    orbit, with the two a-priori bounds."""
    lattice = table.lattice
    group = lattice.group
    rep = lattice.classes[h_class].representative
    if core(group, rep).order != 1:
        raise UnfaithfulAction(
            f"class {lattice.label(h_class)} has a non-trivial core; "
            "its coset action is not faithful"
        )
    h_order = rep.order
    log_bound = log2_order_bound(h_order)
    stirling_bound = stirling_degree_bound(group.order // h_order)
    # Provable guarantee: each extra factor at least halves the smallest
    # stabilizer, so a regular orbit exists by floor(log2 |H|) + 1.  That
    # exceeds log_bound exactly when |H| is a power of two.
    guarantee = max(1, h_order.bit_length())
    row = table.row(h_class)
    v = row
    d = 1
    while decompose(table, v)[0] == 0:
        if d >= guarantee:
            raise EqvError(
                "no regular orbit found within the guaranteed power; "
                "table of marks is inconsistent"
            )
        v = tuple(x * y for x, y in zip(v, row))
        d += 1
    return RegularOrbitReport(
        minimal_D=d, log_bound=log_bound, stirling_bound=stirling_bound
    )
