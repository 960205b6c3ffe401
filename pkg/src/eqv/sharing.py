"""Parameter-sharing patterns for equivariant linear maps.

A pattern assigns every (output, input) cell the id of its orbit under the
simultaneous action on rows and columns; weights tied within an orbit give
exactly the matrices commuting with the two actions.  Orbit ids are
canonical: scanning cells row-major, the first cell of a new orbit gets
the next id, so patterns serialize byte-identically across runs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .actions import GroupAction, kernel, orbit, stabilizer
from .errors import (
    EqvError,
    GroupMismatch,
    LengthMismatch,
    NotTransitive,
    ShapeMismatch,
)


@dataclass(frozen=True)
class SharingPattern:
    rows: int
    cols: int
    orbit_of: np.ndarray
    num_orbits: int
    bias_orbit_of: np.ndarray
    num_bias_orbits: int

    def to_json_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "num_orbits": self.num_orbits,
            "orbit_of": self.orbit_of.tolist(),
            "bias_orbit_of": self.bias_orbit_of.tolist(),
            "num_bias_orbits": self.num_bias_orbits,
        }


def _canonical_orbit_ids(count: int, neighbours) -> tuple[np.ndarray, int]:
    """Assign orbit ids by scanning items in order and flood-filling."""
    ids = np.full(count, -1, dtype=np.int64)
    next_id = 0
    for start in range(count):
        if ids[start] != -1:
            continue
        ids[start] = next_id
        frontier = [start]
        while frontier:
            new = []
            for item in frontier:
                for other in neighbours(item):
                    if ids[other] == -1:
                        ids[other] = next_id
                        new.append(other)
            frontier = new
        next_id += 1
    return ids, next_id


def make_pattern(out_action: GroupAction, in_action: GroupAction) -> SharingPattern:
    """Sharing pattern for linear maps from ``in_action`` to ``out_action``.

    Cell orbits come from the simultaneous action on (row, column) pairs;
    bias orbits are the orbits of the output action.
    """
    if out_action.group != in_action.group:
        raise GroupMismatch("input and output actions must share one group")
    if kernel(in_action).order != 1:
        warnings.warn(
            "input action is not faithful; the map is invariant to the "
            "kernel of the action",
            stacklevel=2,
        )
    rows, cols = out_action.point_count, in_action.point_count
    gen_pairs = list(zip(out_action.generator_images(), in_action.generator_images()))

    def cell_neighbours(cell: int):
        o, i = divmod(cell, cols)
        for out_img, in_img in gen_pairs:
            yield out_img[o] * cols + in_img[i]

    cell_ids, num_orbits = _canonical_orbit_ids(rows * cols, cell_neighbours)
    out_images = out_action.generator_images()

    def row_neighbours(o: int):
        for img in out_images:
            yield img[o]

    bias_ids, num_bias = _canonical_orbit_ids(rows, row_neighbours)
    return SharingPattern(
        rows=rows,
        cols=cols,
        orbit_of=cell_ids.reshape(rows, cols),
        num_orbits=num_orbits,
        bias_orbit_of=bias_ids,
        num_bias_orbits=num_bias,
    )


def instantiate(
    pattern: SharingPattern, weights, biases
) -> tuple[np.ndarray, np.ndarray]:
    """Dense matrix and bias vector with one free value per orbit."""
    weights = np.asarray(weights, dtype=float)
    biases = np.asarray(biases, dtype=float)
    if weights.shape != (pattern.num_orbits,):
        raise LengthMismatch(
            f"need {pattern.num_orbits} weights, got shape {weights.shape}"
        )
    if biases.shape != (pattern.num_bias_orbits,):
        raise LengthMismatch(
            f"need {pattern.num_bias_orbits} biases, got shape {biases.shape}"
        )
    return weights[pattern.orbit_of], biases[pattern.bias_orbit_of]


def equivariance_report(
    matrix,
    bias,
    out_action: GroupAction,
    in_action: GroupAction,
    tol: float = 0.0,
) -> tuple[bool, int | None, float]:
    """(passed, worst generator element index, max deviation) over all
    generators; the homomorphism property extends the check to the group."""
    if out_action.group != in_action.group:
        raise GroupMismatch("input and output actions must share one group")
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (out_action.point_count, in_action.point_count):
        raise ShapeMismatch(
            f"matrix shape {matrix.shape} does not match actions "
            f"({out_action.point_count}, {in_action.point_count})"
        )
    if bias is not None:
        bias = np.asarray(bias, dtype=float)
        if bias.shape != (out_action.point_count,):
            raise ShapeMismatch(
                f"bias shape {bias.shape} does not match output action"
            )
    worst_gen: int | None = None
    worst = 0.0
    for g in out_action.group.generator_indices:
        out_img = np.asarray(out_action.images[g])
        in_img = np.asarray(in_action.images[g])
        moved = np.empty_like(matrix)
        moved[np.ix_(out_img, in_img)] = matrix
        dev = float(np.abs(moved - matrix).max()) if matrix.size else 0.0
        if bias is not None and bias.size:
            moved_b = np.empty_like(bias)
            moved_b[out_img] = bias
            dev = max(dev, float(np.abs(moved_b - bias).max()))
        if dev > worst:
            worst = dev
            worst_gen = g
    return worst <= tol, worst_gen, worst


def check_equivariance(
    matrix, bias, out_action: GroupAction, in_action: GroupAction, tol: float = 0.0
) -> bool:
    passed, _, _ = equivariance_report(matrix, bias, out_action, in_action, tol)
    return passed


def project_to_pattern(pattern: SharingPattern, matrix) -> np.ndarray:
    """Orbit-average a dense matrix onto the constraint set of the pattern."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (pattern.rows, pattern.cols):
        raise ShapeMismatch(
            f"matrix shape {matrix.shape} does not match pattern "
            f"({pattern.rows}, {pattern.cols})"
        )
    ids = pattern.orbit_of.ravel()
    sums = np.bincount(ids, weights=matrix.ravel(), minlength=pattern.num_orbits)
    counts = np.bincount(ids, minlength=pattern.num_orbits)
    return (sums / counts)[pattern.orbit_of]


@dataclass(frozen=True)
class KernelForm:
    """Cross-correlation form of a transitive-to-transitive pattern.

    ``kernel_slots[i]`` is the orbit id supplying the kernel value at input
    point i; ``shift[o, i]`` is the input point whose kernel value feeds
    output o from input i, so applying the kernel is
    ``y[o] = sum_i kernel[shift[o, i]] * x[i]``.
    """

    pattern: SharingPattern
    input_transversal: tuple[int, ...]
    output_transversal: tuple[int, ...]
    kernel_slots: tuple[int, ...]
    shift: np.ndarray

    def kernel(self, weights) -> np.ndarray:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (self.pattern.num_orbits,):
            raise LengthMismatch(
                f"need {self.pattern.num_orbits} weights, got shape {weights.shape}"
            )
        return weights[np.asarray(self.kernel_slots)]

    def apply(self, weights, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.pattern.cols,):
            raise ShapeMismatch(f"input shape {x.shape} does not match pattern")
        return (self.kernel(weights)[self.shift] * x).sum(axis=1)


def _transversal(action: GroupAction) -> list[int]:
    """For each point, one group element carrying point 0 onto it."""
    group = action.group
    reach = [-1] * action.point_count
    reach[0] = 0
    frontier = [0]
    while frontier:
        new = []
        for p in frontier:
            for g in group.generator_indices:
                q = action.images[g][p]
                if reach[q] == -1:
                    reach[q] = group.mul(g, reach[p])
                    new.append(q)
        frontier = new
    return reach


def _double_coset_count(action_out: GroupAction, action_in: GroupAction) -> int:
    group = action_out.group
    k_members = stabilizer(action_out, 0).member_indices
    h_members = stabilizer(action_in, 0).member_indices
    seen = [False] * group.order
    count = 0
    for g in range(group.order):
        if seen[g]:
            continue
        count += 1
        for k in k_members:
            kg = group.mul(k, g)
            for h in h_members:
                seen[group.mul(kg, h)] = True
    return count


def kernel_form(
    pattern: SharingPattern, out_action: GroupAction, in_action: GroupAction
) -> KernelForm:
    """Rewrite a transitive pattern as a kernel applied by cross-correlation.

    The kernel is the base output row of the dense matrix; every other row
    is that row pulled back along a transversal element.
    """
    if out_action.group != in_action.group:
        raise GroupMismatch("input and output actions must share one group")
    for action, side in ((out_action, "output"), (in_action, "input")):
        if len(orbit(action, 0)) != action.point_count:
            raise NotTransitive(f"{side} action is not transitive")
    if pattern.rows != out_action.point_count or pattern.cols != in_action.point_count:
        raise ShapeMismatch("pattern does not match the given actions")
    group = out_action.group
    in_t = _transversal(in_action)
    out_t = _transversal(out_action)
    kernel_slots = tuple(int(pattern.orbit_of[0, i]) for i in range(pattern.cols))
    if len(set(kernel_slots)) != pattern.num_orbits:
        raise EqvError(
            "kernel slots do not cover every orbit; pattern and actions disagree"
        )
    if _double_coset_count(out_action, in_action) != pattern.num_orbits:
        raise EqvError(
            "double coset count disagrees with the pattern's orbit count"
        )
    shift = np.empty((pattern.rows, pattern.cols), dtype=np.int64)
    for o in range(pattern.rows):
        t_inv = group.inv(out_t[o])
        img = in_action.images[t_inv]
        shift[o] = [img[i] for i in range(pattern.cols)]
    return KernelForm(
        pattern=pattern,
        input_transversal=tuple(in_t),
        output_transversal=tuple(out_t),
        kernel_slots=kernel_slots,
        shift=shift,
    )
