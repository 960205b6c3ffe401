"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline.
Criteria 2 and 5 assert stated values that both independent computation
routes contradict; they are expected to fail and the failure messages spell
out the computed ground truth.
"""

import functools
import time

import numpy as np

from eqv import (
    GroupAction,
    TrainConfig,
    alternating,
    bell,
    build_regular_net,
    coset_space,
    cyclic,
    diagonal_power,
    diagonal_product,
    indicator,
    orbit_decompose,
    product,
    regular_orbit_order,
    stirling2,
    subgroup_lattice,
    symmetric,
    symmetrize,
    table_of_marks,
    train,
)
from eqv.actions import core
from eqv.burnside import stirling_degree_bound
from tests.conftest import GROUP_BUILDERS, group_bundle
from tests.test_eqmlp import (
    architecture_matrix,
    commutation_deviation,
    finite_difference_worst_error,
    reynolds_apply,
)

A5_TABLE = (
    (60, 0, 0, 0, 0, 0, 0, 0, 0),
    (30, 2, 0, 0, 0, 0, 0, 0, 0),
    (20, 0, 2, 0, 0, 0, 0, 0, 0),
    (15, 3, 0, 3, 0, 0, 0, 0, 0),
    (12, 0, 0, 0, 2, 0, 0, 0, 0),
    (10, 2, 1, 0, 0, 1, 0, 0, 0),
    (6, 2, 0, 0, 1, 0, 1, 0, 0),
    (5, 1, 2, 1, 0, 0, 0, 1, 0),
    (1, 1, 1, 1, 1, 1, 1, 1, 1),
)


def criterion(number, description):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper():
            start = time.time()
            try:
                fn()
            except BaseException:
                print(f"ACCEPTANCE {number}: FAIL — {description} "
                      f"({time.time() - start:.1f}s)")
                raise
            print(f"ACCEPTANCE {number}: PASS — {description} "
                  f"({time.time() - start:.1f}s)")
        return wrapper
    return decorate


@criterion(1, "A5 table of marks matches the reference 9x9 table in <10s")
def test_criterion_1_a5_table_of_marks():
    start = time.time()
    group = alternating(5)
    lattice = subgroup_lattice(group)
    table = table_of_marks(lattice)
    elapsed = time.time() - start
    assert table.matrix == A5_TABLE
    assert table.matrix[3] == (15, 3, 0, 3, 0, 0, 0, 0, 0)
    assert elapsed < 10.0, f"table took {elapsed:.2f}s"


@criterion(2, "A5 point-class square/cube multiplicities and minimal power 3")
def test_criterion_2_a5_products():
    _, lattice, table = group_bundle("A5")
    a4 = 7
    start = time.time()
    e = indicator(table, a4)
    square = product(table, e, e)
    cube = product(table, square, e)
    report = regular_orbit_order(table, a4)
    elapsed = time.time() - start
    assert elapsed < 1.0
    as_named = lambda expr: {
        lattice.label(i): m for i, m in enumerate(expr) if m
    }
    assert as_named(square) == {"c7_o12": 1, "c2_o3": 1}
    assert report.minimal_D == 3
    # Stated expectation {A4: 2, C3: 1, {e}: 1}; both mark arithmetic and
    # explicit orbit enumeration give {A4: 1, C3: 3, {e}: 1} (125 points),
    # and the stated union would have only 90 of the 125 points.
    stated = {"c7_o12": 2, "c2_o3": 1, "c0_o1": 1}
    assert as_named(cube) == stated, (
        f"cube decomposes as {as_named(cube)} "
        f"({sum(m * (60 // lattice.classes[i].sub_order) for i, m in enumerate(cube))} "
        f"points), not the stated {stated} (90 points)"
    )


@criterion(3, "mark-based products equal explicit orbit decompositions")
def test_criterion_3_oracle_equivalence():
    start = time.time()
    for name in sorted(GROUP_BUILDERS):
        group, lattice, table = group_bundle(name)
        spaces = [
            coset_space(group, cls.representative) for cls in lattice.classes
        ]
        for i in range(len(lattice.classes)):
            for j in range(i, len(lattice.classes)):
                explicit = orbit_decompose(
                    diagonal_product(spaces[i], spaces[j]), lattice
                )
                via_marks = product(
                    table, indicator(table, i), indicator(table, j)
                )
                assert explicit == via_marks, (name, i, j)
    assert time.time() - start < 300.0


@criterion(4, "symmetric-group powers: Bell orbit counts, Stirling classes")
def test_criterion_4_bell_stirling():
    for n in (3, 4, 5):
        group = symmetric(n)
        natural = GroupAction.natural(group)
        for d_power in range(1, n + 1):
            power = diagonal_power(natural, d_power)
            seen = [False] * power.point_count
            per_d = {}
            orbit_count = 0
            for p in range(power.point_count):
                if seen[p]:
                    continue
                frontier = [p]
                seen[p] = True
                while frontier:
                    new = []
                    for q in frontier:
                        for img in power.generator_images():
                            r = img[q]
                            if not seen[r]:
                                seen[r] = True
                                new.append(r)
                    frontier = new
                orbit_count += 1
                label = power.point_labels[p]
                distinct = sorted(set(label))
                stab = {
                    g
                    for g in range(group.order)
                    if power.images[g][p] == p
                }
                pointwise = {
                    g
                    for g in range(group.order)
                    if all(group.elements[g][v] == v for v in distinct)
                }
                assert stab == pointwise
                per_d[len(distinct)] = per_d.get(len(distinct), 0) + 1
            assert orbit_count == bell(d_power)
            for d in range(1, d_power + 1):
                assert per_d.get(d, 0) == stirling2(d_power, d)


@criterion(5, "regular-orbit bounds: minimal power vs log2|H|, Stirling at 5")
def test_criterion_5_bounds():
    a5_report = regular_orbit_order(group_bundle("A5")[2], 7)
    assert a5_report.stirling_bound == 5
    assert stirling_degree_bound(5) == 5
    violations = []
    for name in sorted(GROUP_BUILDERS):
        group, lattice, table = group_bundle(name)
        for h_class, cls in enumerate(lattice.classes):
            if core(group, cls.representative).order != 1:
                continue
            report = regular_orbit_order(table, h_class)
            if report.minimal_D > report.log_bound:
                violations.append(
                    (name, lattice.label(h_class), report.minimal_D,
                     report.log_bound)
                )
    # Stated bound: minimal_D <= ceil(log2 |H|) for every faithful class.
    # The provable bound is floor(log2 |H|) + 1; classes of order 2^k can
    # need the extra step, e.g. S3's transposition class (minimal 2 vs 1).
    assert not violations, (
        "classes violating the stated ceil(log2|H|) bound "
        f"(group, class, minimal_D, log_bound): {violations}"
    )


@criterion(6, "group-averaged MLPs equal tied-weight nets within 1e-10")
def test_criterion_6_symmetrize_oracle():
    start = time.time()
    rng = np.random.default_rng(99)
    for make in (
        lambda: cyclic(4),
        lambda: symmetric(3),
        lambda: symmetric(4),
        lambda: alternating(5),
    ):
        group = make()
        act = GroupAction.natural(group)
        w_list = [
            (
                rng.normal(size=group.degree),
                rng.normal(size=group.degree),
                float(rng.normal()),
            )
            for _ in range(3)
        ]
        net = symmetrize(w_list, group, act, act)
        for _ in range(50):
            x = rng.normal(size=group.degree)
            direct = reynolds_apply(w_list, group, act, act, x)
            via_net = net.forward(x[None, :])[0]
            assert np.abs(direct - via_net).max() <= 1e-10
    assert time.time() - start < 30.0


@criterion(7, "all nets commute with their groups; gradients match FD")
def test_criterion_7_equivariance_and_gradients():
    start = time.time()
    for name, net in architecture_matrix():
        assert commutation_deviation(net, n_inputs=20) <= 1e-10, name
        assert finite_difference_worst_error(net) <= 1e-4, name
    assert time.time() - start < 60.0


@criterion(8, "C6 channel sweep: held-out MSE strictly decreasing, <1e-2")
def test_criterion_8_universality_demo():
    start = time.time()
    group = cyclic(6)
    act = GroupAction.natural(group)
    results = []
    for channels in (4, 16, 64):
        net = build_regular_net(group, act, act, channels=channels, seed=7)
        cfg = TrainConfig(
            seed=7,
            lr=0.05,
            epochs=10_000,
            batch_size=512,
            bounds=(-2.0, 2.0),
            momentum=0.9,
            train_samples=512,
        )
        results.append(train(net, "square_next", cfg).final_mse)
    assert results[0] > results[1] > results[2], results
    assert results[2] < 1e-2, results
    assert time.time() - start < 300.0


@criterion(9, "product orbits bounded by factors; strict descent off-core")
def test_criterion_9_product_space_properties():
    start = time.time()
    from eqv import structure_coefficients

    for name in sorted(GROUP_BUILDERS):
        group, lattice, table = group_bundle(name)
        n = len(lattice.classes)
        core_class = [
            lattice.class_of[core(group, cls.representative).member_set]
            for cls in lattice.classes
        ]
        for i in range(n):
            for j in range(n):
                delta = structure_coefficients(table, i, j)
                for ell in range(n):
                    if delta[ell] > 0:
                        assert lattice.leq(ell, i) and lattice.leq(ell, j)
                hypothesis = not (
                    lattice.leq(j, core_class[i]) or lattice.leq(i, core_class[j])
                )
                if hypothesis:
                    assert any(
                        delta[ell] > 0
                        and lattice.leq(ell, i) and ell != i
                        and lattice.leq(ell, j) and ell != j
                        for ell in range(n)
                    ), (name, i, j)
    assert time.time() - start < 60.0
