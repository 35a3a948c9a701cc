"""Acceptance criteria 1-7, exact equality throughout.

Each test prints one ``[PASS]``/``[FAIL]`` line. Run alone with
``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import sys

import numpy as np
import pytest

from toricex.cohomology import (
    EngineLimitError,
    cohomology_dims,
    forbidden_subsets,
    is_acyclic_closed_form,
    is_acyclic_oracle,
)
from toricex.collection import (
    DIFF_FAMILIES,
    check_strongly_exceptional,
    classify_diff,
    diff_families,
    the_collection,
    verify_all,
    verify_full,
)
from toricex.config import FORBIDDEN_GRID, ORACLE_GRID, SPLIT_GRID, SPLIT_PRIMES, VERIFY_GRID
from toricex.divisors import canonical_class, class_add, class_neg, hom_difference
from toricex.fan import FamilyParams, build_family_fan
from toricex.frobenius import bondal_set, chart_classes, pushforward_split, residue_transport


def announce(pytestconfig, label, failures):
    line = f"[{'PASS' if not failures else 'FAIL'}] criterion {label}"
    if failures:
        line += ": " + "; ".join(map(str, failures[:6])) + (" ..." if len(failures) > 6 else "")
    with pytestconfig.pluginmanager.get_plugin("capturemanager").global_and_fixture_disabled():
        print("\n" + line, flush=True)
    assert not failures, line


def test_criterion_1_collection_verified(pytestconfig):
    failures = []
    for n, b in VERIFY_GRID:
        res = verify_all(FamilyParams(n, b))
        if len(the_collection(FamilyParams(n, b))) != 3 * n - 1:
            failures.append((n, b, "length"))
        bad = [c.name for c in res.checks if not c.passed]
        if bad:
            failures.append((n, b, bad))
    announce(pytestconfig, "1 (verify passes on n 2..5 x b 0..3)", failures)


def test_criterion_2_forbidden_sets(pytestconfig):
    failures = []
    for n, b in FORBIDDEN_GRID:
        fan = build_family_fan(FamilyParams(n, b))
        prims = fan.family.primitive_collections()
        full = frozenset(range(fan.num_rays))
        expected = set(prims) | {full - p for p in prims} | {frozenset()}
        got = forbidden_subsets(fan)
        if len(got) != 11 or set(got) != expected:
            failures.append((n, b, len(got)))
    announce(pytestconfig, "2 (exactly 11 forbidden patterns)", failures)


def test_criterion_3_frobenius_split(pytestconfig):
    failures = []
    for n, b in SPLIT_GRID:
        params = FamilyParams(n, b)
        fan = build_family_fan(params)
        target = bondal_set(params)
        if len(target) != 3 * n + 2 * b - 1:
            failures.append((n, b, "target size", len(target)))
        reached = False
        for p in SPLIT_PRIMES:
            split = pushforward_split(fan, p)
            if split.total != p ** n:
                failures.append((n, b, p, "total", split.total))
            if not split.classes <= target:
                failures.append((n, b, p, "outside B1|B2|B3", sorted(split.classes - target)))
            reached |= split.classes == target
        if not reached:
            last = pushforward_split(fan, SPLIT_PRIMES[-1]).classes
            failures.append((n, b, "no tested p gives B1|B2|B3", "missing", sorted(map(tuple, target - last))))
        base = chart_classes(fan, 5, reference=0)
        for t in range(1, len(fan.maximal_cones)):
            if not np.array_equal(base, chart_classes(fan, 5, reference=t)[residue_transport(fan, 5, 0, t)]):
                failures.append((n, b, "chart dependence at p=5", t))
    announce(pytestconfig, "3 (Frobenius split)", failures)


def test_criterion_4_oracle_equivalence(pytestconfig):
    failures = []
    for n, b in ORACLE_GRID:
        params = FamilyParams(n, b)
        fan = build_family_fan(params)
        e = n + b + 2
        for cls in itertools.product(range(-e, e + 1), range(-3, 4), range(-3, 4)):
            try:
                oracle = is_acyclic_oracle(fan, cls)
            except EngineLimitError as exc:
                failures.append((n, b, cls, "uncertified", exc.radius))
                continue
            if oracle != is_acyclic_closed_form(params, cls):
                failures.append((n, b, cls, "oracle", oracle))
    announce(pytestconfig, "4 (closed form = oracle on the box)", failures)


def test_criterion_5_calibration(pytestconfig):
    failures = []
    rnd = random.Random(20261015)
    for n, b in VERIFY_GRID:
        fan = build_family_fan(FamilyParams(n, b))
        K = canonical_class(fan)
        if cohomology_dims(fan, (0, 0, 0)) != (1,) + (0,) * n:
            failures.append((n, b, "O"))
        if cohomology_dims(fan, K) != (0,) * n + (1,):
            failures.append((n, b, "K_X"))
        checked = 0
        while checked < 20:
            L = (rnd.randint(-(n + b + 3), n + b + 3), rnd.randint(-3, 3), rnd.randint(-3, 3))
            try:
                dims = cohomology_dims(fan, L)
                dual = cohomology_dims(fan, class_add(K, class_neg(L)))
            except EngineLimitError:
                continue
            checked += 1
            if dims[0] != dual[n] or dims != dual[::-1]:
                failures.append((n, b, L, dims, dual))
    announce(pytestconfig, "5 (O, K_X and Serre duality)", failures)


def test_criterion_6_diff_table(pytestconfig):
    failures = []
    for n, b in VERIFY_GRID:
        params = FamilyParams(n, b)
        c = the_collection(params)
        try:
            rows = diff_families(c)
        except ValueError as exc:
            failures.append((n, b, str(exc)))
            continue
        for j, k, d, tag, s in rows:
            homes = [t for t, ((f, g), rng) in DIFF_FAMILIES.items()
                     if (d[1], d[2]) == (f, g) and rng(n, b)[0] <= d[0] <= rng(n, b)[1]]
            if homes != [tag] or d != hom_difference(c.items[j], c.items[k]) or classify_diff(params, d) != (tag, s):
                failures.append((n, b, j, k, d, homes))
        if len(rows) != (3 * n - 1) * (3 * n - 2):
            failures.append((n, b, "pairs", len(rows)))
    announce(pytestconfig, "6 (every difference in exactly one Diff family)", failures)


def test_criterion_7_negative_controls(pytestconfig):
    failures = []
    for n, b in VERIFY_GRID:
        c = the_collection(FamilyParams(n, b))
        if check_strongly_exceptional(c.reordered(c.items[::-1])).passed:
            failures.append((n, b, "reversed order accepted"))
        if verify_full(c.reordered(c.items[:-1]))[0]:
            failures.append((n, b, "collection without O reported full"))
    announce(pytestconfig, "7 (negative controls detected)", failures)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
