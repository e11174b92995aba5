"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line; the lines are repeated
in the pytest terminal summary (see conftest.py).  Run directly with
``python tests/test_acceptance.py`` for just the ten lines.

Criteria 7 and 10 are expected to fail; the analysis is in the README.
"""

from __future__ import annotations

import sys

import pytest

from regbuild.checks import (
    CheckResult,
    Nonneg,
    check_e8_commutativity,
    check_e8_constants,
    check_f4_commutativity,
    check_f4_constants,
    check_f4_table,
    check_local_limit,
    check_spheres,
    check_thin,
    check_triple_path,
    check_walk_oracle,
)

NN = Nonneg()
_cache: dict[int, CheckResult] = {}
LINES: list[str] = []


def _both(name, a: CheckResult, b: CheckResult) -> CheckResult:
    return CheckResult(name, a.passed and b.passed, f"{a.name}: {a.detail}; {b.name}: {b.detail}", a.seconds + b.seconds)


def _criterion_7() -> CheckResult:
    for k in range(1, 7):
        result(k)
    r = NN.literal_result()
    shifted = NN.value_result()
    return CheckResult(r.name, r.passed, f"{r.detail} [in q_s - 1: {shifted.detail}]")


RUNNERS = {
    1: lambda: check_f4_constants(NN),
    2: lambda: check_f4_table(NN),
    3: lambda: check_e8_constants(NN),
    4: check_spheres,
    5: lambda: check_thin(NN),
    6: lambda: check_triple_path(NN),
    7: _criterion_7,
    8: lambda: _both("commutativity fixtures", check_f4_commutativity(), check_e8_commutativity(NN)),
    9: check_walk_oracle,
    10: check_local_limit,
}


def result(k: int) -> CheckResult:
    if k not in _cache:
        _cache[k] = RUNNERS[k]()
        line = f"criterion {k:2d} " + _cache[k].line()
        LINES.append(line)
        print(line)
    return _cache[k]


def _assert(k):
    r = result(k)
    assert r.passed, r.line()


def test_criterion_01_f4_intersection_numbers():
    _assert(1)


def test_criterion_02_f4_multiplication_table():
    _assert(2)


def test_criterion_03_e8_structure_constants():
    _assert(3)


def test_criterion_04_sphere_closed_forms():
    _assert(4)


def test_criterion_05_thin_building_oracle():
    _assert(5)


def test_criterion_06_triple_path_equality():
    _assert(6)


def test_criterion_07_nonnegativity():
    _assert(7)


def test_criterion_08_commutativity_fixtures():
    _assert(8)


def test_criterion_09_random_walk_transfer():
    _assert(9)


def test_criterion_10_a2_local_limit():
    _assert(10)


if __name__ == "__main__":
    failed = 0
    for k in RUNNERS:
        failed += not result(k).passed
    sys.exit(1 if failed else 0)
