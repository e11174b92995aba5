import math
from fractions import Fraction

import pytest

from regbuild import (
    NotSphericalError,
    build_walk,
    coxeter_system,
    enumerate_R,
    index_character,
    n_step,
    return_probability,
    return_series,
    simple_walk,
    theta_operator,
    walk_oracle_small,
)
from regbuild.coxeter import from_word
from regbuild.randwalk import BallEngine, WalkError, a2_asymptotic, a2_rho

A2 = coxeter_system("At", 2)


def walk(q=2):
    return simple_walk(A2, [0], [q] * 3)


def test_trivial_walk():
    w = build_walk(A2, [0], {(): 1}, [2, 2, 2])
    assert return_series(w, 4) == [1, 1, 1, 1, 1]
    th = theta_operator(w)
    assert th.coefficient(A2.identity) == Fraction(1, 3)
    assert th.coefficient(from_word(A2, [0])) == Fraction(1, 3)


def test_simple_walk_probabilities():
    w = walk(2)
    assert len(w.probs) == 2
    for r, p in w.probs:
        assert r.length == 1
        assert p == Fraction(1, 2 * 2 * 3)


def test_normalization_errors():
    with pytest.raises(WalkError, match="defect"):
        build_walk(A2, [0], {(1,): Fraction(1, 24)}, [2, 2, 2])
    with pytest.raises(WalkError):
        build_walk(A2, [0], {(1,): Fraction(-1, 12), (2,): Fraction(1, 4)}, [2, 2, 2])
    with pytest.raises(WalkError):
        build_walk(A2, [0], {}, [2, 2, 2])
    with pytest.raises(WalkError):
        build_walk(A2, [0], {(): 1}, [2, 0, 2])
    with pytest.raises(NotSphericalError):
        build_walk(A2, [0, 1, 2], {(): 1}, [2, 2, 2])
    with pytest.raises(Exception):
        build_walk(A2, [0], {(0,): 1}, [2, 2, 2])


def test_theta_operator_a2():
    th = theta_operator(walk(2))
    words = [(1,), (1, 0), (0, 1), (0, 1, 0), (2,), (2, 0), (0, 2), (0, 2, 0)]
    assert set(th.terms) == {from_word(A2, x) for x in words}
    assert all(th.coefficient(from_word(A2, x)) == Fraction(1, 36) for x in words)
    assert index_character(th) == 1


@pytest.mark.parametrize("q", [2, 3, Fraction(5, 2)])
def test_mass_conservation(q):
    w = walk(q)
    step = w.max_step()
    for n in range(5):
        st = n_step(w, n)
        assert index_character(st.theta) == 1
        assert st.theta.max_length() <= n * step


def test_n_step_zero_and_one():
    w = walk(2)
    assert n_step(w, 0).theta == theta_operator(w).alg.unit()
    assert n_step(w, 1).theta == theta_operator(w)
    with pytest.raises(WalkError):
        n_step(w, -1)


@pytest.mark.parametrize("q", [2, 3])
def test_small_return_probabilities(q):
    w = walk(q)
    s = return_series(w, 5)
    assert s[0] == 1 and s[1] == 0
    assert s[2] == Fraction(1, 2 * q * (q + 1))
    for n in range(6):
        assert walk_oracle_small(w, n) == s[n]
        assert return_probability(w, n) == s[n]


def test_hand_summation_p2():
    # p^(2) = Σ_B p(A,B) p(B,A) over the 2q(q+1) neighbours, each step 1/(2q(q+1))
    q = 3
    k = 2 * q * (q + 1)
    assert return_probability(walk(q), 2) == k * Fraction(1, k) ** 2


def test_oracle_cap():
    with pytest.raises(WalkError):
        walk_oracle_small(walk(2), 6)


def test_ball_engine_matches_hecke_multiplication():
    w = walk(2)
    eng = BallEngine(w, 12)
    th = theta_operator(w)
    h = th.alg.unit()
    vec = eng.unit(True)
    vec[:] = 0
    vec[eng.index[A2.identity]] = Fraction(1)
    for n in range(1, 4):
        h = h * th
        vec = eng.times_theta(vec, True)
        for x, i in eng.index.items():
            if x.length <= 12 - 3:
                assert vec[i] == h.coefficient(x)


def test_float_and_exact_agree():
    w = walk(2)
    ex = return_series(w, 30, exact=True)
    fl = return_series(w, 30, exact=False)
    for a, b in zip(ex, fl):
        assert math.isclose(float(a), b, rel_tol=1e-12, abs_tol=1e-300)


def test_other_cotype_walk():
    # a walk on a different cotype with a non-simple distribution
    I = [1, 2]
    reps = [r for r in enumerate_R(A2, I, I, 2) if r.length]
    from regbuild import ParamAssignment, sphere_size

    P = ParamAssignment([2, 2, 2], A2)
    sizes = {r: sphere_size(I, I, r, P).constant_value() for r in reps}
    r1 = reps[0]
    probs = {(): Fraction(1, 2), r1: Fraction(1, 2) / sizes[r1]}
    w = build_walk(A2, I, probs, [2, 2, 2])
    s = return_series(w, 3)
    assert s[0] == 1 and s[1] == Fraction(1, 2)
    for n in range(4):
        assert walk_oracle_small(w, n) == s[n]


def test_a2_asymptotic_helpers():
    assert a2_rho(2) == Fraction(11, 12)
    vals = [a2_asymptotic(2, n) for n in range(20, 60)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        a2_asymptotic(1, 10)
    with pytest.raises(ValueError):
        a2_asymptotic(2, 0)
    q = 3
    c = math.sqrt(3) * (q * q + 4 * q - 1) ** 4 / (math.pi * q * (q + 1) * (q - 1) ** 6)
    assert math.isclose(a2_asymptotic(q, 10), c * float(a2_rho(q)) ** 10 / 10**4)
