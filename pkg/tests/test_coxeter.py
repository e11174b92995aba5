import itertools

import pytest
from hypothesis import given, settings, strategies as st

from regbuild import (
    CoxeterMatrixError,
    CoxeterSystem,
    NotSphericalError,
    coxeter_system,
    descents,
    enumerate_parabolic,
    is_spherical,
    length,
    longest_element,
    new_system,
    parse_type,
)
from regbuild.coxeter import from_word

SYSTEMS = {
    "A3": coxeter_system("A", 3),
    "B3": coxeter_system("B", 3),
    "F4": parse_type("F4"),
    "H3": coxeter_system("H", 3),
    "I2(5)": coxeter_system("I", 5),
    "At2": coxeter_system("At", 2),
    "Ct2": coxeter_system("Ct", 2),
}


def _ball(W, n):
    seen = {W.identity}
    frontier = [W.identity]
    for _ in range(n):
        nxt = []
        for w in frontier:
            for s in range(W.rank):
                x = w.rmul(s)
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return seen


def test_rank_one():
    W = new_system([[1]])
    assert W.rank == 1
    assert len(list(enumerate_parabolic(W, [0]))) == 2


def test_affine_a2_valid():
    W = new_system([[1, 3, 3], [3, 1, 3], [3, 3, 1]])
    assert not is_spherical(W, [0, 1, 2])
    assert is_spherical(W, [0, 1])


@pytest.mark.parametrize(
    "m",
    [
        [[1, 1], [1, 1]],
        [[1, 3], [4, 1]],
        [[2, 3], [3, 1]],
        [[1, -3], [-3, 1]],
        [[1, 3, 2], [3, 1]],
    ],
)
def test_invalid_matrix(m):
    with pytest.raises(CoxeterMatrixError):
        CoxeterSystem(m)


def test_error_names_entry():
    with pytest.raises(CoxeterMatrixError, match=r"\[0\]\[1\]|0.*1"):
        CoxeterSystem([[1, 1], [1, 1]])


def test_from_word_basic():
    F4 = SYSTEMS["F4"]
    assert length(from_word(F4, [])) == 0
    w3 = from_word(F4, [c - 1 for c in (1, 2, 3, 2, 4, 3, 2, 1)])
    assert length(w3) == 8
    w4 = from_word(F4, [int(c) - 1 for c in "123423121324321"])
    assert length(w4) == 15
    A1 = coxeter_system("A", 1)
    assert from_word(A1, [0, 0]) == A1.identity


def test_from_word_out_of_range():
    with pytest.raises((ValueError, IndexError)):
        from_word(SYSTEMS["A3"], [0, 3])


def test_descents_small():
    A2 = coxeter_system("A", 2)
    assert descents(A2.identity, "left") == frozenset()
    s = from_word(A2, [0])
    assert descents(s, "left") == descents(s, "right") == {0}
    w0 = from_word(A2, [0, 1, 0])
    assert descents(w0, "left") == descents(w0, "right") == {0, 1}


@pytest.mark.parametrize("name", sorted(SYSTEMS))
def test_length_properties_ball(name):
    W = SYSTEMS[name]
    ball = _ball(W, 6)
    for w in ball:
        assert length(w.inverse()) == length(w)
        assert from_word(W, w.word) == w
        assert len(w.word) == length(w)
        for s in range(W.rank):
            ws = w.rmul(s)
            assert abs(length(ws) - length(w)) == 1
            assert (s in descents(w, "right")) == (length(ws) < length(w))
            sw = w.lmul(s)
            assert (s in descents(w, "left")) == (length(sw) < length(w))


@pytest.mark.parametrize("name", sorted(SYSTEMS))
def test_braid_relations(name):
    W = SYSTEMS[name]
    for s, t in itertools.combinations(range(W.rank), 2):
        m = W.matrix[s][t]
        if m == 0:
            continue
        a = from_word(W, [(s, t)[i % 2] for i in range(m)])
        b = from_word(W, [(t, s)[i % 2] for i in range(m)])
        assert a == b
        assert length(a) == m


@pytest.mark.parametrize(
    "name,order",
    [("A3", 24), ("B3", 48), ("H3", 120), ("I2(5)", 10)],
)
def test_group_orders(name, order):
    W = SYSTEMS[name]
    elems = list(enumerate_parabolic(W, range(W.rank)))
    assert len(elems) == order
    assert len(set(elems)) == order
    lens = [length(w) for w in elems]
    assert lens == sorted(lens)


def test_longest_elements():
    A2 = coxeter_system("A", 2)
    assert longest_element(A2, [0, 1]) == from_word(A2, [0, 1, 0])
    assert length(longest_element(coxeter_system("B", 3), [0, 1, 2])) == 9
    assert length(longest_element(SYSTEMS["F4"], range(4))) == 24
    assert length(parse_type("E8").longest_element(range(8))) == 120
    assert longest_element(A2, [1]) == from_word(A2, [1])
    w0 = longest_element(SYSTEMS["H3"], range(3))
    assert descents(w0, "right") == {0, 1, 2}


def test_non_spherical_errors():
    W = SYSTEMS["At2"]
    with pytest.raises(NotSphericalError):
        list(enumerate_parabolic(W, [0, 1, 2]))
    with pytest.raises(NotSphericalError):
        longest_element(W, [0, 1, 2])


@pytest.mark.parametrize("name", ["A3", "B3", "F4", "At2", "Ct2"])
def test_spherical_agrees_with_enumeration(name):
    W = SYSTEMS[name]
    for k in range(W.rank + 1):
        for I in itertools.combinations(range(W.rank), k):
            sph = is_spherical(W, I)
            if sph:
                assert len(list(enumerate_parabolic(W, I))) > 0
            else:
                with pytest.raises(NotSphericalError):
                    list(enumerate_parabolic(W, I, cap=20000))
    assert is_spherical(W, [])


def test_f4_spherical_subset():
    assert is_spherical(SYSTEMS["F4"], [1, 2, 3])


words = st.lists(st.integers(0, 3), max_size=14)


@settings(max_examples=150, deadline=None)
@given(words, words)
def test_word_properties_affine(a, b):
    W = coxeter_system("Ct", 3)
    u, v = from_word(W, a), from_word(W, b)
    assert length(u) <= len(a)
    assert (length(u) == len(a)) == _is_reduced(W, a)
    assert length(u * v) <= length(u) + length(v)
    assert (u * v).inverse() == v.inverse() * u.inverse()
    assert from_word(W, u.word) == u


def _is_reduced(W, word):
    w = W.identity
    for s in word:
        if s in w.right_descents:
            return False
        w = w.rmul(s)
    return True


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=8))
def test_canonical_word_is_shortlex_min(word):
    W = coxeter_system("A", 3)
    u = from_word(W, word)
    # all reduced words of u via brute force over words of the right length
    n = length(u)
    best = None
    for cand in itertools.product(range(3), repeat=n):
        if from_word(W, cand) == u:
            best = cand
            break
    assert u.word == best
