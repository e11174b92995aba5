"""Minimal coset and double-coset representatives.

Everything here is driven by descent sets: a right J-descent can be stripped
from w without leaving the coset wW_J, and likewise on the left, so minimal
representatives are found by stripping until no descent in the relevant
subset is left.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .coxeter import CoxeterSystem, GroupElement, NotSphericalError
from .qpoly import ParamAssignment, QPoly

__all__ = [
    "DoubleCosetRep",
    "Factorization",
    "NotReducedError",
    "min_coset_rep",
    "min_left_coset_rep",
    "min_double_rep",
    "is_reduced",
    "enumerate_R",
    "stabilizer_cotype",
    "m_reps",
    "factorize",
    "poincare",
    "double_coset_elements",
]


class NotReducedError(ValueError):
    pass


@dataclass(frozen=True)
class DoubleCosetRep:
    """The (I,J)-reduced representative of W_I w W_J."""

    element: GroupElement
    I: frozenset
    J: frozenset

    @property
    def length(self) -> int:
        return self.element.length

    @property
    def word(self) -> tuple[int, ...]:
        return self.element.word

    def sort_key(self):
        return (self.element.length, self.element.word)

    def __repr__(self):
        return f"<rep {self.element.label()} I={sorted(self.I)} J={sorted(self.J)}>"


@dataclass(frozen=True)
class Factorization:
    x: GroupElement
    w: GroupElement
    z: GroupElement


def _subset(W: CoxeterSystem, I) -> frozenset:
    return W.check_subset(I)


def min_coset_rep(w: GroupElement, J: Iterable[int]) -> GroupElement:
    """Minimal length element of wW_J."""
    J = frozenset(J)
    while True:
        d = w.right_descents & J
        if not d:
            return w
        w = w.rmul(min(d))


def min_left_coset_rep(w: GroupElement, I: Iterable[int]) -> GroupElement:
    """Minimal length element of W_I w."""
    I = frozenset(I)
    while True:
        d = w.left_descents & I
        if not d:
            return w
        w = w.lmul(min(d))


def is_reduced(w: GroupElement, I: Iterable[int], J: Iterable[int]) -> bool:
    return not (w.left_descents & frozenset(I)) and not (w.right_descents & frozenset(J))


def min_double_rep(w: GroupElement, I: Iterable[int], J: Iterable[int]) -> DoubleCosetRep:
    W = w.system
    I = _subset(W, I)
    J = _subset(W, J)
    while True:
        dl = w.left_descents & I
        if dl:
            w = w.lmul(min(dl))
            continue
        dr = w.right_descents & J
        if dr:
            w = w.rmul(min(dr))
            continue
        return DoubleCosetRep(w, I, J)


def _as_rep(w, I, J) -> DoubleCosetRep:
    if isinstance(w, DoubleCosetRep):
        if w.I != frozenset(I) or w.J != frozenset(J):
            if not is_reduced(w.element, I, J):
                raise NotReducedError(f"{w.element.label()} is not ({sorted(I)},{sorted(J)})-reduced")
            return DoubleCosetRep(w.element, frozenset(I), frozenset(J))
        return w
    if not is_reduced(w, I, J):
        raise NotReducedError(f"{w.label()} is not ({sorted(I)},{sorted(J)})-reduced")
    return DoubleCosetRep(w, frozenset(I), frozenset(J))


def _right_reduced_ball(W: CoxeterSystem, J: frozenset, max_len: int) -> Iterator[GroupElement]:
    """Elements with no right descent in J, by length, via left multiplication.

    This set is closed under deleting letters on the left, so breadth-first
    search from the identity reaches all of it.
    """
    frontier = [W.identity]
    seen = {W.identity}
    k = 0
    while frontier:
        yield from frontier
        if k == max_len:
            return
        nxt = []
        for w in frontier:
            ld = w.left_descents
            for s in range(W.rank):
                if s in ld:
                    continue
                x = w.lmul(s)
                if x in seen or (x.right_descents & J):
                    continue
                seen.add(x)
                nxt.append(x)
        frontier = nxt
        k += 1


def enumerate_R(W: CoxeterSystem, I: Iterable[int], J: Iterable[int], max_len: int) -> list[DoubleCosetRep]:
    """All (I,J)-reduced elements of length <= max_len, by length then shortlex."""
    I = _subset(W, I)
    J = _subset(W, J)
    out = [
        DoubleCosetRep(w, I, J)
        for w in _right_reduced_ball(W, J, max_len)
        if not (w.left_descents & I)
    ]
    out.sort(key=DoubleCosetRep.sort_key)
    return out


def stabilizer_cotype(I: Iterable[int], J: Iterable[int], w) -> frozenset:
    """I ∩ wJw⁻¹, i.e. the s in I with w⁻¹sw a generator in J."""
    elem = w.element if isinstance(w, DoubleCosetRep) else w
    W = elem.system
    I = _subset(W, I)
    J = _subset(W, J)
    _as_rep(elem, I, J)
    winv = elem.inverse()
    gens = {W.gen(t): t for t in J}
    out = set()
    for s in I:
        c = winv * W.gen(s) * elem
        if c in gens:
            out.add(s)
    return frozenset(out)


def m_reps(I: Iterable[int], J: Iterable[int], w) -> list[GroupElement]:
    """M_I(J,w): minimal representatives of W_I / W_{I ∩ wJw⁻¹}."""
    elem = w.element if isinstance(w, DoubleCosetRep) else w
    W = elem.system
    I = _subset(W, I)
    if not W.is_spherical(I):
        raise NotSphericalError(f"W_I is infinite for I={sorted(I)}")
    K = stabilizer_cotype(I, J, elem)
    return _parabolic_right_reduced(W, I, K)


def _parabolic_right_reduced(W: CoxeterSystem, I: frozenset, K: frozenset) -> list[GroupElement]:
    key = ("mreps", I, K)
    cache = W._cache.setdefault("mreps", {})
    if key in cache:
        return cache[key]
    gens = sorted(I)
    frontier = [W.identity]
    seen = {W.identity}
    out = []
    while frontier:
        out.extend(frontier)
        nxt = []
        for x in frontier:
            ld = x.left_descents
            for s in gens:
                if s in ld:
                    continue
                y = x.lmul(s)
                if y in seen or (y.right_descents & K):
                    continue
                seen.add(y)
                nxt.append(y)
        frontier = nxt
    out.sort(key=lambda e: (e.length, e.word))
    cache[key] = out
    return out


def factorize(v: GroupElement, I: Iterable[int], J: Iterable[int]) -> Factorization:
    """The unique v = x·w·z with x ∈ M_I(J,w), w (I,J)-reduced, z ∈ W_J."""
    W = v.system
    I = _subset(W, I)
    J = _subset(W, J)
    if not W.is_spherical(I):
        raise NotSphericalError(f"W_I is infinite for I={sorted(I)}")
    w = min_double_rep(v, I, J).element
    v1 = min_coset_rep(v, J)
    x = v1 * w.inverse()
    z = v1.inverse() * v
    return Factorization(x, w, z)


def _count_vectors(W: CoxeterSystem, I: frozenset) -> dict:
    cache = W._cache.setdefault("count", {})
    if I not in cache:
        counts: dict = {}
        for w in W.enumerate_parabolic(I):
            c = [0] * W.rank
            for s in w.word:
                c[s] += 1
            c = tuple(c)
            counts[c] = counts.get(c, 0) + 1
        cache[I] = counts
    return cache[I]


def poincare(I: Iterable[int], params: ParamAssignment, W: CoxeterSystem | None = None) -> QPoly:
    """N(I) = Σ_{w ∈ W_I} q_w."""
    W = W or params.system
    if W is None:
        raise ValueError("poincare needs a Coxeter system (bind the parameters or pass W)")
    I = _subset(W, I)
    if not W.is_spherical(I):
        raise NotSphericalError(f"W_I is infinite for I={sorted(I)}")
    cache = W._cache.setdefault("poincare", {})
    key = (I, params.entries)
    if key not in cache:
        out = params.zero()
        for c, k in sorted(_count_vectors(W, I).items()):
            out = out + params.monomial(c) * k
        cache[key] = out
    return cache[key]


def double_coset_elements(I: Iterable[int], w, J: Iterable[int]) -> Iterator[GroupElement]:
    """Each element of W_I w W_J once, as x·w·z."""
    elem = w.element if isinstance(w, DoubleCosetRep) else w
    W = elem.system
    I = _subset(W, I)
    J = _subset(W, J)
    if not W.is_spherical(I) or not W.is_spherical(J):
        raise NotSphericalError("double coset enumeration needs spherical I and J")
    _as_rep(elem, I, J)
    cache = W._cache.setdefault("dcoset", {})
    key = (I, elem, J)
    if key not in cache:
        WJ = W.parabolic_elements(J)
        out = []
        for x in m_reps(I, J, elem):
            xw = x * elem
            out.extend(xw * z for z in WJ)
        cache[key] = tuple(out)
    yield from cache[key]
