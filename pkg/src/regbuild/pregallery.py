"""Pointed pregalleries in the Coxeter complex and the intersection numbers
they compute.

A pointed pregallery of type (s_1, ..., s_n) from w walks w_0 = w, and at
step j either crosses (w_j = w_{j-1} s_j) or stutters (w_j = w_{j-1}); a
stutter is only allowed where s_j is a right descent of w_{j-1}.  Its weight
is the product over steps of q_s (ascent crossing), 1 (descent crossing) or
q_s - 1 (stutter).

The counting engine never builds individual galleries.  It walks a trie of
type words, keeps a map ``element -> {exponent vector: multiplicity}`` and
merges branches that reach the same element; polynomials are only formed
once the end elements have been sorted into double cosets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .coxeter import CoxeterSystem, GroupElement, NotSphericalError
from .cosets import DoubleCosetRep, _as_rep, enumerate_R, m_reps, min_double_rep
from .qpoly import ParamAssignment, QPoly

__all__ = [
    "CROSS_ASCENT",
    "CROSS_DESCENT",
    "STUTTER",
    "PointedPregallery",
    "enumerate_pointed",
    "chamber_constant",
    "parabolic_constant",
    "parabolic_row",
    "WeightBook",
]

CROSS_ASCENT = "cross-ascent"
CROSS_DESCENT = "cross-descent"
STUTTER = "stutter"


@dataclass(frozen=True)
class PointedPregallery:
    start: GroupElement
    type_word: tuple[int, ...]
    steps: tuple[str, ...]
    end: GroupElement
    weight: QPoly

    def notation(self) -> str:
        marks = {CROSS_ASCENT: "+", CROSS_DESCENT: "-", STUTTER: "^"}
        return " ".join(f"{s}{marks[k]}" for s, k in zip(self.type_word, self.steps))


def enumerate_pointed(start: GroupElement, type_word: Sequence[int], params: ParamAssignment) -> list[PointedPregallery]:
    """Every pointed pregallery of the given type from ``start``."""
    type_word = tuple(type_word)
    out = []

    def rec(j, cur, steps, weight):
        if j == len(type_word):
            out.append(PointedPregallery(start, type_word, tuple(steps), cur, weight))
            return
        s = type_word[j]
        q = params.q(s)
        if s in cur.right_descents:
            rec(j + 1, cur.rmul(s), steps + [CROSS_DESCENT], weight)
            rec(j + 1, cur, steps + [STUTTER], weight * (q - 1))
        else:
            rec(j + 1, cur.rmul(s), steps + [CROSS_ASCENT], weight * q)

    rec(0, start, [], params.one())
    return out


class WeightBook:
    """Turns exponent vectors (alpha per parameter class, then sigma) into polynomials."""

    def __init__(self, params: ParamAssignment):
        self.params = params
        classes: list = []
        self.cls = []
        for x in params.entries:
            if x not in classes:
                classes.append(x)
            self.cls.append(classes.index(x))
        self.nclasses = len(classes)
        self._q = []
        for x in classes:
            s = params.entries.index(x)
            self._q.append(params.q(s))
        self._pow: dict = {}
        self._cache: dict = {}

    def _power(self, c: int, k: int, stutter: bool) -> QPoly:
        key = (c, k, stutter)
        p = self._pow.get(key)
        if p is None:
            base = self._q[c] - 1 if stutter else self._q[c]
            p = base**k
            self._pow[key] = p
        return p

    def poly(self, exps: tuple) -> QPoly:
        p = self._cache.get(exps)
        if p is None:
            n = self.nclasses
            p = self.params.one()
            for c in range(n):
                if exps[c]:
                    p = p * self._power(c, exps[c], False)
                if exps[n + c]:
                    p = p * self._power(c, exps[n + c], True)
            self._cache[exps] = p
        return p

    def total(self, counter: dict) -> QPoly:
        out = self.params.zero()
        for exps, k in sorted(counter.items()):
            out = out + self.poly(exps) * k
        return out


def _step(state: dict, s: int, ca: int, cs: int) -> dict:
    """Advance every (element, exponent) bucket by one letter s."""
    out: dict = {}
    for x, book in state.items():
        if s in x.right_descents:
            y = x.rmul(s)
            tgt = out.setdefault(y, {})
            for e, k in book.items():
                tgt[e] = tgt.get(e, 0) + k
            tgt = out.setdefault(x, {})
            for e, k in book.items():
                e2 = e[:cs] + (e[cs] + 1,) + e[cs + 1:]
                tgt[e2] = tgt.get(e2, 0) + k
        else:
            y = x.rmul(s)
            tgt = out.setdefault(y, {})
            for e, k in book.items():
                e2 = e[:ca] + (e[ca] + 1,) + e[ca + 1:]
                tgt[e2] = tgt.get(e2, 0) + k
    return out


def _build_trie(words: Iterable[tuple]) -> dict:
    root: dict = {"children": {}, "end": 0}
    for w in words:
        node = root
        for s in w:
            node = node["children"].setdefault(s, {"children": {}, "end": 0})
        node["end"] += 1
    return root


def pregallery_endpoints(
    start: GroupElement, prefixes: Iterable[tuple], suffix: tuple, book: WeightBook
) -> dict:
    """Sum over pointed pregalleries of type p + suffix (p in prefixes) from
    ``start``: map end element -> {exponent vector: count}."""
    cls = book.cls
    n = book.nclasses
    zero = (0,) * (2 * n)
    trie = _build_trie(prefixes)
    final: dict = {}

    def finish(state, mult):
        for s in suffix:
            state = _step(state, s, cls[s], n + cls[s])
        for x, bk in state.items():
            tgt = final.setdefault(x, {})
            for e, k in bk.items():
                tgt[e] = tgt.get(e, 0) + k * mult

    stack = [(trie, {start: {zero: 1}})]
    while stack:
        node, state = stack.pop()
        if node["end"]:
            finish(state, node["end"])
        for s, child in sorted(node["children"].items(), reverse=True):
            stack.append((child, _step(state, s, cls[s], n + cls[s])))
    return final


def _word_of(word_of: Callable | None, g: GroupElement) -> tuple:
    return tuple(word_of(g)) if word_of is not None else g.word


def chamber_constant(
    u: GroupElement, v: GroupElement, w: GroupElement, params: ParamAssignment, word: Sequence[int] | None = None
) -> QPoly:
    """c_{u,v}^w: pointed pregalleries of type (a reduced word of v) from w ending at u."""
    vword = tuple(word) if word is not None else v.word
    if word is not None and u.system.from_word(vword) != v:
        raise ValueError("supplied word does not spell v")
    if len(vword) != v.length:
        raise ValueError("supplied word for v is not reduced")
    book = WeightBook(params)
    ends = pregallery_endpoints(w, [()], vword, book)
    return book.total(ends.get(u, {}))


def _row_cache(W: CoxeterSystem) -> dict:
    return W._cache.setdefault("pregallery_rows", {})


def parabolic_row(
    I: Iterable[int],
    J: Iterable[int],
    K: Iterable[int],
    v,
    w,
    params: ParamAssignment,
    word_of: Callable | None = None,
) -> dict:
    """c_{u,v}^w(I,J,K) for every u at once: map DoubleCosetRep in R(I,J) -> QPoly.

    Only nonzero entries are returned.
    """
    velem = getattr(v, "element", v)
    welem = getattr(w, "element", w)
    W = velem.system
    I, J, K = W.check_subset(I), W.check_subset(J), W.check_subset(K)
    for X in (I, J, K):
        if not W.is_spherical(X):
            raise NotSphericalError(f"W_I is infinite for I={sorted(X)}")
    _as_rep(velem, K, J)
    _as_rep(welem, I, K)
    key = (I, J, K, velem, welem, params.entries)
    cache = _row_cache(W)
    if word_of is None and key in cache:
        return cache[key]
    book = WeightBook(params)
    mwords = [_word_of(word_of, m) for m in m_reps(K, J, velem)]
    ends = pregallery_endpoints(welem, mwords, _word_of(word_of, velem), book)
    reps = W._cache.setdefault("double_rep", {})
    grouped: dict = {}
    for x, bk in ends.items():
        rk = (x, I, J)
        r = reps.get(rk)
        if r is None:
            r = reps[rk] = min_double_rep(x, I, J)
        tgt = grouped.setdefault(r, {})
        for e, k in bk.items():
            tgt[e] = tgt.get(e, 0) + k
    row = {}
    for r in sorted(grouped, key=DoubleCosetRep.sort_key):
        p = book.total(grouped[r])
        if p:
            row[r] = p
    if word_of is None:
        cache[key] = row
    return row


def parabolic_constant(
    I: Iterable[int],
    J: Iterable[int],
    K: Iterable[int],
    u,
    v,
    w,
    params: ParamAssignment,
    word_of: Callable | None = None,
) -> QPoly:
    """c_{u,v}^w(I,J,K) with u ∈ R(I,J), v ∈ R(K,J), w ∈ R(I,K)."""
    uelem = getattr(u, "element", u)
    W = uelem.system
    I, J, K = W.check_subset(I), W.check_subset(J), W.check_subset(K)
    urep = _as_rep(uelem, I, J)
    velem = getattr(v, "element", v)
    welem = getattr(w, "element", w)
    _as_rep(velem, K, J)
    _as_rep(welem, I, K)
    if not W.is_spherical(J):
        raise NotSphericalError(f"W_I is infinite for I={sorted(J)}")
    # finite support: nothing to enumerate
    if welem.length > uelem.length + velem.length + W.longest_element(J).length:
        return params.zero()
    row = parabolic_row(I, J, K, velem, welem, params, word_of)
    return row.get(urep, params.zero())


def reps_up_to(W: CoxeterSystem, I, J, max_len: int) -> list[DoubleCosetRep]:
    return enumerate_R(W, I, J, max_len)
