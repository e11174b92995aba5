"""Isotropic random walks on cotype-I simplices.

A walk is given by step probabilities p_w, w ∈ R(I,I).  Its transfer into the
Hecke algebra is

    θ(T) = Σ_w (p_w / N(I)) Σ_{z ∈ W_I w W_I} T_z

and the return probability after n steps is N(I) times the T_e coefficient
of θ(T)^n.  Two engines compute that coefficient: plain Hecke
multiplication (small n) and a numpy "ball" engine that stores θ(T)^m as a
vector over all elements of length <= R and multiplies by T_s through
precomputed index maps.  The ball engine only ever forms θ^m for
m <= ceil(n/2) and reads off [T_e](θ^a θ^b) = Σ_x θ^a(x) θ^b(x⁻¹) q_x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .coxeter import CoxeterSystem, GroupElement, NotSphericalError
from .cosets import DoubleCosetRep, _as_rep, double_coset_elements, enumerate_R, min_double_rep
from .hecke import HeckeAlgebra, HeckeElement, index_character
from .pregallery import parabolic_row
from .qpoly import ParamAssignment
from .spheres import sphere_size

__all__ = [
    "WalkSpec",
    "WalkState",
    "WalkError",
    "build_walk",
    "simple_walk",
    "theta_operator",
    "n_step",
    "return_probability",
    "return_series",
    "walk_oracle_small",
    "a2_asymptotic",
    "a2_rho",
    "BallEngine",
    "EXACT_LIMIT",
]

EXACT_LIMIT = 50


class WalkError(ValueError):
    pass


@dataclass(frozen=True)
class WalkSpec:
    system: CoxeterSystem
    I: frozenset
    probs: tuple  # ((DoubleCosetRep, Fraction), ...) sorted by rep
    qvals: tuple  # Fraction per generator

    def prob_map(self) -> dict:
        return dict(self.probs)

    def max_step(self) -> int:
        """Longest element length over the double cosets in the step support."""
        return max(max(z.length for z in double_coset_elements(self.I, r, self.I)) for r, _ in self.probs)


@dataclass
class WalkState:
    n: int
    theta: HeckeElement

    @property
    def distribution(self) -> dict:
        return {w: self.theta.coefficient(w) for w in self.theta.support()}


def _params(W: CoxeterSystem, qvals: Sequence) -> ParamAssignment:
    p = ParamAssignment(list(qvals))
    p.system = W
    return p


def _key(W: CoxeterSystem, I: frozenset, k) -> DoubleCosetRep:
    if isinstance(k, DoubleCosetRep):
        return _as_rep(k.element, I, I)
    if isinstance(k, GroupElement):
        return _as_rep(k, I, I)
    return _as_rep(W.from_word(k), I, I)


def build_walk(W: CoxeterSystem, I: Iterable[int], probs: Mapping, qvals: Sequence) -> WalkSpec:
    """Validate an isotropic walk.  ``probs`` maps reps (or words) to probabilities."""
    I = W.check_subset(I)
    if not W.is_spherical(I):
        raise NotSphericalError(f"W_I is infinite for I={sorted(I)}")
    qv = tuple(Fraction(x) for x in qvals)
    if len(qv) != W.rank:
        raise WalkError(f"{len(qv)} parameter values for rank {W.rank}")
    if any(x <= 0 for x in qv):
        raise WalkError("parameter values must be positive")
    params = _params(W, qv)
    table: dict = {}
    for k, p in probs.items():
        r = _key(W, I, k)
        p = Fraction(p)
        if p < 0:
            raise WalkError(f"negative probability {p} at {r.element.label()}")
        if r in table:
            raise WalkError(f"representative {r.element.label()} given twice")
        if p:
            table[r] = p
    if not table:
        raise WalkError("walk has no steps")
    total = sum(p * sphere_size(I, I, r, params).constant_value() for r, p in table.items())
    if total != 1:
        raise WalkError(f"step distribution has total mass {total}, defect {total - 1}")
    items = tuple(sorted(table.items(), key=lambda kv: kv[0].sort_key()))
    return WalkSpec(W, I, items, qv)


def simple_walk(W: CoxeterSystem, I: Iterable[int], qvals: Sequence) -> WalkSpec:
    """Uniform walk over the simplices at distance one (length-1 reps)."""
    I = W.check_subset(I)
    params = _params(W, [Fraction(x) for x in qvals])
    reps = [r for r in enumerate_R(W, I, I, 1) if r.length == 1]
    total = sum(sphere_size(I, I, r, params).constant_value() for r in reps)
    return build_walk(W, I, {r: Fraction(1) / total for r in reps}, qvals)


def _algebra(walk: WalkSpec) -> HeckeAlgebra:
    return HeckeAlgebra.numeric(walk.system, walk.qvals)


def theta_operator(walk: WalkSpec) -> HeckeElement:
    alg = _algebra(walk)
    NI = alg.poincare(walk.I)
    terms: dict = {}
    for r, p in walk.probs:
        c = p / NI
        for z in double_coset_elements(walk.I, r, walk.I):
            terms[z] = terms.get(z, 0) + c
    return HeckeElement(alg, terms, Fraction(1))


def n_step(walk: WalkSpec, n: int) -> WalkState:
    """θ(T)^n by repeated multiplication (exact rationals)."""
    if n < 0:
        raise WalkError("n must be nonnegative")
    theta = theta_operator(walk)
    h = _algebra(walk).unit()
    for _ in range(n):
        h = h * theta
    return WalkState(n, h)


class BallEngine:
    """θ(T)^m as coefficient vectors over the ball of radius R in W."""

    def __init__(self, walk: WalkSpec, radius: int):
        W = walk.system
        self.walk = walk
        self.radius = radius
        elems = [W.identity]
        index = {W.identity: 0}
        parent = [(-1, -1)]
        frontier = [W.identity]
        for _ in range(radius):
            nxt = []
            for w in frontier:
                rd = w.right_descents
                for s in range(W.rank):
                    if s in rd:
                        continue
                    x = w.rmul(s)
                    if x not in index:
                        index[x] = len(elems)
                        elems.append(x)
                        parent.append((index[w], s))
                        nxt.append(x)
            frontier = nxt
        n = len(elems)
        self.size = n
        self.lengths = np.fromiter((w.length for w in elems), dtype=np.int64, count=n)
        # one-past-the-end slot holds zero for products that leave the ball
        self.nbr = np.full((W.rank, n), n, dtype=np.int64)
        self.desc = np.zeros((W.rank, n), dtype=bool)
        for i, w in enumerate(elems):
            rd = w.right_descents
            for s in range(W.rank):
                j = index.get(w.rmul(s))
                if j is not None:
                    self.nbr[s, i] = j
                self.desc[s, i] = s in rd
        # x = p·s  ⇒  x⁻¹ = s·p⁻¹
        inv = np.zeros(n, dtype=np.int64)
        for i in range(1, n):
            p, s = parent[i]
            inv[i] = index.get(elems[inv[p]].lmul(s), -1)
        self.inv = inv
        qs = walk.qvals
        self.qx_exact = [Fraction(1)] * n
        for i in range(1, n):
            p, s = parent[i]
            self.qx_exact[i] = self.qx_exact[p] * qs[s]
        self.qx = np.array([float(x) for x in self.qx_exact])
        theta = theta_operator(walk)
        self.theta_terms = [(w, c) for w, c in theta.terms.items()]
        for w, _ in self.theta_terms:
            if w not in index:
                raise WalkError("ball radius smaller than the step support")
        self.index = index
        self.wI = W.longest_element(walk.I).length
        self._trie = self._build_trie()

    def _build_trie(self):
        root: dict = {}
        for w, c in self.theta_terms:
            node = root
            for s in w.word:
                node = node.setdefault(s, {})
            node[None] = node.get(None, 0) + c
        return root

    def _times_s(self, h: np.ndarray, s: int, exact: bool) -> np.ndarray:
        n = self.size
        q = self.walk.qvals[s]
        if not exact:
            q = float(q)
        ext = np.concatenate([h[:n], np.zeros(1, dtype=h.dtype)]) if h.dtype != object else np.append(h[:n], Fraction(0))
        gathered = ext[self.nbr[s]]
        out = np.where(self.desc[s], gathered + (q - 1) * h[:n], q * gathered)
        return out

    def times_theta(self, h: np.ndarray, exact: bool) -> np.ndarray:
        out = np.zeros(self.size, dtype=object if exact else float)
        if exact:
            out[:] = Fraction(0)
        stack = [(self._trie, h)]
        while stack:
            node, state = stack.pop()
            for s, child in node.items():
                if s is None:
                    c = child if exact else float(child)
                    out = out + c * state
                else:
                    stack.append((child, self._times_s(state, s, exact)))
        return out

    def unit(self, exact: bool) -> np.ndarray:
        """1_I, the unit of the corner algebra 1_I H 1_I (θ^0)."""
        W = self.walk.system
        NI = HeckeAlgebra.numeric(W, self.walk.qvals).poincare(self.walk.I)
        if exact:
            v = np.empty(self.size, dtype=object)
            v[:] = Fraction(0)
            c = Fraction(1) / NI
        else:
            v = np.zeros(self.size)
            c = 1.0 / float(NI)
        for w in W.enumerate_parabolic(self.walk.I):
            v[self.index[w]] = c
        return v

    def pair(self, a: np.ndarray, b: np.ndarray, exact: bool, limit: int | None = None):
        """[T_e](a·b) = Σ_x a(x) b(x⁻¹) q_x, over x of length <= limit."""
        idx = np.arange(self.size) if limit is None else np.nonzero(self.lengths <= limit)[0]
        inv = self.inv[idx]
        if exact:
            return sum((a[i] * b[j] * self.qx_exact[i] for i, j in zip(idx, inv) if a[i] and b[j]), Fraction(0))
        return float(np.sum(a[idx] * b[inv] * self.qx[idx]))


def _theta_powers(walk: WalkSpec, m_max: int, exact: bool, engine: BallEngine | None = None):
    step = walk.max_step()
    wI = walk.system.longest_element(walk.I).length
    eng = engine or BallEngine(walk, max(m_max * step, wI + step) + 1)
    powers = [eng.unit(exact)]
    for _ in range(m_max):
        powers.append(eng.times_theta(powers[-1], exact))
    return eng, powers


def return_series(walk: WalkSpec, n_max: int, exact: bool | None = None) -> list:
    """[p^{(0)}(A,A), ..., p^{(n_max)}(A,A)].

    Exact rationals when n_max <= EXACT_LIMIT (unless exact=False), floats
    otherwise.
    """
    if n_max < 0:
        raise WalkError("n must be nonnegative")
    if exact is None:
        exact = n_max <= EXACT_LIMIT
    m_max = (n_max + 1) // 2
    eng, powers = _theta_powers(walk, m_max, exact)
    NI = _algebra(walk).poincare(walk.I)
    if not exact:
        NI = float(NI)
    step = walk.max_step()
    out = []
    for n in range(n_max + 1):
        a, b = (n + 1) // 2, n // 2
        out.append(NI * eng.pair(powers[a], powers[b], exact, limit=max(b * step, eng.wI)))
    return out


def return_probability(walk: WalkSpec, n: int, exact: bool | None = None):
    """p^{(n)}(A,A) = N(I) · [T_e] θ(T)^n."""
    return return_series(walk, n, exact)[n]


def walk_oracle_small(walk: WalkSpec, n: int, cap: int = 5):
    """p^{(n)}(A,A) from the X_I-level structure constants, with no Hecke transfer.

    T = Σ_w p_w A_w and A_u A_v = Σ_w c_{u,v⁻¹}^w(I,I,I) A_w; the return
    probability is the A_e coefficient of T^n.
    """
    if n > cap:
        raise WalkError(f"oracle capped at n={cap}")
    if n < 0:
        raise WalkError("n must be nonnegative")
    W, I = walk.system, walk.I
    params = _params(W, walk.qvals)
    step = max(r.length for r, _ in walk.probs)
    wI = W.longest_element(I).length
    bound = n * (step + wI)
    reps = enumerate_R(W, I, I, bound)
    e = reps[0]
    coeffs = {e: Fraction(1)}
    probs = walk.prob_map()
    for _ in range(n):
        nxt: dict = {}
        for v, pv in probs.items():
            vinv = min_double_rep(v.element.inverse(), I, I)
            for w in reps:
                row = parabolic_row(I, I, I, vinv, w, params)
                acc = Fraction(0)
                for u, cu in coeffs.items():
                    c = row.get(u)
                    if c is not None:
                        acc += cu * c.constant_value()
                if acc:
                    nxt[w] = nxt.get(w, 0) + acc * pv
        coeffs = nxt
    return coeffs.get(e, Fraction(0))


def a2_rho(q) -> Fraction:
    q = Fraction(q)
    return (q * q + 4 * q - 1) / (2 * q * (q + 1))


def a2_asymptotic(q, n: int) -> float:
    """√3(q²+4q−1)⁴/(πq(q+1)(q−1)⁶) · ρⁿ · n⁻⁴ for the simple walk on the
    vertices of an Ã₂ building."""
    q = Fraction(q)
    if q == 1:
        raise WalkError("the asymptotic constant has a pole at q=1")
    if q < 1 or q.denominator != 1:
        raise WalkError("q must be an integer greater than 1")
    if n < 1:
        raise WalkError("n must be positive")
    qf = float(q)
    c = math.sqrt(3) * (qf * qf + 4 * qf - 1) ** 4 / (math.pi * qf * (qf + 1) * (qf - 1) ** 6)
    return c * float(a2_rho(q)) ** n * n**-4.0
