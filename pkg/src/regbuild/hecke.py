"""The Iwahori–Hecke algebra of (W, S) and its parabolic corners.

Elements are finite maps w -> coefficient over a common denominator, which
is needed because the idempotents 1_I and the basis elements P_w^{IJ} carry
1/N(I) factors.  Coefficients are either :class:`QPoly` (symbolic parameters)
or plain rationals/floats (numeric parameters); the arithmetic is the same.

Multiplication uses the quadratic relation

    T_w T_s = T_ws                       if ws > w
            = q_s T_ws + (q_s - 1) T_w   if ws < w

and its left-handed mirror, expanding whichever factor has the smaller
support along a trie of reduced words.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .coxeter import CoxeterSystem, GroupElement, NotSphericalError
from .cosets import (
    DoubleCosetRep,
    _as_rep,
    double_coset_elements,
    enumerate_R,
    m_reps,
    min_double_rep,
    poincare,
    stabilizer_cotype,
)
from .pregallery import parabolic_row
from .qpoly import InexactDivision, ParamAssignment, QPoly, exact_div

__all__ = [
    "HeckeAlgebra",
    "HeckeElement",
    "SpanError",
    "SizeCapExceeded",
    "CommutativityVerdict",
    "t_basis",
    "mul",
    "idempotent",
    "p_basis",
    "p_basis_via_idempotents",
    "to_p_basis",
    "chamber_constant_hecke",
    "parabolic_product",
    "parabolic_constant_via_firstform",
    "refinement_constant",
    "firstform_row",
    "refinement_row",
    "index_character",
    "commutativity_check",
]

DEFAULT_PAIR_CAP = 10**8


class SpanError(ArithmeticError):
    """Element is not in the span of the requested P-basis."""

    def __init__(self, msg: str, residual: GroupElement | None = None):
        super().__init__(msg)
        self.residual = residual


class SizeCapExceeded(RuntimeError):
    pass


class HeckeAlgebra:
    """Hecke algebra of ``system`` with parameters q_s given as ring elements."""

    def __init__(self, system: CoxeterSystem, qvals: Iterable, params: ParamAssignment | None = None):
        self.system = system
        self.q = tuple(qvals)
        if len(self.q) != system.rank:
            raise ValueError(f"{len(self.q)} parameters for rank {system.rank}")
        self.params = params
        self.qm1 = tuple(x - 1 for x in self.q)
        self.symbolic = params is not None
        if self.symbolic:
            self.zero = params.zero()
            self.one = params.one()
        else:
            self.zero = 0
            self.one = 1

    @classmethod
    def from_params(cls, system: CoxeterSystem, params: ParamAssignment) -> "HeckeAlgebra":
        cache = system._cache.setdefault("hecke", {})
        key = ("sym", params.entries)
        if key not in cache:
            cache[key] = cls(system, [params.q(s) for s in range(system.rank)], params)
        return cache[key]

    @classmethod
    def numeric(cls, system: CoxeterSystem, values: Iterable) -> "HeckeAlgebra":
        vals = tuple(values)
        cache = system._cache.setdefault("hecke", {})
        key = ("num", vals)
        if key not in cache:
            cache[key] = cls(system, vals)
        return cache[key]

    def q_of(self, w: GroupElement):
        out = self.one
        for s in w.word:
            out = out * self.q[s]
        return out

    def poincare(self, I) -> object:
        if self.symbolic:
            return poincare(I, self.params, self.system)
        total = self.zero
        for w in self.system.enumerate_parabolic(I):
            total = total + self.q_of(w)
        return total

    def element(self, terms: Mapping, denom=None) -> "HeckeElement":
        return HeckeElement(self, dict(terms), self.one if denom is None else denom)

    def t(self, w: GroupElement) -> "HeckeElement":
        return HeckeElement(self, {w: self.one}, self.one)

    def unit(self) -> "HeckeElement":
        return self.t(self.system.identity)

    def _div(self, a, b):
        if self.symbolic:
            return exact_div(a, b)
        if isinstance(a, float) or isinstance(b, float):
            return a / b
        return Fraction(a) / Fraction(b) if not isinstance(a, Fraction) else a / b


def _add_into(out: dict, x, c) -> None:
    v = out.get(x)
    v = c if v is None else v + c
    if v:
        out[x] = v
    else:
        out.pop(x, None)


def _rmul_s(alg: HeckeAlgebra, terms: dict, s: int) -> dict:
    q, qm1 = alg.q[s], alg.qm1[s]
    out: dict = {}
    for w, c in terms.items():
        ws = w.rmul(s)
        if s in w.right_descents:
            _add_into(out, ws, c * q)
            _add_into(out, w, c * qm1)
        else:
            _add_into(out, ws, c)
    return out


def _lmul_s(alg: HeckeAlgebra, terms: dict, s: int) -> dict:
    q, qm1 = alg.q[s], alg.qm1[s]
    out: dict = {}
    for w, c in terms.items():
        sw = w.lmul(s)
        if s in w.left_descents:
            _add_into(out, sw, c * q)
            _add_into(out, w, c * qm1)
        else:
            _add_into(out, sw, c)
    return out


def _trie(words):
    root = {}
    ends = {}
    for key, word in words:
        node = root
        path = ()
        for s in word:
            path = path + (s,)
            node = node.setdefault(s, {})
        ends.setdefault(path, []).append(key)
    return root, ends


def _expand_right(alg: HeckeAlgebra, left: dict, right: dict) -> dict:
    """left * right, walking right's support through a word trie."""
    root, ends = _trie((z, z.word) for z in right)
    out: dict = {}
    stack = [((), root, left)]
    while stack:
        path, node, state = stack.pop()
        for z in ends.get(path, ()):
            c = right[z]
            for x, v in state.items():
                _add_into(out, x, v * c)
        for s in sorted(node, reverse=True):
            stack.append((path + (s,), node[s], _rmul_s(alg, state, s)))
    return out


def _expand_left(alg: HeckeAlgebra, left: dict, right: dict) -> dict:
    """left * right, walking left's support (words read backwards) through a trie."""
    root, ends = _trie((z, tuple(reversed(z.word))) for z in left)
    out: dict = {}
    stack = [((), root, right)]
    while stack:
        path, node, state = stack.pop()
        for z in ends.get(path, ()):
            c = left[z]
            for x, v in state.items():
                _add_into(out, x, c * v)
        for s in sorted(node, reverse=True):
            stack.append((path + (s,), node[s], _lmul_s(alg, state, s)))
    return out


class HeckeElement:
    """Σ terms[w] T_w / denom."""

    __slots__ = ("alg", "terms", "denom")

    def __init__(self, alg: HeckeAlgebra, terms: dict, denom):
        self.alg = alg
        self.terms = {w: c for w, c in terms.items() if c}
        self.denom = denom

    def _check(self, o: "HeckeElement"):
        if o.alg is not self.alg:
            raise ValueError("Hecke elements from different algebras")

    def __add__(self, o):
        if not isinstance(o, HeckeElement):
            return NotImplemented
        self._check(o)
        if self.denom == o.denom:
            t = dict(self.terms)
            for w, c in o.terms.items():
                _add_into(t, w, c)
            return HeckeElement(self.alg, t, self.denom)
        t = {w: c * o.denom for w, c in self.terms.items()}
        for w, c in o.terms.items():
            _add_into(t, w, c * self.denom)
        return HeckeElement(self.alg, t, self.denom * o.denom)

    def __neg__(self):
        return HeckeElement(self.alg, {w: -c for w, c in self.terms.items()}, self.denom)

    def __sub__(self, o):
        return self + (-o)

    def scale(self, num, den=None) -> "HeckeElement":
        d = self.denom if den is None else self.denom * den
        return HeckeElement(self.alg, {w: c * num for w, c in self.terms.items()}, d)

    def __mul__(self, o):
        if isinstance(o, HeckeElement):
            return mul(self, o)
        return self.scale(o)

    def __rmul__(self, o):
        return self.scale(o)

    def __eq__(self, o):
        if not isinstance(o, HeckeElement):
            return NotImplemented
        if o.alg is not self.alg:
            return False
        keys = set(self.terms) | set(o.terms)
        z = self.alg.zero
        for w in keys:
            if self.terms.get(w, z) * o.denom != o.terms.get(w, z) * self.denom:
                return False
        return True

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def support(self) -> list[GroupElement]:
        return sorted(self.terms, key=lambda w: (w.length, w.word))

    def coefficient(self, w: GroupElement):
        """Exact T_w coefficient (numerator divided by the denominator)."""
        c = self.terms.get(w)
        if c is None:
            return self.alg.zero
        return self.alg._div(c, self.denom)

    def max_length(self) -> int:
        return max((w.length for w in self.terms), default=-1)

    def __repr__(self):
        parts = [f"({c})*T[{w.label()}]" for w, c in sorted(self.terms.items(), key=lambda kv: (kv[0].length, kv[0].word))]
        body = " + ".join(parts) or "0"
        return f"HeckeElement[{body} / ({self.denom})]"


def t_basis(alg: HeckeAlgebra, w: GroupElement) -> HeckeElement:
    return alg.t(w)


def mul(h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
    h1._check(h2)
    alg = h1.alg
    if len(h2.terms) <= len(h1.terms):
        terms = _expand_right(alg, h1.terms, h2.terms)
    else:
        terms = _expand_left(alg, h1.terms, h2.terms)
    return HeckeElement(alg, terms, h1.denom * h2.denom)


def _spherical(W: CoxeterSystem, *subsets):
    for X in subsets:
        if not W.is_spherical(X):
            raise NotSphericalError(f"W_I is infinite for I={sorted(X)}")


def idempotent(alg: HeckeAlgebra, I: Iterable[int]) -> HeckeElement:
    """1_I = (1/N(I)) Σ_{w ∈ W_I} T_w."""
    W = alg.system
    I = W.check_subset(I)
    _spherical(W, I)
    return HeckeElement(alg, {w: alg.one for w in W.enumerate_parabolic(I)}, alg.poincare(I))


def _coset_sum(alg: HeckeAlgebra, I, w, J) -> dict:
    return {z: alg.one for z in double_coset_elements(I, w, J)}


def p_basis(alg: HeckeAlgebra, I: Iterable[int], J: Iterable[int], w) -> HeckeElement:
    """P_w^{IJ} = (1/N(J)) Σ_{z ∈ W_I w W_J} T_z."""
    W = alg.system
    rep = _as_rep(getattr(w, "element", w), W.check_subset(I), W.check_subset(J))
    _spherical(W, rep.I, rep.J)
    return HeckeElement(alg, _coset_sum(alg, rep.I, rep, rep.J), alg.poincare(rep.J))


def p_basis_via_idempotents(alg: HeckeAlgebra, I: Iterable[int], J: Iterable[int], w) -> HeckeElement:
    """N(I)/N(I ∩ wJw⁻¹) · 1_I T_w 1_J."""
    W = alg.system
    rep = _as_rep(getattr(w, "element", w), W.check_subset(I), W.check_subset(J))
    _spherical(W, rep.I, rep.J)
    L = stabilizer_cotype(rep.I, rep.J, rep)
    h = idempotent(alg, rep.I) * alg.t(rep.element) * idempotent(alg, rep.J)
    return h.scale(alg.poincare(rep.I), alg.poincare(L))


def to_p_basis(h: HeckeElement, I: Iterable[int], J: Iterable[int]) -> dict:
    """Coefficients of h in {P_w^{IJ}}: map DoubleCosetRep -> coefficient.

    Double cosets are processed from the longest representative down; each
    coset must carry one constant coefficient, otherwise h is not in
    1_I H 1_J and the shortest offending term is reported.
    """
    alg = h.alg
    W = alg.system
    I = W.check_subset(I)
    J = W.check_subset(J)
    _spherical(W, I, J)
    reps = W._cache.setdefault("double_rep", {})
    groups: dict = {}
    for z in h.terms:
        key = (z, I, J)
        r = reps.get(key)
        if r is None:
            r = reps[key] = min_double_rep(z, I, J)
        groups.setdefault(r, []).append(z)
    NJ = alg.poincare(J)
    out = {}
    residual = []
    for r in sorted(groups, key=lambda r: (-r.length, r.word)):
        c = h.terms.get(r.element, alg.zero)
        coset = list(double_coset_elements(I, r, J))
        for z in coset:
            cz = h.terms.get(z, alg.zero)
            if cz != c:
                residual.append(z)
        if c:
            try:
                out[r] = alg._div(c * NJ, h.denom)
            except InexactDivision as e:
                raise SpanError(f"non-polynomial P-coefficient at {r.element.label()}", r.element) from e
    if residual:
        z = min(residual, key=lambda x: (x.length, x.word))
        raise SpanError(f"element is not in 1_I H 1_J; residual term at T[{z.label()}]", z)
    return {r: out[r] for r in sorted(out, key=DoubleCosetRep.sort_key)}


def chamber_constant_hecke(alg: HeckeAlgebra, u: GroupElement, v: GroupElement, w: GroupElement):
    """c_{u,v}^w as the T_w coefficient of T_u T_{v⁻¹}."""
    h = alg.t(u) * alg.t(v.inverse())
    return h.coefficient(w)


def parabolic_product(alg: HeckeAlgebra, I, J, K, u, v) -> dict:
    """P_u^{IJ} P_v^{JK} in the basis {P_w^{IK}}, for u ∈ R(I,J), v ∈ R(J,K).

    The coefficient of P_w^{IK} is c_{u,v⁻¹}^w(I,J,K).  Computed as
    Σ_{x ∈ M_I(J,u)} T_x T_u P_v^{JK}, which equals the product because
    P_u^{IJ} = Σ_x T_x T_u 1_J and 1_J P_v^{JK} = P_v^{JK}.
    """
    W = alg.system
    I, J, K = W.check_subset(I), W.check_subset(J), W.check_subset(K)
    _spherical(W, I, J, K)
    urep = _as_rep(getattr(u, "element", u), I, J)
    vrep = _as_rep(getattr(v, "element", v), J, K)
    cache = W._cache.setdefault("pprod", {})
    key = (id(alg), I, J, K, urep.element, vrep.element)
    if key in cache:
        return cache[key]
    pv = p_basis(alg, J, K, vrep)
    terms = pv.terms
    for s in reversed(urep.element.word):
        terms = _lmul_s(alg, terms, s)
    xs = {x: alg.one for x in m_reps(I, J, urep)}
    terms = _expand_left(alg, xs, terms)
    try:
        res = to_p_basis(HeckeElement(alg, terms, pv.denom), I, K)
    except SpanError as e:
        raise AssertionError(f"parabolic product left the P-basis span: {e}") from e
    cache[key] = res
    return res


def _pair_cap_check(n1: int, n2: int, cap: int):
    if n1 * n2 > cap:
        raise SizeCapExceeded(
            f"double cosets too large for the chamber-sum oracle ({n1}x{n2} > {cap}); "
            "use the pregallery path (parabolic_constant)"
        )


def _sum_product(alg: HeckeAlgebra, key, build, cap: int) -> dict:
    cache = alg.system._cache.setdefault("sumprod", {})
    k = (id(alg),) + key
    if k not in cache:
        left, right = build()
        _pair_cap_check(len(left), len(right), cap)
        if len(right) <= len(left):
            cache[k] = _expand_right(alg, left, right)
        else:
            cache[k] = _expand_left(alg, left, right)
    return cache[k]


def _triple_reps(alg: HeckeAlgebra, I, J, K, u, v):
    W = alg.system
    I, J, K = W.check_subset(I), W.check_subset(J), W.check_subset(K)
    _spherical(W, I, J, K)
    urep = _as_rep(getattr(u, "element", u), I, J)
    vrep = _as_rep(getattr(v, "element", v), K, J)
    return I, J, K, urep, vrep


def _firstform_sum(alg, I, J, K, urep, vrep, cap):
    def build():
        return _coset_sum(alg, I, urep, J), _coset_sum(alg, J, vrep.element.inverse(), K)

    return _sum_product(alg, ("ff", I, J, K, urep.element, vrep.element), build, cap)


def _refinement_sum(alg, I, J, K, urep, vrep, cap):
    def build():
        ys = {(m * vrep.element).inverse(): alg.one for m in m_reps(K, J, vrep)}
        return _coset_sum(alg, I, urep, J), ys

    return _sum_product(alg, ("rf", I, J, K, urep.element, vrep.element), build, cap)


def _reduced_part(prod: dict, I, K) -> dict:
    return {
        DoubleCosetRep(x, I, K): c
        for x, c in sorted(prod.items(), key=lambda kv: (kv[0].length, kv[0].word))
        if not (x.left_descents & I) and not (x.right_descents & K)
    }


def parabolic_constant_via_firstform(alg: HeckeAlgebra, I, J, K, u, v, w, cap: int = DEFAULT_PAIR_CAP):
    """(1/N(J)) Σ_{x ∈ W_I u W_J, y ∈ W_K v W_J} c_{x,y}^w.

    Σ_{x,y} c_{x,y}^w is the T_w coefficient of (Σ_x T_x)(Σ_y T_{y⁻¹}).
    """
    I, J, K, urep, vrep = _triple_reps(alg, I, J, K, u, v)
    wrep = _as_rep(getattr(w, "element", w), I, K)
    prod = _firstform_sum(alg, I, J, K, urep, vrep, cap)
    return alg._div(prod.get(wrep.element, alg.zero), alg.poincare(J))


def firstform_row(alg: HeckeAlgebra, I, J, K, u, v, cap: int = DEFAULT_PAIR_CAP) -> dict:
    """Nonzero c_{u,v}^w(I,J,K) over all w ∈ R(I,K), by the chamber-sum formula."""
    I, J, K, urep, vrep = _triple_reps(alg, I, J, K, u, v)
    prod = _firstform_sum(alg, I, J, K, urep, vrep, cap)
    NJ = alg.poincare(J)
    return {r: alg._div(c, NJ) for r, c in _reduced_part(prod, I, K).items()}


def refinement_constant(alg: HeckeAlgebra, I, J, K, u, v, w, cap: int = DEFAULT_PAIR_CAP):
    """Σ_{x ∈ W_I u W_J, y ∈ M_K(J,v)·v} c_{x,y}^w."""
    I, J, K, urep, vrep = _triple_reps(alg, I, J, K, u, v)
    wrep = _as_rep(getattr(w, "element", w), I, K)
    prod = _refinement_sum(alg, I, J, K, urep, vrep, cap)
    return prod.get(wrep.element, alg.zero)


def refinement_row(alg: HeckeAlgebra, I, J, K, u, v, cap: int = DEFAULT_PAIR_CAP) -> dict:
    I, J, K, urep, vrep = _triple_reps(alg, I, J, K, u, v)
    return _reduced_part(_refinement_sum(alg, I, J, K, urep, vrep, cap), I, K)


def index_character(h: HeckeElement):
    """π(h) = Σ coeff(w) q_w, the index representation T_w ↦ q_w."""
    alg = h.alg
    total = alg.zero
    for w, c in h.terms.items():
        total = total + c * alg.q_of(w)
    return alg._div(total, h.denom)


@dataclass(frozen=True)
class CommutativityVerdict:
    commutative_up_to_bound: bool
    bound: int
    counterexample: tuple | None  # (u, v, w, c_{u,v⁻¹}^w, c_{v,u⁻¹}^w)
    all_involutions: bool
    reps_checked: int
    mismatches: tuple = ()  # every (u, v, w, a, b) for the first failing pair

    def describe(self) -> str:
        inv = "all representatives are involutions" if self.all_involutions else "some representative is not an involution"
        if self.counterexample is None:
            return f"no counterexample up to length {self.bound}; {inv}"
        u, v, w, a, b = self.counterexample
        return (
            f"counterexample u={u.element.label()} v={v.element.label()} w={w.element.label()}: "
            f"c_(u,v^-1)^w={a} but c_(v,u^-1)^w={b}; {inv}"
        )


def commutativity_check(W: CoxeterSystem, I: Iterable[int], length_bound: int, params: ParamAssignment) -> CommutativityVerdict:
    """Search for u, v, w in R(I,I) (length <= bound) with
    c_{u,v⁻¹}^w(I,I,I) ≠ c_{v,u⁻¹}^w(I,I,I), i.e. P_u P_v ≠ P_v P_u.

    Pairs are scanned by increasing ℓ(u)+ℓ(v) and the first mismatch is
    returned.  Constants come from the pregallery engine.
    """
    I = W.check_subset(I)
    _spherical(W, I)
    reps = enumerate_R(W, I, I, length_bound)
    all_inv = all(r.element == r.element.inverse() for r in reps)
    wJ = W.longest_element(I).length
    zero = params.zero()
    pairs = [(a, b) for i, a in enumerate(reps) for b in reps[i + 1:] if a.length and b.length]
    pairs.sort(key=lambda p: (p[0].length + p[1].length, p[0].word, p[1].word))

    def c(x, y, w):
        # c_{x,y⁻¹}^w(I,I,I)
        if w.length > x.length + y.length + wJ:
            return zero
        yinv = min_double_rep(y.element.inverse(), I, I)
        return parabolic_row(I, I, I, yinv, w, params).get(x, zero)

    for u, v in pairs:
        bad = []
        for w in reps:
            a = c(u, v, w)
            b = c(v, u, w)
            if a != b:
                bad.append((u, v, w, a, b))
        if bad:
            return CommutativityVerdict(False, length_bound, bad[0], all_inv, len(reps), tuple(bad))
    return CommutativityVerdict(True, length_bound, None, all_inv, len(reps))
