"""Sizes of generalised spheres F(A, J, w) and of numerical-distance spheres."""

from __future__ import annotations

from typing import Iterable

from .coxeter import CoxeterSystem, NotSphericalError
from .cosets import (
    _as_rep,
    double_coset_elements,
    enumerate_R,
    poincare,
    stabilizer_cotype,
)
from .qpoly import ParamAssignment, QPoly, exact_div

__all__ = ["sphere_size", "sphere_size_via_cosets", "distance_sphere_size"]


def sphere_size(I: Iterable[int], J: Iterable[int], w, params: ParamAssignment) -> QPoly:
    """N(I)·q_w / N(I ∩ wJw⁻¹)."""
    rep = _as_rep(getattr(w, "element", w), I, J)
    W = rep.element.system
    if not W.is_spherical(rep.I):
        raise NotSphericalError(f"W_I is infinite for I={sorted(rep.I)}")
    L = stabilizer_cotype(rep.I, rep.J, rep)
    num = poincare(rep.I, params, W) * params.q_of(rep.element)
    return exact_div(num, poincare(L, params, W))


def sphere_size_via_cosets(I: Iterable[int], J: Iterable[int], w, params: ParamAssignment) -> QPoly:
    """(1/N(J)) Σ_{z ∈ W_I w W_J} q_z, summed element by element."""
    rep = _as_rep(getattr(w, "element", w), I, J)
    W = rep.element.system
    total = params.zero()
    counts: dict = {}
    for z in double_coset_elements(rep.I, rep, rep.J):
        c = [0] * W.rank
        for s in z.word:
            c[s] += 1
        c = tuple(c)
        counts[c] = counts.get(c, 0) + 1
    for c, k in sorted(counts.items()):
        total = total + params.monomial(c) * k
    return exact_div(total, poincare(rep.J, params, W))


def distance_sphere_size(
    W: CoxeterSystem, I: Iterable[int], J: Iterable[int], n: int, params: ParamAssignment
) -> QPoly:
    """Number of cotype-J simplices at gallery distance n from a cotype-I simplex."""
    I = W.check_subset(I)
    J = W.check_subset(J)
    if not W.is_spherical(I):
        raise NotSphericalError(f"W_I is infinite for I={sorted(I)}")
    total = params.zero()
    for rep in enumerate_R(W, I, J, n):
        if rep.length == n:
            total = total + sphere_size(I, J, rep, params)
    return total
