"""Exact arithmetic in the real cyclotomic fields Q(2cos(pi/L)).

Only what the reflection representation needs: ring operations, exact
equality, and a sign decided from a high-precision real embedding.  Values
that happen to be rational are returned as ``int``/``Fraction`` so that
matrices mixing field elements and plain numbers hash consistently.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import math
from math import gcd

import mpmath
import sympy


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class RealCyclotomicField:
    """The field Q(c) with c = 2cos(pi/L)."""

    def __init__(self, L: int):
        if L < 1:
            raise ValueError("L must be positive")
        self.L = L
        x = sympy.Symbol("x")
        poly = sympy.Poly(sympy.minimal_polynomial(2 * sympy.cos(sympy.pi / L), x), x)
        coeffs = [Fraction(int(c)) for c in poly.all_coeffs()]
        lead = coeffs[0]
        # monic, low degree first
        self.minpoly = tuple(c / lead for c in reversed(coeffs))
        self.degree = len(self.minpoly) - 1
        self._froot = 2.0 * math.cos(math.pi / L)

    def __repr__(self):
        return f"RealCyclotomicField({self.L})"

    def gen(self):
        if self.degree == 1:
            return -self.minpoly[0]
        return self._make((Fraction(0), Fraction(1)) + (Fraction(0),) * (self.degree - 2))

    def two_cos(self, k: int, m: int):
        """2cos(k*pi/m) as a field element (needs m | k*L)."""
        if k == 1 and m in (1, 2, 3):
            return {1: -2, 2: 0, 3: 1}[m]
        if (self.L * k) % m:
            raise ValueError(f"2cos({k}pi/{m}) is not in Q(2cos(pi/{self.L}))")
        j = self.L * k // m
        # Chebyshev recursion: C_j(c) = 2cos(j*theta) with C_0 = 2, C_1 = c
        c = self.gen()
        prev, cur = 2, c
        if j == 0:
            return 2
        for _ in range(j - 1):
            prev, cur = cur, c * cur - prev
        return cur

    def _reduce(self, coeffs: list[Fraction]):
        d = self.degree
        mp = self.minpoly
        for i in range(len(coeffs) - 1, d - 1, -1):
            top = coeffs[i]
            if top:
                for k in range(d + 1):
                    coeffs[i - d + k] -= top * mp[k]
        del coeffs[d:]
        return self._make(tuple(coeffs))

    def _make(self, coeffs):
        if not any(coeffs[1:]):
            c = coeffs[0] if coeffs else Fraction(0)
            return int(c) if c.denominator == 1 else c
        return NFElement(self, coeffs)

    @lru_cache(maxsize=None)
    def _root(self, dps: int):
        with mpmath.workdps(dps):
            return 2 * mpmath.cos(mpmath.pi / self.L)


@lru_cache(maxsize=None)
def field_for(L: int) -> RealCyclotomicField:
    return RealCyclotomicField(L)


def field_for_orders(orders) -> RealCyclotomicField:
    """Smallest field of this family containing 2cos(pi/m) for every m given."""
    L = 1
    for m in orders:
        if m not in (1, 2, 3):
            L = _lcm(L, m)
    return field_for(L)


class NFElement:
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: RealCyclotomicField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, NFElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other.coeffs
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),) + (Fraction(0),) * (self.field.degree - 1)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.field._make(tuple(a + b for a, b in zip(self.coeffs, o)))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.field._make(tuple(a - b for a, b in zip(self.coeffs, o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.field._make(tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = [Fraction(0)] * (2 * self.field.degree - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o):
                    if b:
                        out[i + j] += a * b
        return self.field._reduce(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, NFElement):
            return other.field is self.field and other.coeffs == self.coeffs
        # reduced elements are never rational
        return False

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.L, self.coeffs))
        return self._hash

    def sign(self) -> int:
        # cheap float pass first; only ambiguous values go to mpmath
        x = self.field._froot
        val = 0.0
        for c in reversed(self.coeffs):
            val = val * x + float(c)
        if abs(val) > 1e-9:
            return 1 if val > 0 else -1
        dps = 50
        while True:
            with mpmath.workdps(dps):
                x = self.field._root(dps)
                val = mpmath.mpf(0)
                for c in reversed(self.coeffs):
                    val = val * x + mpmath.mpf(c.numerator) / c.denominator
                if abs(val) > mpmath.mpf(10) ** (-(dps - 10)):
                    return 1 if val > 0 else -1
            dps *= 2
            if dps > 5000:
                raise ArithmeticError("cannot decide sign of a nonzero field element")

    def __float__(self):
        return float(self._value())

    def _value(self):
        x = self.field._root(30)
        val = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            val = val * x + mpmath.mpf(c.numerator) / c.denominator
        return val

    def __lt__(self, other):
        return sign(self - other) < 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __le__(self, other):
        return not self > other

    def __ge__(self, other):
        return not self < other

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*c^{i}")
        return f"NF[{self.field.L}](" + " + ".join(terms) + ")"


def sign(x) -> int:
    """Sign of an int, Fraction or NFElement."""
    if isinstance(x, NFElement):
        return x.sign()
    return (x > 0) - (x < 0)
