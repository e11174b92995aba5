"""Sparse multivariate polynomials over Q in the building parameters."""

from __future__ import annotations

import ast
import warnings
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "QPoly",
    "InexactDivision",
    "VariableMismatch",
    "ParamAssignment",
    "parse_poly",
    "exact_div",
    "canonical_string",
    "q_of",
    "phi",
]


class VariableMismatch(ValueError):
    pass


class InexactDivision(ArithmeticError):
    def __init__(self, msg: str, remainder: "QPoly"):
        super().__init__(msg)
        self.remainder = remainder


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class QPoly:
    """Polynomial with rational coefficients; ``vars`` fixes the exponent layout."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.vars = tuple(vars)
        self.terms = {}
        self._hash = None
        if terms:
            n = len(self.vars)
            for e, c in terms.items():
                if c:
                    if len(e) != n:
                        raise ValueError(f"exponent {e} does not match variables {self.vars}")
                    self.terms[tuple(e)] = _norm(c)

    @classmethod
    def _raw(cls, vars, terms):
        p = cls.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, vars: Sequence[str], c) -> "QPoly":
        vars = tuple(vars)
        return cls._raw(vars, {(0,) * len(vars): _norm(Fraction(c))} if c else {})

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "QPoly":
        vars = tuple(vars)
        e = tuple(1 if v == name else 0 for v in vars)
        if name not in vars:
            raise VariableMismatch(f"unknown variable {name!r}")
        return cls._raw(vars, {e: 1})

    def _other(self, o) -> dict:
        if isinstance(o, QPoly):
            if o.vars != self.vars:
                raise VariableMismatch(f"variable universes differ: {self.vars} vs {o.vars}")
            return o.terms
        if isinstance(o, (int, Fraction)):
            return {(0,) * len(self.vars): o} if o else {}
        raise TypeError(f"cannot combine QPoly with {type(o).__name__}")

    def __add__(self, o):
        try:
            ot = self._other(o)
        except TypeError:
            return NotImplemented
        t = dict(self.terms)
        for e, c in ot.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = _norm(v)
            else:
                t.pop(e, None)
        return QPoly._raw(self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return QPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        try:
            ot = self._other(o)
        except TypeError:
            return NotImplemented
        t = dict(self.terms)
        for e, c in ot.items():
            v = t.get(e, 0) - c
            if v:
                t[e] = _norm(v)
            else:
                t.pop(e, None)
        return QPoly._raw(self.vars, t)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            if not o:
                return QPoly._raw(self.vars, {})
            return QPoly._raw(self.vars, {e: _norm(c * o) for e, c in self.terms.items()})
        try:
            ot = self._other(o)
        except TypeError:
            return NotImplemented
        a, b = self.terms, ot
        if len(a) < len(b):
            a, b = b, a
        t: dict = {}
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = t.get(e, 0) + c1 * c2
                if v:
                    t[e] = v
                else:
                    del t[e]
        return QPoly._raw(self.vars, {e: _norm(c) for e, c in t.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = QPoly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)):
            if not o:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(o))
        if isinstance(o, QPoly):
            return exact_div(self, o)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, o):
        if isinstance(o, QPoly):
            return self.vars == o.vars and self.terms == o.terms
        if isinstance(o, (int, Fraction)):
            if not o:
                return not self.terms
            return self.terms == {(0,) * len(self.vars): o}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0,) * len(self.vars)}

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * len(self.vars), 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficients(self) -> list:
        return list(self.terms.values())

    def has_nonnegative_coefficients(self) -> bool:
        return all(c >= 0 for c in self.terms.values())

    def shifted(self, delta=1) -> "QPoly":
        """p(x_1 + delta, ..., x_n + delta), same variable names."""
        if not self.terms:
            return self
        vals = {v: QPoly.var(self.vars, v) + delta for v in self.vars}
        out = self.eval(vals)
        return out if isinstance(out, QPoly) else QPoly.const(self.vars, out)

    def has_integer_coefficients(self) -> bool:
        return all(isinstance(c, int) or c.denominator == 1 for c in self.terms.values())

    def eval(self, values: Mapping[str, object]):
        missing = [v for v, used in zip(self.vars, self._used()) if used and v not in values]
        if missing:
            raise KeyError(f"unassigned variable(s): {', '.join(missing)}")
        xs = [values.get(v, 0) for v in self.vars]
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(xs, e):
                if k:
                    term = term * x**k
            total = total + term
        return _norm(total) if isinstance(total, (int, Fraction)) else total

    def _used(self):
        return [any(e[i] for e in self.terms) for i in range(len(self.vars))]

    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-x for x in kv[0])))

    def __str__(self):
        return canonical_string(self)

    def __repr__(self):
        return f"QPoly({canonical_string(self)!r})"


def _leading(p: QPoly):
    return max(p.terms, key=lambda e: (sum(e), e))


def exact_div(a: QPoly, b: QPoly) -> QPoly:
    """Quotient ``a / b``; raises :class:`InexactDivision` if b does not divide a."""
    if not isinstance(b, QPoly):
        b = QPoly.const(a.vars, b)
    if not isinstance(a, QPoly):
        a = QPoly.const(b.vars, a)
    if a.vars != b.vars:
        raise VariableMismatch(f"variable universes differ: {a.vars} vs {b.vars}")
    if not b.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    lb = _leading(b)
    cb = Fraction(b.terms[lb])
    if len(b.terms) == 1:
        out = {}
        for e, c in a.terms.items():
            d = tuple(x - y for x, y in zip(e, lb))
            if min(d, default=0) < 0:
                raise InexactDivision(f"{b} does not divide {a}", a)
            out[d] = c / cb
        return QPoly(a.vars, out)
    rem = dict(a.terms)
    quot: dict = {}
    vars = a.vars
    while rem:
        la = max(rem, key=lambda e: (sum(e), e))
        d = tuple(x - y for x, y in zip(la, lb))
        if min(d, default=0) < 0:
            raise InexactDivision(f"{b} does not divide {a}", QPoly(vars, rem))
        c = Fraction(rem[la]) / cb
        quot[d] = c
        for e, cc in b.terms.items():
            k = tuple(x + y for x, y in zip(e, d))
            v = rem.get(k, 0) - c * cc
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return QPoly(vars, quot)


def _fmt_coeff(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def canonical_string(p: QPoly) -> str:
    """Terms by descending total degree, then descending lex on exponents."""
    if not p.terms:
        return "0"
    parts = []
    for e, c in p._sorted_terms():
        mono = "*".join(
            (v if k == 1 else f"{v}^{k}") for v, k in zip(p.vars, e) if k
        )
        neg = c < 0
        a = abs(Fraction(c))
        if mono:
            body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
        else:
            body = _fmt_coeff(a)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def phi(n: int, x) -> object:
    """x^(n-1) + ... + x + 1."""
    out = 0
    for k in range(n):
        out = out + x**k
    return out


class _Parser(ast.NodeVisitor):
    def __init__(self, vars):
        self.vars = vars

    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_BinOp(self, node):
        l = self.visit(node.left)
        r = self.visit(node.right)
        op = type(node.op)
        if op is ast.Add:
            return l + r
        if op is ast.Sub:
            return l - r
        if op is ast.Mult:
            return l * r
        if op is ast.Pow:
            if not (isinstance(r, QPoly) and r.is_constant()):
                raise ValueError("exponent must be a nonnegative integer")
            k = r.constant_value()
            if not isinstance(k, int) or k < 0:
                raise ValueError("exponent must be a nonnegative integer")
            return l**k
        if op is ast.Div:
            if not r.is_constant():
                return exact_div(l, r)
            c = r.constant_value()
            if not c:
                raise ZeroDivisionError("division by zero")
            return l * (Fraction(1) / Fraction(c))
        raise ValueError(f"unsupported operator {op.__name__}")

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise ValueError("unsupported unary operator")

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ValueError(f"unsupported constant {node.value!r}")
        return QPoly.const(self.vars, node.value)

    def visit_Name(self, node):
        if node.id not in self.vars:
            raise VariableMismatch(f"unknown variable {node.id!r}")
        return QPoly.var(self.vars, node.id)

    def visit_Call(self, node):
        if not (isinstance(node.func, ast.Name) and node.func.id == "phi" and len(node.args) == 2):
            raise ValueError("only phi(n, x) calls are supported")
        n = self.visit(node.args[0])
        if not n.is_constant() or not isinstance(n.constant_value(), int):
            raise ValueError("phi needs an integer first argument")
        return phi(n.constant_value(), self.visit(node.args[1])) + QPoly.const(self.vars, 0)

    def generic_visit(self, node):
        raise ValueError(f"unsupported syntax: {type(node).__name__}")


def parse_poly(text: str, vars: Sequence[str]) -> QPoly:
    """Parse ``"s*(t^2 + t + 1)"``-style text; ``^`` and ``**`` both mean power."""
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    return _Parser(tuple(vars)).visit(tree)


class ParamAssignment:
    """Per-generator parameter: a variable name or an exact rational."""

    def __init__(self, entries: Sequence, system=None):
        parsed = []
        for x in entries:
            if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
                parsed.append(Fraction(x))
            elif isinstance(x, str):
                t = x.strip()
                try:
                    parsed.append(Fraction(t))
                except ValueError:
                    if not t.isidentifier() or t == "phi":
                        raise ValueError(f"invalid parameter entry {x!r}") from None
                    parsed.append(t)
            else:
                raise ValueError(f"invalid parameter entry {x!r}")
        self.entries = tuple(parsed)
        vars = []
        for x in self.entries:
            if isinstance(x, str) and x not in vars:
                vars.append(x)
        self.vars = tuple(vars)
        self._q = tuple(
            QPoly.var(self.vars, x) if isinstance(x, str) else QPoly.const(self.vars, x)
            for x in self.entries
        )
        self.odd_bond_mismatch = []
        self.system = None
        if system is not None:
            self.bind(system)

    def bind(self, system) -> "ParamAssignment":
        if len(self.entries) != system.rank:
            raise ValueError(f"{len(self.entries)} parameters given for rank {system.rank}")
        self.system = system
        bad = []
        for s in range(system.rank):
            for t in range(s + 1, system.rank):
                m = system.matrix[s][t]
                if m != 0 and m % 2 == 1 and self.entries[s] != self.entries[t]:
                    bad.append((s, t))
        self.odd_bond_mismatch = bad
        if bad:
            warnings.warn(
                f"parameters differ across odd bonds {bad}; regular buildings force q_s = q_t there",
                stacklevel=2,
            )
        return self

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return isinstance(other, ParamAssignment) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"ParamAssignment({[str(x) for x in self.entries]})"

    def q(self, s: int) -> QPoly:
        return self._q[s]

    def zero(self) -> QPoly:
        return QPoly._raw(self.vars, {})

    def one(self) -> QPoly:
        return QPoly.const(self.vars, 1)

    def poly(self, text: str) -> QPoly:
        return parse_poly(text, self.vars)

    def monomial(self, counts: Sequence[int]) -> QPoly:
        """prod_s q_s^counts[s]."""
        out = self.one()
        for s, k in enumerate(counts):
            if k:
                out = out * self._q[s] ** k
        return out

    def q_of(self, w) -> QPoly:
        counts = [0] * len(self.entries)
        for s in w.word:
            counts[s] += 1
        return self.monomial(counts)

    def values(self, assignment: Mapping[str, object]) -> list:
        """Numeric q_s after substituting variables."""
        return [x if not isinstance(x, str) else Fraction(assignment[x]) for x in self.entries]

    def all_ones(self) -> dict:
        return {v: 1 for v in self.vars}


def q_of(w, params: ParamAssignment) -> QPoly:
    return params.q_of(w)
