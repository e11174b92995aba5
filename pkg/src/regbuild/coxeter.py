"""Coxeter groups through the Tits reflection representation.

An element is stored as the matrix of its action on simple-root coordinates
together with the matrix of its inverse, both as flat column-major tuples.
Right descents are read off the columns of the first matrix and left
descents off the columns of the second, so no group enumeration is ever
needed and infinite groups are handled on the same footing as finite ones.

>>> W = CoxeterSystem([[1, 3], [3, 1]])
>>> w = W.from_word([0, 1, 0])
>>> w.length, w.word, sorted(w.right_descents)
(3, (0, 1, 0), [0, 1])
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .numberfield import field_for_orders, sign

__all__ = [
    "INF",
    "CoxeterMatrixError",
    "NotSphericalError",
    "CoxeterSystem",
    "GroupElement",
    "new_system",
    "from_word",
    "length",
    "descents",
    "is_spherical",
    "enumerate_parabolic",
    "longest_element",
]

INF = 0  # serialized encoding of m_st = infinity

_CRYSTALLOGRAPHIC = {2: (0, 0), 3: (-1, -1), 4: (-1, -2), 6: (-1, -3), INF: (-2, -2)}

DEFAULT_ENUM_CAP = 10**7


class CoxeterMatrixError(ValueError):
    pass


class NotSphericalError(ValueError):
    pass


def _normalize_entry(x):
    if x is None:
        return INF
    if isinstance(x, float):
        if x == float("inf"):
            return INF
        if x.is_integer():
            return int(x)
        raise CoxeterMatrixError(f"non-integer Coxeter matrix entry {x!r}")
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "infinity", "oo", "∞"):
            return INF
        try:
            return int(x)
        except ValueError:
            raise CoxeterMatrixError(f"unparseable Coxeter matrix entry {x!r}") from None
    if isinstance(x, bool) or not isinstance(x, int):
        raise CoxeterMatrixError(f"unparseable Coxeter matrix entry {x!r}")
    return x


def _validate(matrix) -> tuple[tuple[int, ...], ...]:
    rows = [list(r) for r in matrix]
    n = len(rows)
    if n == 0:
        raise CoxeterMatrixError("Coxeter matrix must have rank at least 1")
    for i, r in enumerate(rows):
        if len(r) != n:
            raise CoxeterMatrixError(f"row {i} has length {len(r)}, expected {n}")
    m = [[_normalize_entry(x) for x in r] for r in rows]
    for i in range(n):
        if m[i][i] != 1:
            raise CoxeterMatrixError(f"diagonal entry m[{i}][{i}]={m[i][i]} must be 1")
        for j in range(n):
            if i == j:
                continue
            if m[i][j] != m[j][i]:
                raise CoxeterMatrixError(
                    f"matrix not symmetric at m[{i}][{j}]={m[i][j]} vs m[{j}][{i}]={m[j][i]}"
                )
            if m[i][j] != INF and m[i][j] < 2:
                raise CoxeterMatrixError(
                    f"off-diagonal entry m[{i}][{j}]={m[i][j]} must be >= 2 or infinity"
                )
    return tuple(tuple(r) for r in m)


class CoxeterSystem:
    """A Coxeter system (W, S) with S = {0, ..., rank-1}.

    ``matrix`` uses 0 (or ``None``/``inf``) for m_st = infinity.
    """

    def __init__(self, matrix, labels: Sequence[str] | None = None):
        self.matrix = _validate(matrix)
        n = self.rank = len(self.matrix)
        if labels is not None and len(labels) != n:
            raise CoxeterMatrixError(f"{len(labels)} labels given for rank {n}")
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        orders = {self.matrix[i][j] for i in range(n) for j in range(n) if i != j}
        self.crystallographic = orders <= set(_CRYSTALLOGRAPHIC)
        if self.crystallographic:
            self.field = None
            C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    a, b = _CRYSTALLOGRAPHIC[self.matrix[i][j]]
                    C[i][j], C[j][i] = a, b
        else:
            self.field = field_for_orders(o for o in orders if o != INF)
            C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
            for i in range(n):
                for j in range(n):
                    if i != j:
                        m = self.matrix[i][j]
                        C[i][j] = -2 if m == INF else -self.field.two_cos(1, m)
        # s_i(alpha_j) = alpha_j - C[i][j] alpha_i
        self.cartan = tuple(tuple(r) for r in C)
        # per generator: list of (j, C[s][j]) with nonzero coupling, j != s
        self._coupling = tuple(
            tuple((j, C[s][j]) for j in range(n) if j != s and C[s][j] != 0) for s in range(n)
        )
        ident = tuple(1 if r == c else 0 for c in range(n) for r in range(n))
        self._intern: dict[tuple, GroupElement] = {}
        self._identity = self._make(ident, ident, 0)
        self._identity._word = ()
        self._gens = tuple(self._identity.rmul(s) for s in range(n))
        self._spherical: dict[frozenset, bool] = {}
        self._longest: dict[frozenset, GroupElement] = {}
        self._parabolic: dict[frozenset, list] = {}
        # memo tables owned by other modules, keyed by table name
        self._cache: dict[str, dict] = {}

    def __repr__(self):
        return f"CoxeterSystem({[list(r) for r in self.matrix]})"

    def m(self, s: int, t: int) -> int:
        return self.matrix[s][t]

    @property
    def identity(self) -> "GroupElement":
        return self._identity

    def gen(self, s: int) -> "GroupElement":
        return self._gens[s]

    @property
    def generators(self) -> tuple["GroupElement", ...]:
        return self._gens

    def check_subset(self, I: Iterable[int]) -> frozenset:
        I = frozenset(I)
        for s in I:
            if not isinstance(s, int) or not 0 <= s < self.rank:
                raise ValueError(f"generator index {s!r} out of range for rank {self.rank}")
        return I

    def from_word(self, word: Iterable[int]) -> "GroupElement":
        w = self._identity
        for s in word:
            if not isinstance(s, int) or not 0 <= s < self.rank:
                raise ValueError(f"generator index {s!r} out of range for rank {self.rank}")
            w = w.rmul(s)
        return w

    # -- column kernels -------------------------------------------------
    def _right(self, cols: tuple, s: int) -> tuple:
        """cols of M*s_s (column-major)."""
        n = self.rank
        cs = cols[s * n:(s + 1) * n]
        out = list(cols)
        out[s * n:(s + 1) * n] = [-x for x in cs]
        for j, c in self._coupling[s]:
            base = j * n
            for r in range(n):
                x = cs[r]
                if x:
                    out[base + r] -= c * x
        return tuple(out)

    def _left(self, cols: tuple, s: int) -> tuple:
        """cols of s_s*M (column-major): only row s changes."""
        n = self.rank
        out = list(cols)
        coup = self._coupling[s]
        for base in range(0, n * n, n):
            v = -cols[base + s]
            for j, c in coup:
                x = cols[base + j]
                if x:
                    v -= c * x
            out[base + s] = v
        return tuple(out)

    def _col_negative(self, cols: tuple, s: int) -> bool:
        n = self.rank
        for x in cols[s * n:(s + 1) * n]:
            if x:
                return sign(x) < 0
        raise AssertionError("zero column in reflection representation")

    def _matmul(self, a: tuple, b: tuple) -> tuple:
        n = self.rank
        out = []
        for c in range(n):
            bc = b[c * n:(c + 1) * n]
            for r in range(n):
                v = 0
                for k in range(n):
                    y = bc[k]
                    if y:
                        x = a[k * n + r]
                        if x:
                            v += x * y
                out.append(v)
        return tuple(out)

    def _make(self, cols: tuple, icols: tuple, length: int | None = None) -> "GroupElement":
        x = self._intern.get(cols)
        if x is None:
            x = GroupElement(self, cols, icols, length)
            self._intern[cols] = x
        elif x._length is None and length is not None:
            x._length = length
        return x

    def element(self, cols: tuple, icols: tuple) -> "GroupElement":
        return self._make(cols, icols)

    def clear_cache(self) -> None:
        """Forget interned elements (long runs in infinite groups)."""
        self._intern = {e.cols: e for e in (self._identity,) + self._gens}

    # -- parabolic subgroups --------------------------------------------
    def is_spherical(self, I: Iterable[int]) -> bool:
        I = self.check_subset(I)
        if I not in self._spherical:
            self._spherical[I] = _positive_definite(self, sorted(I))
        return self._spherical[I]

    def enumerate_parabolic(self, I: Iterable[int], cap: int = DEFAULT_ENUM_CAP) -> Iterator["GroupElement"]:
        I = self.check_subset(I)
        if not self.is_spherical(I):
            raise NotSphericalError(f"W_I is infinite for I={sorted(I)}")
        if I in self._parabolic:
            yield from self._parabolic[I]
            return
        out = []
        gens = sorted(I)
        seen = {self._identity}
        frontier = [self._identity]
        while frontier:
            out.extend(frontier)
            yield from frontier
            nxt = []
            for w in frontier:
                for s in gens:
                    if s not in w.right_descents:
                        x = w.rmul(s)
                        if x not in seen:
                            seen.add(x)
                            nxt.append(x)
                            if len(seen) > cap:
                                raise NotSphericalError(f"parabolic enumeration exceeded cap {cap}")
            frontier = nxt
        self._parabolic[I] = out

    def parabolic_elements(self, I: Iterable[int]) -> list["GroupElement"]:
        return list(self.enumerate_parabolic(I))

    def longest_element(self, I: Iterable[int]) -> "GroupElement":
        I = self.check_subset(I)
        if not self.is_spherical(I):
            raise NotSphericalError(f"W_I is infinite for I={sorted(I)}")
        if I not in self._longest:
            w = self._identity
            gens = sorted(I)
            while True:
                for s in gens:
                    if s not in w.right_descents:
                        w = w.rmul(s)
                        break
                else:
                    break
            self._longest[I] = w
        return self._longest[I]


def _det(M: list[list]) -> object:
    """Division-free determinant by dynamic programming over column subsets."""
    n = len(M)
    if n == 0:
        return 1
    # minors[S] = det of rows 0..|S|-1, columns S (bitmask)
    minors = {0: 1}
    for r in range(n):
        nxt = {}
        for S, d in minors.items():
            if d == 0:
                continue
            # sign = (-1)^(number of chosen columns greater than c)
            for c in range(n):
                bit = 1 << c
                if S & bit:
                    continue
                x = M[r][c]
                if x == 0:
                    continue
                higher = bin(S >> (c + 1)).count("1")
                term = d * x
                if higher % 2:
                    term = -term
                T = S | bit
                nxt[T] = nxt.get(T, 0) + term
        minors = nxt
    return minors.get((1 << n) - 1, 0)


def _positive_definite(W: CoxeterSystem, I: list[int]) -> bool:
    if not I:
        return True
    orders = [W.matrix[s][t] for s in I for t in I if s != t and W.matrix[s][t] != INF]
    if any(W.matrix[s][t] == INF for s in I for t in I if s != t):
        return False
    F = field_for_orders(orders)
    G = [[2 if s == t else -F.two_cos(1, W.matrix[s][t]) for t in I] for s in I]
    for k in range(1, len(I) + 1):
        if sign(_det([row[:k] for row in G[:k]])) <= 0:
            return False
    return True


class GroupElement:
    """An element of W.  Immutable; equality and hashing use the matrix."""

    __slots__ = ("system", "cols", "icols", "_hash", "_length", "_word", "_rd", "_ld", "_r", "_l")

    def __init__(self, system: CoxeterSystem, cols: tuple, icols: tuple, length: int | None = None):
        self.system = system
        self.cols = cols
        self.icols = icols
        self._hash = hash(cols)
        self._length = length
        self._word = None
        self._rd = None
        self._ld = None
        self._r = None
        self._l = None

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self._hash == other._hash and self.cols == other.cols

    def __hash__(self):
        return self._hash

    def is_identity(self) -> bool:
        return self.cols == self.system._identity.cols

    def rmul(self, s: int) -> "GroupElement":
        """w * s"""
        if self._r is None:
            self._r = [None] * self.system.rank
        x = self._r[s]
        if x is None:
            W = self.system
            ln = None
            if self._length is not None:
                ln = self._length - 1 if s in self.right_descents else self._length + 1
            x = W._make(W._right(self.cols, s), W._left(self.icols, s), ln)
            self._r[s] = x
            if x._r is None:
                x._r = [None] * W.rank
            x._r[s] = self
        return x

    def lmul(self, s: int) -> "GroupElement":
        """s * w"""
        if self._l is None:
            self._l = [None] * self.system.rank
        x = self._l[s]
        if x is None:
            W = self.system
            ln = None
            if self._length is not None:
                ln = self._length - 1 if s in self.left_descents else self._length + 1
            x = W._make(W._left(self.cols, s), W._right(self.icols, s), ln)
            self._l[s] = x
            if x._l is None:
                x._l = [None] * W.rank
            x._l[s] = self
        return x

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.system is not self.system:
            raise ValueError("elements of different Coxeter systems")
        W = self.system
        return W._make(W._matmul(self.cols, other.cols), W._matmul(other.icols, self.icols))

    def inverse(self) -> "GroupElement":
        return self.system._make(self.icols, self.cols, self._length)

    @property
    def right_descents(self) -> frozenset:
        if self._rd is None:
            W = self.system
            self._rd = frozenset(s for s in range(W.rank) if W._col_negative(self.cols, s))
        return self._rd

    @property
    def left_descents(self) -> frozenset:
        if self._ld is None:
            W = self.system
            self._ld = frozenset(s for s in range(W.rank) if W._col_negative(self.icols, s))
        return self._ld

    @property
    def word(self) -> tuple[int, ...]:
        """Shortlex-least reduced word (lexicographic on generator indices)."""
        if self._word is None:
            chain = []
            w = self
            while w._word is None:
                ld = w.left_descents
                if not ld:
                    w._word = ()
                    break
                s = min(ld)
                chain.append((w, s))
                w = w.lmul(s)
            tail = w._word
            for x, s in reversed(chain):
                tail = (s,) + tail
                x._word = tail
                x._length = len(tail)
        return self._word

    @property
    def length(self) -> int:
        if self._length is None:
            self._length = len(self.word)
        return self._length

    def __len__(self):
        return self.length

    def label(self) -> str:
        w = self.word
        if not w:
            return "e"
        return ",".join(str(s) for s in w)

    def __repr__(self):
        return f"<w {self.label()}>"

    def sort_key(self):
        return (self.length, self.word)


# functional surface --------------------------------------------------------

def new_system(matrix, labels=None) -> CoxeterSystem:
    return CoxeterSystem(matrix, labels)


def from_word(W: CoxeterSystem, word: Iterable[int]) -> GroupElement:
    return W.from_word(word)


def length(w: GroupElement) -> int:
    return w.length


def descents(w: GroupElement, side: str = "right") -> frozenset:
    if side == "right":
        return w.right_descents
    if side == "left":
        return w.left_descents
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def is_spherical(W: CoxeterSystem, I: Iterable[int]) -> bool:
    return W.is_spherical(I)


def enumerate_parabolic(W: CoxeterSystem, I: Iterable[int], cap: int = DEFAULT_ENUM_CAP):
    return W.enumerate_parabolic(I, cap)


def longest_element(W: CoxeterSystem, I: Iterable[int]) -> GroupElement:
    return W.longest_element(I)
