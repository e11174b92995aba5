"""Coxeter matrices of the standard families in Bourbaki labelling.

Generator ``i`` (0-based) corresponds to Bourbaki node ``i + 1`` for the
finite types.  For the affine types the extra node is generator 0 and the
remaining nodes keep their Bourbaki numbers.
"""

from __future__ import annotations

from .coxeter import INF, CoxeterSystem


def _empty(n: int) -> list[list[int]]:
    return [[1 if i == j else 2 for j in range(n)] for i in range(n)]


def _bond(m, i, j, order):
    m[i][j] = m[j][i] = order


def coxeter_matrix(kind: str, n: int | None = None) -> list[list[int]]:
    """Coxeter matrix for ``kind`` in {A, B, C, D, E, F, G, H, I, At, Ct}.

    ``I`` takes the dihedral order as ``n``; ``At``/``Ct`` are the affine
    types with rank ``n + 1``.
    """
    k = kind.upper() if kind not in ("At", "Ct") else kind
    if k == "A":
        m = _empty(n)
        for i in range(n - 1):
            _bond(m, i, i + 1, 3)
    elif k in ("B", "C"):
        m = coxeter_matrix("A", n)
        if n >= 2:
            _bond(m, n - 2, n - 1, 4)
    elif k == "D":
        if n < 4:
            raise ValueError("D_n needs n >= 4")
        m = coxeter_matrix("A", n - 1)
        m = [row + [2] for row in m] + [[2] * (n - 1) + [1]]
        _bond(m, n - 3, n - 1, 3)
    elif k == "E":
        if n not in (6, 7, 8):
            raise ValueError("E_n needs n in 6, 7, 8")
        m = _empty(n)
        # 1-3, 3-4, 4-5, ..., (n-1)-n and 2-4
        edges = [(1, 3), (2, 4)] + [(i, i + 1) for i in range(3, n)]
        for a, b in edges:
            _bond(m, a - 1, b - 1, 3)
    elif k == "F":
        m = _empty(4)
        _bond(m, 0, 1, 3)
        _bond(m, 1, 2, 4)
        _bond(m, 2, 3, 3)
    elif k == "G":
        m = _empty(2)
        _bond(m, 0, 1, 6)
    elif k == "H":
        if n not in (3, 4):
            raise ValueError("H_n needs n in 3, 4")
        m = coxeter_matrix("A", n)
        _bond(m, 0, 1, 5)
    elif k == "I":
        m = _empty(2)
        _bond(m, 0, 1, n)
    elif k == "At":
        if n < 1:
            raise ValueError("affine A_n needs n >= 1")
        if n == 1:
            return [[1, INF], [INF, 1]]
        m = _empty(n + 1)
        for i in range(n + 1):
            _bond(m, i, (i + 1) % (n + 1), 3)
    elif k == "Ct":
        if n < 2:
            raise ValueError("affine C_n needs n >= 2")
        m = _empty(n + 1)
        for i in range(n):
            _bond(m, i, i + 1, 3)
        _bond(m, 0, 1, 4)
        _bond(m, n - 1, n, 4)
    else:
        raise ValueError(f"unknown Coxeter type {kind!r}")
    return m


def coxeter_system(kind: str, n: int | None = None) -> CoxeterSystem:
    return CoxeterSystem(coxeter_matrix(kind, n))


def parse_type(spec: str) -> CoxeterSystem:
    """``"F4"``, ``"E8"``, ``"I2(5)"``, ``"A~2"``, ``"C~3"``."""
    spec = spec.strip()
    if spec.upper().startswith("I2(") and spec.endswith(")"):
        return coxeter_system("I", int(spec[3:-1]))
    if "~" in spec:
        letter, rest = spec.split("~", 1)
        return coxeter_system(letter.upper() + "t", int(rest))
    return coxeter_system(spec[0], int(spec[1:]))
