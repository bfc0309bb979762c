"""Exact integer and rational linear algebra on coordinate tuples.

Vectors are tuples of ``int`` or ``Fraction``; matrices are tuples of rows.
A matrix ``M`` acts on column vectors, so ``mat_vec(M, v)[i] = sum_j M[i][j] v[j]``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

import sympy

Scalar = Union[int, Fraction]
Vector = Tuple[int, ...]
RatVector = Tuple[Fraction, ...]
Matrix = Tuple[Tuple[int, ...], ...]
RatMatrix = Tuple[Tuple[Fraction, ...], ...]

__all__ = [
    "Vector",
    "RatVector",
    "Matrix",
    "RatMatrix",
    "identity",
    "transpose",
    "mat_mul",
    "mat_vec",
    "dot",
    "vec_add",
    "vec_sub",
    "vec_scale",
    "is_zero",
    "is_integral",
    "to_int_vector",
    "to_int_matrix",
    "rational_inverse",
    "matrix_rank",
    "fixed_space_dim",
    "fixed_space_basis",
    "matrix_order",
    "echelon_basis",
    "reduce_mod",
    "block_diagonal",
]


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence[Scalar]]) -> tuple:
    return tuple(zip(*m)) if m else ()


def mat_mul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> tuple:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def mat_vec(m: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def dot(a: Sequence[Scalar], b: Sequence[Scalar]) -> Scalar:
    return sum(x * y for x, y in zip(a, b))


def vec_add(a: Sequence[Scalar], b: Sequence[Scalar]) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence[Scalar], b: Sequence[Scalar]) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c: Scalar, v: Sequence[Scalar]) -> tuple:
    return tuple(c * x for x in v)


def is_zero(v: Iterable[Scalar]) -> bool:
    return all(x == 0 for x in v)


def is_integral(v: Iterable[Scalar]) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def to_int_vector(v: Iterable[Scalar]) -> Vector:
    """Convert an integral rational vector to ints; raises ``ValueError`` otherwise."""
    out = []
    for x in v:
        x = Fraction(x)
        if x.denominator != 1:
            raise ValueError(f"non-integral coordinate {x}")
        out.append(x.numerator)
    return tuple(out)


def to_int_matrix(m: Iterable[Iterable[Scalar]]) -> Matrix:
    return tuple(to_int_vector(row) for row in m)


def _to_sympy(m: Sequence[Sequence[Scalar]]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in m])


def _from_sympy(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def rational_inverse(m: Sequence[Sequence[Scalar]]) -> RatMatrix:
    """Exact inverse; raises ``ZeroDivisionError`` when ``m`` is singular."""
    sm = _to_sympy(m)
    if sm.det() == 0:
        raise ZeroDivisionError("matrix is singular")
    inv = sm.inv()
    return tuple(tuple(_from_sympy(inv[i, j]) for j in range(inv.cols)) for i in range(inv.rows))


def matrix_rank(m: Sequence[Sequence[Scalar]]) -> int:
    if not m or not m[0]:
        return 0
    return int(_to_sympy(m).rank())


def fixed_space_dim(m: Sequence[Sequence[Scalar]]) -> int:
    """Dimension of ``ker(m - 1)`` over the rationals."""
    n = len(m)
    if n == 0:
        return 0
    shifted = [[Fraction(m[i][j]) - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    return len(_to_sympy(shifted).nullspace())


def fixed_space_basis(m: Sequence[Sequence[Scalar]]) -> List[Vector]:
    """Integral basis of ``ker(m - 1)``, primitive vectors from the sympy null space."""
    n = len(m)
    if n == 0:
        return []
    shifted = [[Fraction(m[i][j]) - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    out: List[Vector] = []
    for column in _to_sympy(shifted).nullspace():
        vec = [_from_sympy(x) for x in column]
        scale = math.lcm(*(x.denominator for x in vec))
        ints = [int(x * scale) for x in vec]
        g = math.gcd(*ints)
        out.append(tuple(x // g for x in ints))
    return out


def matrix_order(m: Matrix, limit: int = 10_000) -> int:
    """Multiplicative order of a finite-order integer matrix."""
    n = len(m)
    one = identity(n)
    power = m
    for k in range(1, limit + 1):
        if power == one:
            return k
        power = mat_mul(power, m)
    raise ValueError("matrix does not have finite order")


def echelon_basis(generators: Iterable[Sequence[int]], dim: int) -> List[Vector]:
    """Integer row echelon basis of the lattice spanned by ``generators``.

    Pivots are positive and the rows come in pivot order, so reduction
    against them (see :func:`reduce_mod`) yields canonical representatives.
    """
    rows = [list(g) for g in generators if any(g)]
    basis: List[Vector] = []
    for col in range(dim):
        if not rows:
            break
        pivots = [r for r in rows if r[col] != 0]
        if not pivots:
            continue
        while len(pivots) > 1:
            pivots.sort(key=lambda r: abs(r[col]))
            head = pivots[0]
            for r in pivots[1:]:
                f = r[col] // head[col]
                for k in range(col, dim):
                    r[k] -= f * head[k]
            pivots = [r for r in pivots if r[col] != 0]
        head = pivots[0]
        if head[col] < 0:
            for k in range(col, dim):
                head[k] = -head[k]
        basis.append(tuple(head))
        rows = [r for r in rows if r is not head and any(r)]
    return basis


def reduce_mod(v: Sequence[int], basis: Sequence[Vector]) -> Vector:
    """Canonical representative of ``v`` modulo the lattice with echelon ``basis``."""
    out = list(v)
    for row in basis:
        p = next(i for i, x in enumerate(row) if x)
        f = out[p] // row[p]
        if f:
            out = [a - f * b for a, b in zip(out, row)]
    return tuple(out)


def block_diagonal(blocks: Sequence[Sequence[Sequence[int]]]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    offset = 0
    for block in blocks:
        for i, row in enumerate(block):
            for j, x in enumerate(row):
                out[offset + i][offset + j] = x
        offset += len(block)
    return tuple(tuple(r) for r in out)
