"""Small exact linear algebra over the rationals (row reduction, null
spaces, minimum-norm solutions)."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]


def rref(A: Sequence[Sequence], rhs: Optional[Sequence] = None) -> Tuple[Matrix, List[int], Optional[list]]:
    """Reduced row echelon form; returns ``(R, pivot_columns, rhs')``."""
    M = [[Fraction(v) for v in row] for row in A]
    b = None if rhs is None else [Fraction(v) for v in rhs]
    rows = len(M)
    cols = len(M[0]) if M else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        if b is not None:
            b[r], b[piv] = b[piv], b[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        if b is not None:
            b[r] *= inv
        for i in range(rows):
            if i != r and M[i][c] != 0:
                k = M[i][c]
                M[i] = [a - k * p for a, p in zip(M[i], M[r])]
                if b is not None:
                    b[i] -= k * b[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots, b


def nullspace(A: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    """Basis of ``{v : A v = 0}``."""
    if not A:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, pivots, _ = rref(A)
    n = len(R[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> Optional[Tuple[list, Matrix]]:
    """A particular solution of ``A x = b`` and a null-space basis, or
    ``None`` when the system is inconsistent."""
    R, pivots, bb = rref(A, b)
    n = len(R[0])
    for i in range(len(pivots), len(R)):
        if bb[i] != 0:
            return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = bb[i]
    return x, nullspace(A, n)


def min_norm_solution(A: Sequence[Sequence], b: Sequence) -> Optional[list]:
    """The least-Euclidean-norm solution of a consistent system."""
    R, pivots, bb = rref(A, b)
    for i in range(len(pivots), len(R)):
        if bb[i] != 0:
            return None
    rows = [R[i] for i in range(len(pivots))]
    rhs = [bb[i] for i in range(len(pivots))]
    if not rows:
        return [Fraction(0)] * (len(R[0]) if R else 0)
    # x = R^T (R R^T)^-1 rhs
    k = len(rows)
    G = [[sum((a * c for a, c in zip(rows[i], rows[j])), Fraction(0)) for j in range(k)] for i in range(k)]
    sol = solve(G, rhs)
    if sol is None:
        return None
    y = sol[0]
    n = len(rows[0])
    return [sum((rows[i][c] * y[i] for i in range(k)), Fraction(0)) for c in range(n)]
