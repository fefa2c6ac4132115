"""Exact LDL^T factorisation of small symmetric matrices and the resulting
sum-of-squares decomposition of PSD quadratic forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import NotPSDError
from .forms import Poly
from .realalg import sign


@dataclass
class LDLT:
    """``P^T M P = L D L^T`` where ``P`` sends position ``i`` to index
    ``perm[i]``."""

    L: List[list]
    D: list
    perm: List[int]

    def recompose(self) -> List[list]:
        n = len(self.D)
        LD = [[self.L[i][k] * self.D[k] for k in range(n)] for i in range(n)]
        PMP = [[sum((LD[i][k] * self.L[j][k] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
        M = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                M[self.perm[i]][self.perm[j]] = PMP[i][j]
        return M


@dataclass
class NotPSD:
    """A vector ``witness`` with ``witness^T M witness = value < 0``."""

    witness: list
    value: object


def quad_value(M: Sequence[Sequence], v: Sequence):
    n = len(v)
    return sum((M[i][j] * v[i] * v[j] for i in range(n) for j in range(n)), Fraction(0))


def ldlt_psd(M: Sequence[Sequence], pivoting: bool = True):
    """Symmetric elimination with largest-diagonal pivoting.

    Returns :class:`LDLT` when ``M`` is PSD and :class:`NotPSD` otherwise.
    With ``pivoting=False`` the natural order is used until a zero pivot
    forces a choice.
    """
    n = len(M)
    for i in range(n):
        for j in range(n):
            if M[i][j] != M[j][i]:
                raise ValueError("matrix is not symmetric")
    S = [[M[i][j] for j in range(n)] for i in range(n)]
    remaining = list(range(n))
    order: List[int] = []
    mult = {}  # (row, pivot) -> multiplier
    D = []

    def lift(w: dict) -> list:
        v = [Fraction(0)] * n
        for i, c in w.items():
            v[i] = c
        for k in reversed(order):
            acc = Fraction(0)
            for i in range(n):
                l = mult.get((i, k))
                if l is not None:
                    acc = acc + l * v[i]
            v[k] = -acc
        return v

    while remaining:
        if pivoting or sign(S[remaining[0]][remaining[0]]) == 0:
            k = remaining[0]
            for i in remaining[1:]:
                if S[i][i] > S[k][k]:
                    k = i
        else:
            k = remaining[0]
        sk = sign(S[k][k])
        if sk < 0:
            v = lift({k: Fraction(1)})
            return NotPSD(v, quad_value(M, v))
        if sk == 0:
            for a in remaining:
                if sign(S[a][a]) < 0:
                    v = lift({a: Fraction(1)})
                    return NotPSD(v, quad_value(M, v))
            for a in remaining:
                for b in remaining:
                    if a < b and sign(S[a][b]) != 0:
                        v = lift({a: Fraction(1), b: Fraction(-sign(S[a][b]))})
                        return NotPSD(v, quad_value(M, v))
            order.extend(remaining)
            D.extend([Fraction(0)] * len(remaining))
            remaining = []
            break
        remaining.remove(k)
        order.append(k)
        D.append(S[k][k])
        inv = 1 / S[k][k]
        for i in remaining:
            if S[i][k] != 0:
                mult[(i, k)] = S[i][k] * inv
        for i in remaining:
            li = mult.get((i, k))
            if li is None:
                continue
            for j in remaining:
                lj = mult.get((j, k))
                if lj is None:
                    continue
                S[i][j] = S[i][j] - li * lj * S[k][k]
    pos = {idx: p for p, idx in enumerate(order)}
    L = [[Fraction(0)] * n for _ in range(n)]
    for p in range(n):
        L[p][p] = Fraction(1)
    for (i, k), l in mult.items():
        L[pos[i]][pos[k]] = l
    return LDLT(L, D, order)


def gram_matrix(q: Poly, basis: Optional[Sequence[Tuple[int, ...]]] = None) -> Tuple[List[list], List[Tuple[int, ...]]]:
    """Gram matrix of a quadratic form in the variables of ``q``.

    ``basis`` lists exponent vectors of the linear monomials; by default
    the unit vectors of ``q.vars``.
    """
    n = q.nvars
    if basis is None:
        basis = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    m = len(basis)
    G = [[Fraction(0)] * m for _ in range(m)]
    seen = set()
    for i in range(m):
        for j in range(i, m):
            e = tuple(a + b for a, b in zip(basis[i], basis[j]))
            if e in seen:
                raise ValueError("basis products are not distinct")
            seen.add(e)
            c = q.coefficient(e)
            if i == j:
                G[i][i] = c
            else:
                G[i][j] = G[j][i] = c / 2
    for e in q.terms:
        if e not in seen:
            raise ValueError(f"monomial {e} outside the span of the basis products")
    return G, list(basis)


def squares_from_ldlt(res: LDLT, basis_forms: Sequence[Poly]) -> List[Tuple[object, Poly]]:
    """Turn ``P^T M P = L D L^T`` into ``(weight, form)`` pairs with
    ``sum weight*form**2 = b^T M b`` for the basis vector ``b``."""
    n = len(res.D)
    out = []
    vars = basis_forms[0].vars
    for k in range(n):
        if sign(res.D[k]) == 0:
            continue
        form = Poly.zero(vars)
        for i in range(n):
            l = res.L[i][k]
            if l != 0:
                form = form + basis_forms[res.perm[i]].scale(l)
        out.append((res.D[k], form))
    return out


def sos_from_gram(M: Sequence[Sequence], basis_forms: Sequence[Poly], pivoting: bool = True):
    res = ldlt_psd(M, pivoting=pivoting)
    if isinstance(res, NotPSD):
        raise NotPSDError("Gram matrix is not positive semidefinite", witness=res.witness, value=res.value)
    return squares_from_ldlt(res, basis_forms)


def sos_from_quadratic(q: Poly, pivoting: bool = True) -> List[Tuple[object, Poly]]:
    """``q = sum w_i * l_i**2`` with ``w_i > 0`` and linear ``l_i``."""
    if q.is_zero():
        return []
    if not q.is_homogeneous(2):
        raise ValueError("expected a quadratic form")
    M, basis = gram_matrix(q)
    gens = Poly.gens(q.vars)
    return sos_from_gram(M, list(gens), pivoting=pivoting)


def expand_squares(terms: Sequence[Tuple[object, Poly]], vars=None) -> Poly:
    if not terms:
        return Poly.zero(vars or ("x", "y", "z"))
    acc = Poly.zero(terms[0][1].vars)
    for w, f in terms:
        acc = acc + (f * f).scale(w)
    return acc
