"""Hermite-Pade machinery: minimal approximant bases and polynomial linear algebra.

The minimal basis is computed by the classical iterative order-basis method:
one approximation order at a time, pivoting on the row of least degree, which
maintains a weak-Popov (hence minimal) basis throughout.  Determinants of
polynomial matrices are computed by evaluation and interpolation.
"""

from __future__ import annotations

from gmpy2 import mpq as QQ

from .exactpoly import Poly, P_ONE, interpolate
from .series import TruncatedSeries


class ApproxSyzygyBasis:
    """Minimal basis of {w in Q[x]^m : w . f^T = O(x^sigma)}."""

    __slots__ = ("rows", "row_degrees", "sigma", "f")

    def __init__(self, rows, row_degrees, sigma, f):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))
        object.__setattr__(self, "row_degrees", tuple(row_degrees))
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "f", tuple(f))

    def __setattr__(self, *a):
        raise AttributeError("ApproxSyzygyBasis is immutable")

    @property
    def m(self):
        return len(self.rows)


class FilteredMatrix:
    """Minimal-basis rows of degree <= B_inf; rho is their number (= rank)."""

    __slots__ = ("rows", "rho", "b_inf", "sigma")

    def __init__(self, rows, b_inf, sigma):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))
        object.__setattr__(self, "rho", len(rows))
        object.__setattr__(self, "b_inf", b_inf)
        object.__setattr__(self, "sigma", sigma)

    def __setattr__(self, *a):
        raise AttributeError("FilteredMatrix is immutable")

    @property
    def width(self):
        return len(self.rows[0]) if self.rows else 0


def minimal_basis(f, sigma: int) -> ApproxSyzygyBasis:
    """Minimal approximant basis of the tuple f of truncated series at order sigma."""
    m = len(f)
    if m == 0:
        raise ValueError("empty tuple")
    for z in f:
        if z.order < sigma:
            raise ValueError("series known to insufficient order")
    rows = [[[QQ(0)] for _ in range(m)] for _ in range(m)]
    for i in range(m):
        rows[i][i] = [QQ(1)]
    degs = [0] * m
    resid = [list(z.coeffs[:sigma]) for z in f]

    for t in range(sigma):
        live = [i for i in range(m) if resid[i][t]]
        if not live:
            continue
        piv = min(live, key=lambda i: (degs[i], i))
        rp = resid[piv]
        vp = rp[t]
        for i in live:
            if i == piv:
                continue
            fac = resid[i][t] / vp
            ri = resid[i]
            for s in range(t, sigma):
                if rp[s]:
                    ri[s] -= fac * rp[s]
            wrow = rows[i]
            prow = rows[piv]
            for j in range(m):
                pj = prow[j]
                if len(pj) == 1 and not pj[0]:
                    continue
                wj = wrow[j]
                if len(wj) < len(pj):
                    wj.extend(QQ(0) for _ in range(len(pj) - len(wj)))
                for e, c in enumerate(pj):
                    if c:
                        wj[e] -= fac * c
        # multiply pivot row by x
        for j in range(m):
            pj = rows[piv][j]
            if len(pj) > 1 or pj[0]:
                pj.insert(0, QQ(0))
        degs[piv] += 1
        for s in range(sigma - 1, t, -1):
            rp[s] = rp[s - 1]
        rp[t] = QQ(0)

    out_rows = []
    for i in range(m):
        polys = [Poly(c) for c in rows[i]]
        lead = polys[i][degs[i]]
        if not lead:
            raise AssertionError("weak-Popov pivot lost")
        if lead != 1:
            inv = QQ(1) / lead
            polys = [p * inv for p in polys]
        out_rows.append(polys)
    return ApproxSyzygyBasis(out_rows, degs, sigma, f)


def filtered_matrix(basis: ApproxSyzygyBasis, b_inf) -> FilteredMatrix:
    """Retain minimal-basis rows of degree at most B_inf (exact rational compare)."""
    b_inf = QQ(b_inf)
    rows = [
        basis.rows[i]
        for i in range(basis.m)
        if QQ(basis.row_degrees[i]) <= b_inf
    ]
    return FilteredMatrix(rows, b_inf, basis.sigma)


# -- polynomial linear algebra ---------------------------------------------


def _eval_matrix(rows, x0):
    return [[e(x0) for e in row] for row in rows]


def _numeric_det(mat):
    n = len(mat)
    m = [row[:] for row in mat]
    det = QQ(1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            return QQ(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = QQ(1) / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                for j in range(c + 1, n):
                    if m[c][j]:
                        m[i][j] -= f * m[c][j]
    return det


def _eval_points():
    yield QQ(0)
    k = 1
    while True:
        yield QQ(k)
        yield QQ(-k)
        k += 1


def poly_det(rows) -> Poly:
    """Determinant of a square matrix of Poly, by evaluation-interpolation."""
    n = len(rows)
    if n == 0:
        return P_ONE
    bound = 0
    for row in rows:
        bound += max((e.degree for e in row if not e.is_zero), default=0)
    pts = []
    gen = _eval_points()
    for _ in range(bound + 1):
        x0 = next(gen)
        pts.append((x0, _numeric_det(_eval_matrix(rows, x0))))
    return interpolate(pts)


def rank_ratfun(rows) -> int:
    """Rank over Q(x) of a matrix of Poly, by fraction-free elimination."""
    if not rows:
        return 0
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = P_ONE
    for col in range(ncols):
        piv = None
        for i in range(rank, nrows):
            if not m[i][col].is_zero:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pele = m[rank][col]
        for i in range(rank + 1, nrows):
            row = m[i]
            if row[col].is_zero:
                for j in range(col + 1, ncols):
                    if not row[j].is_zero:
                        row[j] = (row[j] * pele).exact_div(prev)
            else:
                f = row[col]
                for j in range(col + 1, ncols):
                    row[j] = (row[j] * pele - m[rank][j] * f).exact_div(prev)
                row[col] = Poly()
        prev = pele
        rank += 1
        if rank == nrows:
            break
    return rank


def kernel_cramer(rows):
    """Left-kernel generator of a full-rank (n+1) x n polynomial matrix.

    Returns K = (Delta_1, -Delta_2, ..., (-1)^n Delta_{n+1}) of signed maximal
    minors, with K . Omega = 0 and K != 0.
    """
    nrows = len(rows)
    n = nrows - 1
    if n < 1 or any(len(r) != n for r in rows):
        raise ValueError("matrix must have shape (n+1) x n")
    K = []
    for i in range(nrows):
        sub = [rows[j] for j in range(nrows) if j != i]
        d = poly_det(sub)
        K.append(d if i % 2 == 0 else -d)
    if all(d.is_zero for d in K):
        raise ValueError("matrix is rank deficient")
    return K
