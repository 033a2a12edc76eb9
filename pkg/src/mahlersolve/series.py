"""Truncated power-series solution bases of linear Mahler equations.

The solver splits the coefficient equations of L z = 0 into a finite dense
head, solved exactly over Q, and a tail in which each equation determines one
new coefficient; every head solution therefore extends to a unique exact
series solution, so the computed dimension is exact and independent of the
truncation order.
"""

from __future__ import annotations

from gmpy2 import mpq as QQ

from .mahler import MahlerOperator


class TruncatedSeries:
    """c_0 + c_1 x + ... + c_{order-1} x^{order-1} + O(x^order)."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int | None = None):
        cs = [QQ(c) for c in coeffs]
        if order is None:
            order = len(cs)
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = cs[:order]
        cs.extend(QQ(0) for _ in range(order - len(cs)))
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "order", order)

    def __setattr__(self, *a):
        raise AttributeError("TruncatedSeries is immutable")

    def __getitem__(self, i):
        if 0 <= i < self.order:
            return self.coeffs[i]
        raise IndexError("coefficient beyond truncation order")

    @property
    def valuation(self):
        """Valuation of the known prefix; None if the prefix is zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot extend by truncation")
        return TruncatedSeries(self.coeffs[:order], order)

    def __add__(self, other):
        order = min(self.order, other.order)
        return TruncatedSeries(
            [self.coeffs[i] + other.coeffs[i] for i in range(order)], order
        )

    def __sub__(self, other):
        order = min(self.order, other.order)
        return TruncatedSeries(
            [self.coeffs[i] - other.coeffs[i] for i in range(order)], order
        )

    def scale(self, c) -> "TruncatedSeries":
        c = QQ(c)
        return TruncatedSeries([q * c for q in self.coeffs], self.order)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        va = self.valuation
        vb = other.valuation
        va = self.order if va is None else va
        vb = other.order if vb is None else vb
        order = min(self.order + vb, other.order + va)
        out = [QQ(0)] * order
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            top = min(order - i, other.order)
            for j in range(top):
                bq = other.coeffs[j]
                if bq:
                    out[i + j] += a * bq
        return TruncatedSeries(out, order)

    __rmul__ = __mul__

    def substitute_power(self, m: int) -> "TruncatedSeries":
        """x -> x^m; known modulo x^{m * order}."""
        order = self.order * m
        out = [QQ(0)] * order
        for i, c in enumerate(self.coeffs):
            if c:
                out[i * m] = c
        return TruncatedSeries(out, order)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def is_zero_prefix(self) -> bool:
        return all(not c for c in self.coeffs)

    def __repr__(self):
        terms = [f"{c}*x^{i}" for i, c in enumerate(self.coeffs) if c][:8]
        body = " + ".join(terms) if terms else "0"
        return f"TruncatedSeries({body} + O(x^{self.order}))"


class SeriesBasis:
    """Reduced-echelon (by ascending valuation) basis of series solutions."""

    __slots__ = ("elements", "operator", "sigma")

    def __init__(self, elements, operator: MahlerOperator, sigma: int):
        object.__setattr__(self, "elements", tuple(elements))
        object.__setattr__(self, "operator", operator)
        object.__setattr__(self, "sigma", sigma)

    def __setattr__(self, *a):
        raise AttributeError("SeriesBasis is immutable")

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def apply_operator(L: MahlerOperator, f: TruncatedSeries) -> TruncatedSeries:
    """L f modulo x^order; M^k needs f only modulo x^ceil(order / b^k)."""
    sigma = f.order
    out = [QQ(0)] * sigma
    b = L.b
    for k, cf in enumerate(L.coeffs):
        if cf.is_zero:
            continue
        step = b ** k
        for j, v in enumerate(cf.coeffs):
            if not v:
                continue
            if j >= sigma:
                break
            for i in range((sigma - 1 - j) // step + 1):
                c = f.coeffs[i] if i < f.order else None
                if c is None:
                    break
                if c:
                    out[j + i * step] += v * c
    return TruncatedSeries(out, sigma)


def _recurrence_head_width(L: MahlerOperator) -> tuple[int, int]:
    """(W, n_rec): equations E_n for n >= n_rec each define c_{n - v0} anew."""
    v0 = L.l0.valuation
    b = L.b
    n_rec = v0
    for k in range(1, L.order + 1):
        c = L.coeff(k)
        if c.is_zero:
            continue
        bk = b ** k
        bound = (bk * v0 - c.valuation) // (bk - 1) + 1
        n_rec = max(n_rec, bound)
    n_rec = max(n_rec, v0)
    return n_rec - v0, n_rec


def _nullspace_rref(rows, ncols):
    """Reduced-echelon (leftmost pivots) basis of the right kernel over Q."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    pivots = []
    prow = 0
    for col in range(ncols):
        piv = None
        for i in range(prow, nrows):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            continue
        mat[prow], mat[piv] = mat[piv], mat[prow]
        inv = mat[prow][col]
        mat[prow] = [e / inv for e in mat[prow]]
        for i in range(nrows):
            if i != prow and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * bq for a, bq in zip(mat[i], mat[prow])]
        pivots.append(col)
        prow += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [QQ(0)] * ncols
        vec[fc] = QQ(1)
        for i, col in enumerate(pivots):
            vec[col] = -mat[i][fc]
        basis.append(vec)
    # vectors are indexed by free column (ascending); they are already in
    # reduced echelon form w.r.t. ascending index with pivot coefficient 1
    return basis


def _extend_vector(L: MahlerOperator, coeffs, sigma: int):
    """Unique continuation of a head solution to length sigma."""
    v0 = L.l0.valuation
    lead = L.l0[v0]
    b = L.b
    support = []
    for k, cf in enumerate(L.coeffs):
        bk = b ** k
        for j, v in enumerate(cf.coeffs):
            if v and not (k == 0 and j == v0):
                support.append((bk, j, v))
    out = list(coeffs)
    for m in range(len(out), sigma):
        n = m + v0
        s = QQ(0)
        for bk, j, v in support:
            t = n - j
            if t >= 0 and t % bk == 0:
                i = t // bk
                if i < m:
                    c = out[i]
                    if c:
                        s += v * c
                elif i >= m:
                    raise AssertionError("recurrence head width too small")
        out.append(-s / lead)
    return out


def series_basis(L: MahlerOperator, sigma: int) -> SeriesBasis:
    """Basis of power-series solutions of L z = 0, truncated to x^sigma.

    The basis is in reduced echelon form by ascending valuation and its
    dimension is the exact dimension of the solution space.
    """
    L.assert_standard()
    if sigma < 1:
        raise ValueError("sigma must be >= 1")
    W, n_rec = _recurrence_head_width(L)
    v0 = L.l0.valuation
    b = L.b
    if W == 0:
        return SeriesBasis((), L, sigma)
    rows = []
    for n in range(n_rec):
        row = [QQ(0)] * W
        touched = False
        for k, cf in enumerate(L.coeffs):
            bk = b ** k
            for j, v in enumerate(cf.coeffs):
                if not v:
                    continue
                t = n - j
                if t >= 0 and t % bk == 0:
                    i = t // bk
                    if i >= W:
                        raise AssertionError("head equation out of range")
                    row[i] += v
                    touched = True
        if touched:
            rows.append(row)
    kernel = _nullspace_rref(rows, W)
    elements = []
    for vec in kernel:
        full = _extend_vector(L, vec, max(sigma, W))[:sigma]
        elements.append(TruncatedSeries(full, sigma))
    return SeriesBasis(elements, L, sigma)


def extend_basis(L: MahlerOperator, basis: SeriesBasis, sigma: int) -> SeriesBasis:
    """Extend every element to its unique exact continuation mod x^sigma."""
    if sigma < basis.sigma:
        raise ValueError("cannot shrink a basis")
    if sigma == basis.sigma:
        return basis
    W, _ = _recurrence_head_width(L)
    if basis.sigma < W:
        fresh = series_basis(L, sigma)
        if fresh.dimension != basis.dimension:
            raise AssertionError("basis dimension changed under extension")
        for old, new in zip(basis.elements, fresh.elements):
            if old.coeffs != new.coeffs[: basis.sigma]:
                raise AssertionError("extension does not match prefix")
        return fresh
    elements = [
        TruncatedSeries(_extend_vector(L, z.coeffs, sigma), sigma)
        for z in basis.elements
    ]
    return SeriesBasis(elements, L, sigma)
