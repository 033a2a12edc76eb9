"""Polynomials in x with coefficients polynomial in block parameters g.

A ParamPoly maps g-exponent tuples to univariate Poly in x.  Solution blocks
use numerators and denominators that are linear-homogeneous in g; residual
certification multiplies such objects, so general g-degrees are supported.
"""

from __future__ import annotations

from gmpy2 import mpq as QQ

from .arrangement import MultiPoly
from .exactpoly import Poly, P_ONE, poly_gcd


class ParamPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        t = {}
        if terms:
            for e, p in (terms.items() if isinstance(terms, dict) else terms):
                if not isinstance(p, Poly):
                    p = Poly.const(p)
                if not p.is_zero:
                    e = tuple(int(v) for v in e)
                    if len(e) != nvars:
                        raise ValueError("bad exponent length")
                    if e in t:
                        t[e] = t[e] + p
                        if t[e].is_zero:
                            del t[e]
                    else:
                        t[e] = p
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", dict(t))

    def __setattr__(self, *a):
        raise AttributeError("ParamPoly is immutable")

    @staticmethod
    def from_poly(nvars: int, p: Poly) -> "ParamPoly":
        return ParamPoly(nvars, {(0,) * nvars: p})

    @staticmethod
    def linear(coeff_polys) -> "ParamPoly":
        """sum g_j * coeff_polys[j]."""
        n = len(coeff_polys)
        terms = {}
        for j, p in enumerate(coeff_polys):
            e = [0] * n
            e[j] = 1
            terms[tuple(e)] = p
        return ParamPoly(n, terms)

    @property
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def g_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def x_degree(self) -> int:
        return max((p.degree for p in self.terms.values()), default=-1)

    def x_valuation(self) -> int:
        return min((p.valuation for p in self.terms.values()), default=-1)

    def is_linear_homogeneous(self) -> bool:
        return all(sum(e) == 1 for e in self.terms)

    def __eq__(self, other):
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __add__(self, other):
        t = dict(self.terms)
        for e, p in other.terms.items():
            if e in t:
                s = t[e] + p
                if s.is_zero:
                    del t[e]
                else:
                    t[e] = s
            else:
                t[e] = p
        return ParamPoly(self.nvars, t)

    def __neg__(self):
        return ParamPoly(self.nvars, {e: -p for e, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ParamPoly):
            t = {}
            for e1, p1 in self.terms.items():
                for e2, p2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    pr = p1 * p2
                    if e in t:
                        t[e] = t[e] + pr
                    else:
                        t[e] = pr
            return ParamPoly(self.nvars, t)
        if isinstance(other, Poly):
            return ParamPoly(
                self.nvars, {e: p * other for e, p in self.terms.items()}
            )
        return ParamPoly(self.nvars, {e: p * QQ(other) for e, p in self.terms.items()})

    __rmul__ = __mul__

    def substitute_power(self, m: int) -> "ParamPoly":
        return ParamPoly(
            self.nvars, {e: p.substitute_power(m) for e, p in self.terms.items()}
        )

    def shift(self, k: int) -> "ParamPoly":
        return ParamPoly(self.nvars, {e: p.shift(k) for e, p in self.terms.items()})

    def specialize(self, gvals) -> Poly:
        out = Poly()
        for e, p in self.terms.items():
            c = QQ(1)
            for i, pw in enumerate(e):
                if pw:
                    c *= QQ(gvals[i]) ** pw
            if c:
                out = out + p * c
        return out

    def coeff_of_x(self, j: int) -> MultiPoly:
        terms = {}
        for e, p in self.terms.items():
            c = p[j]
            if c:
                terms[e] = c
        return MultiPoly(self.nvars, terms)

    def poly_content(self) -> Poly:
        g = Poly()
        for p in self.terms.values():
            g = poly_gcd(g, p)
            if g.degree == 0:
                break
        return g

    def exact_div_poly(self, d: Poly) -> "ParamPoly":
        return ParamPoly(self.nvars, {e: p.exact_div(d) for e, p in self.terms.items()})

    def to_string(self, var: str = "x", names=None) -> str:
        if self.is_zero:
            return "0"
        names = names or [f"g{i+1}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms):
            p = self.terms[e]
            mono = "*".join(
                names[i] if pw == 1 else f"{names[i]}^{pw}"
                for i, pw in enumerate(e)
                if pw
            )
            if not mono:
                parts.append(p.to_string(var))
            elif p == P_ONE:
                parts.append(mono)
            else:
                parts.append(f"({p.to_string(var)})*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"ParamPoly({self.to_string()})"


# -- exact linear algebra over Q[g] ----------------------------------------


def _mp_exact_div(a: MultiPoly, d: MultiPoly) -> MultiPoly:
    if d.is_zero:
        raise ZeroDivisionError
    if a.is_zero:
        return a
    n = a.nvars
    rem = a
    qt = {}
    dl = d.lead_term()
    dc = d.terms[dl]
    while rem:
        lt = rem.lead_term()
        if not all(x >= y for x, y in zip(lt, dl)):
            raise ArithmeticError("division not exact")
        e = tuple(x - y for x, y in zip(lt, dl))
        c = rem.terms[lt] / dc
        qt[e] = qt.get(e, QQ(0)) + c
        rem = rem - MultiPoly(n, {e: c}) * d
    return MultiPoly(n, qt)


def bareiss_rank_multipoly(rows) -> int:
    """Exact rank over Q(g) of a matrix of MultiPoly entries."""
    if not rows:
        return 0
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    n = m[0][0].nvars if ncols else 0
    prev = MultiPoly.const(n, 1)
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, nrows):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pele = m[rank][col]
        for i in range(rank + 1, nrows):
            row = m[i]
            f = row[col]
            for j in range(col + 1, ncols):
                num = row[j] * pele - m[rank][j] * f
                row[j] = _mp_exact_div(num, prev) if num else num
            row[col] = MultiPoly(n)
        prev = pele
        rank += 1
        if rank == nrows:
            break
    return rank


# -- generic reduction of parametric fractions -------------------------------


def _sample_points(nvars: int, count: int):
    pts = []
    t = 2
    while len(pts) < count:
        pts.append(tuple(QQ(t) ** i for i in range(nvars)))
        t += 1
    return pts


def normalize_param_fraction(num: ParamPoly, den: ParamPoly):
    """Remove the generic common factor of a parametric fraction.

    Both inputs must be linear-homogeneous in g (or g-free).  Returns an
    equivalent pair, coprime for generic parameter values, with the common
    x-content removed.  Falls back to the content-reduced input pair when the
    reconstruction cannot be certified.
    """
    if num.is_zero or den.is_zero:
        raise ValueError("zero numerator or denominator")
    gN, gD = num.poly_content(), den.poly_content()
    g = poly_gcd(gN, gD)
    if g.degree > 0:
        num = num.exact_div_poly(g)
        den = den.exact_div_poly(g)
    s = num.nvars
    if s == 0 or (num.g_degree() <= 0 and den.g_degree() <= 0):
        a = num.terms.get((0,) * s, Poly())
        b = den.terms.get((0,) * s, Poly())
        gg = poly_gcd(a, b)
        if gg.degree > 0:
            a, b = a.exact_div(gg), b.exact_div(gg)
        return ParamPoly.from_poly(s, a), ParamPoly.from_poly(s, b)

    samples = _sample_points(s, max(2 * s + 3, 5))
    gamma = None
    reduced = []
    for pt in samples:
        P = num.specialize(pt)
        Q = den.specialize(pt)
        if P.is_zero or Q.is_zero:
            continue
        h = poly_gcd(P, Q)
        reduced.append((pt, P, Q, h))
        gdeg = h.degree
        gamma = gdeg if gamma is None else min(gamma, gdeg)
    if gamma is None or gamma == 0:
        return num, den
    dn = num.x_degree() - gamma
    dd = den.x_degree() - gamma
    sol = _reconstruct_linear_pair(num, den, reduced, dn, dd)
    if sol is None:
        return num, den
    return sol


def _reconstruct_linear_pair(num, den, reduced, dn, dd):
    s = num.nvars
    if not (num.is_linear_homogeneous() and den.is_linear_homogeneous()):
        return None
    nunk = s * (dn + 1) + s * (dd + 1)
    rows = []
    for pt, P, Q, h in reduced:
        Pr = P.exact_div(h)
        Qr = Q.exact_div(h)
        # N(x; pt) * Qr - Pr * D(x; pt) = 0
        top = max(dn + Qr.degree, dd + Pr.degree) + 1
        for e in range(top):
            row = [QQ(0)] * nunk
            for j in range(s):
                gj = pt[j]
                for k in range(dn + 1):
                    c = Qr[e - k] if 0 <= e - k <= Qr.degree else QQ(0)
                    if c:
                        row[j * (dn + 1) + k] += gj * c
                for k in range(dd + 1):
                    c = Pr[e - k] if 0 <= e - k <= Pr.degree else QQ(0)
                    if c:
                        row[s * (dn + 1) + j * (dd + 1) + k] -= gj * c
            if any(row):
                rows.append(row)
    basis = _nullspace(rows, nunk)
    if len(basis) != 1:
        return None
    vec = basis[0]
    Nterms = {}
    Dterms = {}
    for j in range(s):
        e = [0] * s
        e[j] = 1
        pN = Poly(vec[j * (dn + 1) : (j + 1) * (dn + 1)])
        pD = Poly(vec[s * (dn + 1) + j * (dd + 1) : s * (dn + 1) + (j + 1) * (dd + 1)])
        if not pN.is_zero:
            Nterms[tuple(e)] = pN
        if not pD.is_zero:
            Dterms[tuple(e)] = pD
    N = ParamPoly(s, Nterms)
    D = ParamPoly(s, Dterms)
    if N.is_zero or D.is_zero:
        return None
    # certify: N * den == D * num identically in (x, g)
    if (N * den - D * num).is_zero:
        return N, D
    return None


def _nullspace(rows, ncols):
    mat = [list(r) for r in rows]
    nrows = len(mat)
    pivots = []
    pr = 0
    for col in range(ncols):
        piv = None
        for i in range(pr, nrows):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            continue
        mat[pr], mat[piv] = mat[piv], mat[pr]
        inv = QQ(1) / mat[pr][col]
        mat[pr] = [e * inv for e in mat[pr]]
        for i in range(nrows):
            if i != pr and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[pr])]
        pivots.append(col)
        pr += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        vec = [QQ(0)] * ncols
        vec[fc] = QQ(1)
        for i, col in enumerate(pivots):
            vec[col] = -mat[i][fc]
        out.append(vec)
    return out
