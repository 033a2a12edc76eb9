"""Solution blocks: parametrized families of ramified rational Riccati solutions.

A block is one similarity class: a family u(x; g) = num/den with numerator and
denominator polynomials in x^(1/q), linear-homogeneous in projective
parameters g_1..g_s, such that every specialization at g != 0 is an exact
solution.  Blocks are canonicalized to a reduced-echelon parameter basis so
that output is deterministic, and compared by exact containment of families.
"""

from __future__ import annotations

from gmpy2 import mpq as QQ

from .arrangement import MultiPoly
from .exactpoly import Poly, P_ONE, poly_gcd
from .mahler import MahlerOperator
from .params import ParamPoly, bareiss_rank_multipoly, normalize_param_fraction


class SolutionBlock:
    """One similarity class of Riccati solutions, bijectively parametrized."""

    __slots__ = ("lam", "q", "num", "den", "s")

    def __init__(self, lam, q: int, num: ParamPoly, den: ParamPoly):
        num, den = _canonical_pair(num, den)
        object.__setattr__(self, "lam", QQ(lam))
        object.__setattr__(self, "q", int(q))
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "s", num.nvars)

    def __setattr__(self, *a):
        raise AttributeError("SolutionBlock is immutable")

    @property
    def projective_dimension(self) -> int:
        return self.s - 1

    def specialize(self, gvals):
        """(P, Q) polynomials in t = x^(1/q) for a parameter choice."""
        P = self.num.specialize(gvals)
        Q = self.den.specialize(gvals)
        if P.is_zero or Q.is_zero:
            raise ValueError("specialization degenerates")
        g = poly_gcd(P, Q)
        if g.degree > 0:
            P, Q = P.exact_div(g), Q.exact_div(g)
        return P, Q

    def generic_member(self):
        return self.specialize(tuple(QQ(2) ** i for i in range(self.s)))

    def valuation(self):
        """Valuation of the family in x (same for every g != 0)."""
        return QQ(self.num.x_valuation() - self.den.x_valuation(), self.q)

    def sort_key(self):
        return (
            str(self.lam),
            self.q,
            self.num.x_valuation() - self.den.x_valuation(),
            self.den.x_degree(),
            self.num.x_degree(),
            self.to_strings()[0],
            self.to_strings()[1],
        )

    def to_strings(self):
        var = "x" if self.q == 1 else f"x^(1/{self.q})"
        return self.num.to_string(var), self.den.to_string(var)

    def __eq__(self, other):
        if not isinstance(other, SolutionBlock):
            return NotImplemented
        return (
            self.lam == other.lam
            and self.q == other.q
            and self.num == other.num
            and self.den == other.den
        )

    def __repr__(self):
        n, d = self.to_strings()
        return f"SolutionBlock(lambda={self.lam}, q={self.q}, ({n})/({d}))"


def block_from_pair(lam, q, num: ParamPoly, den: ParamPoly) -> SolutionBlock:
    num, den = normalize_param_fraction(num, den)
    return SolutionBlock(lam, q, num, den)


def block_from_single(lam, q, P: Poly, Q: Poly) -> SolutionBlock:
    g = poly_gcd(P, Q)
    if g.degree > 0:
        P, Q = P.exact_div(g), Q.exact_div(g)
    return SolutionBlock(
        lam, q, ParamPoly.linear([P]), ParamPoly.linear([Q])
    )


def _canonical_pair(num: ParamPoly, den: ParamPoly):
    """Reduced-echelon parameter basis; common content removed; deterministic."""
    if num.is_zero or den.is_zero:
        raise ValueError("zero numerator or denominator")
    if not (num.is_linear_homogeneous() and den.is_linear_homogeneous()):
        raise ValueError("block pair must be linear-homogeneous in g")
    g = poly_gcd(num.poly_content(), den.poly_content())
    if g.degree > 0:
        num = num.exact_div_poly(g)
        den = den.exact_div_poly(g)
    s = num.nvars
    dn = num.x_degree()
    dd = den.x_degree()
    rows = []
    for j in range(s):
        e = [0] * s
        e[j] = 1
        e = tuple(e)
        pN = num.terms.get(e, Poly())
        pD = den.terms.get(e, Poly())
        row = [pN[i] for i in range(dn + 1)] + [pD[i] for i in range(dd + 1)]
        rows.append(row)
    red, _ = _rref_rows(rows)
    Nterms, Dterms = {}, {}
    snew = len(red)
    for j, row in enumerate(red):
        e = [0] * snew
        e[j] = 1
        e = tuple(e)
        pN = Poly(row[: dn + 1])
        pD = Poly(row[dn + 1 :])
        if not pN.is_zero:
            Nterms[e] = pN
        if not pD.is_zero:
            Dterms[e] = pD
    num2 = ParamPoly(snew, Nterms)
    den2 = ParamPoly(snew, Dterms)
    if num2.is_zero or den2.is_zero:
        raise ValueError("degenerate block: zero numerator or denominator family")
    # integer-primitive common scaling
    scale = _common_scale(list(num2.terms.values()) + list(den2.terms.values()))
    if scale != 1:
        num2 = num2 * scale
        den2 = den2 * scale
    return num2, den2


def _common_scale(polys):
    from math import gcd as int_gcd

    num_g, den_l = 0, 1
    first = None
    for p in polys:
        for c in p.coeffs:
            if c:
                if first is None:
                    first = c
                num_g = int_gcd(num_g, int(abs(c.numerator)))
                den_l = den_l * int(c.denominator) // int_gcd(den_l, int(c.denominator))
    if not num_g:
        return QQ(1)
    scale = QQ(den_l, num_g)
    if first is not None and first < 0:
        scale = -scale
    return scale


def _rref_rows(rows):
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    pr = 0
    for c in range(ncols):
        piv = None
        for i in range(pr, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[pr], m[piv] = m[piv], m[pr]
        inv = QQ(1) / m[pr][c]
        m[pr] = [e * inv for e in m[pr]]
        for i in range(nrows):
            if i != pr and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[pr])]
        pivots.append(c)
        pr += 1
    return m[:pr], pivots


# -- residuals ---------------------------------------------------------------


def riccati_cleared_param(
    L: MahlerOperator, P: ParamPoly, Q: ParamPoly, ramification: int = 1
) -> ParamPoly:
    """Cleared residual sum(l_i (P)_i (M^i Q)_{r-i}) over Q[g][t], x = t^ram."""
    b = L.b
    r = L.order
    s = P.nvars
    one = ParamPoly.from_poly(s, P_ONE)
    risingP = [one]
    for i in range(r):
        risingP.append(risingP[-1] * P.substitute_power(b ** i))
    out = ParamPoly(s)
    for i in range(r + 1):
        cf = L.coeff(i)
        if cf.is_zero:
            continue
        term = risingP[i] * cf.substitute_power(ramification)
        prod = one
        for j in range(i, r):
            prod = prod * Q.substitute_power(b ** j)
        out = out + term * prod
    return out


def block_residual_is_zero(L: MahlerOperator, block: SolutionBlock) -> bool:
    """Exact symbolic check that every specialization solves the Riccati equation."""
    return riccati_cleared_param(L, block.num, block.den, block.q).is_zero


# -- containment and dedupe ---------------------------------------------------


def block_contains(outer: SolutionBlock, inner: SolutionBlock) -> bool:
    """Is every member of inner's family a member of outer's family?"""
    if inner.lam != outer.lam:
        return False
    q = _lcm(inner.q, outer.q)
    n1 = inner.num.substitute_power(q // inner.q)
    d1 = inner.den.substitute_power(q // inner.q)
    n2 = outer.num.substitute_power(q // outer.q)
    d2 = outer.den.substitute_power(q // outer.q)
    s1, s2 = inner.s, outer.s
    if s1 > s2:
        return False
    # S(g) c = 0 solvable with c != 0 for all g  <=>  rank over Q(g) < s2,
    # where column j carries the x-coefficients of  n1(g) d2_j - n2_j d1(g).
    cols = []
    for j in range(s2):
        e = [0] * s2
        e[j] = 1
        e = tuple(e)
        d2j = d2.terms.get(e, Poly())
        n2j = n2.terms.get(e, Poly())
        cols.append((n1 * d2j) - (d1 * n2j))
    top = max(c.x_degree() for c in cols) + 1
    rows = []
    for xe in range(top):
        row = [c.coeff_of_x(xe) for c in cols]
        if any(row):
            rows.append(row)
    if not rows:
        return True
    return bareiss_rank_multipoly(rows) < s2


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def dedupe_blocks(blocks):
    """Drop any block whose family is contained in another block's family."""
    blocks = list(blocks)
    out = []
    for i, b in enumerate(blocks):
        redundant = False
        for j, other in enumerate(blocks):
            if i == j:
                continue
            if block_contains(other, b):
                if block_contains(b, other) and i < j:
                    continue  # mutual containment: keep the first occurrence
                redundant = True
                break
        if not redundant:
            out.append(b)
    out.sort(key=lambda b: b.sort_key())
    return out


def blocks_equal_as_sets(left, right) -> bool:
    """Same families on both sides, up to order (mutual containment per block)."""
    left = dedupe_blocks(left)
    right = dedupe_blocks(right)
    if len(left) != len(right):
        return False
    for b in left:
        if not any(
            block_contains(c, b) and block_contains(b, c) for c in right
        ):
            return False
    return True
