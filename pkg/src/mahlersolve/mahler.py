"""Linear Mahler operators and their combinatorial invariants.

An operator sum(l_k(x) M^k) acts through the radix-b substitution
M y(x) = y(x^b), with the commutation M x = x^b M.  This module builds
Newton polygons (lower and upper), characteristic polynomials and the
admissible leading coefficients they define, the per-lambda operator
transforms that reduce ramified solving to power-series solving, exact
operator arithmetic in Q(x)<M> (products, right division, lclm), scalar
annihilators of Mahler systems, and the degree bounds used by the
Hermite-Pade sieve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd as int_gcd

from .exactpoly import QQ, Poly, RatFun, P_ONE, poly_gcd, poly_factor


class MahlerOperator:
    """sum(l_k M^k) with polynomial coefficients, radix b >= 2."""

    __slots__ = ("b", "coeffs")

    def __init__(self, b: int, coeffs, normalize: bool = True):
        if b < 2:
            raise ValueError("radix must be >= 2")
        cs = [c if isinstance(c, Poly) else Poly.const(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        if not cs:
            raise ValueError("zero operator")
        if normalize:
            cs = _primitive_coeffs(cs)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("MahlerOperator is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.coeffs if not c.is_zero)

    def coeff(self, k: int) -> Poly:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Poly()

    @property
    def l0(self) -> Poly:
        return self.coeffs[0]

    @property
    def lr(self) -> Poly:
        return self.coeffs[-1]

    def assert_standard(self):
        """Hypothesis for the solvers: l0 and lr both nonzero."""
        if self.l0.is_zero:
            raise ValueError("operator has zero trailing coefficient l0")

    def support(self):
        """All (k, j, coefficient) with a nonzero monomial l_{k,j} x^j M^k."""
        out = []
        for k, c in enumerate(self.coeffs):
            for j, v in enumerate(c.coeffs):
                if v:
                    out.append((k, j, v))
        return out

    def __eq__(self, other):
        if not isinstance(other, MahlerOperator):
            return NotImplemented
        return self.b == other.b and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.b, self.coeffs))

    def __mul__(self, other: "MahlerOperator") -> "MahlerOperator":
        """Exact product in Q[x]<M> (no normalization)."""
        if self.b != other.b:
            raise ValueError("radix mismatch")
        out = [Poly() for _ in range(self.order + other.order + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            m = self.b ** i
            for j, c in enumerate(other.coeffs):
                if not c.is_zero:
                    out[i + j] = out[i + j] + a * c.substitute_power(m)
        return MahlerOperator(self.b, out, normalize=False)

    def scale_m(self, lam) -> "MahlerOperator":
        """L(x, lam*M), not normalized."""
        lam = QQ(lam)
        return MahlerOperator(
            self.b, [c * lam ** k for k, c in enumerate(self.coeffs)], normalize=False
        )

    def substitute_x_power(self, q: int) -> "MahlerOperator":
        """L(x^q, M), not normalized."""
        return MahlerOperator(
            self.b, [c.substitute_power(q) for c in self.coeffs], normalize=False
        )

    def to_string(self, var: str = "x") -> str:
        parts = []
        for k in range(self.order, -1, -1):
            c = self.coeff(k)
            if c.is_zero:
                continue
            mk = "" if k == 0 else ("M" if k == 1 else f"M^{k}")
            if k == 0:
                body = c.to_string(var)
            elif c == P_ONE:
                body = mk
            elif c == Poly.const(-1):
                body = f"-{mk}"
            else:
                body = f"({c.to_string(var)})*{mk}"
            parts.append(body)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"MahlerOperator(b={self.b}, {self.to_string()})"


def _primitive_coeffs(cs):
    g = Poly()
    for c in cs:
        g = poly_gcd(g, c)
        if g.degree == 0:
            break
    if g.degree > 0:
        cs = [c.exact_div(g) for c in cs]
    # rational content and sign across all coefficients
    num_g = 0
    den_l = 1
    for c in cs:
        for q in c.coeffs:
            if q:
                num_g = int_gcd(num_g, int(abs(q.numerator)))
                den_l = den_l * int(q.denominator) // int_gcd(den_l, int(q.denominator))
    scale = QQ(den_l, num_g) if num_g else QQ(1)
    if cs[-1].lc < 0:
        scale = -scale
    if scale != 1:
        cs = [c * scale for c in cs]
    return cs


# -- Newton polygons ------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    side: str  # "lower" | "upper"
    k_left: int
    j_left: int
    k_right: int
    j_right: int
    slope: object  # QQ
    intercept: object  # QQ
    charpoly: Poly

    def abscissae(self, b: int):
        return (b ** self.k_left, b ** self.k_right)


@dataclass(frozen=True)
class NewtonPolygon:
    side: str
    vertices: tuple  # ((b^k, j), ...)
    edges: tuple


def newton_polygon(L: MahlerOperator, side: str = "lower") -> NewtonPolygon:
    """Convex hull (lower or upper) of the support points (b^k, j) of L."""
    if side not in ("lower", "upper"):
        raise ValueError("side must be 'lower' or 'upper'")
    b = L.b
    pick = min if side == "lower" else max
    cols = {}
    for k, c in enumerate(L.coeffs):
        if c.is_zero:
            continue
        j = c.valuation if side == "lower" else c.degree
        cols[k] = j if k not in cols else pick(cols[k], j)
    ks = sorted(cols)
    pts = [(b ** k, cols[k], k) for k in ks]
    if len(pts) == 1:
        return NewtonPolygon(side, ((pts[0][0], pts[0][1]),), ())
    sgn = 1 if side == "lower" else -1

    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1, _), (x2, y2, _) = hull[-2], hull[-1]
            x3, y3, _ = p
            cross = (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1)
            if sgn * cross <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    edges = []
    for (x1, j1, k1), (x2, j2, k2) in zip(hull, hull[1:]):
        slope = QQ(j2 - j1, x2 - x1)
        intercept = QQ(j1) - slope * x1
        cp = []
        for k in range(k1, k2 + 1):
            jline = intercept + slope * (b ** k)
            if jline.denominator == 1:
                jint = int(jline)
                if 0 <= jint and k < len(L.coeffs):
                    v = L.coeffs[k][jint] if jint <= L.coeffs[k].degree else QQ(0)
                    if v:
                        while len(cp) < k - k1:
                            cp.append(QQ(0))
                        cp.append(v)
        while len(cp) < k2 - k1 + 1:
            cp.append(QQ(0))
        edges.append(
            Edge(side, k1, j1, k2, j2, slope, intercept, Poly(cp))
        )
    vertices = tuple((x, j) for x, j, _ in hull)
    return NewtonPolygon(side, vertices, tuple(edges))


def _rational_roots(f: Poly):
    """Rational roots of f and the minimal polynomials of its other roots."""
    roots = []
    minpolys = []
    for p, _ in poly_factor(f).factors:
        if p.degree == 1:
            roots.append(-p[0])
        elif p.degree > 1 or (p.degree == 0):
            if p.degree >= 1:
                minpolys.append(p)
    return roots, minpolys


@dataclass(frozen=True)
class LambdaData:
    lam: object  # QQ, nonzero
    q_lambda: int
    admissible_edges: tuple  # all lambda-admissible lower edges
    coprime_edges: tuple  # those whose slope denominator is coprime to b
    p_lambda: int
    c_lambda: object  # QQ
    nu: object  # QQ
    mu: object  # QQ
    nu_lambda: object  # QQ
    mu_lambda: object  # QQ

    def edge_params(self, edge: Edge):
        """(p, c) for a given admissible edge at this lambda's ramification."""
        p = -edge.slope * self.q_lambda
        if p.denominator != 1:
            raise ValueError("edge slope incompatible with ramification bound")
        return int(p), edge.intercept


@dataclass(frozen=True)
class AdmissibleData:
    lambdas: tuple  # LambdaData, sorted
    unsupported: tuple  # minimal polynomials of irrational lambda in Lambda
    z_rational: tuple  # Z(L) ∩ Q
    z_unsupported: tuple  # minimal polynomials of irrational zeta in Z(L)
    lower: NewtonPolygon
    upper: NewtonPolygon


def admissible_data(L: MahlerOperator) -> AdmissibleData:
    """Per-lambda lower-polygon data, plus Z(L) from the upper polygon."""
    lower = newton_polygon(L, "lower")
    upper = newton_polygon(L, "upper")
    b = L.b
    lam_edges = {}
    unsupported = {}
    for e in lower.edges:
        roots, minpolys = _rational_roots(e.charpoly)
        for rt in roots:
            if rt:
                lam_edges.setdefault(rt, []).append(e)
        for mp in minpolys:
            unsupported[mp.coeffs] = mp
    if lower.edges:
        leftmost = lower.edges[0]
        nu = -leftmost.slope
        mu = leftmost.intercept
    else:
        nu = QQ(0)
        mu = QQ(lower.vertices[0][1]) if lower.vertices else QQ(0)
    lambdas = []
    for lam in sorted(lam_edges):
        edges = tuple(lam_edges[lam])
        coprime = tuple(
            e for e in edges if int_gcd(int(e.slope.denominator), b) == 1
        )
        q = 1
        for e in coprime:
            d = int(e.slope.denominator)
            q = q * d // int_gcd(q, d)
        if coprime:
            right = coprime[-1]
            p = int(-right.slope * q)
            c = right.intercept
        else:
            p, c = 0, QQ(0)
        lambdas.append(
            LambdaData(
                lam=lam,
                q_lambda=q,
                admissible_edges=edges,
                coprime_edges=coprime,
                p_lambda=p,
                c_lambda=c,
                nu=nu,
                mu=mu,
                nu_lambda=q * nu - p,
                mu_lambda=q * (mu - c),
            )
        )
    zr = []
    zun = {}
    for e in upper.edges:
        roots, minpolys = _rational_roots(e.charpoly)
        zr.extend(r for r in roots if r)
        for mp in minpolys:
            zun[mp.coeffs] = mp
    return AdmissibleData(
        lambdas=tuple(lambdas),
        unsupported=tuple(unsupported[k] for k in sorted(unsupported)),
        z_rational=tuple(sorted(set(zr))),
        z_unsupported=tuple(zun[k] for k in sorted(zun)),
        lower=lower,
        upper=upper,
    )


def transform_lambda(
    L: MahlerOperator, ld: LambdaData, edge: Edge | None = None
) -> MahlerOperator:
    """L_lambda(x, M) = x^{-q c} L(x^q, lambda M) x^p, primitive.

    Power series solutions z of the result correspond bijectively to the
    solutions y of L with logarithmic part lambda and ramification q, via
    y(x) = x^{p/q} z(x^{1/q}) carried by the lambda eigenline.
    """
    q = ld.q_lambda
    if edge is None:
        p, c = ld.p_lambda, ld.c_lambda
    else:
        p, c = ld.edge_params(edge)
    qc = q * c
    if qc.denominator != 1:
        raise ValueError("non-integral normalization exponent")
    qc = int(qc)
    lam = QQ(ld.lam)
    out = []
    for k, cf in enumerate(L.coeffs):
        if cf.is_zero:
            out.append(Poly())
            continue
        shift = p * (L.b ** k) - qc
        base = cf.substitute_power(q) * lam ** k
        if shift + base.valuation < 0:
            raise ValueError("non-integral exponent after transform")
        out.append(base.shift(shift) if shift >= 0 else _unshift(base, -shift))
    return MahlerOperator(L.b, out)


def _unshift(f: Poly, k: int) -> Poly:
    if f.valuation < k:
        raise ValueError("non-integral exponent after transform")
    return Poly(f.coeffs[k:])


# -- Riccati residuals ----------------------------------------------------


def riccati_residual(L: MahlerOperator, u, ramification: int = 1) -> RatFun:
    """Exact value of sum(l_i u Mu ... M^{i-1}u); zero iff M - u divides L.

    A ramified u is passed as a rational function in t together with
    ramification q, where x = t^q; the residual is then returned in t.
    """
    if not isinstance(u, RatFun):
        u = RatFun(u)
    if u.is_zero:
        raise ValueError("u must be nonzero")
    b = L.b
    q = ramification
    total = RatFun(Poly())
    rising = RatFun(P_ONE)
    for i, cf in enumerate(L.coeffs):
        if not cf.is_zero:
            total = total + RatFun(cf.substitute_power(q)) * rising
        rising = rising * u.substitute_power(b ** i)
    return total


def riccati_cleared(L: MahlerOperator, P: Poly, Q: Poly, ramification: int = 1) -> Poly:
    """Denominator-cleared residual sum(l_i (P)_i (M^i Q)_{r-i}) for u = P/Q."""
    b = L.b
    q = ramification
    r = L.order
    risingP = [P_ONE]
    for i in range(r):
        risingP.append(risingP[-1] * P.substitute_power(b ** i))
    out = Poly()
    for i in range(r + 1):
        cf = L.coeff(i)
        if cf.is_zero:
            continue
        term = cf.substitute_power(q) * risingP[i]
        prod = P_ONE
        for j in range(i, r):
            prod = prod * Q.substitute_power(b ** j)
        out = out + term * prod
    return out


# -- operator division and lclm -------------------------------------------


def right_divmod(L: MahlerOperator, D: MahlerOperator):
    """L = Q*D + R in Q(x)<M>; returns (Q, R) as lists of RatFun coefficients."""
    if L.b != D.b:
        raise ValueError("radix mismatch")
    b = L.b
    rem = [RatFun(c) for c in L.coeffs]
    dco = [RatFun(c) for c in D.coeffs]
    dord = D.order
    quo = [RatFun(Poly()) for _ in range(max(L.order - dord + 1, 0))]

    def trim(v):
        while v and v[-1].is_zero:
            v.pop()
        return v

    rem = trim(rem)
    while len(rem) - 1 >= dord and rem:
        k = len(rem) - 1 - dord
        lead = rem[-1] / dco[-1].substitute_power(b ** k)
        quo[k] = quo[k] + lead
        for j, dc in enumerate(dco):
            rem[k + j] = rem[k + j] - lead * dc.substitute_power(b ** k)
        rem = trim(rem)
    return quo, rem


def right_divides(D: MahlerOperator, L: MahlerOperator) -> bool:
    _, rem = right_divmod(L, D)
    return not rem


def _ratfun_kernel_vector(rows, ncols):
    """One right-kernel vector of the matrix with RatFun entries, or None."""
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
        if prow == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    fc = free[0]
    vec = [RatFun(Poly()) for _ in range(ncols)]
    vec[fc] = RatFun(P_ONE)
    for i, col in enumerate(pivots):
        vec[col] = -mat[i][fc]
    return vec


def _clear_ratfun_vector(vec):
    den = P_ONE
    from .exactpoly import poly_lcm

    for v in vec:
        if v:
            den = poly_lcm(den, v.den)
    polys = [v.num * den.exact_div(v.den) if v else Poly() for v in vec]
    g = Poly()
    for p in polys:
        g = poly_gcd(g, p)
        if g.degree == 0:
            break
    if g.degree > 0:
        polys = [p.exact_div(g) for p in polys]
    return polys


def lclm(L1: MahlerOperator, L2: MahlerOperator) -> MahlerOperator:
    """Primitive minimal-order common left multiple: A*L1 = B*L2 = lclm."""
    if L1.b != L2.b:
        raise ValueError("radix mismatch")
    b = L1.b
    r1, r2 = L1.order, L2.order
    for m in range(max(r1, r2), r1 + r2 + 1):
        n1 = m - r1 + 1
        n2 = m - r2 + 1
        # unknowns a_0..a_{n1-1}, b_0..b_{n2-1}; equations on coefficients of M^s
        rows = []
        for s in range(m + 1):
            row = []
            for i in range(n1):
                c = L1.coeff(s - i)
                row.append(
                    RatFun(c.substitute_power(b ** i)) if 0 <= s - i <= r1 else RatFun(Poly())
                )
            for j in range(n2):
                c = L2.coeff(s - j)
                row.append(
                    RatFun(-c.substitute_power(b ** j)) if 0 <= s - j <= r2 else RatFun(Poly())
                )
            rows.append(row)
        vec = _ratfun_kernel_vector(rows, n1 + n2)
        if vec is None:
            continue
        acoef = vec[:n1]
        out = [RatFun(Poly()) for _ in range(m + 1)]
        for i in range(n1):
            if acoef[i]:
                for k in range(r1 + 1):
                    c = L1.coeff(k)
                    if not c.is_zero:
                        out[i + k] = out[i + k] + acoef[i] * RatFun(
                            c.substitute_power(b ** i)
                        )
        polys = _clear_ratfun_vector(out)
        return MahlerOperator(b, polys)
    raise AssertionError("lclm not found within order bound")


def annihilator_from_system(A, R, b: int) -> MahlerOperator:
    """Minimal-order primitive L with L(R.Y) = 0 for all solutions of Y = A(x) M Y.

    A is a square matrix of Poly (rows of tuples/lists), R a selection row.
    """
    m = len(A)
    rowsA = [[c if isinstance(c, Poly) else Poly.const(c) for c in row] for row in A]
    Rrow = [c if isinstance(c, Poly) else Poly.const(c) for c in R]
    # v_j = R * prod_{i=j}^{n-1} M^i(A); incrementally right-multiply by M^n(A)
    vs = [list(Rrow)]  # index j=0..n, value v_j; starts with n = 0
    n = 0
    while True:
        rows = [[RatFun(c) for c in v] for v in vs]
        vec = _left_kernel_vector(rows)
        if vec is not None:
            polys = _clear_ratfun_vector(vec)
            return MahlerOperator(b, polys)
        n += 1
        if n > 3 * m + 2:
            raise ValueError("system appears singular over Q(x)")
        Mn = [[c.substitute_power(b ** (n - 1)) for c in row] for row in rowsA]
        vs = [_row_times_matrix(v, Mn) for v in vs]
        vs.append(list(Rrow))


def _row_times_matrix(row, mat):
    m = len(mat)
    out = []
    for j in range(m):
        s = Poly()
        for i in range(m):
            if not row[i].is_zero and not mat[i][j].is_zero:
                s = s + row[i] * mat[i][j]
        out.append(s)
    return out


def _left_kernel_vector(rows):
    """One left-kernel vector of the RatFun matrix given by rows, or None."""
    if not rows:
        return None
    ncols = len(rows[0])
    # left kernel of M = right kernel of M^T
    transposed = [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]
    return _ratfun_kernel_vector(transposed, len(rows))


# -- degree bounds ---------------------------------------------------------


@dataclass(frozen=True)
class DegreeBounds:
    b_num: object  # QQ
    b_den: object  # QQ

    @property
    def b_inf(self):
        return max(self.b_num, self.b_den)


def degree_bounds(b: int, r: int, d) -> DegreeBounds:
    """Degree bounds on reduced rational Riccati solutions P/Q."""
    if b < 2 or r < 1:
        raise ValueError("need b >= 2 and r >= 1")
    d = QQ(d)
    if b == 2:
        b_num = 2 * d
        b_den = 2 * (1 - QQ(1, 2 ** r)) * d
    else:
        b_num = 4 * d / b ** (r - 1)
        b_den = 3 * d / b ** (r - 1)
    return DegreeBounds(b_num=b_num, b_den=b_den)


def apply_operator(L: MahlerOperator, f):
    """L f for a truncated series f (delegates to the series module)."""
    from .series import apply_operator as _apply

    return _apply(L, f)
