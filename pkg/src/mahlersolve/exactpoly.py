"""Exact univariate polynomial and rational-function arithmetic over Q.

Coefficients are gmpy2.mpq rationals throughout.  Polynomials are immutable
dense coefficient tuples; the zero polynomial has the sentinel degree -1.
The module also provides the Graeffe operator Gf = Res_y(y^b - x, f(y)),
computed through power sums so that only exact rational arithmetic is used.
"""

from __future__ import annotations

import itertools

import gmpy2
from gmpy2 import mpq, mpz

QQ = mpq

_PRIME_START = 1 << 30


def _iter_primes():
    p = gmpy2.next_prime(_PRIME_START)
    while True:
        yield int(p)
        p = gmpy2.next_prime(p)


class Poly:
    """Dense univariate polynomial over Q; index = exponent."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [QQ(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *args):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def const(c) -> "Poly":
        return Poly((QQ(c),))

    @staticmethod
    def monomial(exp: int, c=1) -> "Poly":
        if exp < 0:
            raise ValueError("negative exponent")
        return Poly((0,) * exp + (QQ(c),))

    @staticmethod
    def x() -> "Poly":
        return Poly((0, 1))

    # -- basic structure ----------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> int:
        """Valuation at 0; -1 sentinel for the zero polynomial."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return QQ(0)

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else QQ(0)

    def __hash__(self):
        return hash(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, mpq, type(mpz(0)))):
            return self == Poly.const(other)
        return NotImplemented

    # -- arithmetic ----------------------------------------------------

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, mpq, type(mpz(0)))):
            q = QQ(other)
            if not q:
                return Poly()
            return Poly(tuple(c * q for c in self.coeffs))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self, other
        if a.is_zero or b.is_zero:
            return Poly()
        na = sum(1 for c in a.coeffs if c)
        nb = sum(1 for c in b.coeffs if c)
        if nb < na:
            a, b = b, a
        out = [QQ(0)] * (a.degree + b.degree + 1)
        bc = b.coeffs
        for i, ca in enumerate(a.coeffs):
            if not ca:
                continue
            for j, cb in enumerate(bc):
                if cb:
                    out[i + j] += ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = _coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            return Poly(), self
        rem = list(self.coeffs)
        dq = self.degree - other.degree
        quo = [QQ(0)] * (dq + 1)
        olc = other.lc
        oc = other.coeffs
        for k in range(dq, -1, -1):
            c = rem[k + other.degree]
            if c:
                f = c / olc
                quo[k] = f
                for j, cj in enumerate(oc):
                    if cj:
                        rem[k + j] -= f * cj
        return Poly(quo), Poly(rem[: other.degree])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, _coerce(other))
        if not r.is_zero:
            raise ArithmeticError("division is not exact")
        return q

    def divides(self, other) -> bool:
        if self.is_zero:
            return other.is_zero
        return (_coerce(other) % self).is_zero

    # -- normal forms ---------------------------------------------------

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        l = self.lc
        if l == 1:
            return self
        return Poly(tuple(c / l for c in self.coeffs))

    def content(self):
        """Rational content: positive c with self = c * (primitive integer poly)."""
        if self.is_zero:
            return QQ(0)
        num = mpz(0)
        den = mpz(1)
        for c in self.coeffs:
            if c:
                num = gmpy2.gcd(num, c.numerator)
                den = gmpy2.lcm(den, c.denominator)
        return QQ(num, den)

    def primitive(self) -> "Poly":
        """Integer-primitive associate with positive leading coefficient."""
        if self.is_zero:
            return self
        c = self.content()
        if self.lc < 0:
            c = -c
        return Poly(tuple(q / c for q in self.coeffs))

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k (k >= 0)."""
        if self.is_zero or k == 0:
            return self
        return Poly((QQ(0),) * k + self.coeffs)

    def substitute_power(self, m: int) -> "Poly":
        """x -> x^m; the action of the Mahler operator for m = b^k."""
        if m <= 0:
            raise ValueError("power must be positive")
        if self.is_zero or m == 1:
            return self
        out = [QQ(0)] * (self.degree * m + 1)
        for i, c in enumerate(self.coeffs):
            if c:
                out[i * m] = c
        return Poly(out)

    def scale_argument(self, a) -> "Poly":
        """x -> a*x."""
        a = QQ(a)
        out = []
        p = QQ(1)
        for c in self.coeffs:
            out.append(c * p)
            p *= a
        return Poly(out)

    def derivative(self) -> "Poly":
        return Poly(tuple(c * i for i, c in enumerate(self.coeffs) if i))

    def __call__(self, v):
        acc = QQ(0)
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    # -- display ---------------------------------------------------------

    def to_string(self, var: str = "x") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                xs = var if i == 1 else f"{var}^{i}"
                body = xs if a == 1 else f"{a}*{xs}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sgn, body in parts[1:]:
            out += f" {sgn} {body}"
        return out

    def __repr__(self):
        return f"Poly({self.to_string()})"


def _coerce(v):
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, mpq, type(mpz(0)))):
        return Poly.const(v)
    return NotImplemented


P_ZERO = Poly()
P_ONE = Poly.const(1)


# -- gcd ----------------------------------------------------------------


def _to_int_poly(f: Poly):
    den = mpz(1)
    for c in f.coeffs:
        den = gmpy2.lcm(den, c.denominator)
    return [mpz(c * den) for c in f.coeffs]


def _int_content(cs):
    g = mpz(0)
    for c in cs:
        if c:
            g = gmpy2.gcd(g, c)
    return g


def _gcd_mod_p(a, b, p):
    a = [int(c % p) for c in a]
    b = [int(c % p) for c in b]

    def trim(u):
        while u and u[-1] == 0:
            u.pop()
        return u

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], p - 2, p)
        db, da = len(b) - 1, len(a) - 1
        r = list(a)
        for k in range(da - db, -1, -1):
            c = r[k + db] % p
            if c:
                f = c * inv % p
                for j in range(db + 1):
                    r[k + j] = (r[k + j] - f * b[j]) % p
        a, b = b, trim(r[:db])
    return a


def _gcd_prs(F, G):
    # primitive PRS fallback over Z
    a = [c for c in F]
    b = [c for c in G]

    def prim(u):
        g = _int_content(u)
        return [c // g for c in u] if g else u

    a, b = prim(a), prim(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        da, db = len(a) - 1, len(b) - 1
        r = [c * b[-1] ** (da - db + 1) for c in a]
        for k in range(da - db, -1, -1):
            c = r[k + db]
            if c:
                q, rr = divmod(c, b[-1])
                f = q
                for j in range(db + 1):
                    r[k + j] -= f * b[j]
                r[k + db] = rr
        while r and r[-1] == 0:
            r.pop()
        a, b = b, prim(r)
    return a


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd in Q[x]; poly_gcd(f, 0) is the monic normalization of f."""
    if f.is_zero:
        return g.monic()
    if g.is_zero:
        return f.monic()
    if f.degree == 0 or g.degree == 0:
        return P_ONE
    F = _to_int_poly(f)
    G = _to_int_poly(g)
    cF, cG = _int_content(F), _int_content(G)
    F = [c // cF for c in F]
    G = [c // cG for c in G]
    lcg = gmpy2.gcd(F[-1], G[-1])

    best_deg = None
    crt_coeffs = None
    crt_mod = None
    candidate = None
    primes = _iter_primes()
    for p in itertools.islice(primes, 0, 400):
        if F[-1] % p == 0 or G[-1] % p == 0:
            continue
        gp = _gcd_mod_p(F, G, p)
        d = len(gp) - 1
        if d == 0:
            return P_ONE
        if best_deg is None or d < best_deg:
            best_deg = d
            scale = int(lcg % p) * pow(gp[-1], p - 2, p) % p
            crt_coeffs = [mpz(c * scale % p) for c in gp]
            crt_mod = mpz(p)
            candidate = None
        elif d == best_deg:
            scale = int(lcg % p) * pow(gp[-1], p - 2, p) % p
            gp = [c * scale % p for c in gp]
            new_mod = crt_mod * p
            inv = gmpy2.invert(crt_mod, p)
            merged = []
            for c_old, c_new in zip(crt_coeffs, gp):
                t = (c_new - c_old) * inv % p
                merged.append(c_old + crt_mod * t)
            crt_coeffs = merged
            crt_mod = new_mod
        else:
            continue
        half = crt_mod >> 1
        sym = [c - crt_mod if c > half else c for c in crt_coeffs]
        cc = _int_content(sym)
        cand = tuple(c // cc for c in sym) if cc else tuple(sym)
        if cand == candidate:
            candp = Poly(cand)
            if candp.divides(Poly(F)) and candp.divides(Poly(G)):
                return candp.monic()
        candidate = cand
    # deterministic fallback
    return Poly(_gcd_prs(F, G)).monic()


def poly_lcm(f: Poly, g: Poly) -> Poly:
    if f.is_zero or g.is_zero:
        return P_ZERO
    return (f * g).exact_div(poly_gcd(f, g)).monic()


def squarefree_part(f: Poly) -> Poly:
    """Monic product of the distinct irreducible factors of f."""
    if f.is_zero:
        raise ValueError("zero polynomial")
    if f.degree == 0:
        return P_ONE
    g = poly_gcd(f, f.derivative())
    return f.exact_div(g).monic()


def resultant(f: Poly, g: Poly):
    """Res_x(f, g) over Q, by the Euclidean algorithm."""
    if f.is_zero or g.is_zero:
        return QQ(0)
    a, b = f, g
    res = QQ(1)
    while b.degree > 0:
        r = a % b
        if r.is_zero:
            return QQ(0)
        res *= b.lc ** (a.degree - r.degree)
        if (a.degree * b.degree) % 2:
            res = -res
        a, b = b, r
    return res * b.lc ** a.degree


# -- factorization -------------------------------------------------------


class FactoredPoly:
    """content * prod(factor^mult) with monic irreducible factors."""

    __slots__ = ("content", "factors")

    def __init__(self, content, factors):
        self.content = QQ(content)
        self.factors = tuple(sorted(factors, key=lambda fm: (fm[0].degree, fm[0].coeffs)))

    def expand(self) -> Poly:
        out = Poly.const(self.content)
        for f, m in self.factors:
            out = out * f ** m
        return out

    def multiplicity(self, p: Poly) -> int:
        for f, m in self.factors:
            if f == p:
                return m
        return 0

    def irreducibles(self):
        return [f for f, _ in self.factors]

    def divisor_exponent_ranges(self):
        return [(f, m) for f, m in self.factors]

    def __repr__(self):
        fs = " * ".join(f"({f.to_string()})^{m}" for f, m in self.factors)
        return f"FactoredPoly({self.content} * {fs})"


_SYMPY = None


def _sympy():
    global _SYMPY
    if _SYMPY is None:
        import sympy

        _SYMPY = sympy
    return _SYMPY


def poly_factor(f: Poly) -> FactoredPoly:
    """Complete factorization into monic Q-irreducibles times content."""
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    if f.degree == 0:
        return FactoredPoly(f.lc, ())
    sp = _sympy()
    x = sp.Symbol("x")
    ip = _to_int_poly(f)
    expr = sp.Poly(list(reversed([int(c) for c in ip])), x, domain="QQ")
    _, factors = expr.factor_list()
    out = []
    for fac, mult in factors:
        cs = [QQ(sp.Rational(c).p, sp.Rational(c).q) for c in reversed(fac.all_coeffs())]
        out.append((Poly(cs).monic(), int(mult)))
    # the monic factor product is monic, so the content is exactly f's lc
    return FactoredPoly(f.lc, out)


# -- Graeffe --------------------------------------------------------------


def graeffe(f: Poly, b: int) -> Poly:
    """Monic part of Res_y(y^b - x, f(y)): roots are the b-th powers of f's roots."""
    if f.is_zero:
        raise ValueError("zero polynomial")
    if b < 2:
        raise ValueError("radix must be >= 2")
    d = f.degree
    if d == 0:
        return P_ONE
    fm = f.monic()
    a = fm.coeffs  # a[i] coeff of x^i, a[d] = 1
    # power sums p[1..b*d] of the roots, by Newton's identities
    n = b * d
    p = [QQ(0)] * (n + 1)
    for k in range(1, n + 1):
        s = QQ(0)
        for i in range(1, k):
            if d - i >= 0:
                s += a[d - i] * p[k - i]
            else:
                break
        if k <= d:
            p[k] = -s - k * a[d - k]
        else:
            p[k] = -s
    q = [p[b * k] for k in range(1, d + 1)]
    # elementary symmetric functions of the new roots from power sums
    e = [QQ(1)] + [QQ(0)] * d
    for k in range(1, d + 1):
        s = QQ(0)
        for i in range(1, k + 1):
            s += (-1) ** (i - 1) * e[k - i] * q[i - 1]
        e[k] = s / k
    out = [QQ(0)] * (d + 1)
    for k in range(d + 1):
        out[d - k] = (-1) ** k * e[k]
    return Poly(out)


# -- rational functions ----------------------------------------------------


class RatFun:
    """Reduced rational function: monic denominator, gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=P_ONE, reduce: bool = True):
        num = _coerce(num)
        den = _coerce(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if reduce and not num.is_zero:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        if num.is_zero:
            den = P_ONE
        l = den.lc
        if l != 1:
            num = num * (QQ(1) / l)
            den = den.monic()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RatFun is immutable")

    @property
    def is_zero(self):
        return self.num.is_zero

    def __bool__(self):
        return not self.num.is_zero

    def __eq__(self, other):
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, int, mpq)):
            return self == RatFun(_coerce(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.num.coeffs, self.den.coeffs))

    def __add__(self, other):
        other = self._co(other)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) + (-self)

    def __mul__(self, other):
        other = self._co(other)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._co(other)
        if other.is_zero:
            raise ZeroDivisionError
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._co(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFun(self.den ** (-n), self.num ** (-n))
        return RatFun(self.num ** n, self.den ** n, reduce=False)

    @staticmethod
    def _co(v):
        if isinstance(v, RatFun):
            return v
        return RatFun(_coerce(v))

    def substitute_power(self, m: int) -> "RatFun":
        return RatFun(
            self.num.substitute_power(m), self.den.substitute_power(m), reduce=False
        )

    def valuation(self) -> int:
        if self.is_zero:
            raise ValueError("valuation of zero")
        return self.num.valuation - self.den.valuation

    def leading_coeff_at_zero(self):
        v = self.num.valuation
        w = self.den.valuation
        return self.num[v] / self.den[w]

    def to_string(self, var: str = "x") -> str:
        if self.den == P_ONE:
            return self.num.to_string(var)
        return f"({self.num.to_string(var)})/({self.den.to_string(var)})"

    def __repr__(self):
        return f"RatFun({self.to_string()})"


# -- interpolation ----------------------------------------------------------


def interpolate(points) -> Poly:
    """Newton interpolation through [(x_i, y_i)] with distinct x_i."""
    pts = [(QQ(a), QQ(b)) for a, b in points]
    n = len(pts)
    if n == 0:
        return P_ZERO
    coef = [y for _, y in pts]
    xs = [a for a, _ in pts]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = Poly.const(coef[-1])
    for i in range(n - 2, -1, -1):
        out = out * Poly((-xs[i], 1)) + Poly.const(coef[i])
    return out
