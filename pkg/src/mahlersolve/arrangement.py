"""Ideal computations in the syzygy parameters a_1..a_N over Q.

Supports the decomposition step of the Hermite-Pade sieve: Groebner bases by
Buchberger's algorithm, a recursive factor-splitting decomposition of
varieties expected to be finite unions of rational linear subspaces, and
reduced-echelon parametrizations a = gS of the resulting components.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq as QQ


class NonLinearSignal(Exception):
    """Some component could not be certified linear over Q (caller: grow sigma)."""


class MultiPoly:
    """Multivariate polynomial over Q: map from exponent tuples to nonzero mpq."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        t = {}
        if terms:
            for e, c in (terms.items() if isinstance(terms, dict) else terms):
                c = QQ(c)
                if c:
                    e = tuple(int(v) for v in e)
                    if len(e) != nvars:
                        raise ValueError("bad exponent length")
                    t[e] = t.get(e, QQ(0)) + c
                    if not t[e]:
                        del t[e]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", dict(t))

    def __setattr__(self, *a):
        raise AttributeError("MultiPoly is immutable")

    @staticmethod
    def const(nvars: int, c) -> "MultiPoly":
        return MultiPoly(nvars, {(0,) * nvars: QQ(c)})

    @staticmethod
    def var(nvars: int, i: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return MultiPoly(nvars, {tuple(e): QQ(1)})

    @property
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_linear(self) -> bool:
        return self.total_degree() <= 1

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def __add__(self, other):
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, QQ(0)) + c
            if v:
                t[e] = v
            elif e in t:
                del t[e]
        return MultiPoly(self.nvars, t)

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, QQ(0).__class__)):
            q = QQ(other)
            if not q:
                return MultiPoly(self.nvars)
            return MultiPoly(self.nvars, {e: c * q for e, c in self.terms.items()})
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e, QQ(0)) + c1 * c2
                if v:
                    t[e] = v
                elif e in t:
                    del t[e]
        return MultiPoly(self.nvars, t)

    __rmul__ = __mul__

    def scale(self, c):
        return self * c

    def substitute_linear(self, forms) -> "MultiPoly":
        """Substitute variable i -> forms[i] (MultiPoly in the new variables)."""
        if not forms:
            raise ValueError("no substitution forms")
        nv = forms[0].nvars
        out = MultiPoly(nv)
        for e, c in self.terms.items():
            term = MultiPoly.const(nv, c)
            for i, p in enumerate(e):
                for _ in range(p):
                    term = term * forms[i]
            out = out + term
        return out

    def eval(self, point):
        acc = QQ(0)
        for e, c in self.terms.items():
            v = c
            for i, p in enumerate(e):
                if p:
                    v *= QQ(point[i]) ** p
            acc += v
        return acc

    def normalized(self) -> "MultiPoly":
        """Scaled so the grevlex leading coefficient is 1."""
        if self.is_zero:
            return self
        lead = self.lead_term()
        c = self.terms[lead]
        if c == 1:
            return self
        inv = QQ(1) / c
        return MultiPoly(self.nvars, {e: v * inv for e, v in self.terms.items()})

    def lead_term(self, order=None):
        key = order or _grevlex_key
        return max(self.terms, key=key)

    def to_string(self, names=None):
        if self.is_zero:
            return "0"
        names = names or [f"a{i+1}" for i in range(self.nvars)]
        items = sorted(self.terms.items(), key=lambda t: _grevlex_key(t[0]), reverse=True)
        parts = []
        for e, c in items:
            body = "*".join(
                names[i] if p == 1 else f"{names[i]}^{p}" for i, p in enumerate(e) if p
            )
            if not body:
                body = str(abs(c))
            elif abs(c) != 1:
                body = f"{abs(c)}*{body}"
            parts.append(("-" if c < 0 else "+", body))
        s0, b0 = parts[0]
        out = ("-" if s0 == "-" else "") + b0
        for s, bdy in parts[1:]:
            out += f" {s} {bdy}"
        return out

    def __repr__(self):
        return f"MultiPoly({self.to_string()})"


def _grevlex_key(e):
    return (sum(e), tuple(-v for v in reversed(e)))


def _lex_key_for(perm):
    def key(e):
        return tuple(e[i] for i in perm)

    return key


def _reduce(p: MultiPoly, basis, order) -> MultiPoly:
    """Full normal form of p modulo basis for the given monomial order."""
    rem = MultiPoly(p.nvars)
    cur = p
    leads = [(g.lead_term(order), g) for g in basis if g]
    while cur:
        lt = cur.lead_term(order)
        lc = cur.terms[lt]
        hit = None
        for glt, g in leads:
            if all(a >= bq for a, bq in zip(lt, glt)):
                hit = (glt, g)
                break
        if hit is None:
            rem = rem + MultiPoly(cur.nvars, {lt: lc})
            cur = cur - MultiPoly(cur.nvars, {lt: lc})
        else:
            glt, g = hit
            shift = tuple(a - bq for a, bq in zip(lt, glt))
            fac = MultiPoly(cur.nvars, {shift: lc / g.terms[glt]})
            cur = cur - fac * g
    return rem


def groebner(gens, order=None):
    """Reduced Groebner basis by Buchberger's algorithm (grevlex default)."""
    order = order or _grevlex_key
    basis = [g.normalized() for g in gens if g]
    if not basis:
        return []
    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    while pairs:
        i, j = pairs.pop()
        gi, gj = basis[i], basis[j]
        lti, ltj = gi.lead_term(order), gj.lead_term(order)
        lcmlt = tuple(max(a, bq) for a, bq in zip(lti, ltj))
        if all(a + bq == c for a, bq, c in zip(lti, ltj, lcmlt)):
            continue  # coprime leading terms
        si = MultiPoly(gi.nvars, {tuple(a - bq for a, bq in zip(lcmlt, lti)): QQ(1) / gi.terms[lti]})
        sj = MultiPoly(gj.nvars, {tuple(a - bq for a, bq in zip(lcmlt, ltj)): QQ(1) / gj.terms[ltj]})
        s = si * gi - sj * gj
        r = _reduce(s, basis, order)
        if r:
            basis.append(r.normalized())
            n = len(basis) - 1
            pairs.extend((k, n) for k in range(n))
    # minimalize: drop elements whose lead is divisible by another kept lead
    kept = []
    for g in sorted(basis, key=lambda g: order(g.lead_term(order))):
        lt = g.lead_term(order)
        if not any(
            all(a >= bq for a, bq in zip(lt, h.lead_term(order))) for h in kept
        ):
            kept.append(g)
    # tail-reduce each kept element against the others
    out = []
    for i, g in enumerate(kept):
        others = kept[:i] + kept[i + 1 :]
        r = _reduce(g, others, order)
        if r.is_zero:
            raise AssertionError("minimal Groebner element reduced to zero")
        out.append(r.normalized())
    out.sort(key=lambda g: (g.total_degree(), sorted(g.terms)))
    return out


@dataclass(frozen=True)
class LinearComponent:
    """Vanishing locus of independent linear forms; row space of S."""

    forms: tuple  # independent linear MultiPoly
    S: tuple  # v x N matrix over Q, reduced-echelon rows

    @property
    def dim(self):
        return len(self.S)


def _factor_multipoly(p: MultiPoly):
    """Distinct irreducible factors over Q (content dropped)."""
    import sympy as sp

    syms = sp.symbols(f"a0:{p.nvars}")
    expr = sp.Integer(0)
    for e, c in p.terms.items():
        t = sp.Rational(int(c.numerator), int(c.denominator))
        for i, pw in enumerate(e):
            if pw:
                t *= syms[i] ** pw
        expr += t
    _, factors = sp.factor_list(expr)
    out = []
    for f, _m in factors:
        poly = sp.Poly(f, *syms)
        terms = {}
        for mono, coef in zip(poly.monoms(), poly.coeffs()):
            r = sp.Rational(coef)
            terms[tuple(mono)] = QQ(int(r.p), int(r.q))
        out.append(MultiPoly(p.nvars, terms).normalized())
    return out


def _linear_forms_matrix(forms, nvars):
    rows = []
    for f in forms:
        row = [QQ(0)] * nvars
        for e, c in f.terms.items():
            idx = [i for i, p in enumerate(e) if p]
            if len(idx) != 1 or sum(e) != 1:
                raise ValueError("not a homogeneous linear form")
            row[idx[0]] = c
        rows.append(row)
    return rows


def _rref(rows):
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
                m[i] = [a - f * bq for a, bq in zip(m[i], m[pr])]
        pivots.append(c)
        pr += 1
    return m[:pr], pivots


def parametrize(comp_or_forms) -> tuple:
    """Reduced-echelon S with {a : forms(a) = 0} = row space of S.

    Raises ValueError("zero-dimensional") when only a = 0 solves the system.
    """
    if isinstance(comp_or_forms, LinearComponent):
        forms = comp_or_forms.forms
        nvars = forms[0].nvars if forms else len(comp_or_forms.S[0])
    else:
        forms = tuple(comp_or_forms)
        if not forms:
            raise ValueError("cannot infer dimension from empty forms")
        nvars = forms[0].nvars
    if not forms:
        return tuple(
            tuple(QQ(1) if j == i else QQ(0) for j in range(nvars)) for i in range(nvars)
        )
    rows, pivots = _rref(_linear_forms_matrix(forms, nvars))
    free = [c for c in range(nvars) if c not in pivots]
    if not free:
        raise ValueError("zero-dimensional component (only a = 0)")
    S = []
    for fc in free:
        vec = [QQ(0)] * nvars
        vec[fc] = QQ(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fc]
        S.append(tuple(vec))
    return tuple(S)


def _component_from_linear(forms, nvars, gens) -> LinearComponent | None:
    try:
        S = parametrize(forms) if forms else parametrize_full(nvars)
    except ValueError:
        return None
    # certify: every original generator vanishes identically on the component
    gvars = len(S)
    sub = []
    for i in range(nvars):
        terms = {}
        for v in range(gvars):
            if S[v][i]:
                e = [0] * gvars
                e[v] = 1
                terms[tuple(e)] = S[v][i]
        sub.append(MultiPoly(gvars, terms))
    for g in gens:
        if g.substitute_linear(sub):
            raise AssertionError("component fails to annihilate a generator")
    return LinearComponent(forms=tuple(forms), S=S)


def parametrize_full(nvars: int):
    return tuple(
        tuple(QQ(1) if j == i else QQ(0) for j in range(nvars)) for i in range(nvars)
    )


_MAX_SPLIT_DEPTH = 24


def linear_decompose(gens):
    """Decompose V(gens) into rational linear components, or raise NonLinearSignal.

    Generators must be homogeneous of degree <= 2.  The returned components
    cover the variety exactly: the splitting tree branches on factorizations
    of basis elements, which loses no point, and each emitted component is
    certified by substitution.  Conservative: unions of conjugate irrational
    lines raise NonLinearSignal.
    """
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("empty generating set (variety is the full space)")
    nvars = gens[0].nvars
    for g in gens:
        if not g.is_homogeneous() or g.total_degree() > 2:
            raise ValueError("generators must be homogeneous of degree <= 2")

    components = []

    def emit(forms):
        comp = _component_from_linear(forms, nvars, gens)
        if comp is not None:
            components.append(comp)

    def split(current, depth):
        if depth > _MAX_SPLIT_DEPTH:
            raise NonLinearSignal("splitting depth exceeded")
        basis = groebner(current)
        if any(g.total_degree() == 0 for g in basis):
            return  # empty variety (cannot occur for homogeneous input)
        nonlinear = [g for g in basis if not g.is_linear()]
        if not nonlinear:
            emit(basis)
            return
        for g in nonlinear:
            factors = _factor_multipoly(g)
            if len(factors) > 1 or (factors and factors[0] != g.normalized()):
                for f in factors:
                    split(basis + [f], depth + 1)
                return
        # try lex orders to expose factorable eliminants
        for shift in range(nvars):
            perm = tuple((i + shift) % nvars for i in range(nvars))
            lexb = groebner(basis, order=_lex_key_for(perm))
            for g in lexb:
                if g.is_linear():
                    continue
                factors = _factor_multipoly(g)
                if len(factors) > 1:
                    for f in factors:
                        split(basis + [f], depth + 1)
                    return
        raise NonLinearSignal(
            "irreducible nonlinear component over Q: " + nonlinear[0].to_string()
        )

    split(list(gens), 0)

    # remove duplicates, then components strictly contained in another
    uniq = []
    for comp in components:
        if not any(_same_space(comp.S, o.S) for o in uniq):
            uniq.append(comp)
    out = [
        comp
        for comp in uniq
        if not any(
            o is not comp
            and _space_contained(comp.S, o.S)
            and not _same_space(comp.S, o.S)
            for o in uniq
        )
    ]
    out.sort(key=lambda c: (-len(c.S), tuple(tuple(str(q) for q in row) for row in c.S)))
    return out


def _space_contained(S1, S2) -> bool:
    """Row space of S1 contained in row space of S2."""
    rows2, pivots = _rref([list(r) for r in S2])
    for v in S1:
        vec = list(v)
        for r, pc in zip(rows2, pivots):
            if vec[pc]:
                f = vec[pc]
                vec = [a - f * bq for a, bq in zip(vec, r)]
        if any(vec):
            return False
    return True


def _same_space(S1, S2) -> bool:
    return len(S1) == len(S2) and _space_contained(S1, S2) and _space_contained(S2, S1)
