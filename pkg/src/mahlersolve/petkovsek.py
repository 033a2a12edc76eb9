"""Petkovsek-style solvers for rational solutions of Riccati Mahler equations.

riccati_bp is the brute-force divisor search over pairs (A, B) of monic
divisors of l0 and lr; riccati_ip prunes the pair space with divisibility
predicates and reuses a single upper Newton polygon through the shearing
relation; riccati_ramified wraps either around the substitution x -> x^q that
reduces ramified solving to plain rational solving.  All three return the
complete set of rational-lambda solutions as disjoint similarity blocks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from gmpy2 import mpq as QQ

from .exactpoly import (
    FactoredPoly,
    P_ONE,
    Poly,
    graeffe,
    poly_factor,
    poly_gcd,
    squarefree_part,
)
from .mahler import MahlerOperator, admissible_data, newton_polygon
from .params import ParamPoly, _nullspace
from .blocks import SolutionBlock, block_from_pair, dedupe_blocks


@dataclass
class SolveStats:
    """Counters mirroring the benchmark table fields."""

    triples: int = 0  # (B, A, zeta) triples processed ("tpl")
    raw_candidates: int = 0  # parametrized solutions before dedupe ("#")
    blocks: int = 0  # blocks retained after dedupe
    sigma_trace: list = field(default_factory=list)  # HP only


@dataclass(frozen=True)
class CandidateTuple:
    zeta: object
    A: Poly
    B: Poly
    Delta: int
    Cbasis: tuple


def _monic_divisors(fact: FactoredPoly):
    """All monic divisors of a factored polynomial, exponent-lexicographic."""
    facs = list(fact.factors)
    ranges = [range(m + 1) for _, m in facs]
    for exps in itertools.product(*ranges):
        d = P_ONE
        for (p, _), e in zip(facs, exps):
            if e:
                d = d * p ** e
        yield d.monic(), dict(zip((p.coeffs for p, _ in facs), exps))


def forbidden_factors(q: Poly, l0: FactoredPoly, r: int, b: int):
    """irred(l0) intersected with {q, sqfree(Gq), ..., sqfree(G^{r-1}q)}."""
    irred0 = {p.coeffs: p for p in l0.irreducibles()}
    out = []
    cur = q.monic()
    seen = set()
    for _ in range(r):
        if cur.coeffs in irred0 and cur.coeffs not in seen:
            out.append(irred0[cur.coeffs])
            seen.add(cur.coeffs)
        cur = squarefree_part(graeffe(cur, b)).monic()
    return out


def _build_ltilde(L: MahlerOperator, A: Poly, B: Poly) -> MahlerOperator:
    """Auxiliary operator whose bounded-degree polynomial kernel gives C."""
    b = L.b
    r = L.order
    m = b ** (r - 1)
    coeffs = []
    for k in range(r + 1):
        cf = L.coeff(k)
        if cf.is_zero:
            coeffs.append(Poly())
            continue
        term = cf.substitute_power(m)
        for j in range(k):
            term = term * A.substitute_power(b ** (r - 1 + j))
        for j in range(k, r):
            term = term * B.substitute_power(b ** j)
        coeffs.append(term)
    return MahlerOperator(b, coeffs, normalize=False)


def poly_solutions_bounded(Ltilde: MahlerOperator, zeta, Delta: int):
    """Q-basis of {C in Q[t], deg <= Delta : Ltilde(t, zeta M) C = 0}."""
    if Delta < 0:
        raise ValueError("Delta must be >= 0")
    zeta = QQ(zeta)
    b = Ltilde.b
    ncols = Delta + 1
    rows_by_e = {}
    for k in range(Ltilde.order + 1):
        cf = Ltilde.coeff(k)
        if cf.is_zero:
            continue
        zk = zeta ** k
        bk = b ** k
        for j, v in enumerate(cf.coeffs):
            if not v:
                continue
            vz = v * zk
            for i in range(ncols):
                e = j + i * bk
                row = rows_by_e.get(e)
                if row is None:
                    row = [QQ(0)] * ncols
                    rows_by_e[e] = row
                row[i] += vz
    rows = [row for row in rows_by_e.values() if any(row)]
    basis = _nullspace(rows, ncols)
    return [Poly(vec) for vec in basis]


def _integer_deltas(edges, zeta):
    """Nonnegative-integer candidate degrees from zeta-admissible edges."""
    out = []
    for e in edges:
        if e.charpoly(zeta) == 0:
            d = -e.slope
            if d.denominator == 1 and d >= 0:
                out.append(int(d))
    return out


def _block_from_tuple(L, zeta, A, B, Cbasis, stats):
    """Descend the parametrized tuple to a block of rational solutions of L."""
    r = L.order
    b = L.b
    m = b ** (r - 1)
    s = len(Cbasis)
    num = ParamPoly.linear(
        [C.substitute_power(b) * A.substitute_power(m) * zeta for C in Cbasis]
    )
    den = ParamPoly.linear([C * B for C in Cbasis])
    from .params import normalize_param_fraction

    num, den = normalize_param_fraction(num, den)
    num = _descend(num, m)
    den = _descend(den, m)
    stats.raw_candidates += 1
    return SolutionBlock(_leading_ratio(num, den), 1, num, den)


def _descend(p: ParamPoly, m: int) -> ParamPoly:
    """Rewrite a polynomial in t as a polynomial in x = t^m."""
    if m == 1:
        return p
    terms = {}
    for e, poly in p.terms.items():
        cs = poly.coeffs
        out = [QQ(0)] * (len(cs) // m + 1)
        for i, c in enumerate(cs):
            if c:
                if i % m:
                    raise AssertionError("candidate does not descend to x")
                out[i // m] = c
        terms[e] = Poly(out)
    return ParamPoly(p.nvars, terms)


def _leading_ratio(num: ParamPoly, den: ParamPoly):
    """Leading coefficient lambda of the family at x = 0 (class invariant)."""
    vN = num.x_valuation()
    vD = den.x_valuation()
    tn = num.coeff_of_x(vN)
    td = den.coeff_of_x(vD)
    e0, c0 = next(iter(sorted(td.terms.items())))
    lam = tn.terms.get(e0, QQ(0)) / c0
    if (tn - td * lam):
        raise AssertionError("family has no single leading coefficient")
    return lam


def _first_order_block(L: MahlerOperator) -> list:
    u_num = -L.l0
    u_den = L.coeff(1)
    g = poly_gcd(u_num, u_den)
    if g.degree > 0:
        u_num, u_den = u_num.exact_div(g), u_den.exact_div(g)
    num = ParamPoly.linear([u_num])
    den = ParamPoly.linear([u_den])
    return [SolutionBlock(_leading_ratio(num, den), 1, num, den)]


def riccati_bp(L: MahlerOperator, stats: SolveStats | None = None):
    """Algorithm BP: complete rational (q = 1) solutions as disjoint blocks."""
    stats = stats if stats is not None else SolveStats()
    L.assert_standard()
    r = L.order
    if r == 0:
        raise ValueError("operator must have order >= 1")
    if r == 1:
        blocks = _first_order_block(L)
        stats.triples += 1
        stats.raw_candidates += 1
        stats.blocks = len(blocks)
        return blocks
    f0 = poly_factor(L.l0)
    fr = poly_factor(L.lr)
    blocks = []
    for A, _ in _monic_divisors(f0):
        for B, _ in _monic_divisors(fr):
            if any(
                poly_gcd(A.substitute_power(L.b ** i), B).degree > 0 for i in range(r)
            ):
                continue
            lt = _build_ltilde(L, A, B)
            upper = newton_polygon(lt, "upper")
            zetas = set()
            for e in upper.edges:
                for p, _m in poly_factor(e.charpoly).factors:
                    if p.degree == 1 and p[0]:
                        zetas.add(-p[0])
            for zeta in sorted(zetas):
                stats.triples += 1
                deltas = _integer_deltas(upper.edges, zeta)
                if not deltas:
                    continue
                Cbasis = poly_solutions_bounded(lt, zeta, max(deltas))
                if Cbasis:
                    blocks.append(
                        _block_from_tuple(L, zeta, A, B, Cbasis, stats)
                    )
    out = dedupe_blocks(blocks)
    stats.blocks = len(out)
    return out


def admissible_pairs(L: MahlerOperator, with_pruning: bool = True):
    """Iterator over the (A, B) divisor pairs surviving predicates P1-P8.

    With with_pruning=False, yields every coprime pair (the BP pair space).
    """
    L.assert_standard()
    r = L.order
    b = L.b
    f0 = poly_factor(L.l0)
    fr = poly_factor(L.lr)
    if not with_pruning:
        for A, _ in _monic_divisors(f0):
            for B, _ in _monic_divisors(fr):
                if all(
                    poly_gcd(A.substitute_power(b ** i), B).degree == 0
                    for i in range(r)
                ):
                    yield A, B
        return

    t = Poly.x()
    irr0 = f0.irreducibles()
    irrr = fr.irreducibles()
    forb = {q.coeffs: forbidden_factors(q, f0, r, b) for q in irrr}

    def mahler_quotients(f: Poly):
        """Monic polynomials Mp/p in Q[t] (p irreducible, p != t) dividing f."""
        out = []
        for p, _m in poly_factor(graeffe(f, b)).factors:
            if p == t:
                continue
            mp = p.substitute_power(b)
            if (mp % p).is_zero:
                quo = mp.exact_div(p).monic()
                if quo.divides(f):
                    out.append(quo)
        return out

    d_r = mahler_quotients(L.lr)
    d_0 = mahler_quotients(L.l0)

    def mahler_bifactor(q: Poly) -> bool:
        """Mp = p q exactly, for p = sqfree(Gq), p != q."""
        p = squarefree_part(graeffe(q, b)).monic()
        return p != q and p.substitute_power(b) == p * q

    # refined loop bounds (P5-P8)
    bmin = {}
    for q, mult in fr.factors:
        if q == t:
            bmin[q.coeffs] = max(0, mult - b + 2)
        elif mahler_bifactor(q):
            bmin[q.coeffs] = mult
        else:
            bmin[q.coeffs] = 0
    amax = {}
    for p, mult in f0.factors:
        if p == t:
            amax[p.coeffs] = min(mult, b - 2)
        elif mahler_bifactor(p):
            amax[p.coeffs] = 0
        else:
            amax[p.coeffs] = mult

    rfacs = list(fr.factors)
    for beta in itertools.product(
        *[range(bmin[q.coeffs], m + 1) for q, m in rfacs]
    ):
        B = P_ONE
        for (q, _m), e in zip(rfacs, beta):
            if e:
                B = B * q ** e
        B = B.monic()
        # P1: B = p Btilde with Mp Btilde | lr, p != t
        skip = False
        for (q, _m), e in zip(rfacs, beta):
            if e and q != t:
                cand = B.exact_div(q) * q.substitute_power(b)
                if cand.divides(L.lr):
                    skip = True
                    break
        if skip:
            continue
        # P3: f B | lr for some f in D_r
        if any((f * B).divides(L.lr) for f in d_r):
            continue
        forbidden = set()
        for (q, _m), e in zip(rfacs, beta):
            if e:
                for p in forb[q.coeffs]:
                    forbidden.add(p.coeffs)
        ofacs = list(f0.factors)
        ranges = []
        for p, _m in ofacs:
            top = 0 if p.coeffs in forbidden else amax[p.coeffs]
            ranges.append(range(top + 1))
        for alpha in itertools.product(*ranges):
            A = P_ONE
            for (p, _m), e in zip(ofacs, alpha):
                if e:
                    A = A * p ** e
            A = A.monic()
            # P2: A = Mp Atilde with p Atilde | l0, p != t
            skip = False
            for p, _m in ofacs:
                if p == t:
                    continue
                mp = p.substitute_power(b)
                if mp.divides(A) and (A.exact_div(mp) * p).divides(L.l0):
                    skip = True
                    break
            if skip:
                continue
            # P4: f | A for some f in D_0
            if any(f.divides(A) for f in d_0):
                continue
            yield A, B


def riccati_ip(L: MahlerOperator, stats: SolveStats | None = None):
    """Algorithm IP: same contract as riccati_bp, with search-space pruning."""
    stats = stats if stats is not None else SolveStats()
    L.assert_standard()
    r = L.order
    if r == 0:
        raise ValueError("operator must have order >= 1")
    if r == 1:
        blocks = _first_order_block(L)
        stats.triples += 1
        stats.raw_candidates += 1
        stats.blocks = len(blocks)
        return blocks
    b = L.b
    m = b ** (r - 1)
    upper = newton_polygon(L, "upper")
    zeta_edges = {}
    for e in upper.edges:
        for p, _mm in poly_factor(e.charpoly).factors:
            if p.degree == 1 and p[0]:
                zeta_edges.setdefault(-p[0], []).append(e)
    blocks = []
    for A, B in admissible_pairs(L, with_pruning=True):
        lt = None
        for zeta in sorted(zeta_edges):
            stats.triples += 1
            # shearing: sh(delta) = -(b^{r-1} deg A - deg B)/(b-1) + b^{r-1} delta
            shift = -QQ(m * A.degree - B.degree, b - 1)
            deltas = []
            for e in zeta_edges[zeta]:
                d = shift + m * (-e.slope)
                if d.denominator == 1 and d >= 0:
                    deltas.append(int(d))
            if not deltas:
                continue
            if lt is None:
                lt = _build_ltilde(L, A, B)
            Cbasis = poly_solutions_bounded(lt, zeta, max(deltas))
            if Cbasis:
                blocks.append(_block_from_tuple(L, zeta, A, B, Cbasis, stats))
    out = dedupe_blocks(blocks)
    stats.blocks = len(out)
    return out


def riccati_ramified(
    L: MahlerOperator,
    method: str = "ip",
    stats: SolveStats | None = None,
    report: dict | None = None,
):
    """Algorithm over x^{1/q}: solve L(x^q, M) rationally, substitute back.

    q is the lcm of the per-lambda ramification bounds over rational lambda.
    """
    stats = stats if stats is not None else SolveStats()
    adm = admissible_data(L)
    q = 1
    for ld in adm.lambdas:
        from math import gcd

        q = q * ld.q_lambda // gcd(q, ld.q_lambda)
    if report is not None:
        report["ramification"] = q
        report["unsupported_lambda"] = [p.to_string("X") for p in adm.unsupported]
    solver = {"bp": riccati_bp, "ip": riccati_ip}[method]
    if q == 1:
        return solver(L, stats)
    Lq = MahlerOperator(L.b, [c.substitute_power(q) for c in L.coeffs])
    inner = solver(Lq, stats)
    out = [SolutionBlock(blk.lam, q * blk.q, blk.num, blk.den) for blk in inner]
    out = dedupe_blocks(out)
    stats.blocks = len(out)
    return out
