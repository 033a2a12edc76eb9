"""Hermite-Pade sieve for ramified rational Riccati solutions (rational lambda).

Per admissible leading coefficient lambda and per admissible edge with
b-coprime slope denominator, the linear equation is transformed to a plain
power-series problem; candidates harvested from degree-filtered approximant
bases are validated symbolically and the truncation order grows along a
geometric schedule until the candidate set provably stabilizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from gmpy2 import mpq as QQ

from .arrangement import MultiPoly, NonLinearSignal, linear_decompose, parametrize_full, LinearComponent
from .blocks import SolutionBlock, block_contains, dedupe_blocks, riccati_cleared_param
from .exactpoly import Poly, P_ONE, poly_gcd
from .mahler import (
    DegreeBounds,
    MahlerOperator,
    admissible_data,
    degree_bounds,
    transform_lambda,
)
from .orderbasis import FilteredMatrix, filtered_matrix, minimal_basis, poly_det, _numeric_det
from .params import ParamPoly, normalize_param_fraction
from .petkovsek import SolveStats
from .series import extend_basis, series_basis


GOLDEN = (1 + math.sqrt(5)) / 2

DEFAULT_SIGMA_CAP = 100_000


class ResourceLimit(Exception):
    """The truncation order exceeded the configured cap."""

    def __init__(self, lam, sigma):
        super().__init__(f"sigma cap exceeded at lambda={lam}, sigma={sigma}")
        self.lam = lam
        self.sigma = sigma


class RetrySignal(Exception):
    """Kernel structure not yet usable; grow sigma and try again."""


@dataclass
class HPRun:
    """Per-branch loop state: one lambda, one admissible edge."""

    lam: object
    q: int
    p: int
    operator: MahlerOperator  # the transformed operator L_lambda
    bounds: DegreeBounds
    sigma0: int
    basis: object = None
    trace: list = field(default_factory=list)  # (sigma, N, rho)
    accepted: list = field(default_factory=list)  # (num, den) pairs in L_lambda's x


def _sigma_schedule(sigma0: int, ratio: float):
    k = 0
    prev = 0
    while True:
        s = int(math.floor(ratio ** k * sigma0 + 0.5))
        if s <= prev:
            s = prev + 1
        prev = s
        yield s
        k += 1


def minor_system(W: FilteredMatrix, N: int):
    """Coefficients w.r.t. x of all (rho+2)-minors of W_a: quadratics in a."""
    rho = W.rho
    if not (1 <= rho <= 2 * N - 2):
        raise ValueError("rho out of range for the minor system")
    cols = 2 * N
    rows = [list(r) for r in W.rows]
    minors_cache = {}

    def w_minor(colsel):
        key = tuple(colsel)
        if key not in minors_cache:
            sub = [[row[c] for c in colsel] for row in rows]
            minors_cache[key] = poly_det(sub)
        return minors_cache[key]

    def arow(idx, c):
        # augmented rows: (a, 0) and (0, a)
        if idx == 0:
            return c if c < N else None
        return c - N if c >= N else None

    out = []
    seen = set()
    for subset in _subsets(cols, rho + 2):
        acc = {}
        npos = len(subset)
        for i1 in range(npos):
            for i2 in range(i1 + 1, npos):
                c1, c2 = subset[i1], subset[i2]
                # 2x2 minor of the two a-rows on columns (c1, c2)
                v11, v12 = arow(0, c1), arow(0, c2)
                v21, v22 = arow(1, c1), arow(1, c2)
                terms = {}
                if v11 is not None and v22 is not None:
                    e = [0] * N
                    e[v11] += 1
                    e[v22] += 1
                    terms[tuple(e)] = terms.get(tuple(e), QQ(0)) + 1
                if v12 is not None and v21 is not None:
                    e = [0] * N
                    e[v12] += 1
                    e[v21] += 1
                    terms[tuple(e)] = terms.get(tuple(e), QQ(0)) - 1
                m2 = MultiPoly(N, terms)
                if m2.is_zero:
                    continue
                rest = [c for c in subset if c != c1 and c != c2]
                wm = w_minor(rest)
                if wm.is_zero:
                    continue
                sign = (-1) ** ((rho + 1) + (rho + 2) + (i1 + 1) + (i2 + 1))
                for j, cf in enumerate(wm.coeffs):
                    if cf:
                        cur = acc.get(j)
                        add = m2 * (cf * sign)
                        acc[j] = add if cur is None else cur + add
        for j in sorted(acc):
            qpoly = acc[j]
            if qpoly:
                key = tuple(sorted(qpoly.normalized().terms.items()))
                if key not in seen:
                    seen.add(key)
                    out.append(qpoly.normalized())
    return out


def _subsets(n, k):
    import itertools

    return itertools.combinations(range(n), k)


def candidate_full(W: FilteredMatrix, N: int):
    """Candidate for rho = 2N-1: u = sum a_i (-1)^{i+N+1} D_{i+N} / sum a_i (-1)^{i+1} D_i."""
    rho = W.rho
    if rho != 2 * N - 1:
        raise ValueError("candidate_full requires rho = 2N - 1")
    rows = [list(r) for r in W.rows]
    deltas = []
    for i in range(2 * N):
        sub = [[row[c] for c in range(2 * N) if c != i] for row in rows]
        deltas.append(poly_det(sub))
    num = ParamPoly.linear(
        [deltas[N + j] * ((-1) ** (j + N)) for j in range(N)]
    )
    den = ParamPoly.linear([deltas[j] * ((-1) ** j) for j in range(N)])
    if num.is_zero or den.is_zero:
        raise RetrySignal("degenerate Cramer candidate")
    return normalize_param_fraction(num, den)


def candidate_component(W: FilteredMatrix, S):
    """Candidate for a linear component a = gS: u = Delta_{rho+1}/Delta_{rho+2}.

    Raises RetrySignal when the specialized kernel does not have dimension 1
    with both distinguished minors nonzero.
    """
    rho = W.rho
    rows = [list(r) for r in W.rows]
    cols = len(rows[0]) if rows else 0
    N = cols // 2
    if not (1 <= rho <= 2 * N - 2):
        raise ValueError("candidate_component requires 1 <= rho <= 2N - 2")
    v = len(S)
    # specialized a-rows: linear forms in g, constant in x
    def grow(idx, c):
        if idx == 0:
            i = c if c < N else None
        else:
            i = c - N if c >= N else None
        if i is None:
            return None
        coeffs = [S[w][i] for w in range(v)]
        if not any(coeffs):
            return None
        return tuple(coeffs)

    colsel = _independent_columns(rows, grow, rho, cols)
    if colsel is None:
        raise RetrySignal("specialized matrix has deficient rank")
    # Delta_{rho+1}: drop the first g-row; Delta_{rho+2}: drop the second
    d1 = _det_with_one_param_row(rows, grow, colsel, keep=1, v=v)
    d2 = _det_with_one_param_row(rows, grow, colsel, keep=0, v=v)
    if d1.is_zero or d2.is_zero:
        raise RetrySignal("distinguished minor vanishes")
    return normalize_param_fraction(d1, d2)


def _independent_columns(rows, grow, rho, cols):
    """Lexicographically first rho+1 columns independent over Q(x, g)."""
    v = None
    for c in range(cols):
        g = grow(0, c) or grow(1, c)
        if g:
            v = len(g)
            break
    if v is None:
        return None
    for attempt in range(3):
        x0 = QQ(3 + attempt)
        gpt = [QQ(2 + attempt) ** (i + 1) for i in range(v)]
        num_rows = []
        for row in rows:
            num_rows.append([e(x0) for e in row])
        for idx in (0, 1):
            r = []
            for c in range(cols):
                gl = grow(idx, c)
                r.append(sum(a * b for a, b in zip(gl, gpt)) if gl else QQ(0))
            num_rows.append(r)
        sel = _pivot_columns(num_rows, rho + 1)
        if sel is not None:
            return sel
    return None


def _pivot_columns(mat, want):
    nrows = len(mat)
    m = [row[:] for row in mat]
    piv_cols = []
    pr = 0
    for c in range(len(m[0])):
        piv = None
        for i in range(pr, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[pr], m[piv] = m[piv], m[pr]
        inv = QQ(1) / m[pr][c]
        for i in range(pr + 1, nrows):
            if m[i][c]:
                f = m[i][c] * inv
                for j in range(c, len(m[0])):
                    m[i][j] -= f * m[pr][j]
        piv_cols.append(c)
        pr += 1
        if pr == want:
            return piv_cols
    return None


def _det_with_one_param_row(rows, grow, colsel, keep, v):
    """det of [W rows; kept g-row] on the selected columns, as ParamPoly."""
    n = len(colsel)
    base = [[row[c] for c in colsel] for row in rows]
    out = ParamPoly(v)
    for j, c in enumerate(colsel):
        gl = grow(keep, c)
        if gl is None:
            continue
        sub = [[base[i][jj] for jj in range(n) if jj != j] for i in range(len(base))]
        minor = poly_det(sub)
        if minor.is_zero:
            continue
        sign = (-1) ** ((n - 1) + j)
        coeffs = {}
        for w in range(v):
            if gl[w]:
                e = [0] * v
                e[w] = 1
                coeffs[tuple(e)] = minor * (gl[w] * sign)
        out = out + ParamPoly(v, coeffs)
    return out


def validate_candidate(L_lambda: MahlerOperator, cand, bounds: DegreeBounds) -> bool:
    """Degree bounds, then exact symbolic vanishing of the cleared residual."""
    num, den = cand
    if QQ(num.x_degree()) > bounds.b_num or QQ(den.x_degree()) > bounds.b_den:
        return False
    return riccati_cleared_param(L_lambda, num, den).is_zero


def _pairs_equal(a, b) -> bool:
    ba = SolutionBlock(1, 1, a[0], a[1])
    bb = SolutionBlock(1, 1, b[0], b[1])
    return block_contains(ba, bb) and block_contains(bb, ba)


def riccati_hp(
    L: MahlerOperator,
    sigma_cap: int | None = DEFAULT_SIGMA_CAP,
    ratio: float = GOLDEN,
    stats: SolveStats | None = None,
    report: dict | None = None,
):
    """Algorithm HP: all ramified rational solutions with rational lambda.

    Raises ResourceLimit if some branch needs a truncation order beyond
    sigma_cap.  Irrational admissible lambda are reported, not solved.
    """
    stats = stats if stats is not None else SolveStats()
    L.assert_standard()
    if L.order < 1:
        raise ValueError("operator must have order >= 1")
    adm = admissible_data(L)
    if report is not None:
        report["unsupported_lambda"] = [p.to_string("X") for p in adm.unsupported]
        report["lambdas"] = [str(ld.lam) for ld in adm.lambdas]
    blocks = []
    for ld in adm.lambdas:
        seen_edges = set()
        for edge in ld.coprime_edges:
            p, c = ld.edge_params(edge)
            if (p, c) in seen_edges:
                continue
            seen_edges.add((p, c))
            run = _run_branch(L, ld, edge, sigma_cap, ratio, stats)
            stats.sigma_trace.append(
                {
                    "lambda": str(ld.lam),
                    "edge_slope": str(edge.slope),
                    "trace": run.trace,
                }
            )
            blocks.extend(_map_back(L, ld, run))
    out = dedupe_blocks(blocks)
    stats.blocks = len(out)
    return out


def _run_branch(L, ld, edge, sigma_cap, ratio, stats) -> HPRun:
    p, _c = ld.edge_params(edge)
    L_lam = transform_lambda(L, ld, edge=edge)
    q = ld.q_lambda
    nu_lam = q * ld.nu - p
    sigma0 = max(int(math.floor(nu_lam)) + 1, 1)
    run = HPRun(
        lam=ld.lam,
        q=q,
        p=p,
        operator=L_lam,
        bounds=degree_bounds(L_lam.b, L_lam.order, L_lam.degree),
        sigma0=sigma0,
    )
    basis = series_basis(L_lam, sigma0)
    N = basis.dimension
    if N == 0:
        return run
    binf = run.bounds.b_inf
    for sigma in _sigma_schedule(sigma0, ratio):
        if sigma_cap is not None and sigma > sigma_cap:
            raise ResourceLimit(ld.lam, sigma)
        basis = extend_basis(L_lam, basis, sigma)
        f = list(basis.elements) + [
            z.substitute_power(L.b).truncate(sigma) for z in basis.elements
        ]
        mb = minimal_basis(f, sigma)
        W = filtered_matrix(mb, binf)
        rho = W.rho
        run.trace.append((sigma, N, rho))
        if rho == 0:
            if run.accepted:
                raise AssertionError("accepted solutions but empty syzygy module")
            return run
        if rho == 2 * N:
            continue
        try:
            candidates = _harvest(W, N, stats)
        except RetrySignal:
            continue
        except NonLinearSignal:
            continue
        ok = True
        for cand in candidates:
            if any(_pairs_equal(cand, acc) for acc in run.accepted):
                continue
            if validate_candidate(L_lam, cand, run.bounds):
                run.accepted.append(cand)
            else:
                ok = False
                break
        if ok:
            return run
    raise AssertionError("unreachable: schedule is infinite")


def _harvest(W, N, stats):
    rho = W.rho
    out = []
    if rho == 2 * N - 1:
        stats.raw_candidates += 1
        out.append(candidate_full(W, N))
        return out
    system = minor_system(W, N)
    if not system:
        comps = [LinearComponent(forms=(), S=parametrize_full(N))]
    else:
        comps = linear_decompose(system)
    for comp in comps:
        stats.raw_candidates += 1
        out.append(candidate_component(W, comp.S))
    return out


def _map_back(L, ld, run: HPRun):
    """u(x) <- lambda x^{(b-1) p/q} u(x^{1/q}), as blocks in x^{1/q}."""
    out = []
    b = L.b
    p, q = run.p, run.q
    shift = (b - 1) * p
    for num, den in run.accepted:
        # L_lambda's variable is t = x^{1/q}; apply the monomial factor t^{(b-1)p}
        n_t = num
        d_t = den
        if shift >= 0:
            n_t = n_t.shift(shift)
        else:
            d_t = d_t.shift(-shift)
        n_t = n_t * QQ(ld.lam)
        out.append(block_from_ramified(ld.lam, q, n_t, d_t))
    return out


def block_from_ramified(lam, q, num: ParamPoly, den: ParamPoly) -> SolutionBlock:
    num, den = normalize_param_fraction(num, den)
    # reduce the ramification if the block is actually in a smaller root of x
    g = _exponent_gcd(num, den, q)
    if g > 1:
        num = _contract(num, g)
        den = _contract(den, g)
        q //= g
    return SolutionBlock(lam, q, num, den)


def _exponent_gcd(num, den, q):
    g = q
    for pp in list(num.terms.values()) + list(den.terms.values()):
        for i, cc in enumerate(pp.coeffs):
            if cc:
                g = math.gcd(g, i)
                if g == 1:
                    return 1
    return max(g, 1)


def _contract(p: ParamPoly, g: int) -> ParamPoly:
    terms = {}
    for e, pp in p.terms.items():
        out = [QQ(0)] * (pp.degree // g + 1)
        for i, cc in enumerate(pp.coeffs):
            if cc:
                out[i // g] = cc
        terms[e] = Poly(out)
    return ParamPoly(p.nvars, terms)
