"""Bounded Gosper-Petkovsek forms of rational functions.

A bounded form of order r for u writes u(t^{b^{r-1}}) as
zeta * C(t^b)/C(t) * A(t^{b^{r-1}})/B(t) with monic A, B, C subject to
coprimality conditions limited to the shifts 0..r-1, which is what makes the
divisor search of the Petkovsek-style solvers finite.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq as QQ

from .exactpoly import Poly, P_ONE, RatFun, poly_gcd


@dataclass(frozen=True)
class GPForm:
    zeta: object  # nonzero QQ
    A: Poly
    B: Poly
    C: Poly
    order: int  # r >= 2
    b: int  # radix

    def __post_init__(self):
        if not self.zeta:
            raise ValueError("zeta must be nonzero")
        if self.order < 2:
            raise ValueError("order must be >= 2")
        for p in (self.A, self.B, self.C):
            if p.is_zero or p.lc != 1:
                raise ValueError("A, B, C must be monic")


def bgpf_from_rational(P: Poly, Q: Poly, r: int, b: int) -> GPForm:
    """Bounded form of order r for P/Q with zeta = 1, by the gcd recurrence.

    Runs (A_1, B_1, C_1) = (P, Q, 1) and, with G_k = gcd(A_k, M B_k),
    (A_{k+1}, B_{k+1}, C_{k+1}) = (A_k/G_k, M B_k/G_k, M C_k * G_k M G_k ... M^{k-1} G_k).
    """
    if P.is_zero or Q.is_zero:
        raise ValueError("zero input")
    if P.lc != 1 or Q.lc != 1:
        raise ValueError("P and Q must be monic")
    if poly_gcd(P, Q).degree > 0:
        raise ValueError("P and Q must be coprime")
    A, B, C = P, Q, P_ONE
    for k in range(1, r):
        MB = B.substitute_power(b)
        G = poly_gcd(A, MB)
        A = A.exact_div(G).monic()
        B = MB.exact_div(G).monic()
        newC = C.substitute_power(b)
        for i in range(k):
            newC = newC * G.substitute_power(b ** i)
        C = newC.monic()
    return GPForm(QQ(1), A, B, C, r, b)


def check_bgpf(form: GPForm, u: RatFun) -> bool:
    """All four defining conditions of a bounded form of order r for u."""
    r, b = form.order, form.b
    A, B, C = form.A, form.B, form.C
    m = b ** (r - 1)
    # (i) u(t^{b^{r-1}}) = zeta C(t^b)/C(t) A(t^{b^{r-1}})/B(t), cross-multiplied
    cross1 = u.num.substitute_power(m) * (C * B)
    cross2 = u.den.substitute_power(m) * (
        C.substitute_power(b) * A.substitute_power(m) * form.zeta
    )
    if cross1 != cross2:
        return False
    # (ii) gcd(M^{r-1} A, C) = 1
    if poly_gcd(A.substitute_power(m), C).degree > 0:
        return False
    # (iii) gcd(B, M C) = 1
    if poly_gcd(B, C.substitute_power(b)).degree > 0:
        return False
    # (iv) gcd(M^i A, B) = 1 for 0 <= i <= r-1
    for i in range(r):
        if poly_gcd(A.substitute_power(b ** i), B).degree > 0:
            return False
    return True
