"""Effective differential-transcendence criterion for order-2 Mahler equations.

For an order-2 operator with a nonzero power-series solution f and l1 != 0,
the pair {f, Mf} is differentially algebraically independent as soon as the
Riccati equation of the operator itself and a companion Riccati equation in
radix b^2 both have no ramified rational solutions.  Completeness of the
solvers holds over rational leading coefficients, so the verdict is
downgraded to inconclusive whenever irrational admissible lambda exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactpoly import Poly, RatFun, poly_gcd, poly_lcm
from .mahler import MahlerOperator
from .riccati_hp import riccati_hp
from .series import series_basis


@dataclass(frozen=True)
class TranscendenceVerdict:
    status: str  # "independent" | "inconclusive"
    witnesses: tuple = ()  # SolutionBlock found for (r1)/(r2)
    unsupported: tuple = ()  # minimal-polynomial strings of skipped lambda

    @property
    def independent(self) -> bool:
        return self.status == "independent"


def riccati_r2_operator(L: MahlerOperator) -> MahlerOperator:
    """Order-2 operator in radix b^2 whose cleared Riccati equation is
    u M^2 u + (M^2(l0/l1) - M(l1/l2) + (l2/l1) M(l0/l2)) u + l2 l0 Ml0 / (l1^2 Ml1).
    """
    if L.order != 2:
        raise ValueError("operator must have order 2")
    l0, l1, l2 = L.coeff(0), L.coeff(1), L.coeff(2)
    if l1.is_zero:
        raise ValueError(
            "l1 = 0: the equation is first-order in radix b^2; not supported"
        )
    b = L.b

    def M(f: RatFun, k: int = 1) -> RatFun:
        return f.substitute_power(b ** k)

    f1 = (
        M(RatFun(l0, l1), 2)
        - M(RatFun(l1, l2))
        + RatFun(l2, l1) * M(RatFun(l0, l2))
    )
    f0 = RatFun(l2 * l0 * l0.substitute_power(b), l1 * l1 * l1.substitute_power(b))
    den = poly_lcm(f1.den, f0.den)
    c2 = den
    c1 = f1.num * den.exact_div(f1.den)
    c0 = f0.num * den.exact_div(f0.den)
    return MahlerOperator(b * b, [c0, c1, c2])


def independence_check(
    L: MahlerOperator, sigma_cap: int | None = None
) -> TranscendenceVerdict:
    """Run the sieve on the operator's Riccati equation and its companion."""
    if L.order != 2:
        raise ValueError("operator must have order 2")
    if L.coeff(1).is_zero:
        raise ValueError("l1 = 0 is not supported")
    if series_basis(L, 4).dimension == 0:
        raise ValueError("no nonzero power-series solution")
    witnesses = []
    unsupported = []
    for op in (L, riccati_r2_operator(L)):
        rep = {}
        kwargs = {"report": rep}
        if sigma_cap is not None:
            kwargs["sigma_cap"] = sigma_cap
        blocks = riccati_hp(op, **kwargs)
        witnesses.extend(blocks)
        unsupported.extend(rep.get("unsupported_lambda", ()))
    if not witnesses and not unsupported:
        return TranscendenceVerdict(status="independent")
    return TranscendenceVerdict(
        status="inconclusive",
        witnesses=tuple(witnesses),
        unsupported=tuple(unsupported),
    )
