"""Laguerre polynomials and the function families built from them.

``phi`` carries the envelope e^{-alpha t} and ``psi`` the envelope e^{-beta t};
both use the polynomial argument (alpha + beta) t and the factor
sqrt(alpha + beta).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import DomainError, IndexOverflow, InvalidParams
from .exppoly import ExpPoly, RationalLaplace
from .numeric_base import Poly, ctx, to_mpf

MAX_INDEX = 40
RECOMMENDED_INDEX = 20


@dataclass(frozen=True)
class Params:
    alpha: float = 1.0
    beta: float = 2.0

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not value >= 0.5:
                raise InvalidParams(f"{name} below 1/2: {value!r}")

    def swapped(self) -> "Params":
        return Params(self.beta, self.alpha)

    def as_dict(self) -> dict:
        return {"alpha": float(self.alpha), "beta": float(self.beta)}


class FamilyTag(str, enum.Enum):
    laguerre_fn = "laguerre_fn"
    alpha_laguerre = "alpha_laguerre"
    phi = "phi"
    psi = "psi"


def _check_index(n: int):
    if int(n) != n or n < 0:
        raise DomainError(f"index must be a nonnegative integer, got {n!r}")
    if n > MAX_INDEX:
        raise IndexOverflow(f"index {n} exceeds the conditioning cap {MAX_INDEX}")


def laguerre_poly(n: int) -> Poly:
    """L_n from (k+1) L_{k+1} = (2k+1-t) L_k - k L_{k-1}, L_0 = 1, L_1 = 1 - t."""
    _check_index(n)
    prev, cur = Poly([1]), Poly([1, -1])
    if n == 0:
        return prev
    t = Poly([0, 1])
    for k in range(1, n):
        prev, cur = cur, (cur * (2 * k + 1) - t * cur - prev * k) * (ctx.one / (k + 1))
    return cur


def dilate(f: ExpPoly, c) -> ExpPoly:
    """t -> sqrt(c) f(c t); unitary on L^2[0, inf) for every c > 0."""
    c = to_mpf(c)
    if not c > 0:
        raise DomainError("dilation factor must be positive")
    root = ctx.sqrt(c)
    return ExpPoly((r * c, p.rescale(c) * root) for r, p in f.terms)


def laguerre_function(n: int) -> ExpPoly:
    """e_n(t) = e^{-t/2} L_n(t)."""
    return ExpPoly([(ctx.mpf(0.5), laguerre_poly(n))])


def family_fn(tag: FamilyTag | str, n: int, params: Params | None = None) -> ExpPoly:
    tag = FamilyTag(tag)
    if tag is FamilyTag.laguerre_fn:
        return laguerre_function(n)
    params = params or Params()
    a, b = to_mpf(params.alpha), to_mpf(params.beta)
    if tag is FamilyTag.alpha_laguerre:
        c = 2 * a
        return ExpPoly([(a, laguerre_poly(n).rescale(c) * ctx.sqrt(c))])
    c = a + b
    poly = laguerre_poly(n).rescale(c) * ctx.sqrt(c)
    return ExpPoly([(a if tag is FamilyTag.phi else b, poly)])


def family_laplace(tag: FamilyTag | str, n: int, params: Params | None = None) -> RationalLaplace:
    """Closed-form transforms of phi_n and psi_n.

    phi_n -> sqrt(a+b) (s - b)^n / (s + a)^{n+1}, psi_n with a and b exchanged.
    """
    tag = FamilyTag(tag)
    _check_index(n)
    params = params or Params()
    a, b = to_mpf(params.alpha), to_mpf(params.beta)
    if tag is FamilyTag.phi:
        zero, pole = b, -a
    elif tag is FamilyTag.psi:
        zero, pole = a, -b
    else:
        raise ValueError(f"closed-form transform available for phi and psi only, not {tag.value}")
    return RationalLaplace(Poly.linear_power(zero, n) * ctx.sqrt(a + b), [(pole, n + 1)])
