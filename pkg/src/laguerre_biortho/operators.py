"""Laguerre shift operators acting exactly on exponential polynomials.

All forward operators are instances of

    (T_{a,b} f)(t) = f(t) - (a + b) int_0^t e^{-b(t - tau)} f(tau) dtau,

whose Laplace symbol is (s - a)/(s + b).  The plain Laguerre shift is
(a, b) = (1/2, 1/2), the alpha-shift is (alpha, alpha), and the two
biisometric operators are (alpha, beta) and (beta, alpha).  Adjoints replace
the causal integral by the tail integral over (t, inf).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .exppoly import (
    ExpPoly,
    RationalLaplace,
    deflate_at,
    ep_tail_exp,
    ep_to_laplace,
    ep_volterra_exp,
    laplace_distance,
)
from .laguerre import Params, dilate, family_fn, laguerre_poly
from .numeric_base import Poly, ctx, to_mpf

HALF = 0.5


class OperatorTag(str, enum.Enum):
    S = "S"
    S_star = "S_star"
    S_alpha = "S_alpha"
    S_alpha_star = "S_alpha_star"
    S_ab = "S_ab"
    S_ab_star = "S_ab_star"
    S_ba = "S_ba"
    S_ba_star = "S_ba_star"
    D = "D"


_FORWARD = {OperatorTag.S, OperatorTag.S_alpha, OperatorTag.S_ab, OperatorTag.S_ba}


def _rates(tag: OperatorTag, params: Params | None):
    """(a, b) of the underlying T_{a,b}."""
    if tag in (OperatorTag.S, OperatorTag.S_star):
        return HALF, HALF
    if params is None:
        raise DomainError(f"operator {tag.value} needs (alpha, beta)")
    a, b = params.alpha, params.beta
    if tag in (OperatorTag.S_alpha, OperatorTag.S_alpha_star):
        return a, a
    if tag in (OperatorTag.S_ab, OperatorTag.S_ab_star):
        return a, b
    return b, a


def shift(f: ExpPoly, a, b) -> ExpPoly:
    return f - ep_volterra_exp(f, b) * (to_mpf(a) + to_mpf(b))


def shift_adjoint(f: ExpPoly, a, b) -> ExpPoly:
    return f - ep_tail_exp(f, b) * (to_mpf(a) + to_mpf(b))


def apply_operator(tag: OperatorTag | str, f: ExpPoly, params: Params | None = None) -> ExpPoly:
    """Apply one of the tagged operators to ``f`` in closed form.

    ``S_alpha`` is the operator with kernel 2 alpha e^{-alpha(t - tau)}, i.e.
    the Laguerre shift conjugated by the dilation D_{2 alpha}; ``D`` is the
    dilation by 2 alpha itself.
    """
    tag = OperatorTag(tag)
    if tag is OperatorTag.D:
        if params is None:
            raise DomainError("operator D needs (alpha, beta)")
        return dilate(f, 2 * to_mpf(params.alpha))
    a, b = _rates(tag, params)
    if tag in _FORWARD:
        return shift(f, a, b)
    return shift_adjoint(f, a, b)


def laplace_shift(F: RationalLaplace, a, b) -> RationalLaplace:
    a, b = to_mpf(a), to_mpf(b)
    return F.times(Poly([-a, 1]), [(-b, 1)])


def laplace_shift_adjoint(F: RationalLaplace, a, b) -> RationalLaplace:
    """[(s + a) F(s) - (a + b) F(b)] / (s - b), the pole at b removed exactly."""
    a, b = to_mpf(a), to_mpf(b)
    if F.is_zero():
        return F
    den = F.denominator()
    num = Poly([a, 1]) * F.numerator - den * ((a + b) * F.value(b))
    return RationalLaplace(deflate_at(num, b), F.poles)


def laplace_dilate(F: RationalLaplace, c) -> RationalLaplace:
    """Transform of sqrt(c) f(c t): c^{-1/2} F(s / c)."""
    c = to_mpf(c)
    order = F.order
    num = F.numerator.rescale(1 / c) * (c**order / ctx.sqrt(c))
    return RationalLaplace(num, [(l * c, m) for l, m in F.poles])


def laplace_domain_apply(tag: OperatorTag | str, F: RationalLaplace, params: Params | None = None) -> RationalLaplace:
    tag = OperatorTag(tag)
    if tag is OperatorTag.D:
        if params is None:
            raise DomainError("operator D needs (alpha, beta)")
        return laplace_dilate(F, 2 * to_mpf(params.alpha))
    a, b = _rates(tag, params)
    if tag in _FORWARD:
        return laplace_shift(F, a, b)
    return laplace_shift_adjoint(F, a, b)


# --------------------------------------------------------------------------
# reports


@dataclass
class ReportEntry:
    check: str
    params: dict
    n: int | None
    residual: float
    tol: float
    passed: bool

    def to_dict(self) -> dict:
        return {"check": self.check, "params": self.params, "n": self.n,
                "residual": float(self.residual), "tol": float(self.tol), "pass": bool(self.passed)}


@dataclass
class Report:
    entries: list[ReportEntry] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(e.passed for e in self.entries)

    def add(self, check: str, params: Params | dict | None, n: int | None, residual, tol: float,
            passed: bool | None = None) -> ReportEntry:
        residual = float(residual)
        if passed is None:
            passed = bool(residual <= tol)
        if isinstance(params, Params):
            params = params.as_dict()
        entry = ReportEntry(check, params or {}, n, residual, float(tol), bool(passed))
        self.entries.append(entry)
        return entry

    def extend(self, other: "Report") -> "Report":
        self.entries.extend(other.entries)
        return self

    def sorted(self) -> "Report":
        return Report(sorted(self.entries, key=lambda e: (e.check, -1 if e.n is None else e.n)))

    def failures(self) -> list[ReportEntry]:
        return [e for e in self.entries if not e.passed]

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries], "all_pass": self.all_pass}

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


# --------------------------------------------------------------------------
# probes


def random_probes(count: int = 20, seed: int = 42, max_degree: int = 5, max_terms: int = 3) -> list[ExpPoly]:
    """Seeded random exponential polynomials.

    Each probe has 1..max_terms terms with rates uniform in [0.6, 4],
    degree uniform in 0..max_degree and coefficients uniform in [-1, 1].
    """
    rng = np.random.default_rng(seed)
    probes = []
    while len(probes) < count:
        terms = []
        for _ in range(int(rng.integers(1, max_terms + 1))):
            rate = float(rng.uniform(0.6, 4.0))
            deg = int(rng.integers(0, max_degree + 1))
            terms.append((rate, Poly(rng.uniform(-1.0, 1.0, deg + 1))))
        f = ExpPoly(terms)
        if not f.is_zero():
            probes.append(f)
    return probes


def _rel(f: ExpPoly, scale) -> float:
    return float(f.norm() / scale)


def check_laguerre_pair(params: Params, probes: Sequence[ExpPoly], tol: float = 1e-9) -> Report:
    """Biisometry, kernels, product identities and the multiplicity-2 kernel.

    k1  kernels of the adjoints are spanned by e^{-alpha t} and e^{-beta t}
    b1  S*_ab S_ba = I = S*_ba S_ab, relative residual per probe
    p1  S_ab S_ba = S_alpha S_beta = S_ba S_ab, relative residual per probe
    m2  (S_ab S_ba)* annihilates both e^{-alpha t} and e^{-beta t}
    """
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    report = Report()
    a, b = params.alpha, params.beta
    ea, eb = ExpPoly.exp(a), ExpPoly.exp(b)

    report.add("k1.ker_S_ab_star", params, None, shift_adjoint(ea, a, b).norm(), tol)
    report.add("k1.ker_S_ba_star", params, None, shift_adjoint(eb, b, a).norm(), tol)
    report.add("k1.ker_S_alpha_star", params, None, shift_adjoint(ea, a, a).norm(), tol)
    report.add("k1.ker_S_beta_star", params, None, shift_adjoint(eb, b, b).norm(), tol)

    for i, f in enumerate(probes):
        nf = f.norm()
        if nf == 0:
            raise DomainError("probes must be nonzero")
        s_ab, s_ba = shift(f, a, b), shift(f, b, a)
        report.add("b1.S_ab_star_S_ba", params, i, _rel(shift_adjoint(s_ba, a, b) - f, nf), tol)
        report.add("b1.S_ba_star_S_ab", params, i, _rel(shift_adjoint(s_ab, b, a) - f, nf), tol)
        prod = shift(shift(f, b, b), a, a)
        report.add("p1.S_ab_S_ba_vs_S_alpha_S_beta", params, i, _rel(shift(s_ba, a, b) - prod, nf), tol)
        report.add("p1.S_ba_S_ab_vs_S_alpha_S_beta", params, i, _rel(shift(s_ab, b, a) - prod, nf), tol)

    for name, g in (("e_alpha", ea), ("e_beta", eb)):
        # (S_ab S_ba)* = S_ba* S_ab*
        residual = shift_adjoint(shift_adjoint(g, a, b), b, a).norm()
        report.add(f"m2.ker_product_star.{name}", params, None, residual, tol)
    return report.sorted()


def power_identity_sides(n: int, params: Params, exponent: int):
    """([S_ab]^exponent e^{-alpha t}, S_alpha[e^{-beta t} L_n((alpha+beta) t)])."""
    a, b = params.alpha, params.beta
    lhs = ExpPoly.exp(a)
    for _ in range(exponent):
        lhs = shift(lhs, a, b)
    inner = ExpPoly([(b, laguerre_poly(n).rescale(to_mpf(a) + to_mpf(b)))])
    return lhs, shift(inner, a, a)


def check_power_identity(n: int, params: Params, tol: float = 1e-9) -> Report:
    """Check [S_ab]^{n+1} e^{-alpha t} = S_alpha[e^{-beta t} L_n((alpha+beta)t)] and its mirror.

    The same identity with exponent n on the left is false (its transforms
    differ by the factor (s + beta)/(s - alpha)); it is evaluated too and its
    entry passes when the residual is *above* tol, i.e. when the mismatch is
    confirmed.
    """
    if not 0 <= n <= 15:
        raise DomainError("power-identity checks run for 0 <= n <= 15")
    report = Report()
    for label, p in (("ab", params), ("ba", params.swapped())):
        lhs, rhs = power_identity_sides(n, p, n + 1)
        report.add(f"power.{label}.time.exponent_n_plus_1", params, n, (lhs - rhs).norm(), tol)
        report.add(f"power.{label}.laplace.exponent_n_plus_1", params, n,
                   laplace_distance(ep_to_laplace(lhs), _power_rhs_laplace(n, p)), tol)
        lhs_n, _ = power_identity_sides(n, p, n)
        residual = (lhs_n - rhs).norm()
        report.add(f"power.{label}.time.exponent_n_refuted", params, n, residual, tol, passed=residual > tol)
    return report.sorted()


def _power_rhs_laplace(n: int, params: Params) -> RationalLaplace:
    # H_alpha [H_ab]^n / (s + beta) built from symbols, independent of the time domain
    a, b = to_mpf(params.alpha), to_mpf(params.beta)
    base = RationalLaplace(Poly([1]), [(-b, 1)])
    for _ in range(n):
        base = laplace_shift(base, a, b)
    return laplace_shift(base, a, a)


def shift_generation_residuals(params: Params, nmax: int) -> list[tuple[str, int, float]]:
    """||S_ab psi_n - psi_{n+1}|| / ||psi_{n+1}|| and the phi / S_ba mirror."""
    out = []
    a, b = params.alpha, params.beta
    for tag, (x, y) in (("psi", (a, b)), ("phi", (b, a))):
        cur = family_fn(tag, 0, params)
        for n in range(nmax):
            nxt = family_fn(tag, n + 1, params)
            out.append((tag, n, float((shift(cur, x, y) - nxt).norm() / nxt.norm())))
            cur = nxt
    return out


def adjoint_residual(f: ExpPoly, g: ExpPoly, a, b) -> float:
    """|<T f; g> - <f; T* g>| relative to ||f|| ||g||."""
    lhs = shift(f, a, b).inner(g)
    rhs = f.inner(shift_adjoint(g, a, b))
    return float(abs(lhs - rhs) / (f.norm() * g.norm()))


def compose(tags: Iterable[OperatorTag | str], f: ExpPoly, params: Params | None = None) -> ExpPoly:
    """Apply tags right-to-left, as in operator notation."""
    for tag in reversed(list(tags)):
        f = apply_operator(tag, f, params)
    return f
