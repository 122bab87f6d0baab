"""Exponential polynomials sum_j e^{-g_j t} p_j(t) and their Laplace transforms.

Every function the Laguerre operators touch stays inside this class, and
every operator has a closed form on it, so all identities can be checked
without discretisation.
"""

from __future__ import annotations

import json
import warnings
from math import factorial
from typing import Iterable

import numpy as np

from .errors import DeflationFailure, DomainError, EvaluationDomainError, ConditioningWarning
from .numeric_base import Poly, ctx, to_mpf

RATE_MERGE_RTOL = 1e-12
RATE_WARN_RTOL = 1e-8
# removable poles left behind by exact cancellation sit near the working
# precision (1e-90); genuine residues are many orders above this
CANCEL_RTOL = 1e-50
DEFLATION_RTOL = 1e-9


def _close_rates(a, b, rtol):
    return abs(a - b) <= rtol * max(abs(a), abs(b))


class ExpPoly:
    """Finite sum of terms e^{-rate t} * poly(t) with all rates positive.

    Terms are kept sorted by rate; rates within 1e-12 relative of each other
    are merged and zero polynomials are dropped.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable = ()):
        merged: list[list] = []
        for rate, poly in sorted(((to_mpf(r), p if isinstance(p, Poly) else Poly(p)) for r, p in terms),
                                 key=lambda rp: rp[0]):
            if not rate > 0:
                raise DomainError(f"exponential rate must be positive, got {float(rate)}")
            if merged and _close_rates(merged[-1][0], rate, RATE_MERGE_RTOL):
                merged[-1][1] = merged[-1][1] + poly
            else:
                merged.append([rate, poly])
        object.__setattr__(self, "terms", tuple((r, p) for r, p in merged if not p.is_zero()))

    def __setattr__(self, name, value):
        raise AttributeError("ExpPoly is immutable")

    @classmethod
    def exp(cls, rate, coeff=1) -> "ExpPoly":
        """coeff * e^{-rate t}."""
        return cls([(rate, Poly([coeff]))])

    @classmethod
    def zero(cls) -> "ExpPoly":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def rates(self) -> list:
        return [r for r, _ in self.terms]

    def __call__(self, t):
        return ctx.fsum(ctx.exp(-r * t) * p(t) for r, p in self.terms)

    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return ExpPoly(self.terms + other.terms)

    def __neg__(self):
        return ExpPoly((r, -p) for r, p in self.terms)

    def __sub__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            return ExpPoly((r + s, p * q) for r, p in self.terms for s, q in other.terms)
        c = to_mpf(other)
        return ExpPoly((r, p * c) for r, p in self.terms)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / to_mpf(c))

    def inner(self, other: "ExpPoly"):
        """Exact L^2[0, inf) inner product, returned as mpf.

        Uses int_0^inf t^k e^{-g t} dt = k! / g^{k+1} termwise.
        """
        acc = []
        for r, p in self.terms:
            for s, q in other.terms:
                g = r + s
                # k! / g^{k+1} built incrementally
                moment = 1 / g
                for k, c in enumerate((p * q).coeffs):
                    acc.append(c * moment)
                    moment = moment * (k + 1) / g
        return ctx.fsum(acc)

    def norm(self):
        return ctx.sqrt(max(self.inner(self), ctx.zero))

    def __repr__(self):
        inner = ", ".join(f"({float(r):g}, {p.to_floats()})" for r, p in self.terms)
        return f"ExpPoly([{inner}])"

    def to_json_obj(self) -> list[dict]:
        return [{"rate": float(r), "coeffs": p.to_floats()} for r, p in self.terms]

    @classmethod
    def from_json_obj(cls, obj) -> "ExpPoly":
        return cls((item["rate"], Poly(item["coeffs"])) for item in obj)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text: str) -> "ExpPoly":
        return cls.from_json_obj(json.loads(text))


def ep_eval(f: ExpPoly, t):
    """Evaluate at t >= 0; accepts a scalar or a numpy array, returns floats."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("exponential polynomials are evaluated on t >= 0 only")
    if arr.ndim == 0:
        return float(f(to_mpf(float(arr))))
    return np.array([float(f(to_mpf(x))) for x in arr.ravel()]).reshape(arr.shape)


def ep_inner(f: ExpPoly, g: ExpPoly) -> float:
    return float(f.inner(g))


def ep_norm(f: ExpPoly) -> float:
    return float(f.norm())


def ep_volterra_exp(f: ExpPoly, rate) -> ExpPoly:
    """t -> int_0^t e^{-b(t - tau)} f(tau) dtau, exactly.

    For a term e^{-g t} p(t) with g != b, let d = b - g and
    Q = sum_j (-1)^j p^(j) / d^(j+1), so that (e^{d t} Q)' = e^{d t} p.
    The integral is then e^{-g t} Q(t) - Q(0) e^{-b t}.  Equal rates give
    e^{-b t} times the antiderivative of p.
    """
    b = to_mpf(rate)
    if not b > 0:
        raise DomainError("smoothing rate must be positive")
    out = []
    for g, p in f.terms:
        if _close_rates(g, b, RATE_MERGE_RTOL):
            anti = Poly([0] + [c / (k + 1) for k, c in enumerate(p.coeffs)])
            out.append((b, anti))
            continue
        if _close_rates(g, b, RATE_WARN_RTOL):
            warnings.warn(f"rates {float(g)!r} and {float(b)!r} nearly coincide; "
                          "split convolution formula is ill-conditioned", ConditioningWarning, stacklevel=2)
        d = b - g
        q = Poly()
        deriv = p
        j = 0
        while not deriv.is_zero():
            q = q + deriv * ((-1) ** j / d ** (j + 1))
            deriv = deriv.derivative()
            j += 1
        out.append((g, q))
        out.append((b, Poly([-q(0)])))
    return ExpPoly(out)


def ep_tail_exp(f: ExpPoly, rate) -> ExpPoly:
    """t -> int_t^inf e^{-b(s - t)} f(s) ds, exactly.

    A term e^{-g t} p(t) maps to e^{-g t} R(t) with R = sum_j p^(j) / (b+g)^(j+1).
    """
    b = to_mpf(rate)
    if not b > 0:
        raise DomainError("smoothing rate must be positive")
    out = []
    for g, p in f.terms:
        c = b + g
        r = Poly()
        deriv = p
        j = 0
        while not deriv.is_zero():
            r = r + deriv * (1 / c ** (j + 1))
            deriv = deriv.derivative()
            j += 1
        out.append((g, r))
    return ExpPoly(out)


class RationalLaplace:
    """Strictly proper rational function N(s) / prod_j (s - p_j)^{m_j}, all p_j < 0.

    The denominator is kept factored.  Construction merges coincident poles
    and cancels poles at which the numerator vanishes to working precision.
    """

    __slots__ = ("numerator", "poles")

    def __init__(self, numerator, poles: Iterable = ()):
        num = numerator if isinstance(numerator, Poly) else Poly(numerator)
        merged: list[list] = []
        for loc, mult in sorted(((to_mpf(l), int(m)) for l, m in poles), key=lambda lm: lm[0]):
            if not loc < 0:
                raise DomainError(f"pole at {float(loc)} is not in the open left half-plane")
            if mult <= 0:
                continue
            if merged and _close_rates(merged[-1][0], loc, RATE_MERGE_RTOL):
                merged[-1][1] += mult
            else:
                merged.append([loc, mult])
        if num.is_zero():
            merged = []
        else:
            for item in merged:
                while item[1] > 0:
                    quo, rem = num.divide_linear(item[0])
                    if abs(rem) > CANCEL_RTOL * num.abs_scale(item[0]):
                        break
                    num = quo
                    item[1] -= 1
        poles_t = tuple((l, m) for l, m in merged if m > 0)
        if not num.is_zero() and len(num.coeffs) - 1 >= sum(m for _, m in poles_t):
            raise DomainError("Laplace transform must be strictly proper")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "poles", poles_t)

    def __setattr__(self, name, value):
        raise AttributeError("RationalLaplace is immutable")

    @classmethod
    def zero(cls) -> "RationalLaplace":
        return cls(Poly())

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    @property
    def order(self) -> int:
        return sum(m for _, m in self.poles)

    def denominator(self) -> Poly:
        out = Poly([1])
        for loc, mult in self.poles:
            out = out * Poly.linear_power(loc, mult)
        return out

    def __call__(self, s):
        return laplace_eval(self, s)

    def value(self, s):
        """Evaluate at s (mpf/mpc) without domain checks; internal use."""
        den = ctx.one
        for loc, mult in self.poles:
            den *= (s - loc) ** mult
        return self.numerator(s) / den

    def times(self, factor: Poly, extra_poles: Iterable = ()) -> "RationalLaplace":
        return RationalLaplace(self.numerator * factor, list(self.poles) + list(extra_poles))

    def __repr__(self):
        poles = ", ".join(f"({float(l):g})^{m}" for l, m in self.poles)
        return f"RationalLaplace({self.numerator.to_floats()} / [{poles}])"

    def to_json_obj(self) -> dict:
        return {"numerator": self.numerator.to_floats(),
                "poles": [{"loc": float(l), "mult": m} for l, m in self.poles]}

    @classmethod
    def from_json_obj(cls, obj) -> "RationalLaplace":
        return cls(Poly(obj["numerator"]), [(p["loc"], p["mult"]) for p in obj["poles"]])

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text: str) -> "RationalLaplace":
        return cls.from_json_obj(json.loads(text))


def ep_to_laplace(f: ExpPoly) -> RationalLaplace:
    """Termwise t^k e^{-g t} -> k! / (s + g)^{k+1}, over the common denominator."""
    if f.is_zero():
        return RationalLaplace.zero()
    mults = [len(p.coeffs) for _, p in f.terms]
    factors = [Poly.linear_power(-g, m) for (g, _), m in zip(f.terms, mults)]
    num = Poly()
    for j, (g, p) in enumerate(f.terms):
        others = Poly([1])
        for i, fac in enumerate(factors):
            if i != j:
                others = others * fac
        part = Poly()
        for k, c in enumerate(p.coeffs):
            part = part + Poly.linear_power(-g, mults[j] - k - 1) * (c * factorial(k))
        num = num + part * others
    return RationalLaplace(num, [(-g, m) for (g, _), m in zip(f.terms, mults)])


def laplace_eval(F: RationalLaplace, s) -> complex:
    """numerator(s) / prod (s - p)^m for Re(s) strictly right of every pole."""
    s = complex(s)
    if F.poles and not s.real > max(float(l) for l, _ in F.poles):
        raise EvaluationDomainError(f"s = {s} is not right of all poles")
    return complex(F.value(ctx.mpc(s.real, s.imag)))


def deflate_at(F_num: Poly, root, rtol: float = DEFLATION_RTOL) -> Poly:
    """Divide by (s - root), insisting the remainder is negligible."""
    quo, rem = F_num.divide_linear(root)
    scale = max((abs(c) for c in F_num.coeffs), default=ctx.zero)
    if abs(rem) > rtol * max(scale, ctx.mpf(1e-300)):
        raise DeflationFailure(f"remainder {float(rem):.3e} at s = {float(root)} is not removable",
                               remainder=float(rem), root=float(root))
    return quo


def laplace_close(F: RationalLaplace, G: RationalLaplace, rtol: float = 1e-10) -> bool:
    """Same poles, and numerators agree coefficient-wise to rtol * max|coefficient|."""
    return laplace_distance(F, G) <= rtol


def laplace_distance(F: RationalLaplace, G: RationalLaplace) -> float:
    """Relative coefficient-wise numerator mismatch; inf if the pole sets differ."""
    if F.is_zero() and G.is_zero():
        return 0.0
    if len(F.poles) != len(G.poles):
        return float("inf")
    for (l1, m1), (l2, m2) in zip(F.poles, G.poles):
        if m1 != m2 or not _close_rates(l1, l2, RATE_MERGE_RTOL):
            return float("inf")
    a, b = F.numerator.coeffs, G.numerator.coeffs
    n = max(len(a), len(b))
    a = list(a) + [ctx.zero] * (n - len(a))
    b = list(b) + [ctx.zero] * (n - len(b))
    scale = max(max(abs(x) for x in a), max(abs(x) for x in b))
    return float(max(abs(x - y) for x, y in zip(a, b)) / scale)
