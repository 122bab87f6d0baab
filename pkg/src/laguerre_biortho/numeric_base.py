"""Polynomial arithmetic and Gauss-Laguerre quadrature on the half line.

Polynomial coefficients are held as extended-precision floats (``mpf`` from a
private mpmath context, see :data:`ctx`).  Laguerre coefficients alternate in
sign and grow combinatorially, so inner products assembled from monomial
coefficients cancel catastrophically in double precision once the degree
passes about ten.  Values leave this layer as plain ``float``.

The quadrature rule is plain double precision and independent of the exact
algebra; it serves as the numerical cross-check for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np
from mpmath.ctx_mp import MPContext

from .errors import OrderUnsupported

#: Private mpmath context; its precision is never changed after import.
ctx = MPContext()
ctx.dps = 90

MAX_RULE_ORDER = 180
DEFAULT_RULE_ORDER = 80


_MPF = ctx.mpf


def to_mpf(x):
    if type(x) is _MPF:
        return x
    if isinstance(x, np.generic):
        x = x.item()
    return ctx.mpf(x)


class Poly:
    """Real polynomial, ascending coefficients, canonical (no trailing zeros)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [c if type(c) is _MPF else to_mpf(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def linear_power(cls, root, m: int) -> "Poly":
        """(s - root)**m, expanded binomially."""
        r = -to_mpf(root)
        return cls([ctx.binomial(m, k) * r ** (m - k) for k in range(m + 1)])

    @property
    def degree(self) -> int:
        # zero polynomial reported as degree 0, like a constant
        return max(len(self.coeffs) - 1, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t):
        acc = ctx.zero
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __add__(self, other):
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            s = to_mpf(other)
            return Poly([c * s for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [ctx.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, m: int):
        out = Poly([1])
        for _ in range(m):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[float(c) for c in self.coeffs]})"

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def rescale(self, c) -> "Poly":
        """t -> p(c t)."""
        c = to_mpf(c)
        return Poly([a * c**k for k, a in enumerate(self.coeffs)])

    def divide_linear(self, root):
        """Synthetic division by (s - root); returns (quotient, remainder)."""
        root = to_mpf(root)
        if not self.coeffs:
            return Poly(), ctx.zero
        acc = ctx.zero
        quotient = []
        for c in reversed(self.coeffs):
            acc = acc * root + c
            quotient.append(acc)
        remainder = quotient.pop()
        return Poly(reversed(quotient)), remainder

    def abs_scale(self, t) -> object:
        """sum |c_k| |t|^k, the natural magnitude against which p(t) is judged."""
        t = abs(to_mpf(t))
        return ctx.fsum(abs(c) * t**k for k, c in enumerate(self.coeffs))

    def to_floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly([x])


def poly_eval(p: Poly, t):
    """Evaluate by Horner's scheme; float in, float out (arrays elementwise)."""
    if isinstance(t, np.ndarray):
        return np.array([float(p(to_mpf(x))) for x in t.ravel()]).reshape(t.shape)
    return float(p(to_mpf(t)))


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_scale(p: Poly, c) -> Poly:
    return p * c


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Laguerre rule with weights absorbing the e^{-t} factor.

    ``sum(modified_weights * h(nodes))`` approximates the integral of ``h``
    over [0, inf) for integrands decaying like e^{-ct}, c > 0.
    """

    order: int
    nodes: np.ndarray
    modified_weights: np.ndarray

    @property
    def weights(self) -> np.ndarray:
        """Classical weights w_i = modified_weights * e^{-t_i} (may underflow)."""
        return self.modified_weights * np.exp(-self.nodes)


def _scaled_laguerre(n: int, t: float) -> tuple[float, float]:
    """Return (e^{-t/2} L_n(t), e^{-t/2} L_{n-1}(t)).

    Running the three-term recurrence on the Laguerre *functions* keeps every
    value bounded by one, so nothing overflows even for t ~ 4n at n = 180.
    """
    prev = math.exp(-0.5 * t)
    if n == 0:
        return prev, 0.0
    cur = (1.0 - t) * prev
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - t) * cur - k * prev) / (k + 1)
    return cur, prev


@lru_cache(maxsize=None)
def gauss_laguerre_rule(order: int) -> QuadratureRule:
    """Nodes are the zeros of L_N, found by Newton iteration.

    Initial guesses follow the usual asymptotic extrapolation (first two
    from closed-form estimates, later ones from the spacing of the previous
    two).  Modified weights are t_i / ((N+1) e_{N+1}(t_i))^2 with
    e_n(t) = e^{-t/2} L_n(t), which equals w_i e^{t_i} without ever forming
    e^{t_i}.
    """
    n = int(order)
    if n != order or not 1 <= n <= MAX_RULE_ORDER:
        raise OrderUnsupported(f"quadrature order must be in 1..{MAX_RULE_ORDER}, got {order!r}")
    nodes = []
    for i in range(n):
        if i == 0:
            z = 3.0 / (1.0 + 2.4 * n)
        elif i == 1:
            z = nodes[0] + 15.0 / (1.0 + 2.5 * n)
        else:
            ai = i - 1
            z = nodes[-1] + (1.0 + 2.55 * ai) / (1.9 * ai) * (nodes[-1] - nodes[-2])
        for _ in range(100):
            cur, prev = _scaled_laguerre(n, z)
            # L_N / L_N' with L_N' = N (L_N - L_{N-1}) / t; the e^{-t/2} scale cancels
            step = z * cur / (n * (cur - prev))
            z -= step
            if abs(step) <= 4e-16 * max(1.0, z):
                break
        nodes.append(z)
    t = np.array(nodes)
    mw = np.array([x / ((n + 1) * _scaled_laguerre(n + 1, x)[0]) ** 2 for x in nodes])
    t.flags.writeable = False
    mw.flags.writeable = False
    return QuadratureRule(n, t, mw)


def integrate_halfline(h: Callable[[np.ndarray], np.ndarray], rule: QuadratureRule | None = None,
                       scale: float = 1.0) -> float:
    """sum_i w_i' h(t_i) / c evaluated at t_i = u_i / c.

    ``h`` is called once with the whole node array.  The substitution
    u = c t (``scale`` = c) lines the rule's e^{-u} weight up with an
    integrand decaying like e^{-c t}; with c = 1 this is the plain rule.
    """
    rule = rule or gauss_laguerre_rule(DEFAULT_RULE_ORDER)
    if not scale > 0:
        raise ValueError("scale must be positive")
    vals = np.asarray(h(rule.nodes / scale), dtype=float)
    return math.fsum(rule.modified_weights * vals) / scale
