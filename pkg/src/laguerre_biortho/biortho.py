"""Biorthogonal sequences generated by biisometric pairs.

Two carriers are supported: :class:`~laguerre_biortho.exppoly.ExpPoly`
functions with the exact Laguerre operators, and finite coordinate vectors
(numpy arrays) with matrices.  Functions here only need an inner product,
addition and scalar multiplication, which both carriers provide.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DepthExceeded, GSDegenerate, NotBiisometric, NotBiorthogonal, NotMinimal
from .exppoly import ExpPoly
from .laguerre import Params, family_fn, laguerre_function
from .numeric_base import ctx, to_mpf
from .operators import random_probes, shift, shift_adjoint

BIORTHO_TOL = 1e-9


def inner(x, y):
    """Carrier inner product: mpf for ExpPoly, float for vectors."""
    if isinstance(x, ExpPoly):
        return x.inner(y)
    return float(np.dot(x, y))


def norm(x):
    if isinstance(x, ExpPoly):
        return x.norm()
    return float(np.linalg.norm(x))


def _sqrt(x):
    return ctx.sqrt(x) if isinstance(x, ctx.mpf) else np.sqrt(x)


def combine(coeffs: Sequence, elems: Sequence):
    """sum_k coeffs[k] * elems[k]."""
    if not elems:
        raise ValueError("nothing to combine")
    if isinstance(elems[0], ExpPoly):
        return ExpPoly(itertools.chain.from_iterable((c * e).terms for c, e in zip(coeffs, elems)))
    out = np.zeros_like(np.asarray(elems[0], dtype=float))
    for c, e in zip(coeffs, elems):
        out = out + float(c) * np.asarray(e, dtype=float)
    return out


@dataclass
class BiisometricPair:
    """Operators V, W with V*W = I, plus kernel witnesses v in N(V*), w in N(W*).

    On construction the witnesses are rescaled so that <w; v> = 1: both are
    multiplied by |<w; v>|^{-1/2} and the sign goes to w.
    """

    V: Callable
    W: Callable
    Vstar: Callable
    Wstar: Callable
    v: object
    w: object
    carrier: str = "exppoly"
    name: str = ""
    probes: Sequence = ()
    tol: float = BIORTHO_TOL
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        ip = inner(self.w, self.v)
        if abs(ip) <= 1e-300:
            raise NotBiisometric("kernel witnesses are orthogonal; <w; v> cannot be normalised")
        scale = 1 / _sqrt(abs(ip))
        sign = 1 if ip > 0 else -1
        self.w = self.w * (sign * scale)
        self.v = self.v * scale
        self.witness = self.check_witness(self.probes)
        bad = {k: r for k, r in self.witness.items() if r > self.tol}
        if bad:
            raise NotBiisometric(f"biisometry witness failed: {bad}", **bad)

    def check_witness(self, probes: Sequence = ()) -> dict:
        out = {
            "kernel_v": float(norm(self.Vstar(self.v)) / norm(self.v)),
            "kernel_w": float(norm(self.Wstar(self.w)) / norm(self.w)),
        }
        worst_vw = worst_wv = 0.0
        for x in probes:
            nx = norm(x)
            worst_vw = max(worst_vw, float(norm(self.Vstar(self.W(x)) - x) / nx))
            worst_wv = max(worst_wv, float(norm(self.Wstar(self.V(x)) - x) / nx))
        if probes:
            out["VstarW_minus_I"] = worst_vw
            out["WstarV_minus_I"] = worst_wv
        return out


def laguerre_pair(params: Params, probes: Sequence | None = None) -> BiisometricPair:
    """V = S_ba, W = S_ab with w ~ e^{-alpha t} and v ~ e^{-beta t}.

    The generated sequences are phi_n (envelope e^{-alpha t}) and psi_n
    (envelope e^{-beta t}).
    """
    a, b = params.alpha, params.beta
    root = ctx.sqrt(to_mpf(a) + to_mpf(b))
    return BiisometricPair(
        V=lambda f: shift(f, b, a),
        W=lambda f: shift(f, a, b),
        Vstar=lambda f: shift_adjoint(f, b, a),
        Wstar=lambda f: shift_adjoint(f, a, b),
        v=ExpPoly.exp(b, root),
        w=ExpPoly.exp(a, root),
        carrier="exppoly",
        name=f"laguerre(alpha={a}, beta={b})",
        probes=random_probes(5, seed=7) if probes is None else probes,
    )


def laguerre_shift_pair(probes: Sequence | None = None) -> BiisometricPair:
    """V = W = S, v = w = e_0: the orthonormal Laguerre functions."""
    return BiisometricPair(
        V=lambda f: shift(f, 0.5, 0.5),
        W=lambda f: shift(f, 0.5, 0.5),
        Vstar=lambda f: shift_adjoint(f, 0.5, 0.5),
        Wstar=lambda f: shift_adjoint(f, 0.5, 0.5),
        v=laguerre_function(0),
        w=laguerre_function(0),
        carrier="exppoly",
        name="laguerre-shift",
        probes=random_probes(5, seed=7) if probes is None else probes,
    )


def matrix_pair(V: np.ndarray, W: np.ndarray, v, w, probes: Sequence = (), name: str = "matrix") -> BiisometricPair:
    """Finite carrier.  Truncations of shifts satisfy V^T W = I only on part of
    the space, so ``probes`` should be drawn from that part."""
    V = np.asarray(V, dtype=float)
    W = np.asarray(W, dtype=float)
    return BiisometricPair(
        V=lambda x: V @ x,
        W=lambda x: W @ x,
        Vstar=lambda x: V.T @ x,
        Wstar=lambda x: W.T @ x,
        v=np.asarray(v, dtype=float),
        w=np.asarray(w, dtype=float),
        carrier="finite",
        name=name,
        probes=probes,
    )


def shift_matrix(dim: int) -> np.ndarray:
    """Truncated unilateral shift: e_k -> e_{k+1}, last basis vector -> 0."""
    return np.eye(dim, k=-1)


class BiorthoCheck(NamedTuple):
    residual: float
    worst: tuple[int, int]
    passed: bool


def check_biorthogonality(phis: Sequence, psis: Sequence, tol: float = BIORTHO_TOL) -> BiorthoCheck:
    """max_{m,n} |<phi_m; psi_n> - delta_mn| and where it occurs."""
    if len(phis) != len(psis):
        raise ValueError("families must have equal length")
    worst, where = 0.0, (0, 0)
    for m, f in enumerate(phis):
        for n, g in enumerate(psis):
            r = float(abs(inner(f, g) - (1 if m == n else 0)))
            if r > worst:
                worst, where = r, (m, n)
    return BiorthoCheck(worst, where, worst <= tol)


@dataclass
class BiorthoSystem:
    phis: list
    psis: list
    provenance: str = ""
    carrier: str = "exppoly"
    residuals: dict = field(default_factory=dict)
    pair: BiisometricPair | None = None

    @property
    def depth(self) -> int:
        return len(self.phis)

    def to_json_obj(self) -> dict:
        def ser(x):
            return x.to_json_obj() if isinstance(x, ExpPoly) else [float(c) for c in x]

        return {
            "carrier": self.carrier,
            "depth": self.depth,
            "provenance": self.provenance,
            "phis": [ser(x) for x in self.phis],
            "psis": [ser(x) for x in self.psis],
            "residuals": {k: float(v) for k, v in self.residuals.items()},
        }


def generate_system(pair: BiisometricPair, depth: int, tol: float = BIORTHO_TOL) -> BiorthoSystem:
    """phi_n = V^n w, psi_n = W^n v for n < depth, verified before returning.

    Besides biorthogonality, the four shifting relations V phi_n = phi_{n+1},
    W psi_n = psi_{n+1}, V* psi_{n+1} = psi_n and W* phi_{n+1} = phi_n are
    measured (the first two hold by construction).
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    phis, psis = [pair.w], [pair.v]
    for _ in range(depth - 1):
        phis.append(pair.V(phis[-1]))
        psis.append(pair.W(psis[-1]))
    check = check_biorthogonality(phis, psis, tol)
    if not check.passed:
        m, n = check.worst
        raise NotBiisometric(f"<phi_{m}; psi_{n}> off by {check.residual:.3e}",
                             m=m, n=n, residual=check.residual)
    residuals = {"biorthogonality": check.residual}
    for key in ("V_phi", "W_psi", "Vstar_psi", "Wstar_phi"):
        residuals[key] = 0.0
    for n in range(depth - 1):
        rel = [
            ("V_phi", pair.V(phis[n]) - phis[n + 1], phis[n + 1]),
            ("W_psi", pair.W(psis[n]) - psis[n + 1], psis[n + 1]),
            ("Vstar_psi", pair.Vstar(psis[n + 1]) - psis[n], psis[n]),
            ("Wstar_phi", pair.Wstar(phis[n + 1]) - phis[n], phis[n]),
        ]
        for key, diff, ref in rel:
            residuals[key] = max(residuals[key], float(norm(diff) / (1 + norm(ref))))
    bad = {k: r for k, r in residuals.items() if r > tol}
    if bad:
        raise NotBiisometric(f"shifting relations violated: {bad}", **bad)
    return BiorthoSystem(phis, psis, provenance=pair.name, carrier=pair.carrier,
                         residuals=residuals, pair=pair)


def family_system(params: Params, depth: int) -> BiorthoSystem:
    """phi_n, psi_n built directly from their closed forms, n < depth."""
    phis = [family_fn("phi", n, params) for n in range(depth)]
    psis = [family_fn("psi", n, params) for n in range(depth)]
    return BiorthoSystem(phis, psis, provenance=f"closed-form(alpha={params.alpha}, beta={params.beta})")


def expand(f, system: BiorthoSystem, K: int, side: str = "phi") -> list:
    """Expansion coefficients of f.

    side="phi": c_k = <f; psi_k>, the coefficients of f along phi_k.
    side="psi": d_k = <f; phi_k>, the coefficients along psi_k.
    """
    if K > system.depth:
        raise DepthExceeded(f"{K} coefficients requested from a depth-{system.depth} system")
    duals = system.psis if side == "phi" else system.phis if side == "psi" else None
    if duals is None:
        raise ValueError(f"side must be 'phi' or 'psi', not {side!r}")
    return [inner(f, duals[k]) for k in range(K)]


_MODES = {
    # (side, mode): (coefficient offset, basis index offset)
    ("phi", "identity"): (0, 0),
    ("phi", "V"): (0, 1),
    ("phi", "Wstar"): (1, 0),
    ("psi", "identity"): (0, 0),
    ("psi", "W"): (0, 1),
    ("psi", "Vstar"): (1, 0),
}


def synthesize(coeffs: Sequence, system: BiorthoSystem, side: str = "phi", mode: str = "identity"):
    """Series sums built from expansion coefficients.

    With c_k = <f; psi_k> (side="phi"):
        identity  sum c_k phi_k          (= f)
        V         sum c_k phi_{k+1}      (= V f)
        Wstar     sum c_{k+1} phi_k      (= W* f)
    With d_k = <f; phi_k> (side="psi"): identity, W and Vstar likewise with
    psi in place of phi.
    """
    try:
        c_off, b_off = _MODES[(side, mode)]
    except KeyError:
        raise ValueError(f"mode {mode!r} is not available on side {side!r}") from None
    basis = system.phis if side == "phi" else system.psis
    cs = list(coeffs)[c_off:]
    if len(cs) + b_off > system.depth:
        raise DepthExceeded(f"need basis element {len(cs) + b_off - 1}, system depth is {system.depth}")
    return combine(cs, basis[b_off:b_off + len(cs)])


class Proportionality(NamedTuple):
    index: int
    status: str  # "proportional", "hypothesis-not-met" or "violation"
    alpha: float | None
    residual: float | None


def check_proportionality(fs: Sequence, gs: Sequence, norm_tol: float = 1e-9,
                          prop_tol: float = 1e-8) -> list[Proportionality]:
    """Per index: if ||f_n|| = 1/||g_n||, confirm f_n = ||f_n||^2 g_n.

    Indices where the norm hypothesis fails are reported and nothing is
    claimed about them.
    """
    if len(fs) != len(gs):
        raise ValueError("families must have equal length")
    out = []
    for n, (f, g) in enumerate(zip(fs, gs)):
        ip = inner(f, g)
        if abs(ip - 1) > BIORTHO_TOL:
            raise NotBiorthogonal(f"<f_{n}; g_{n}> = {float(ip)!r}, expected 1", index=n)
        nf, ng = norm(f), norm(g)
        if abs(nf - 1 / ng) > norm_tol:
            out.append(Proportionality(n, "hypothesis-not-met", None, None))
            continue
        a = nf * nf
        residual = float(norm(f - g * a))
        status = "proportional" if residual <= prop_tol else "violation"
        out.append(Proportionality(n, status, float(a), residual))
    return out


def gram_schmidt_biortho(fs: Sequence, gs: Sequence, N: int | None = None, verify: bool = True,
                         tol: float = BIORTHO_TOL):
    """Biorthonormalise two sequences.

    p_n = f_n - sum_{k<n} <f_n; psi_k> phi_k,  q_n = g_n - sum_{k<n} <g_n; phi_k> psi_k,
    r_n = <p_n; q_n>^{1/2},  phi_n = p_n / r_n,  psi_n = q_n / r_n.

    Only a real positive <p_n; q_n> is accepted.  With ``verify`` the output
    is checked for biorthogonality and for span(phi_0..phi_n) = span(f_0..f_n)
    (likewise for psi and g).
    """
    N = len(fs) if N is None else N
    if N > len(fs) or N > len(gs):
        raise ValueError("not enough input vectors")
    phis, psis = [], []
    for n in range(N):
        p, q = fs[n], gs[n]
        if phis:
            p = p - combine([inner(fs[n], s) for s in psis], phis)
            q = q - combine([inner(gs[n], f) for f in phis], psis)
        pq = inner(p, q)
        if not pq > 1e-12:
            raise GSDegenerate(f"<p_{n}; q_{n}> = {float(pq):.3e} is not positive", index=n, value=float(pq))
        r = _sqrt(pq)
        phis.append(p * (1 / r))
        psis.append(q * (1 / r))
    if verify:
        check = check_biorthogonality(phis, psis, tol)
        if not check.passed:
            raise GSDegenerate(f"output not biorthogonal at {check.worst}: {check.residual:.3e}")
        for n in range(N):
            for out, src in ((phis, fs), (psis, gs)):
                d1 = float(span_distance(out[n], src[:n + 1]) / norm(out[n]))
                d2 = float(span_distance(src[n], out[:n + 1]) / norm(src[n]))
                if max(d1, d2) > 1e-8:
                    raise GSDegenerate(f"span of first {n + 1} outputs differs from inputs", index=n)
    return phis, psis


def dual_family(fs: Sequence) -> list[np.ndarray]:
    """Minimal-norm biorthogonal family: columns of F (F^T F)^{-1}."""
    F = np.column_stack([np.asarray(f, dtype=float) for f in fs])
    G = F.T @ F
    if np.linalg.cond(G) > 1e12:
        raise NotMinimal("family is (numerically) linearly dependent")
    D = np.linalg.solve(G, F.T).T
    return [D[:, k] for k in range(D.shape[1])]


def example_vectors(N: int, variant: str = "a") -> dict[str, list[np.ndarray]]:
    """Standard-basis families in R^N.

    a: f_n = e_1 + e_{n+1}, g_n = e_{n+1}            (n = 1..N-1)
    b: f_n = e_1 + e_2 + e_{n+2}, g_n = e_{n+2},
       h_n = e_1 - e_2 + e_{n+2}                      (n = 1..N-2)
    """
    if N < 4:
        raise ValueError("ambient dimension must be at least 4")
    E = np.eye(N)
    if variant == "a":
        return {"f": [E[0] + E[n] for n in range(1, N)], "g": [E[n].copy() for n in range(1, N)]}
    if variant == "b":
        idx = range(2, N)
        return {"f": [E[0] + E[1] + E[n] for n in idx],
                "g": [E[n].copy() for n in idx],
                "h": [E[0] - E[1] + E[n] for n in idx]}
    raise ValueError(f"variant must be 'a' or 'b', not {variant!r}")


def span_distance(target, family: Sequence):
    """Distance from ``target`` to span(family).

    Vectors use an orthonormal basis from QR.  Exponential polynomials use
    the Gram determinant ratio det G(family + target) / det G(family),
    evaluated in extended precision.
    """
    if not len(family):
        return norm(target)
    if isinstance(target, ExpPoly):
        items = list(family)
        G = ctx.matrix([[a.inner(b) for b in items] for a in items])
        Gx = ctx.matrix([[a.inner(b) for b in items + [target]] for a in items + [target]])
        ratio = ctx.det(Gx) / ctx.det(G)
        return ctx.sqrt(max(ratio, ctx.zero))
    A = np.column_stack([np.asarray(f, dtype=float) for f in family])
    Q, R = np.linalg.qr(A)
    keep = np.abs(np.diag(R)) > 1e-12 * max(1.0, np.abs(R).max())
    Q = Q[:, keep]
    x = np.asarray(target, dtype=float)
    return float(np.linalg.norm(x - Q @ (Q.T @ x)))
