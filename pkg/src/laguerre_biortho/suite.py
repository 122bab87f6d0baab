"""The full verification run behind ``laguerre-biortho verify``."""

from __future__ import annotations

import math

import numpy as np

from .biortho import check_biorthogonality, generate_system, laguerre_pair
from .exppoly import ExpPoly, ep_eval, ep_to_laplace, laplace_distance, laplace_eval
from .laguerre import FamilyTag, Params, family_fn, family_laplace
from .numeric_base import gauss_laguerre_rule, integrate_halfline
from .operators import (
    OperatorTag,
    Report,
    adjoint_residual,
    apply_operator,
    check_laguerre_pair,
    check_power_identity,
    laplace_domain_apply,
    random_probes,
    shift,
    shift_generation_residuals,
)

# quadrature is an independent approximation, not exact algebra
ORACLE_TOL = 1e-8
LAPLACE_POINT_TOL = 1e-7
LAPLACE_POINTS = (1.0, 1.5, 3.0)


def decay_rate(f: ExpPoly) -> float:
    """Slowest exponential rate present in f."""
    return float(min(f.rates)) if not f.is_zero() else 1.0


def quadrature_gram(phis, psis, order: int = 80) -> np.ndarray:
    """Matrix of quadrature inner products <phi_m; psi_n>.

    The rule is rescaled to the slowest decay of the products.
    """
    rule = gauss_laguerre_rule(order)
    c = min(decay_rate(f) for f in phis) + min(decay_rate(g) for g in psis)
    t = rule.nodes / c
    A = np.array([ep_eval(f, t) for f in phis])
    B = np.array([ep_eval(g, t) for g in psis])
    return (A * rule.modified_weights) @ B.T / c


def quadrature_inner(f: ExpPoly, g: ExpPoly, order: int = 80) -> float:
    return integrate_halfline(lambda t: ep_eval(f, t) * ep_eval(g, t), gauss_laguerre_rule(order),
                              scale=decay_rate(f) + decay_rate(g))


def quadrature_laplace(f: ExpPoly, s: float, order: int = 80) -> float:
    """int_0^inf e^{-s t} f(t) dt by quadrature, for real s."""
    return integrate_halfline(lambda t: np.exp(-s * t) * ep_eval(f, t), gauss_laguerre_rule(order),
                              scale=s + decay_rate(f))


def family_report(params: Params, nmax: int, tol: float, order: int = 80) -> Report:
    report = Report()
    phis = [family_fn(FamilyTag.phi, n, params) for n in range(nmax + 1)]
    psis = [family_fn(FamilyTag.psi, n, params) for n in range(nmax + 1)]

    exact = check_biorthogonality(phis, psis, tol)
    report.add("biorth.exact", params, nmax, exact.residual, tol)
    quad = quadrature_gram(phis, psis, order)
    exact_gram = np.array([[float(f.inner(g)) for g in psis] for f in phis])
    report.add("biorth.quadrature", params, nmax, np.abs(quad - np.eye(nmax + 1)).max(), max(tol, ORACLE_TOL))
    report.add("oracle.inner", params, nmax,
               (np.abs(quad - exact_gram) / (1 + np.abs(exact_gram))).max(), max(tol, ORACLE_TOL))

    for tag, n, residual in shift_generation_residuals(params, nmax):
        name = "shift.S_ab_psi" if tag == "psi" else "shift.S_ba_phi"
        report.add(name, params, n, residual, tol)

    worst = 0.0
    for n in range(nmax + 1):
        for tag, fam in (("phi", phis), ("psi", psis)):
            worst = max(worst, laplace_distance(family_laplace(tag, n, params), ep_to_laplace(fam[n])))
    report.add("laplace.closed_form", params, nmax, worst, max(tol, 1e-10))

    worst = 0.0
    for n in range(min(nmax, 12) + 1):
        for tag, fam in (("phi", phis), ("psi", psis)):
            F = family_laplace(tag, n, params)
            for s in LAPLACE_POINTS:
                worst = max(worst, abs(laplace_eval(F, s).real - quadrature_laplace(fam[n], s, order)))
    report.add("laplace.quadrature", params, min(nmax, 12), worst, max(tol, LAPLACE_POINT_TOL))

    worst = 0.0
    for n in range(min(nmax, 10) + 1):
        for f in (phis[n], psis[n]):
            F = ep_to_laplace(f)
            for tag in OperatorTag:
                worst = max(worst, laplace_distance(ep_to_laplace(apply_operator(tag, f, params)),
                                                    laplace_domain_apply(tag, F, params)))
    report.add("laplace.commutation", params, min(nmax, 10), worst, max(tol, 1e-10))
    return report


def system_report(params: Params, nmax: int, tol: float) -> Report:
    report = Report()
    # generate with no tolerance so a failure is reported, not raised
    system = generate_system(laguerre_pair(params), nmax + 1, math.inf)
    for key, value in system.residuals.items():
        report.add(f"system.{key}", params, nmax, value, tol)
    worst = 0.0
    for n in range(nmax + 1):
        for tag, got in (("phi", system.phis[n]), ("psi", system.psis[n])):
            ref = family_fn(tag, n, params)
            worst = max(worst, float((got - ref).norm() / ref.norm()))
    report.add("system.matches_closed_form", params, nmax, worst, tol)
    return report


def probe_report(params: Params, tol: float, seed: int, count: int = 20) -> Report:
    report = Report()
    probes = random_probes(count, seed)
    a, b = params.alpha, params.beta
    worst_adj = worst_iso = 0.0
    for f, g in zip(probes, probes[1:] + probes[:1]):
        worst_adj = max(worst_adj, adjoint_residual(f, g, a, b), adjoint_residual(f, g, b, a))
        lhs = shift(f, a, a).inner(shift(g, a, a))
        worst_iso = max(worst_iso, float(abs(lhs - f.inner(g)) / (f.norm() * g.norm())))
    report.add("probe.adjointness", params, None, worst_adj, tol)
    report.add("probe.isometry_S_alpha", params, None, worst_iso, tol)
    return report.extend(check_laguerre_pair(params, probes, tol))


def full_report(params: Params, nmax: int = 12, tol: float = 1e-9, order: int = 80, seed: int = 42) -> Report:
    report = Report()
    report.extend(family_report(params, nmax, tol, order))
    report.extend(system_report(params, nmax, tol))
    report.extend(probe_report(params, tol, seed))
    for n in range(min(nmax, 15) + 1):
        report.extend(check_power_identity(n, params, tol))
    return report.sorted()
