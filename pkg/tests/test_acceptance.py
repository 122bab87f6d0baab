"""Acceptance criteria, one test each.  Every test prints a single PASS/FAIL line."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from laguerre_biortho import (
    ExpPoly,
    Params,
    check_laguerre_pair,
    check_power_identity,
    check_proportionality,
    dual_family,
    ep_to_laplace,
    example_vectors,
    expand,
    family_fn,
    family_laplace,
    family_system,
    gram_schmidt_biortho,
    laguerre_function,
    random_probes,
    shift,
    shift_adjoint,
    span_distance,
    synthesize,
)
from laguerre_biortho.biortho import check_biorthogonality
from laguerre_biortho.exppoly import laplace_distance, laplace_eval
from laguerre_biortho.operators import shift_generation_residuals
from laguerre_biortho.suite import quadrature_gram, quadrature_laplace

PARAM_SETS = [Params(0.5, 0.5), Params(1, 2), Params(0.7, 3)]


def report(number, ok, detail):
    print(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def families(params, nmax=15):
    phis = [family_fn("phi", n, params) for n in range(nmax + 1)]
    psis = [family_fn("psi", n, params) for n in range(nmax + 1)]
    return phis, psis


def test_01_biorthogonality():
    exact_worst = quad_worst = 0.0
    for p in PARAM_SETS:
        phis, psis = families(p)
        exact_worst = max(exact_worst, check_biorthogonality(phis, psis).residual)
        quad_worst = max(quad_worst, np.abs(quadrature_gram(phis, psis, 80) - np.eye(16)).max())
    report(1, exact_worst <= 1e-9 and quad_worst <= 1e-8,
           f"exact {exact_worst:.2e} <= 1e-9, quadrature N=80 {quad_worst:.2e} <= 1e-8")


def test_02_shift_generation():
    worst = max(r for p in PARAM_SETS for _, _, r in shift_generation_residuals(p, 15))
    report(2, worst <= 1e-9, f"max relative residual {worst:.2e} <= 1e-9 for n <= 15")


def test_03_kernels():
    worst = 0.0
    for p in PARAM_SETS:
        ea = ExpPoly.exp(p.alpha)
        worst = max(worst, float(shift_adjoint(ea, p.alpha, p.beta).norm()),
                    float(shift_adjoint(ea, p.alpha, p.alpha).norm()))
    report(3, worst <= 1e-10, f"max kernel residual {worst:.2e} <= 1e-10")


def _pair_entries(prefix):
    probes = random_probes(20, seed=42)
    out = []
    for p in PARAM_SETS:
        out += [e for e in check_laguerre_pair(p, probes, 1e-9).entries if e.check.startswith(prefix)]
    return out


def test_04_biisometry():
    entries = _pair_entries("b1.")
    worst = max(e.residual for e in entries)
    report(4, len(entries) == 2 * 20 * 3 and worst <= 1e-9,
           f"{len(entries)} probe checks, worst relative residual {worst:.2e} <= 1e-9")


def test_05_products_and_multiplicity_two():
    prod = _pair_entries("p1.")
    worst_prod = max(e.residual for e in prod)
    worst_ker = 0.0
    for p in PARAM_SETS:
        a, b = p.alpha, p.beta
        for g in (ExpPoly.exp(a), ExpPoly.exp(b)):
            # (S_ab S_ba)* = S_ba* S_ab*
            worst_ker = max(worst_ker, float(shift_adjoint(shift_adjoint(g, a, b), b, a).norm()))
    report(5, len(prod) == 120 and worst_prod <= 1e-9 and worst_ker <= 1e-10,
           f"products {worst_prod:.2e} <= 1e-9, kernel witness {worst_ker:.2e} <= 1e-10")


def test_06_laplace_transforms():
    coef = point = 0.0
    for p in PARAM_SETS:
        for n in range(13):
            for tag in ("phi", "psi"):
                f = family_fn(tag, n, p)
                F = family_laplace(tag, n, p)
                coef = max(coef, laplace_distance(F, ep_to_laplace(f)))
                for s in (1.0, 1.5, 3.0):
                    point = max(point, abs(laplace_eval(F, s).real - quadrature_laplace(f, s, 80)))
    report(6, coef <= 1e-10 and point <= 1e-7,
           f"coefficient mismatch {coef:.2e} <= 1e-10, pointwise vs quadrature {point:.2e} <= 1e-7")


def test_07_expansion_of_exponential():
    system = family_system(Params(1, 1), 40)
    f = ExpPoly.exp(2)
    c = expand(f, system, 40, "phi")
    target = [(1 / 3) ** k * math.sqrt(2) / 3 for k in range(40)]
    coef_err = max(abs(float(x) - y) for x, y in zip(c, target))
    residual = float((f - synthesize(c, system, "phi")).norm())
    report(7, coef_err <= 1e-10 and residual <= 1e-6,
           f"coefficient error {coef_err:.2e} <= 1e-10, reconstruction residual at K=40 {residual:.2e} <= 1e-6")


def test_08_shifted_expansion():
    p = Params(1, 1)
    system = family_system(p, 41)
    f = ExpPoly.exp(2)
    c = expand(f, system, 40, "phi")
    series = synthesize(c, system, "phi", "V")
    direct = shift(f, p.beta, p.alpha)
    rel = float((series - direct).norm() / direct.norm())
    report(8, rel <= 1e-8, f"series V f vs direct, relative {rel:.2e} <= 1e-8")


def _random_instance(rng, unit):
    """f_0 orthogonal to the other f_k, so its dual is parallel to it; the rest generic."""
    N = int(rng.integers(3, 9))
    Q, _ = np.linalg.qr(rng.normal(size=(N, N)))
    scale = 1.0 if unit else float(rng.uniform(0.2, 5.0))
    fs = [scale * Q[:, 0]] + [Q[:, 1:] @ rng.normal(size=N - 1) for _ in range(N - 1)]
    return fs, dual_family(fs), scale


def test_09_norm_hypothesis_proportionality():
    rng = np.random.default_rng(2024)
    worst, bad = 0.0, []
    for trial in range(100):
        fs, gs, scale = _random_instance(rng, unit=False)
        res = check_proportionality(fs, gs)
        r0 = res[0]
        if r0.status != "proportional" or abs(r0.alpha - scale**2) > 1e-8 * scale**2:
            bad.append(trial)
        if any(r.status == "violation" for r in res):
            bad.append(trial)
        worst = max(worst, np.linalg.norm(fs[0] - np.dot(fs[0], fs[0]) * gs[0]))
    unit_worst = 0.0
    for _ in range(100):
        fs, gs, _ = _random_instance(rng, unit=True)
        if check_proportionality(fs, gs)[0].status != "proportional":
            bad.append("unit")
        unit_worst = max(unit_worst, np.linalg.norm(fs[0] - gs[0]))
    ex = example_vectors(8, "a")
    statuses = {r.status for r in check_proportionality(ex["f"], ex["g"])}
    ok = not bad and worst <= 1e-8 and unit_worst <= 1e-8 and statuses == {"hypothesis-not-met"}
    report(9, ok, f"100 instances, worst {worst:.2e}; unit-norm worst {unit_worst:.2e}; "
                  f"example (a) statuses {sorted(statuses)}")


def test_10_example_geometry():
    worst_delta = worst_f = worst_g = 0.0
    for N in (4, 16, 64, 256):
        ex = example_vectors(N, "a")
        F, G = np.array(ex["f"]), np.array(ex["g"])
        worst_delta = max(worst_delta, np.abs(F @ G.T - np.eye(N - 1)).max())
        e1 = np.eye(N)[0]
        worst_f = max(worst_f, abs(span_distance(e1, ex["f"]) - 1 / math.sqrt(N)))
        worst_g = max(worst_g, abs(span_distance(e1, ex["g"]) - 1))
    report(10, worst_delta <= 1e-12 and worst_f <= 1e-12 and worst_g <= 1e-12,
           f"delta {worst_delta:.1e}, dist to span f vs 1/sqrt(N) {worst_f:.1e}, dist to span g vs 1 {worst_g:.1e}")


def test_11_gram_schmidt():
    p = Params(1, 2)
    a, b = p.alpha, p.beta
    fs = [ExpPoly([(a, [0] * n + [(a + b) ** n])]) for n in range(7)]
    gs = [ExpPoly([(b, [0] * n + [(a + b) ** n])]) for n in range(7)]
    phis, psis = gram_schmidt_biortho(fs, gs)
    worst = 0.0
    for n in range(7):
        for got, tag in ((phis[n], "phi"), (psis[n], "psi")):
            ref = family_fn(tag, n, p) * (-1) ** n
            worst = max(worst, float((got - ref).norm() / ref.norm()))
    es = [laguerre_function(n) for n in range(7)]
    ph, ps = gram_schmidt_biortho(es, es)
    fixed = max(float((x - e).norm()) for x, e in zip(ph + ps, es + es))
    report(11, worst <= 1e-8 and fixed <= 1e-12,
           f"(-1)^n phi_n / psi_n relative {worst:.2e} <= 1e-8, orthonormal fixed point {fixed:.2e} <= 1e-12")


def test_12_power_identity():
    corrected, refuted = 0.0, []
    for p in PARAM_SETS:
        for n in range(11):
            for e in check_power_identity(n, p, 1e-9).entries:
                if e.check.endswith("exponent_n_plus_1"):
                    corrected = max(corrected, e.residual)
                elif n >= 1:
                    refuted.append(e)
    min_refuted = min(e.residual for e in refuted)
    ok = corrected <= 1e-9 and all(e.passed and e.residual > 1e-9 for e in refuted)
    report(12, ok, f"exponent n+1 residual {corrected:.2e} <= 1e-9; exponent n variant fails, "
                   f"smallest residual {min_refuted:.2e}")


def test_13_oracle_agreement():
    worst = 0.0
    for p in PARAM_SETS:
        phis, psis = families(p)
        exact = np.array([[float(f.inner(g)) for g in psis] for f in phis])
        worst = max(worst, np.abs(quadrature_gram(phis, psis, 80) - exact).max())
        for fam in (phis, psis):
            ex = np.array([[float(f.inner(g)) for g in fam] for f in fam])
            worst = max(worst, (np.abs(quadrature_gram(fam, fam, 80) - ex) / (1 + np.abs(ex))).max())
    report(13, worst <= 1e-8, f"exact vs N=80 quadrature inner products {worst:.2e} <= 1e-8")


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "laguerre_biortho", *args], capture_output=True, text=True)


def test_14_cli_contract():
    ok_run = _cli("verify")
    bad_run = _cli("verify", "--alpha", "0.4")
    all_pass = ok_run.returncode == 0 and json.loads(ok_run.stdout)["all_pass"] is True
    report(14, all_pass and bad_run.returncode == 2 and "alpha below 1/2" in bad_run.stderr,
           f"verify exit {ok_run.returncode}, verify --alpha 0.4 exit {bad_run.returncode}")
