import json
import math

import mpmath
import pytest
from conftest import exppolys
from hypothesis import given
from hypothesis import strategies as st

from laguerre_biortho import (
    DomainError,
    ExpPoly,
    OperatorTag,
    Params,
    Report,
    apply_operator,
    check_power_identity,
    ep_eval,
    ep_to_laplace,
    laplace_domain_apply,
    laplace_eval,
    random_probes,
    shift,
    shift_adjoint,
)
from laguerre_biortho.exppoly import laplace_distance
from laguerre_biortho.operators import adjoint_residual, compose

params_st = st.builds(Params, st.floats(0.5, 3.5), st.floats(0.5, 3.5))


def test_adjoint_on_exponential():
    # S*_ab e^{-2t} at (1, 2): e^{-2t} - 3 * e^{-2t}/4
    g = apply_operator(OperatorTag.S_ab_star, ExpPoly.exp(2), Params(1, 2))
    assert float((g - ExpPoly.exp(2, 0.25)).norm()) < 1e-80


def test_forward_on_exponential():
    # S e^{-t/2} = e^{-t/2} - int_0^t e^{-(t-s)/2} e^{-s/2} ds = (1 - t) e^{-t/2}
    g = apply_operator("S", ExpPoly.exp(0.5))
    assert float((g - ExpPoly([(0.5, [1, -1])])).norm()) < 1e-80


@given(exppolys(max_terms=2, max_degree=2), st.floats(0.5, 3), st.floats(0.5, 3), st.floats(0, 4))
def test_shift_against_quadrature(f, a, b, t):
    with mpmath.workdps(30):
        integral = float(mpmath.quad(lambda x: math.exp(-b * (t - float(x))) * ep_eval(f, float(x)), [0, t]))
    ref = ep_eval(f, t) - (a + b) * integral
    assert ep_eval(shift(f, a, b), t) == pytest.approx(ref, rel=1e-8, abs=1e-10)


@given(exppolys(), exppolys(), st.floats(0.5, 3.5), st.floats(0.5, 3.5))
def test_adjointness(f, g, a, b):
    assert adjoint_residual(f, g, a, b) < 1e-12


@given(exppolys(), st.floats(0.5, 3.5))
def test_symmetric_shift_is_isometry(f, a):
    g = shift(f, a, a)
    assert float(g.norm()) == pytest.approx(float(f.norm()), rel=1e-12)


@given(exppolys(), params_st, st.sampled_from(list(OperatorTag)))
def test_time_and_laplace_routes_agree(f, p, tag):
    lhs = ep_to_laplace(apply_operator(tag, f, p))
    rhs = laplace_domain_apply(tag, ep_to_laplace(f), p)
    assert laplace_distance(lhs, rhs) < 1e-20


@given(exppolys(), params_st, st.floats(0.1, 4))
def test_shift_symbol(f, p, s):
    a, b = p.alpha, p.beta
    F = ep_to_laplace(f)
    got = laplace_eval(ep_to_laplace(shift(f, a, b)), s)
    assert got == pytest.approx((s - a) / (s + b) * laplace_eval(F, s), rel=1e-10, abs=1e-12)


def test_dilation_operator_needs_params():
    with pytest.raises(DomainError):
        apply_operator("D", ExpPoly.exp(1))
    with pytest.raises(DomainError):
        apply_operator("S_ab", ExpPoly.exp(1))


def test_compose_applies_right_to_left():
    p = Params(1, 2)
    f = ExpPoly.exp(1.5)
    direct = apply_operator("S_ab", apply_operator("S_ba", f, p), p)
    assert float((compose(["S_ab", "S_ba"], f, p) - direct).norm()) == 0.0


def test_probes_are_seeded():
    a, b = random_probes(5, seed=3), random_probes(5, seed=3)
    assert all(float((x - y).norm()) == 0 for x, y in zip(a, b))
    assert len(random_probes(20)) == 20


def test_power_identity_report():
    rep = check_power_identity(4, Params(0.7, 3))
    assert rep.all_pass
    refuted = [e for e in rep.entries if "refuted" in e.check]
    assert len(refuted) == 2 and all(e.residual > 1e-3 for e in refuted)
    with pytest.raises(DomainError):
        check_power_identity(16, Params())


def test_report_schema():
    rep = Report()
    rep.add("x", Params(1, 2), 3, 1e-12, 1e-9)
    rep.add("y", None, None, 1.0, 1e-9)
    obj = json.loads(rep.to_json())
    assert obj["all_pass"] is False
    assert set(obj["entries"][0]) == {"check", "params", "n", "residual", "tol", "pass"}
    assert [e.check for e in rep.failures()] == ["y"]
