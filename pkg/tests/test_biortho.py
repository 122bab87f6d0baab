import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from laguerre_biortho import (
    DepthExceeded,
    ExpPoly,
    GSDegenerate,
    NotBiisometric,
    NotBiorthogonal,
    NotMinimal,
    Params,
    check_biorthogonality,
    check_proportionality,
    dual_family,
    expand,
    family_fn,
    family_system,
    generate_system,
    gram_schmidt_biortho,
    laguerre_function,
    laguerre_pair,
    laguerre_shift_pair,
    matrix_pair,
    span_distance,
    synthesize,
)
from laguerre_biortho.biortho import shift_matrix


def test_laguerre_pair_generates_closed_forms():
    p = Params(0.7, 3)
    system = generate_system(laguerre_pair(p), 8)
    for n in range(8):
        assert float((system.phis[n] - family_fn("phi", n, p)).norm()) < 1e-60
        assert float((system.psis[n] - family_fn("psi", n, p)).norm()) < 1e-60
    assert max(system.residuals.values()) < 1e-60


def test_symmetric_pair_generates_laguerre_functions():
    system = generate_system(laguerre_shift_pair(), 6)
    for n, phi in enumerate(system.phis):
        assert float((phi - laguerre_function(n)).norm()) < 1e-70


def test_finite_shift_pair():
    dim = 6
    S = shift_matrix(dim)
    probes = [np.r_[np.random.default_rng(0).normal(size=dim - 1), 0.0]]
    e0 = np.eye(dim)[0]
    system = generate_system(matrix_pair(S, S, e0, e0, probes), dim)
    np.testing.assert_array_equal(np.array(system.phis), np.eye(dim))


def test_witness_rejects_non_kernel_vector():
    S = shift_matrix(5)
    with pytest.raises(NotBiisometric):
        matrix_pair(S, S, np.eye(5)[1], np.eye(5)[1])


def test_witness_sign_normalisation():
    S = shift_matrix(5)
    e0 = np.eye(5)[0]
    pair = matrix_pair(S, S, 2 * e0, -3 * e0)
    assert np.dot(pair.w, pair.v) == pytest.approx(1.0)


def test_expansion_single_coefficient():
    p = Params(1, 2)
    system = family_system(p, 6)
    c = [float(x) for x in expand(ExpPoly.exp(p.alpha), system, 6, "phi")]
    assert c[0] == pytest.approx(1 / math.sqrt(p.alpha + p.beta), rel=1e-14)
    assert max(abs(x) for x in c[1:]) < 1e-60


def test_expansion_of_family_member_is_unit_vector():
    p = Params(0.7, 3)
    system = family_system(p, 8)
    d = [float(x) for x in expand(family_fn("psi", 3, p), system, 8, "psi")]
    np.testing.assert_allclose(d, np.eye(8)[3], atol=1e-60)


def test_synthesis_modes():
    p = Params(1, 2)
    system = family_system(p, 10)
    f = family_fn("phi", 2, p) * 0.5 + family_fn("phi", 5, p)
    c = expand(f, system, 9, "phi")
    assert float((synthesize(c, system, "phi") - f).norm()) < 1e-60
    vf = synthesize(c, system, "phi", "V")
    direct = system.phis[3] * 0.5 + system.phis[6]
    assert float((vf - direct).norm()) < 1e-60
    with pytest.raises(DepthExceeded):
        synthesize(c + [0, 0], system, "phi", "V")
    with pytest.raises(ValueError):
        synthesize(c, system, "phi", "W")
    with pytest.raises(DepthExceeded):
        expand(f, system, 11)


@given(arrays(np.float64, (5, 5), elements=st.floats(-1, 1)))
def test_dual_family_is_biorthogonal(M):
    M = M + 3 * np.eye(5)
    fs = list(M.T)
    gs = dual_family(fs)
    assert check_biorthogonality(fs, gs, 1e-10).passed


def test_dual_family_small_example():
    gs = dual_family([np.array([1.0, 1.0]), np.array([0.0, 1.0])])
    np.testing.assert_allclose(gs, [[1, 0], [-1, 1]], atol=1e-15)
    with pytest.raises(NotMinimal):
        dual_family([np.array([1.0, 0.0]), np.array([2.0, 0.0])])


def test_dual_family_is_minimal_norm():
    # f in R^3 spanning a plane: the dual lies in that plane
    fs = [np.array([1.0, 0, 1]), np.array([0, 1.0, 1])]
    gs = dual_family(fs)
    normal = np.cross(*fs)
    assert abs(np.dot(gs[0], normal)) < 1e-14 and abs(np.dot(gs[1], normal)) < 1e-14


def test_proportionality_errors():
    with pytest.raises(NotBiorthogonal):
        check_proportionality([np.array([1.0, 0])], [np.array([2.0, 0])])
    res = check_proportionality([np.array([2.0, 0])], [np.array([0.5, 0])])
    assert res[0].status == "proportional" and res[0].alpha == pytest.approx(4)


def test_gram_schmidt_degenerate():
    e = np.eye(3)
    with pytest.raises(GSDegenerate):
        gram_schmidt_biortho([e[0], e[1]], [e[1], e[0]])


@given(arrays(np.float64, (2, 4, 4), elements=st.floats(-1, 1)))
def test_gram_schmidt_vectors(M):
    # ||F^T G - I|| < 1, so every leading minor of F^T G is positive
    fs = list((np.eye(4) + 0.1 * M[0]).T)
    gs = list((np.eye(4) + 0.1 * M[1]).T)
    phis, psis = gram_schmidt_biortho(fs, gs)
    assert check_biorthogonality(phis, psis, 1e-10).passed


def test_span_distance_exppoly():
    fam = [laguerre_function(n) for n in range(3)]
    target = laguerre_function(3) * 2 + fam[1]
    assert float(span_distance(target, fam)) == pytest.approx(2.0, rel=1e-12)
    assert float(span_distance(fam[2], fam)) < 1e-30
