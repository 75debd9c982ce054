import math

import numpy as np
import pytest

from qexclusion import certify as C
from qexclusion import models as Mo
from qexclusion import pbr as P
from qexclusion.errors import ScaleCap
from qexclusion.solver import solve

HALF_TAN = 2 * math.atan(0.5)


def test_game_validation():
    with pytest.raises(ValueError):
        P.PbrGame(0, 0.1)
    with pytest.raises(ValueError):
        P.PbrGame(1, 2.0)


def test_n1_orthogonal():
    ens = P.build_pbr_ensemble(P.PbrGame(1, math.pi / 2))
    plus = np.array([1, 1]) / math.sqrt(2)
    minus = np.array([1, -1]) / math.sqrt(2)
    assert np.allclose(ens.states[0], np.outer(plus, plus))
    assert np.allclose(ens.states[1], np.outer(minus, minus))
    assert ens.labels == ("0", "1") and ens.probs == (0.5, 0.5)


@pytest.mark.parametrize("theta", [0.0, 0.3, 1.0, math.pi / 2])
def test_overlap_and_expansion(theta):
    g = P.PbrGame(2, theta)
    a, b = P.product_state(g, (0, 0)), P.product_state(g, (0, 1))
    assert abs(np.vdot(a, b) - math.cos(theta)) < 1e-12
    for x in P.bitstrings(2):
        assert np.linalg.norm(P.product_state(g, x) - P.expanded_state(g, x)) < 1e-10


def test_ensemble_cap():
    with pytest.raises(ScaleCap):
        P.build_pbr_ensemble(P.PbrGame(11, 0.2))
    with pytest.raises(ScaleCap):
        P.zeta_measurement(11)


def test_zeta_n1():
    z = P.zeta_vectors(1)
    assert np.allclose(z[0], np.array([1, -1]) / math.sqrt(2))
    assert np.allclose(z[1], np.array([1, 1]) / math.sqrt(2))


@pytest.mark.parametrize("n", range(1, 7))
def test_zeta_orthonormal(n):
    z = np.array(P.zeta_vectors(n))
    assert np.max(np.abs(z.conj() @ z.T - np.eye(2 ** n))) < 1e-10


def test_zeta_complete():
    assert np.max(np.abs(sum(P.zeta_measurement(2).elements) - np.eye(4))) < 1e-10


def test_criterion_examples():
    assert P.criterion(P.PbrGame(2, 2 * math.atan(math.sqrt(2) - 1)))
    assert not P.criterion(P.PbrGame(1, 1.5))
    assert P.criterion(P.PbrGame(1, math.pi / 2))
    assert P.criterion(P.PbrGame(3, HALF_TAN))


def test_certificate_examples():
    boundary = P.PbrGame(2, 2 * math.atan(math.sqrt(2) - 1))
    assert abs(P.c_theta(boundary)) < 1e-15
    assert np.max(np.abs(P.analytic_certificate(boundary))) < 1e-15
    g = P.PbrGame(1, HALF_TAN)
    assert abs(P.certificate_trace(g) - 0.1) < 1e-15
    assert abs(np.trace(P.analytic_certificate(g)).real - 0.1) < 1e-15
    assert abs(P.certificate_trace(P.PbrGame(1, 0.0)) - 0.5) < 1e-15


def test_win_probabilities():
    boundary = P.PbrGame(2, 2 * math.atan(math.sqrt(2) - 1))
    assert P.p_win_global(boundary) == 1.0
    g = P.PbrGame(1, HALF_TAN)
    assert abs(P.p_win_global(g) - 0.9) < 1e-15
    assert abs(P.p_win_global(g) - (1 - 0.5 * (1 - math.sin(HALF_TAN)))) < 1e-15
    assert abs(P.p_win_global(P.PbrGame(1, 0.0)) - 0.5) < 1e-15
    assert P.p_win_separable(P.PbrGame(3, math.pi / 2)) == 1.0
    assert abs(P.p_win_separable(P.PbrGame(3, 0.0)) - (1 - 2 ** -3)) < 1e-15


def test_report_fields():
    rep = P.pbr_report(P.PbrGame(2, 0.3))
    for v in (rep.p_win_global, rep.p_win_separable, rep.alpha_analytic, rep.q):
        assert 0 <= v <= 1
    assert not rep.criterion_met


@pytest.mark.parametrize("n", range(1, 6))
def test_zeta_optimal_below_threshold(n):
    top = 2 * math.atan(P.threshold(n))
    for theta in np.linspace(0.0, top, 6)[:-1]:
        g = P.PbrGame(n, float(theta))
        if P.c_theta(g) <= 0:
            continue
        ens = P.build_pbr_ensemble(g)
        cert = C.theorem1_certificate(ens, P.zeta_measurement(n))
        assert cert.is_optimal
        assert np.max(np.abs(cert.N - P.analytic_certificate(g))) < 1e-8
        chk = P.verify_certificate(g)
        assert chk.min_margin >= -1e-8 and chk.zeta_residual <= 1e-8
        assert abs(chk.trace - chk.trace_formula) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_solver_agrees(n):
    for theta in np.linspace(0.05, math.pi / 2, 5):
        g = P.PbrGame(n, float(theta))
        ens = P.build_pbr_ensemble(g)
        rep = solve(Mo.build("min-error", ens))
        assert abs(rep.alpha - (1 - P.p_win_global(g))) < 1e-6


def test_dominance_and_threshold():
    for n in range(1, 11):
        top = 2 * math.atan(P.threshold(n))
        for theta in np.linspace(0, math.pi / 2, 25):
            g = P.PbrGame(n, float(theta))
            assert P.p_win_separable(g) <= P.p_win_global(g) + 1e-12
            if theta < top - 1e-9:
                assert P.p_win_global(g) < 1
