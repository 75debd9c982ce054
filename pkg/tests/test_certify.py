import math

import numpy as np
import pytest

from qexclusion import certify as C
from qexclusion import ensembles as E
from qexclusion import models as Mo
from qexclusion.errors import BadEps, CountMismatch, DegenerateK, TooFewStates
from qexclusion.solver import solve


def _alpha(source):
    return solve(Mo.build("min-error", source)).alpha


def test_cusp_basis_measurement_is_optimal():
    cert = C.theorem1_certificate(E.cusp_ensemble(3), E.basis_measurement(3))
    assert cert.is_optimal
    assert abs(cert.trace) < 1e-15


def test_identical_pair_half_half(identical_pair):
    meas = E.make_measurement([np.eye(2) / 2] * 2)
    cert = C.theorem1_certificate(identical_pair, meas)
    assert cert.is_optimal
    assert np.allclose(cert.N, identical_pair.weighted[0])
    assert cert.trace == pytest.approx(0.5)


def test_identical_pair_all_on_first(identical_pair):
    # (I, 0) also attains the optimum 0.5, and N = rho/2 certifies it
    meas = E.make_measurement([np.eye(2), np.zeros((2, 2))])
    cert = C.theorem1_certificate(identical_pair, meas)
    assert cert.is_optimal
    assert cert.trace == pytest.approx(0.5)


def test_orthogonal_pair_wrong_assignment(orthogonal_pair):
    cert = C.theorem1_certificate(orthogonal_pair, E.basis_measurement(2))
    assert not cert.is_optimal
    assert cert.trace == pytest.approx(1.0)
    assert min(cert.margins) == pytest.approx(-0.5)


def test_certificate_count_mismatch(orthogonal_pair):
    with pytest.raises(CountMismatch):
        C.theorem1_certificate(orthogonal_pair, E.basis_measurement(3))


def test_certificate_soundness_random(rng):
    for _ in range(10):
        ens = E.random_ensemble(rng, 3, 2)
        rep = solve(Mo.build("min-error", ens))
        cert = C.theorem1_certificate(ens, E.Measurement(rep.primal.measurement), tol=1e-6)
        if cert.is_optimal:
            assert abs(E.exclusion_error(ens, E.Measurement(rep.primal.measurement)) - rep.alpha) < 1e-7


@pytest.mark.parametrize("k", [3, 4, 5])
def test_fidelity_condition_cusp(k):
    rep = C.fidelity_condition(E.cusp_ensemble(k))
    assert abs(rep.value - k * (k - 2)) < 1e-8
    assert rep.details["verdict"] == "necessary condition met"


def test_fidelity_condition_pairs(identical_pair, orthogonal_pair):
    rep = C.fidelity_condition(identical_pair)
    assert rep.value == pytest.approx(2.0)
    assert rep.details["verdict"] == "exclusion impossible"
    assert C.fidelity_condition(orthogonal_pair).value == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(TooFewStates):
        C.fidelity_condition(E.make_ensemble([[1, 0]]))


def test_witness_identical_triple():
    n, rep = C.witness_from_fidelity(E.make_ensemble([[1, 0, 0]] * 3), eps=1e-3)
    assert rep.details["clean"]
    assert rep.value > 0
    assert rep.value == pytest.approx(rep.details["trace_formula"], abs=1e-12)


def test_witness_orthogonal_triple():
    n, rep = C.witness_from_fidelity(E.make_ensemble(np.eye(3)), eps=1e-3)
    assert rep.value == pytest.approx(-3 * rep.details["p"], abs=1e-12)


def test_witness_cusp_is_negative():
    n, rep = C.witness_from_fidelity(E.cusp_ensemble(3), eps=1e-3)
    assert rep.value < 0
    assert rep.details["clean"]


def test_witness_errors(identical_pair):
    with pytest.raises(DegenerateK):
        C.witness_from_fidelity(identical_pair)
    with pytest.raises(BadEps):
        C.witness_from_fidelity(E.cusp_ensemble(3), eps=1.5)


def test_witness_weight_saturates_condition():
    k, eps = 4, 1e-2
    p = C.max_witness_weight(k, eps)
    lhs = (1 + p) / (k - 1) - ((1 - eps) * p / (k - 2)) ** 2 / (eps * p)
    assert abs(lhs) < 1e-12


def test_perm_bound_pairs(identical_pair, orthogonal_pair):
    assert C.perm_lower_bound(identical_pair).value == pytest.approx(0.5)
    assert C.perm_lower_bound(orthogonal_pair).value == pytest.approx(0.0, abs=1e-12)


def test_perm_bound_below_optimum(rng):
    for _ in range(10):
        ens = E.random_ensemble(rng, 3, 2)
        rep = C.perm_lower_bound(ens)
        assert rep.details["min_margin"] >= -1e-10
        assert rep.value <= _alpha(ens) + 1e-7


def test_perm_bound_sampling_is_seeded(rng):
    ens = E.random_ensemble(rng, 4, 2)
    a = C.perm_lower_bound(ens, mode="sample", seed=3)
    b = C.perm_lower_bound(ens, mode="sample", seed=3)
    assert a.value == b.value and a.details["permutation"] == b.details["permutation"]
    assert a.value <= C.perm_lower_bound(ens, mode="exhaustive").value + 1e-15


def test_perm_bound_single_state():
    ens = E.make_ensemble([[1, 0]])
    assert C.perm_lower_bound(ens).value == pytest.approx(1.0)


def test_orthogonality_required():
    assert C.orthogonality_required(E.make_ensemble(np.eye(3)))
    assert not C.orthogonality_required(E.cusp_ensemble(3))


def test_orthogonality_with_overlap_half():
    ens = E.make_ensemble([[1, 0], [0.5, math.sqrt(0.75)]])
    assert not C.orthogonality_required(ens)
    disc = E.m_state_reduction(E.to_discrimination(ens), 1)
    assert _alpha(disc) > 1e-3


def test_corollary_direction(rng):
    # zero error on the (k-1)-subset problem forces an orthogonal set
    for ens in [E.make_ensemble(np.eye(3)), E.cusp_ensemble(3), E.random_ensemble(rng, 3, 3)]:
        alpha = _alpha(E.m_state_reduction(ens, ens.k - 1))
        if alpha < 1e-7:
            assert C.orthogonality_required(ens, tol=1e-6)
