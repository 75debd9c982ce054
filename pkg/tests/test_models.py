import numpy as np
import pytest

from qexclusion import ensembles as E
from qexclusion import models as Mo
from qexclusion.errors import CountMismatch, DimensionMismatch

from conftest import random_hermitian

VARIANTS = list(Mo.Variant)


def _random_block(rng, shape_source, model):
    """Random Hermitian matrix with the block-diagonal shape the map reads."""
    n = shape_source.shape[0]
    return random_hermitian(rng, n)


@pytest.mark.parametrize("variant", VARIANTS)
def test_adjointness(rng, variant):
    for _ in range(10):
        k, d = int(rng.integers(2, 5)), int(rng.integers(1, 4))
        ens = E.random_ensemble(rng, k, d)
        model = Mo.build(variant, ens)
        x = random_hermitian(rng, Mo.block_A(model).shape[0])
        y = random_hermitian(rng, Mo.block_B(model).shape[0])
        lhs = np.trace(y @ Mo.phi(model, x))
        rhs = np.trace(x @ Mo.phi_adjoint(model, y))
        assert abs(lhs - rhs) < 1e-9


def test_unambiguous_pair_dual_shape(orthogonal_pair):
    model = Mo.build("unambiguous", orthogonal_pair)
    assert Mo.block_B(model).shape == (4, 4)
    assert Mo.pack_dual(model, Mo.DualVars(np.eye(2), (1.0, 2.0))).shape == (4, 4)


def test_primal_values(orthogonal_pair):
    swap = E.Measurement((np.diag([0, 1.0]), np.diag([1.0, 0])))
    model = Mo.build("min-error", orthogonal_pair)
    assert Mo.primal_value(model, Mo.PrimalVars(swap.elements)) == 0.0
    unamb = Mo.build("unambiguous", orthogonal_pair)
    assert abs(Mo.primal_value(unamb, Mo.PrimalVars(swap.elements))) < 1e-15
    worst = Mo.build("worst-case", orthogonal_pair)
    assert Mo.primal_value(worst, Mo.PrimalVars(swap.elements)) == 0.0


def test_unambiguous_trace_violation_named(orthogonal_pair):
    model = Mo.build("unambiguous", orthogonal_pair)
    # tr[rho~_1 M_1] = 0.5 * 0.2 = 0.1
    p = Mo.PrimalVars((np.diag([0.2, 0.0]), np.zeros((2, 2))))
    rep = Mo.primal_feasibility(model, p)
    named = {name: value for name, kind, value in rep.constraints}
    assert abs(named["tr[rho~_1 M_1] = 0"] - 0.1) < 1e-15
    assert not rep.feasible(1e-9)


def test_dual_feasibility_min_error(identical_pair):
    model = Mo.build("min-error", identical_pair)
    good = Mo.DualVars(identical_pair.weighted[0])
    bad = Mo.DualVars(np.eye(2))
    assert Mo.dual_feasibility(model, good).feasible(1e-12)
    assert not Mo.dual_feasibility(model, bad).feasible(1e-12)
    assert Mo.dual_value(model, good) == pytest.approx(0.5)


def test_shape_errors(orthogonal_pair):
    model = Mo.build("min-error", orthogonal_pair)
    with pytest.raises(CountMismatch):
        Mo.primal_value(model, Mo.PrimalVars((np.eye(2),)))
    with pytest.raises(DimensionMismatch):
        Mo.dual_value(model, Mo.DualVars(np.eye(3)))
    with pytest.raises(CountMismatch):
        Mo.dual_value(Mo.build("worst-case", orthogonal_pair), Mo.DualVars(np.eye(2), (1.0,)))


@pytest.mark.parametrize("variant", VARIANTS)
def test_weak_duality_on_feasible_points(rng, variant):
    from qexclusion.solver import strict_start

    for _ in range(10):
        ens = E.random_ensemble(rng, int(rng.integers(2, 5)), int(rng.integers(2, 4)))
        model = Mo.build(variant, ens)
        p, dv = strict_start(model)
        assert Mo.feasibility(model, p).feasible(1e-9)
        assert Mo.feasibility(model, dv).feasible(1e-9)
        assert Mo.dual_bound(model, dv) <= Mo.primal_value(model, p) + 1e-8
