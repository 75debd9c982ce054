import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qexclusion import linalg
from qexclusion.errors import NotHermitian, NotPSD

from conftest import random_hermitian

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]])


def test_backends_listed():
    assert "python" in linalg.available_backends()
    assert linalg.get_backend() in linalg.available_backends()


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        linalg.set_backend("fortran")


@pytest.mark.parametrize("d", [1, 2, 3, 5, 8, 16, 33])
def test_eig_reconstructs(backend, rng, d):
    h = random_hermitian(rng, d)
    w, v = linalg.eig_hermitian(h)
    assert np.all(np.diff(w) <= 0)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) < 1e-11
    assert np.max(np.abs(v.conj().T @ v - np.eye(d))) < 1e-12
    assert np.max(np.abs(w - np.sort(np.linalg.eigvalsh(h))[::-1])) < 1e-11


def test_pauli_spectra(backend):
    for p in (PAULI_X, PAULI_Y):
        assert np.allclose(linalg.eigvalsh(p), [1, -1], atol=1e-14)


def test_backends_agree(rng):
    backends = linalg.available_backends()
    if len(backends) < 2:
        pytest.skip("compiled backend not built")
    old = linalg.get_backend()
    h = random_hermitian(rng, 12)
    try:
        out = {}
        for b in backends:
            linalg.set_backend(b)
            out[b] = linalg.eigvalsh(h)
    finally:
        linalg.set_backend(old)
    assert np.max(np.abs(out["compiled"] - out["python"])) < 1e-12


def test_degenerate_spectrum(backend):
    h = np.diag([2.0, 2.0, 2.0, -1.0]).astype(complex)
    w, v = linalg.eig_hermitian(h)
    assert np.allclose(w, [2, 2, 2, -1])
    assert np.allclose(v @ np.diag(w) @ v.conj().T, h)


def test_as_hermitian_rejects_asymmetric():
    with pytest.raises(NotHermitian):
        linalg.as_hermitian(np.array([[0, 1], [0, 0]]))


def test_sqrt_psd(backend, rng):
    g = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
    p = g @ g.conj().T
    r = linalg.sqrt_psd(p)
    assert np.max(np.abs(r @ r - p)) < 1e-10
    assert linalg.psd_margin(r) > -1e-12


def test_sqrt_psd_rejects_negative():
    with pytest.raises(NotPSD):
        linalg.sqrt_psd(np.diag([1.0, -0.5]))


def test_min_op_commuting_is_entrywise_min():
    a, b = np.diag([1.0, 0.2, 0.5]), np.diag([0.3, 0.7, 0.5])
    assert np.allclose(linalg.min_op(a, b), np.diag([0.3, 0.2, 0.5]))


def test_min_op_orthogonal_projectors_vanish():
    p0, p1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    assert np.allclose(linalg.min_op(p0, p1), 0)


def test_trace_norm_matches_singular_values(backend, rng):
    m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    assert math.isclose(linalg.trace_norm(m), np.linalg.svd(m, compute_uv=False).sum(), rel_tol=1e-11)


@pytest.mark.parametrize("rank", [5, 3, 1, 0])
def test_polar_unitary_attains_trace_norm(backend, rng, rank):
    g = rng.normal(size=(5, rank)) + 1j * rng.normal(size=(5, rank))
    h = rng.normal(size=(rank, 5)) + 1j * rng.normal(size=(rank, 5))
    m = g @ h if rank else np.zeros((5, 5), complex)
    u = linalg.polar_unitary(m)
    assert np.max(np.abs(u.conj().T @ u - np.eye(5))) < 1e-10
    assert abs(np.trace(m @ u).real - linalg.trace_norm(m)) < 1e-9
    assert abs(np.trace(m @ u).imag) < 1e-9


def test_fidelity_pure_states_is_overlap_modulus(backend):
    psi = np.array([1, 0], dtype=complex)
    phi = np.array([math.cos(0.3), math.sin(0.3) * 1j])
    f = linalg.fidelity(linalg.projector(psi), linalg.projector(phi))
    assert abs(f - math.cos(0.3)) < 1e-7


def test_fidelity_orthogonal_and_identical():
    p0, p1 = linalg.projector([1, 0]), linalg.projector([0, 1])
    assert abs(linalg.fidelity(p0, p1)) < 1e-7
    assert abs(linalg.fidelity(p0, p0) - 1) < 1e-7


def test_tensor_product_order():
    a, b = linalg.basis_vector(1, 2), linalg.basis_vector(0, 2)
    out = linalg.tensor(a, b).ravel()
    assert np.allclose(out, linalg.basis_vector(2, 4))


hermitian_entries = st.floats(min_value=-10, max_value=10, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=2**31 - 1))
def test_property_eig_reconstruction(d, seed):
    h = random_hermitian(np.random.default_rng(seed), d)
    w, v = linalg.eig_hermitian(h)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=2**31 - 1))
def test_property_min_op_dominated(d, seed):
    rng = np.random.default_rng(seed)
    a, b = random_hermitian(rng, d), random_hermitian(rng, d)
    m = linalg.min_op(a, b)
    assert linalg.psd_margin(a - m) > -1e-10
    assert linalg.psd_margin(b - m) > -1e-10
    assert np.allclose(m, linalg.min_op(b, a), atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=2**31 - 1))
def test_property_fidelity_symmetric_and_bounded(d, seed):
    from qexclusion.ensembles import random_density

    rng = np.random.default_rng(seed)
    r, s = random_density(rng, d), random_density(rng, d)
    f1, f2 = linalg.fidelity(r, s), linalg.fidelity(s, r)
    assert -1e-9 <= f1 <= 1 + 1e-9
    assert abs(f1 - f2) < 1e-7
