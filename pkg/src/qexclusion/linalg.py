"""Dense complex Hermitian linear algebra.

Every eigendecomposition in the package goes through :func:`eig_hermitian`,
a cyclic Jacobi method. The rotation sweeps run in a compiled Cython kernel
when it is importable and fall back to a NumPy implementation otherwise; use
:func:`set_backend` to switch explicitly (e.g. for benchmarking).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotPSD
from . import _jacobi_py

try:
    from . import _jacobi as _jacobi_c
except ImportError:  # extension not built
    _jacobi_c = None

JACOBI_REL_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-12
SQRT_CLAMP = 1e-6
# relative size below which an eigenvalue of a PSD matrix is treated as zero
EIG_NOISE = 1e-14

_kernel = _jacobi_c if _jacobi_c is not None else _jacobi_py


def available_backends() -> list[str]:
    names = ["python"]
    if _jacobi_c is not None:
        names.insert(0, "compiled")
    return names


def get_backend() -> str:
    return "compiled" if _kernel is _jacobi_c and _jacobi_c is not None else "python"


def set_backend(name: str) -> None:
    """Select the Jacobi kernel: ``"compiled"`` or ``"python"``."""
    global _kernel
    if name == "compiled":
        if _jacobi_c is None:
            raise RuntimeError("compiled Jacobi kernel is not built")
        _kernel = _jacobi_c
    elif name == "python":
        _kernel = _jacobi_py
    else:
        raise ValueError(f"unknown backend {name!r}")


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # unitary, columns match eigenvalues


def as_hermitian(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``h`` as Hermitian and return its exactly Hermitian part."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0
    if h.size and float(np.max(np.abs(h - h.conj().T))) > tol * scale:
        raise NotHermitian("matrix differs from its conjugate transpose")
    return hermitian_part(h)


def hermitian_part(h) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    out = 0.5 * (h + h.conj().T)
    out[np.diag_indices_from(out)] = out.diagonal().real
    return out


def eig_hermitian(h) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    a = np.ascontiguousarray(hermitian_part(h))
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n > 1:
        _kernel.jacobi_sweeps(a, v, JACOBI_REL_TOL, JACOBI_MAX_SWEEPS)
    w = a.diagonal().real.copy()
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], np.ascontiguousarray(v[:, order]))


def eigvalsh(h) -> np.ndarray:
    return eig_hermitian(h).eigenvalues


def _from_spectrum(spec: Spectrum, values) -> np.ndarray:
    v = spec.eigenvectors
    return hermitian_part((v * values) @ v.conj().T)


def sqrt_psd(p) -> np.ndarray:
    """Principal square root of a PSD matrix; tiny negative eigenvalues clamp to 0."""
    spec = eig_hermitian(p)
    lo = spec.eigenvalues[-1] if spec.eigenvalues.size else 0.0
    if lo < -SQRT_CLAMP:
        raise NotPSD(f"minimum eigenvalue {lo:.3e} is below -{SQRT_CLAMP:g}")
    w = np.clip(spec.eigenvalues, 0.0, None)
    # eigenvalues at roundoff level would contribute their square roots
    w[w <= EIG_NOISE * (w[0] if w.size else 0.0)] = 0.0
    return _from_spectrum(spec, np.sqrt(w))


def abs_hermitian(h) -> np.ndarray:
    spec = eig_hermitian(h)
    return _from_spectrum(spec, np.abs(spec.eigenvalues))


def psd_margin(h) -> float:
    """Smallest eigenvalue; callers compare it against their own tolerance."""
    w = eigvalsh(h)
    return float(w[-1]) if w.size else 0.0


def min_op(a, b) -> np.ndarray:
    """Operator minimum ``(A + B - |A - B|) / 2``, dominated by both arguments."""
    a = hermitian_part(a)
    b = hermitian_part(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    return hermitian_part(0.5 * (a + b - abs_hermitian(a - b)))


def tensor(*ops) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        op = np.asarray(op, dtype=complex)
        if op.ndim == 1:
            op = op.reshape(-1, 1)
        out = np.kron(out, op)
    return out


def _square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def trace_norm(m) -> float:
    """Sum of singular values |M v_i| over the eigenvectors v_i of M^dagger M.

    Norms of M v_i stay accurate for tiny singular values, unlike square
    roots of the eigenvalues of M^dagger M.
    """
    m = _square(m)
    v = eig_hermitian(m.conj().T @ m).eigenvectors
    return float(np.sum(np.linalg.norm(m @ v, axis=0)))


def polar_unitary(m) -> np.ndarray:
    """Unitary U maximizing Re tr[M U], so that the maximum equals ``trace_norm(M)``.

    With M = W S V^dagger the maximizer is U = V W^dagger. Right singular vectors
    come from eig(M^dagger M); left ones as M v / |M v| where that is well
    defined, otherwise from the null end of eig(M M^dagger) in index order.
    """
    m = _square(m)
    n = m.shape[0]
    right = eig_hermitian(m.conj().T @ m).eigenvectors
    left_null = eig_hermitian(m @ m.conj().T).eigenvectors
    y = m @ right
    norms = np.linalg.norm(y, axis=0)
    cutoff = 1e-12 * max(1.0, float(np.max(np.abs(m)))) if n else 0.0
    keep = norms > cutoff
    w = np.empty_like(y)
    w[:, keep] = y[:, keep] / norms[keep]
    n_null = int(np.count_nonzero(~keep))
    if n_null:
        w[:, ~keep] = left_null[:, n - n_null:]
    q, r = np.linalg.qr(w)
    phases = np.diagonal(r).copy()
    phases[np.abs(phases) == 0] = 1.0
    q = q * (phases / np.abs(phases))
    return right @ q.conj().T


def fidelity(rho, sigma) -> float:
    """F(rho, sigma) = tr sqrt(sqrt(rho) sigma sqrt(rho)); |<psi|phi>| on pure states.

    Evaluated as the trace norm of sqrt(rho) sqrt(sigma), which is the same
    quantity. Inputs may be subnormalized PSD operators.
    """
    rho = hermitian_part(rho)
    sigma = hermitian_part(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"{rho.shape} vs {sigma.shape}")
    for name, op in (("rho", rho), ("sigma", sigma)):
        if psd_margin(op) < -SQRT_CLAMP:
            raise NotPSD(f"{name} is not positive semidefinite")
    return trace_norm(sqrt_psd(rho) @ sqrt_psd(sigma))


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def basis_vector(index: int, dim: int) -> np.ndarray:
    e = np.zeros(dim, dtype=complex)
    e[index] = 1.0
    return e
