"""Ensembles, measurements and the problem reductions between them.

User-facing :class:`Ensemble` objects hold unit-trace states and a prior.
Reductions (m-state grouping, conversion to discrimination) produce
:class:`OperatorList` values whose operators are subnormalized.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from . import linalg
from .errors import (
    BadSubsetSize,
    CountMismatch,
    DimensionMismatch,
    EmptyEnsemble,
    NotDensity,
    NotPSD,
    ProbSum,
    TooFewStates,
)

DENSITY_TOL = 1e-8


@dataclass(frozen=True)
class OperatorList:
    """Weighted PSD operators (the rho-tilde of each preparation) with labels."""

    operators: tuple
    labels: tuple
    subnormalized: bool = True

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    @property
    def k(self) -> int:
        return len(self.operators)

    def __len__(self) -> int:
        return len(self.operators)


@dataclass(frozen=True)
class Ensemble:
    states: tuple
    probs: tuple
    labels: tuple

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    @property
    def k(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def weighted(self) -> tuple:
        """The operators p_i rho_i."""
        return tuple(p * rho for p, rho in zip(self.probs, self.states))

    def operator_list(self) -> OperatorList:
        return OperatorList(self.weighted, self.labels, subnormalized=False)


@dataclass(frozen=True)
class Measurement:
    """POVM elements; with ``has_inconclusive`` the last element is the ``?`` outcome."""

    elements: tuple
    has_inconclusive: bool = False

    @property
    def outcomes(self) -> tuple:
        return self.elements[:-1] if self.has_inconclusive else self.elements

    @property
    def inconclusive(self):
        return self.elements[-1] if self.has_inconclusive else None

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


def _check_dims(ops) -> int:
    dims = {op.shape for op in ops}
    if len(dims) != 1:
        raise DimensionMismatch(f"operators have differing shapes {sorted(dims)}")
    shape = dims.pop()
    if len(shape) != 2 or shape[0] != shape[1]:
        raise DimensionMismatch(f"operators must be square, got {shape}")
    return shape[0]


def _as_state(s) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    if s.ndim == 1:
        return linalg.projector(s / np.linalg.norm(s))
    return s


def make_ensemble(states, probs=None, labels=None) -> Ensemble:
    """Validated ensemble of density matrices (kets are turned into projectors).

    ``probs`` defaults to uniform; ``labels`` default to ``"1" .. "k"``.
    """
    states = [_as_state(s) for s in states]
    k = len(states)
    if k == 0:
        raise EmptyEnsemble("an ensemble needs at least one state")
    if probs is None:
        probs = [1.0 / k] * k
    probs = [float(p) for p in probs]
    if labels is None:
        labels = [str(i + 1) for i in range(k)]
    labels = [str(x) for x in labels]
    if len(probs) != k or len(labels) != k:
        raise CountMismatch(f"{k} states, {len(probs)} probabilities, {len(labels)} labels")
    _check_dims(states)
    if any(p < -DENSITY_TOL or p > 1 + DENSITY_TOL for p in probs):
        raise ProbSum(f"probabilities must lie in [0, 1], got {probs}")
    if abs(sum(probs) - 1.0) > DENSITY_TOL:
        raise ProbSum(f"probabilities sum to {sum(probs)!r}, not 1")
    clean = []
    for i, rho in enumerate(states):
        try:
            rho = linalg.as_hermitian(rho, tol=DENSITY_TOL)
        except Exception as exc:
            raise NotDensity(f"state {labels[i]!r}: {exc}") from exc
        tr = float(np.trace(rho).real)
        if abs(tr - 1.0) > DENSITY_TOL:
            raise NotDensity(f"state {labels[i]!r} has trace {tr!r}")
        if linalg.psd_margin(rho) < -DENSITY_TOL:
            raise NotDensity(f"state {labels[i]!r} is not positive semidefinite")
        clean.append(rho)
    return Ensemble(tuple(clean), tuple(probs), tuple(labels))


def make_operator_list(operators, labels=None) -> OperatorList:
    """Relaxed constructor for derived, possibly subnormalized, PSD operators."""
    ops = [linalg.as_hermitian(np.asarray(op, dtype=complex), tol=DENSITY_TOL) for op in operators]
    if not ops:
        raise EmptyEnsemble("operator list is empty")
    _check_dims(ops)
    if labels is None:
        labels = [str(i + 1) for i in range(len(ops))]
    labels = tuple(str(x) for x in labels)
    if len(labels) != len(ops):
        raise CountMismatch(f"{len(ops)} operators but {len(labels)} labels")
    for lab, op in zip(labels, ops):
        if linalg.psd_margin(op) < -DENSITY_TOL:
            raise NotPSD(f"operator {lab!r} is not positive semidefinite")
    return OperatorList(tuple(ops), labels)


def operators_of(source) -> tuple:
    """The weighted operator tuple of an Ensemble or OperatorList."""
    if isinstance(source, Ensemble):
        return source.weighted
    if isinstance(source, OperatorList):
        return source.operators
    return tuple(linalg.hermitian_part(op) for op in source)


def make_measurement(elements, has_inconclusive: bool = False, tol: float = DENSITY_TOL) -> Measurement:
    elements = [linalg.hermitian_part(np.asarray(e, dtype=complex)) for e in elements]
    if not elements:
        raise EmptyEnsemble("measurement has no elements")
    d = _check_dims(elements)
    for i, e in enumerate(elements):
        if linalg.psd_margin(e) < -tol:
            raise NotPSD(f"measurement element {i} is not positive semidefinite")
    resid = float(np.max(np.abs(sum(elements) - np.eye(d))))
    if resid > tol:
        raise NotDensity(f"measurement elements sum to identity only within {resid:.3e}")
    return Measurement(tuple(elements), has_inconclusive)


def basis_measurement(dim: int, order=None) -> Measurement:
    """Projective measurement in the computational basis, optionally permuted."""
    order = range(dim) if order is None else order
    return Measurement(tuple(linalg.projector(linalg.basis_vector(i, dim)) for i in order))


def subset_label(subset) -> str:
    return "{" + ",".join(str(i + 1) for i in subset) + "}"


def m_state_reduction(source, m: int) -> OperatorList:
    """Group preparations into all size-m subsets Y (lexicographic) with rho_Y = sum of rho-tilde."""
    ops = operators_of(source)
    k = len(ops)
    if not 1 <= m <= k:
        raise BadSubsetSize(f"m must lie in [1, {k}], got {m}")
    labels = source.labels if isinstance(source, (Ensemble, OperatorList)) else None
    out, names = [], []
    for subset in combinations(range(k), m):
        out.append(sum(ops[i] for i in subset))
        if m == 1 and labels is not None:
            names.append(labels[subset[0]])
        else:
            names.append(subset_label(subset))
    return OperatorList(tuple(out), tuple(names))


def to_discrimination(source) -> OperatorList:
    """theta_i = (1 / (k - 1)) * sum over j != i of rho-tilde_j."""
    ops = operators_of(source)
    k = len(ops)
    if k < 2:
        raise TooFewStates("conversion to discrimination needs k >= 2")
    total = sum(ops)
    out = tuple((total - op) / (k - 1) for op in ops)
    labels = source.labels if isinstance(source, (Ensemble, OperatorList)) else tuple(
        str(i + 1) for i in range(k)
    )
    return OperatorList(out, tuple(labels))


def _check_pairing(ops, meas: Measurement) -> None:
    outcomes = meas.outcomes
    if len(outcomes) != len(ops):
        raise CountMismatch(f"{len(ops)} operators but {len(outcomes)} measurement outcomes")
    if outcomes[0].shape != ops[0].shape:
        raise DimensionMismatch(f"operators are {ops[0].shape}, measurement is {outcomes[0].shape}")


def exclusion_error(source, meas: Measurement) -> float:
    """alpha = sum_i tr[rho-tilde_i M_i]."""
    ops = operators_of(source)
    _check_pairing(ops, meas)
    return float(sum(np.vdot(op, m).real for op, m in zip(ops, meas.outcomes)))


def discrimination_error(source, meas: Measurement) -> float:
    """1 - sum_i tr[op_i M_i] for an operator list treated as discrimination targets."""
    ops = operators_of(source)
    _check_pairing(ops, meas)
    return float(1.0 - sum(np.vdot(op, m).real for op, m in zip(ops, meas.outcomes)))


def exc_disc_residual(ens, meas: Measurement) -> float:
    """Residual of P_dis(R) = (k-2)/(k-1) + P_exc(P)/(k-1) for R = to_discrimination(P)."""
    k = len(operators_of(ens))
    lhs = discrimination_error(to_discrimination(ens), meas)
    rhs = (k - 2) / (k - 1) + exclusion_error(ens, meas) / (k - 1)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Standard families and random generators

def cusp_states(k: int) -> list:
    """|psi_i> = sum over j != i of |j> / sqrt(k - 1), for i = 1..k."""
    vecs = []
    for i in range(k):
        v = np.full(k, 1.0 / np.sqrt(k - 1), dtype=complex)
        v[i] = 0.0
        vecs.append(v)
    return vecs


def cusp_ensemble(k: int) -> Ensemble:
    return make_ensemble(cusp_states(k))


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    """Random density matrix from a Ginibre matrix of the given rank."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return linalg.hermitian_part(rho / np.trace(rho).real)


def random_pure(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_ensemble(
    rng: np.random.Generator, k: int, dim: int, rank: int | None = None, uniform: bool = False
) -> Ensemble:
    """k random states in dimension ``dim``; rank defaults to a random value per state."""
    states = []
    for _ in range(k):
        r = rank if rank is not None else int(rng.integers(1, dim + 1))
        states.append(random_density(rng, dim, r))
    if uniform:
        probs = [1.0 / k] * k
    else:
        probs = rng.dirichlet(np.ones(k))
        probs = list(probs / probs.sum())
    return make_ensemble(states, probs)


def random_measurement(rng: np.random.Generator, dim: int, count: int) -> Measurement:
    """Random POVM: G_i = A_i^dagger A_i normalized by S^{-1/2} on both sides."""
    gs = []
    for _ in range(count):
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        gs.append(a.conj().T @ a)
    s = sum(gs)
    w, v = linalg.eig_hermitian(s)
    inv_root = (v / np.sqrt(w)) @ v.conj().T
    return Measurement(tuple(linalg.hermitian_part(inv_root @ g @ inv_root) for g in gs))


def n_subsets(k: int, m: int) -> int:
    return comb(k, m)
