"""Optimality certificates and lower bounds for minimum-error exclusion.

Everything here produces a Hermitian N with N <= rho~_i for all i (a dual
feasible point), so tr N bounds the optimal error from below.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .ensembles import Ensemble, Measurement, operators_of
from .errors import BadEps, CountMismatch, DegenerateK, DimensionMismatch, TooFewStates

CLEAN_MARGIN = 1e-8
# sums that exceed k(k - 2) by less than this are treated as equal (rounding)
FIDELITY_TIE_TOL = 1e-9
EXHAUSTIVE_MAX_K = 8


@dataclass(frozen=True)
class Certificate:
    N: np.ndarray
    hermiticity_residual: float
    margins: tuple
    objective_match: float
    is_optimal: bool
    tol: float

    @property
    def trace(self) -> float:
        return float(np.trace(self.N).real)


class BoundKind(str, enum.Enum):
    FIDELITY_CONDITION = "FidelityCondition"
    PERM_LOWER_BOUND = "PermLowerBound"
    WITNESS_TRACE = "WitnessTrace"


@dataclass(frozen=True)
class BoundReport:
    value: float
    kind: BoundKind
    details: dict = field(default_factory=dict)


def _states(source) -> list:
    """Unit-trace states of an ensemble, or trace-normalized operators of a list."""
    if isinstance(source, Ensemble):
        return list(source.states)
    out = []
    for op in operators_of(source):
        tr = float(np.trace(op).real)
        out.append(op / tr if tr > 0 else op)
    return out


def _margins(ops, n) -> tuple:
    return tuple(linalg.psd_margin(op - n) for op in ops)


def theorem1_certificate(source, meas: Measurement, tol: float = 1e-8) -> Certificate:
    """Check optimality of ``meas`` through N = sum_i rho~_i M_i.

    M is optimal when N is Hermitian, N <= rho~_i for every i, and
    tr N equals the error of M (the last holds by construction up to rounding).
    """
    ops = operators_of(source)
    outcomes = meas.outcomes
    if len(outcomes) != len(ops):
        raise CountMismatch(f"{len(ops)} operators but {len(outcomes)} measurement outcomes")
    if outcomes[0].shape != ops[0].shape:
        raise DimensionMismatch(f"operators are {ops[0].shape}, measurement is {outcomes[0].shape}")
    raw = sum(op @ m for op, m in zip(ops, outcomes))
    herm_res = float(np.max(np.abs(raw - raw.conj().T)))
    n = linalg.hermitian_part(raw)
    margins = _margins(ops, n)
    alpha = float(sum(np.vdot(op, m).real for op, m in zip(ops, outcomes)))
    match = abs(float(np.trace(n).real) - alpha)
    ok = herm_res <= tol and min(margins) >= -tol and match <= tol
    return Certificate(n, herm_res, margins, match, ok, tol)


def fidelity_condition(source) -> BoundReport:
    """Sum of F(rho_j, rho_l) over ordered pairs j != l, against k(k - 2).

    Priors play no role; operator lists are trace-normalized first. A value
    above k(k - 2) (beyond ``FIDELITY_TIE_TOL``) rules out conclusive exclusion.
    """
    states = _states(source)
    k = len(states)
    if k < 2:
        raise TooFewStates("the fidelity condition needs at least two states")
    total = 0.0
    for j in range(k):
        for l in range(j + 1, k):
            total += 2.0 * linalg.fidelity(states[j], states[l])
    threshold = float(k * (k - 2))
    if total > threshold + FIDELITY_TIE_TOL:
        verdict = "exclusion impossible"
    else:
        verdict = "necessary condition met"
    return BoundReport(total, BoundKind.FIDELITY_CONDITION,
                       {"k": k, "threshold": threshold, "verdict": verdict})


def max_witness_weight(k: int, eps: float) -> float:
    """Largest p allowed for the fidelity witness at a given eps."""
    denom = (k - 1) * (1 - eps) ** 2 / (k - 2) ** 2 - eps
    if denom <= 0:
        return 1.0
    return min(1.0, eps / denom)


def witness_from_fidelity(source, eps: float = 1e-3):
    """Dual point built from pairwise fidelities; tr N > 0 rules out conclusive exclusion.

    N = -p sum_r rho_r + (1 - eps) p / (k - 2) * sum_{j<l} (sqrt(rho_j) U_jl sqrt(rho_l) + h.c.)
    where U_jl attains tr[sqrt(rho_l) sqrt(rho_j) U_jl] = F(rho_j, rho_l). It is
    built on the unit-trace states, so N <= rho_i; for an ensemble with priors
    ``min_i p_i * tr N`` bounds the weighted problem and is reported too.
    """
    states = _states(source)
    k = len(states)
    if k < 3:
        raise DegenerateK(f"the fidelity witness needs k >= 3, got k = {k}")
    if not 0.0 < eps < 1.0:
        raise BadEps(f"eps must lie in (0, 1), got {eps!r}")
    p = max_witness_weight(k, eps) * (1.0 - 1e-6)
    roots = [linalg.sqrt_psd(rho) for rho in states]
    coeff = (1.0 - eps) * p / (k - 2)
    cross = np.zeros_like(states[0], dtype=complex)
    sum_f = 0.0
    for j in range(k):
        for l in range(j + 1, k):
            u = linalg.polar_unitary(roots[l] @ roots[j])
            term = roots[j] @ u @ roots[l]
            cross += term + term.conj().T
            sum_f += 2.0 * linalg.fidelity(states[j], states[l])
    n = linalg.hermitian_part(-p * sum(states) + coeff * cross)
    margins = _margins(states, n)
    tr = float(np.trace(n).real)
    details = {
        "eps": eps,
        "p": p,
        "k": k,
        "sum_fidelity": sum_f,
        "trace_formula": -k * p + (1.0 - eps) * p / (k - 2) * sum_f,
        "margins": list(margins),
        "clean": min(margins) >= -CLEAN_MARGIN,
    }
    if isinstance(source, Ensemble):
        details["weighted_bound"] = min(source.probs) * tr
    return n, BoundReport(tr, BoundKind.WITNESS_TRACE, details)


def _nested_min(ops, perm):
    n = linalg.min_op(ops[perm[1]], ops[perm[0]]) if len(perm) > 1 else ops[perm[0]]
    for idx in perm[2:]:
        n = linalg.min_op(ops[idx], n)
    return n


def _exhaustive(ops):
    """Best nested minimum over all orderings, sharing work along common prefixes."""
    k = len(ops)
    best = (-math.inf, None, None)
    if k == 1:
        return float(np.trace(ops[0]).real), (0,), ops[0]

    def walk(prefix, n, remaining):
        nonlocal best
        if not remaining:
            tr = float(np.trace(n).real)
            if tr > best[0]:
                best = (tr, tuple(prefix), n)
            return
        for idx in remaining:
            walk(prefix + [idx], linalg.min_op(ops[idx], n), [r for r in remaining if r != idx])

    # min is symmetric, so orderings that start (b, a) with a < b repeat the
    # (a, b) branch; visiting in lexicographic order keeps the tie-break intact
    for a in range(k):
        for b in range(a + 1, k):
            rest = [r for r in range(k) if r not in (a, b)]
            walk([a, b], linalg.min_op(ops[b], ops[a]), rest)
    return best


def perm_lower_bound(source, mode: str = "auto", seed: int = 0, samples: int | None = None) -> BoundReport:
    """max over orderings eps of tr N_eps, N_eps = min(rho~_eps(k), min(..., min(rho~_eps(2), rho~_eps(1)))).

    ``mode`` is ``"exhaustive"``, ``"sample"`` (10 k^2 seeded random orderings
    plus the identity) or ``"auto"`` (exhaustive for k <= 8).
    """
    ops = list(operators_of(source))
    k = len(ops)
    if mode == "auto":
        mode = "exhaustive" if k <= EXHAUSTIVE_MAX_K else "sample"
    if mode == "exhaustive":
        value, perm, n = _exhaustive(ops)
        tried = math.factorial(k)
    elif mode == "sample":
        rng = np.random.default_rng(seed)
        count = 10 * k * k if samples is None else samples
        perms = {tuple(range(k))}
        for _ in range(count):
            perms.add(tuple(int(i) for i in rng.permutation(k)))
        value, perm, n = -math.inf, None, None
        for cand in sorted(perms):
            cur = _nested_min(ops, cand)
            tr = float(np.trace(cur).real)
            if tr > value:
                value, perm, n = tr, cand, cur
        tried = len(perms)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    margins = _margins(ops, n)
    details = {
        "permutation": [i + 1 for i in perm],
        "mode": mode,
        "seed": seed,
        "evaluated": tried,
        "min_margin": min(margins),
    }
    return BoundReport(value, BoundKind.PERM_LOWER_BOUND, details)


def orthogonality_required(source, tol: float = 1e-9) -> bool:
    """True when every pair of states satisfies tr[rho_j rho_l] <= tol."""
    states = _states(source)
    k = len(states)
    if k < 2:
        raise TooFewStates("orthogonality needs at least two states")
    for j in range(k):
        for l in range(j + 1, k):
            if float(np.vdot(states[j], states[l]).real) > tol:
                return False
    return True
