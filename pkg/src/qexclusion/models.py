"""The three exclusion SDPs in the general {A, B, Phi} form.

Primal: minimize tr[A X] subject to Phi(X) = B, X >= 0.
Dual:   maximize tr[B Y] subject to Phi*(Y) <= A.

Block layouts:

* min-error:   X = diag(M_1..M_k), A = diag(rho~_1..rho~_k), B = I_d,
  Phi(X) = sum M_i, Y = N.
* unambiguous: X = diag(M_1..M_k), A = diag(S..S) with S = sum rho~_j,
  B = diag(I_d, 0_k), Phi(X) = diag(sum M_i, tr[rho~_1 M_1], ..),
  Y = diag(N, a_1..a_k). The primal maximizes, so the reported objective is
  the inconclusive probability tr[S] - tr[S sum M_i].
* worst-case:  X = diag(lambda, M_1..M_k), A = e_11, B = diag(0_k, I_d),
  Phi(X) = diag(lambda - tr[rho~_i M_i] .., sum M_i), Y = diag(a_1..a_k, N).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .ensembles import DENSITY_TOL, operators_of
from .errors import CountMismatch, DimensionMismatch, EmptyEnsemble, NotPSD


class Variant(str, enum.Enum):
    MIN_ERROR = "min-error"
    UNAMBIGUOUS = "unambiguous"
    WORST_CASE = "worst-case"


@dataclass(frozen=True)
class ExclusionModel:
    variant: Variant
    operators: tuple
    labels: tuple

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    @property
    def count(self) -> int:
        return len(self.operators)

    @property
    def total(self) -> np.ndarray:
        return sum(self.operators)


@dataclass(frozen=True)
class PrimalVars:
    """Measurement elements plus ``lam`` (worst-case) or the implicit ``?`` element."""

    measurement: tuple
    lam: float | None = None

    def inconclusive(self) -> np.ndarray:
        return np.eye(self.measurement[0].shape[0]) - sum(self.measurement)


@dataclass(frozen=True)
class DualVars:
    N: np.ndarray
    a: tuple = ()


@dataclass
class FeasibilityReport:
    equality_residual: float
    min_margin: float
    constraints: list = field(default_factory=list)  # (name, kind, value)

    def feasible(self, tol: float) -> bool:
        return self.equality_residual <= tol and self.min_margin >= -tol

    def as_dict(self) -> dict:
        return {
            "equality_residual": self.equality_residual,
            "min_margin": self.min_margin,
            "constraints": [{"name": n, "kind": k, "value": v} for n, k, v in self.constraints],
        }


def build(variant, operators, labels=None) -> ExclusionModel:
    variant = Variant(variant)
    ops = operators_of(operators)
    if not ops:
        raise EmptyEnsemble("no operators")
    shapes = {op.shape for op in ops}
    if len(shapes) != 1:
        raise DimensionMismatch(f"operators have differing shapes {sorted(shapes)}")
    for i, op in enumerate(ops):
        if linalg.psd_margin(op) < -DENSITY_TOL:
            raise NotPSD(f"operator {i} is not positive semidefinite")
    if labels is None:
        labels = getattr(operators, "labels", None) or tuple(str(i + 1) for i in range(len(ops)))
    return ExclusionModel(variant, tuple(ops), tuple(labels))


# ---------------------------------------------------------------------------
# Block form

def _blockdiag(blocks) -> np.ndarray:
    sizes = [b.shape[0] for b in blocks]
    out = np.zeros((sum(sizes), sum(sizes)), dtype=complex)
    i = 0
    for b, s in zip(blocks, sizes):
        out[i:i + s, i:i + s] = b
        i += s
    return out


def _scalar(x) -> np.ndarray:
    return np.array([[x]], dtype=complex)


def block_A(model: ExclusionModel) -> np.ndarray:
    k, d = model.count, model.dim
    if model.variant is Variant.MIN_ERROR:
        return _blockdiag(model.operators)
    if model.variant is Variant.UNAMBIGUOUS:
        return _blockdiag([model.total] * k)
    a = np.zeros((k * d + 1, k * d + 1), dtype=complex)
    a[0, 0] = 1.0
    return a


def block_B(model: ExclusionModel) -> np.ndarray:
    k, d = model.count, model.dim
    if model.variant is Variant.MIN_ERROR:
        return np.eye(d, dtype=complex)
    b = np.zeros((d + k, d + k), dtype=complex)
    if model.variant is Variant.UNAMBIGUOUS:
        b[:d, :d] = np.eye(d)
    else:
        b[k:, k:] = np.eye(d)
    return b


def _m_blocks(model: ExclusionModel, x: np.ndarray) -> list:
    d = model.dim
    off = 1 if model.variant is Variant.WORST_CASE else 0
    return [x[off + i * d: off + (i + 1) * d, off + i * d: off + (i + 1) * d] for i in range(model.count)]


def phi(model: ExclusionModel, x) -> np.ndarray:
    """Apply Phi to a primal-space matrix (only its diagonal blocks are read)."""
    x = np.asarray(x, dtype=complex)
    if x.shape != block_A(model).shape:
        raise DimensionMismatch(f"primal matrix must be {block_A(model).shape}, got {x.shape}")
    ms = _m_blocks(model, x)
    if model.variant is Variant.MIN_ERROR:
        return sum(ms)
    traces = [np.trace(op @ m) for op, m in zip(model.operators, ms)]
    if model.variant is Variant.UNAMBIGUOUS:
        return _blockdiag([sum(ms)] + [_scalar(t) for t in traces])
    lam = x[0, 0]
    return _blockdiag([_scalar(lam - t) for t in traces] + [sum(ms)])


def phi_adjoint(model: ExclusionModel, y) -> np.ndarray:
    """Apply Phi* to a dual-space matrix (only its diagonal blocks are read)."""
    y = np.asarray(y, dtype=complex)
    if y.shape != block_B(model).shape:
        raise DimensionMismatch(f"dual matrix must be {block_B(model).shape}, got {y.shape}")
    k, d = model.count, model.dim
    if model.variant is Variant.MIN_ERROR:
        return _blockdiag([y] * k)
    if model.variant is Variant.UNAMBIGUOUS:
        n = y[:d, :d]
        a = [y[d + i, d + i] for i in range(k)]
        return _blockdiag([n + ai * op for ai, op in zip(a, model.operators)])
    a = [y[i, i] for i in range(k)]
    n = y[k:, k:]
    return _blockdiag([_scalar(sum(a))] + [n - ai * op for ai, op in zip(a, model.operators)])


def pack_primal(model: ExclusionModel, p: PrimalVars) -> np.ndarray:
    blocks = list(p.measurement)
    if model.variant is Variant.WORST_CASE:
        blocks = [_scalar(p.lam if p.lam is not None else 0.0)] + blocks
    return _blockdiag(blocks)


def pack_dual(model: ExclusionModel, dv: DualVars) -> np.ndarray:
    if model.variant is Variant.MIN_ERROR:
        return np.asarray(dv.N, dtype=complex)
    scalars = [_scalar(a) for a in dv.a]
    if model.variant is Variant.UNAMBIGUOUS:
        return _blockdiag([dv.N] + scalars)
    return _blockdiag(scalars + [dv.N])


# ---------------------------------------------------------------------------
# Objectives and feasibility

def _check_primal(model: ExclusionModel, p: PrimalVars) -> None:
    if len(p.measurement) != model.count:
        raise CountMismatch(f"model has {model.count} operators, primal has {len(p.measurement)} elements")
    if p.measurement[0].shape != (model.dim, model.dim):
        raise DimensionMismatch(f"measurement elements must be {model.dim}x{model.dim}")


def _check_dual(model: ExclusionModel, dv: DualVars) -> None:
    if np.shape(dv.N) != (model.dim, model.dim):
        raise DimensionMismatch(f"N must be {model.dim}x{model.dim}, got {np.shape(dv.N)}")
    want = 0 if model.variant is Variant.MIN_ERROR else model.count
    if len(dv.a) != want:
        raise CountMismatch(f"expected {want} dual scalars, got {len(dv.a)}")


def _tr(a, b) -> float:
    return float(np.vdot(a, b).real)


def primal_value(model: ExclusionModel, p: PrimalVars) -> float:
    """Objective in the shared minimize orientation.

    min-error: sum tr[rho~_i M_i]; unambiguous: inconclusive probability;
    worst-case: lambda (or the max of tr[rho~_i M_i] when lambda is unset).
    """
    _check_primal(model, p)
    errs = [_tr(op, m) for op, m in zip(model.operators, p.measurement)]
    if model.variant is Variant.MIN_ERROR:
        return float(sum(errs))
    if model.variant is Variant.UNAMBIGUOUS:
        total = model.total
        return float(np.trace(total).real - _tr(total, sum(p.measurement)))
    return float(p.lam) if p.lam is not None else max(errs)


def dual_value(model: ExclusionModel, dv: DualVars) -> float:
    """tr[N] for every variant."""
    _check_dual(model, dv)
    return float(np.trace(dv.N).real)


def dual_bound(model: ExclusionModel, dv: DualVars) -> float:
    """The dual objective mapped to a lower bound on :func:`primal_value`.

    For unambiguous exclusion tr[N] upper-bounds the conclusive probability,
    so the bound on the inconclusive probability is tr[S] - tr[N].
    """
    beta = dual_value(model, dv)
    if model.variant is Variant.UNAMBIGUOUS:
        return float(np.trace(model.total).real) - beta
    return beta


def primal_feasibility(model: ExclusionModel, p: PrimalVars) -> FeasibilityReport:
    _check_primal(model, p)
    d = model.dim
    ms = p.measurement
    cons = []
    for i, m in enumerate(ms):
        cons.append((f"M_{i + 1} >= 0", "psd", linalg.psd_margin(m)))
    total_m = sum(ms)
    if model.variant is Variant.UNAMBIGUOUS:
        cons.append(("sum M_i <= I", "psd", linalg.psd_margin(np.eye(d) - total_m)))
        for i, (op, m) in enumerate(zip(model.operators, ms)):
            cons.append((f"tr[rho~_{i + 1} M_{i + 1}] = 0", "eq", abs(_tr(op, m))))
    else:
        cons.append(("sum M_i = I", "eq", float(np.max(np.abs(total_m - np.eye(d))))))
    if model.variant is Variant.WORST_CASE:
        lam = p.lam if p.lam is not None else max(_tr(op, m) for op, m in zip(model.operators, ms))
        cons.append(("lambda >= 0", "psd", float(lam)))
        for i, (op, m) in enumerate(zip(model.operators, ms)):
            cons.append((f"lambda >= tr[rho~_{i + 1} M_{i + 1}]", "psd", float(lam - _tr(op, m))))
    return _report(cons)


def dual_feasibility(model: ExclusionModel, dv: DualVars) -> FeasibilityReport:
    _check_dual(model, dv)
    n = np.asarray(dv.N, dtype=complex)
    cons = [("N Hermitian", "eq", float(np.max(np.abs(n - n.conj().T))))]
    n = linalg.hermitian_part(n)
    if model.variant is Variant.MIN_ERROR:
        for i, op in enumerate(model.operators):
            cons.append((f"N <= rho~_{i + 1}", "psd", linalg.psd_margin(op - n)))
    elif model.variant is Variant.UNAMBIGUOUS:
        total = model.total
        cons.append(("N >= 0", "psd", linalg.psd_margin(n)))
        for i, (a, op) in enumerate(zip(dv.a, model.operators)):
            # weights can be very large when the bound is nearly tight, so the
            # margin is measured relative to the size of the a_i term
            scale = max(1.0, abs(a) * float(np.max(np.abs(op))))
            cons.append((f"a_{i + 1} rho~_{i + 1} + N >= sum rho~_j", "psd",
                         linalg.psd_margin(a * op + n - total) / scale))
            cons.append((f"a_{i + 1} >= 0", "psd", float(a)))
    else:
        for i, (a, op) in enumerate(zip(dv.a, model.operators)):
            cons.append((f"N <= a_{i + 1} rho~_{i + 1}", "psd", linalg.psd_margin(a * op - n)))
            cons.append((f"a_{i + 1} >= 0", "psd", float(a)))
        cons.append(("sum a_i <= 1", "psd", float(1.0 - sum(dv.a))))
    return _report(cons)


def feasibility(model: ExclusionModel, variables) -> FeasibilityReport:
    if isinstance(variables, PrimalVars):
        return primal_feasibility(model, variables)
    if isinstance(variables, DualVars):
        return dual_feasibility(model, variables)
    raise TypeError("expected PrimalVars or DualVars")


def _report(cons) -> FeasibilityReport:
    eq = max((v for _, k, v in cons if k == "eq"), default=0.0)
    margin = min((v for _, k, v in cons if k == "psd"), default=0.0)
    return FeasibilityReport(float(eq), float(margin), cons)
