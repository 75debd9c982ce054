"""Primal-dual interior-point solver for the exclusion SDPs.

All three variants share one structure, which the solver exploits:

    minimize   sum_b Re tr[C_b X_b] + c . x + offset
    subject to sum_b X_b = B                          (d x d Hermitian rows)
               Re tr[F_i X_{b(i)}] + G_i . x = h_i    (scalar rows)
               X_b >= 0,  x >= 0

with d x d matrix blocks X_b and nonnegative scalars x. The dual variables
are a Hermitian ``y_N`` for the matrix rows and reals ``y_r`` for the scalar
rows. Iterations use the HKM search direction with a Mehrotra
predictor-corrector; the Schur complement is assembled in an orthonormal
real basis of the Hermitian matrices and factored by Cholesky.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from . import linalg
from .errors import ScaleCap
from .models import DualVars, ExclusionModel, PrimalVars, Variant, dual_bound, feasibility, primal_value

log = logging.getLogger(__name__)

MAX_KD = 1024
STEP_FRACTION = 0.98
STATIC_REG = 1e-12


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    MAX_ITERS = "MaxIters"
    NUMERICAL_FAILURE = "NumericalFailure"


@dataclass(frozen=True)
class SolveOptions:
    gap_tol: float = 1e-9
    max_iters: int = 200
    feas_tol: float = 1e-9
    seed: int = 0
    # slack allowed on tr[rho~_i M_i] = 0 in the unambiguous variant
    zero_trace_tol: float = 1e-9
    max_restarts: int = 2

    def __post_init__(self):
        if self.gap_tol <= 0 or self.feas_tol <= 0 or self.zero_trace_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class IterationRecord:
    iteration: int
    gap: float
    primal_infeas: float
    dual_infeas: float
    mu: float
    step_primal: float
    step_dual: float


@dataclass
class SolveReport:
    primal: PrimalVars
    dual: DualVars
    alpha: float
    beta: float
    gap: float
    iterations: int
    status: Status
    primal_residual: float
    dual_residual: float
    trace: list = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


# ---------------------------------------------------------------------------
# Problem structure

@dataclass
class _Structure:
    d: int
    C: list                # per block, r_b x r_b
    E: list                # per block, d x r_b embedding (None for identity)
    B: np.ndarray          # (d, d)
    c: np.ndarray          # (ns,)
    row_block: np.ndarray  # (r,) block index per scalar row
    F: list                # per scalar row, matrix in the space of its block
    G: np.ndarray          # (r, ns)
    h: np.ndarray          # (r,)
    offset: float = 0.0
    # model outcome index of each block (-1 for the inconclusive block)
    outcome: tuple = ()

    @property
    def nb(self) -> int:
        return len(self.C)

    @property
    def ns(self) -> int:
        return self.c.shape[0]

    @property
    def nr(self) -> int:
        return self.h.shape[0]

    @property
    def sizes(self) -> list:
        return [C.shape[0] for C in self.C]


def kernel_basis(op: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal columns spanning eigenvectors of ``op`` with eigenvalue <= tol * max(1, ||op||)."""
    w, v = linalg.eig_hermitian(op)
    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    return v[:, w <= tol * scale]


def _structure(model: ExclusionModel, opts: SolveOptions) -> _Structure:
    ops = [np.asarray(op, dtype=complex) for op in model.operators]
    k, d = model.count, model.dim
    eye = np.eye(d, dtype=complex)
    if model.variant is Variant.MIN_ERROR:
        return _Structure(d, [op.copy() for op in ops], [None] * k, eye, np.zeros(0), np.zeros(0, int),
                          [], np.zeros((0, 0)), np.zeros(0), 0.0, tuple(range(k)))
    if model.variant is Variant.WORST_CASE:
        # scalars: lambda, then one slack per row
        G = np.zeros((k, k + 1))
        G[:, 0] = 1.0
        G[np.arange(k), 1 + np.arange(k)] = -1.0
        c = np.zeros(k + 1)
        c[0] = 1.0
        return _Structure(d, [np.zeros((d, d), complex) for _ in range(k)], [None] * k, eye, c,
                          np.arange(k), [-op for op in ops], G, np.zeros(k), 0.0, tuple(range(k)))
    # unambiguous: M_i = K_i Q_i K_i^dagger on the kernel of rho~_i, then M_?
    total = sum(ops)
    C, E, outcome = [], [], []
    for i, op in enumerate(ops):
        K = kernel_basis(op, opts.zero_trace_tol)
        if K.shape[1] == 0:
            continue
        C.append(linalg.hermitian_part(-(K.conj().T @ total @ K)))
        E.append(K)
        outcome.append(i)
    C.append(np.zeros((d, d), complex))
    E.append(None)
    outcome.append(-1)
    return _Structure(d, C, E, eye, np.zeros(0), np.zeros(0, int), [], np.zeros((0, 0)),
                      np.zeros(0), float(np.trace(total).real), tuple(outcome))


def _herm_basis(d: int) -> np.ndarray:
    """Columns are row-major vec of an orthonormal basis of d x d Hermitian matrices."""
    cols = []
    inv = 1.0 / math.sqrt(2.0)
    for p in range(d):
        e = np.zeros((d, d), complex)
        e[p, p] = 1.0
        cols.append(e.ravel())
    for p in range(d):
        for q in range(p + 1, d):
            e = np.zeros((d, d), complex)
            e[p, q] = e[q, p] = inv
            cols.append(e.ravel())
            e = np.zeros((d, d), complex)
            e[p, q] = 1j * inv
            e[q, p] = -1j * inv
            cols.append(e.ravel())
    return np.array(cols).T


def _herm(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))


def _inner(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.vdot(a, b).real)


def _lift(E, X):
    return X if E is None else E @ X @ E.conj().T


def _restrict(E, Y):
    return Y if E is None else E.conj().T @ Y @ E


class _Iterate:
    """Primal blocks X, scalars x, duals (yN, yr), dual slack blocks S and scalars z."""

    __slots__ = ("X", "x", "yN", "yr", "S", "z")

    def __init__(self, X, x, yN, yr, S, z):
        self.X, self.x, self.yN, self.yr, self.S, self.z = X, x, yN, yr, S, z

    def copy(self):
        return _Iterate([a.copy() for a in self.X], self.x.copy(), self.yN.copy(), self.yr.copy(),
                        [a.copy() for a in self.S], self.z.copy())


class _Ops:
    """Linear maps of the structured problem."""

    def __init__(self, st: _Structure):
        self.st = st
        self.U = _herm_basis(st.d)

    def A(self, X, x):
        st = self.st
        N = sum(_lift(E, Xb) for E, Xb in zip(st.E, X))
        rows = np.array([_inner(F, X[b]) for F, b in zip(st.F, st.row_block)])
        if st.ns:
            rows = rows + st.G @ x
        return _herm(N), rows

    def At(self, yN, yr):
        st = self.st
        S = [_restrict(E, yN).copy() for E in st.E]
        for i, b in enumerate(st.row_block):
            S[b] = S[b] + yr[i] * st.F[i]
        s = st.G.T @ yr if st.ns else np.zeros(0)
        return S, s

    def to_coords(self, h):
        return (self.U.conj().T @ h.ravel()).real

    def from_coords(self, c):
        return _herm((self.U @ c).reshape(self.st.d, self.st.d))

    def schur(self, X, Z, x, z):
        st = self.st
        d = st.d
        Xl = np.array([_lift(E, Xb) for E, Xb in zip(st.E, X)])
        Zl = np.array([_lift(E, Zb) for E, Zb in zip(st.E, Z)])
        K = np.einsum("bpr,bsq->pqrs", Xl, Zl).reshape(d * d, d * d)
        M_nn = (self.U.conj().T @ K @ self.U).real
        if not st.nr:
            return M_nn
        nr = st.nr
        M = np.zeros((d * d + nr, d * d + nr))
        M[:d * d, :d * d] = M_nn
        XFZ = [X[b] @ F @ Z[b] for F, b in zip(st.F, st.row_block)]
        lifted = np.array([_lift(st.E[b], W).ravel() for W, b in zip(XFZ, st.row_block)])
        cross = (self.U.conj().T @ lifted.T).real
        M[:d * d, d * d:] = cross
        M[d * d:, :d * d] = cross.T
        small = np.zeros((nr, nr))
        for i in range(nr):
            for j in range(nr):
                if st.row_block[i] == st.row_block[j]:
                    small[i, j] = _inner(st.F[i], XFZ[j])
        if st.ns:
            small += (st.G * (x / z)) @ st.G.T
        M[d * d:, d * d:] = 0.5 * (small + small.T)
        return M


def _factor(M: np.ndarray):
    """Cholesky of the Schur complement with a static diagonal shift, raised on failure."""
    reg = STATIC_REG
    for _ in range(4):
        Mr = M.copy()
        Mr[np.diag_indices_from(Mr)] += reg
        try:
            return cho_factor(Mr, lower=True, check_finite=True)
        except LinAlgError:
            reg *= 1e3
    raise LinAlgError("Schur complement is not positive definite after regularization")


def _refined_solve(M, factor, rhs, steps: int = 2):
    sol = cho_solve(factor, rhs)
    for _ in range(steps):
        sol = sol + cho_solve(factor, rhs - M @ sol)
    return sol


def _max_step(X: list, dX: list) -> float:
    """Largest t with X_b + t dX_b PSD for every block, given PD blocks X_b."""
    best = math.inf
    for Xb, dXb in zip(X, dX):
        L = np.linalg.cholesky(Xb)
        W = np.linalg.solve(L, np.linalg.solve(L, dXb).conj().T).conj().T
        lo = linalg.psd_margin(W)
        if lo < 0:
            best = min(best, -1.0 / lo)
    return best


def _max_step_scalar(x: np.ndarray, dx: np.ndarray) -> float:
    neg = dx < -1e-300
    if not np.any(neg):
        return math.inf
    return float(np.min(x[neg] / -dx[neg]))


# ---------------------------------------------------------------------------
# Starting points and dual weights

def unambiguous_weights(model: ExclusionModel, N: np.ndarray, kernel_tol: float = 1e-9,
                        margin: float = 0.0) -> tuple:
    """Smallest a_i >= 0 with a_i rho~_i + N - sum rho~_j >= 0, given N.

    Works in the eigenbasis of rho~_i: on the kernel (eigenvalues below
    ``kernel_tol``) the constraint does not involve a_i, so N - sum rho~_j
    must already be positive there; the range part then follows from a
    Schur complement. Returns ``inf`` for a_i when no finite value exists.
    ``margin`` is added to the smallest required value.
    """
    W = linalg.hermitian_part(N - model.total)
    out = []
    for op in model.operators:
        w, v = linalg.eig_hermitian(op)
        scale = max(1.0, float(np.max(np.abs(w))))
        rng = w > kernel_tol * scale
        R, K = v[:, rng], v[:, ~rng]
        lam = w[rng]
        Wrr = R.conj().T @ W @ R
        if K.shape[1]:
            Wkk = linalg.hermitian_part(K.conj().T @ W @ K)
            kw, kv = linalg.eig_hermitian(Wkk)
            if kw[-1] <= 0:
                out.append(math.inf)
                continue
            Wrk = R.conj().T @ W @ K
            T = Wrk @ kv
            Wrr = Wrr - (T / kw) @ T.conj().T
        if not lam.size:
            out.append(0.0)
            continue
        s = 1.0 / np.sqrt(lam)
        need = -linalg.psd_margin(linalg.hermitian_part(s[:, None] * Wrr * s[None, :]))
        out.append(max(0.0, need) + margin)
    return tuple(out)


def strict_start(model: ExclusionModel, opts: SolveOptions | None = None) -> tuple[PrimalVars, DualVars]:
    """Strictly feasible primal and dual points.

    min-error: M_i = I/k and N = -I. worst-case: additionally lambda = 1 and
    a_i = 1/(2k). unambiguous: M_i = delta P_i with P_i the projector onto
    the kernel of rho~_i (zero when rho~_i has full rank) and delta = 1/(2k),
    so the trace-zero rows hold exactly; the dual point is N = (1 + tr S) I
    with the smallest matching a_i.
    """
    opts = opts or SolveOptions()
    k, d = model.count, model.dim
    eye = np.eye(d, dtype=complex)
    if model.variant is Variant.MIN_ERROR:
        return PrimalVars(tuple(eye / k for _ in range(k))), DualVars(-eye)
    if model.variant is Variant.WORST_CASE:
        return (PrimalVars(tuple(eye / k for _ in range(k)), lam=1.0),
                DualVars(-eye, tuple([1.0 / (2 * k)] * k)))
    delta = 1.0 / (2 * k)
    ms = []
    for op in model.operators:
        K = kernel_basis(op, opts.zero_trace_tol)
        ms.append(linalg.hermitian_part(delta * (K @ K.conj().T)))
    n = (1.0 + float(np.trace(model.total).real)) * eye
    return PrimalVars(tuple(ms)), DualVars(n, unambiguous_weights(model, n, opts.zero_trace_tol))


def _initial_iterate(model: ExclusionModel, st: _Structure, ops: _Ops, opts: SolveOptions) -> _Iterate:
    k, d = model.count, model.dim
    eye = np.eye(d, dtype=complex)
    if model.variant is Variant.UNAMBIGUOUS:
        delta = 1.0 / (2 * k)
        X = [delta * np.eye(C.shape[0], dtype=complex) for C in st.C[:-1]]
        X.append(eye - sum((_lift(E, Xb) for E, Xb in zip(st.E, X)), np.zeros((d, d), complex)))
        x = np.zeros(0)
        # solver dual is -N in the unified minimize orientation
        yN, yr = -(1.0 + st.offset) * eye, np.zeros(0)
    else:
        p, dv = strict_start(model, opts)
        X = [m.copy() for m in p.measurement]
        if model.variant is Variant.MIN_ERROR:
            x = np.zeros(0)
            yN, yr = dv.N.copy(), np.zeros(0)
        else:
            traces = np.array([_inner(op, m) for op, m in zip(model.operators, p.measurement)])
            x = np.concatenate([[p.lam], p.lam - traces])
            yN, yr = dv.N.copy(), np.array(dv.a)
    AtS, Ats = ops.At(yN, yr)
    S = [_herm(C - A) for C, A in zip(st.C, AtS)]
    z = st.c - Ats
    return _Iterate([_herm(a) for a in X], x, yN, yr, S, z)


def _perturbed_iterate(it: _Iterate, rng: np.random.Generator) -> _Iterate:
    """Restart point: keep the duals, re-center all blocks at a random positive scale."""
    new = it.copy()
    scale = 1.0 + rng.random()
    nb = max(1, len(it.X))
    new.X = [np.eye(a.shape[0], dtype=complex) * scale / nb for a in it.X]
    new.S = [np.eye(a.shape[0], dtype=complex) * scale for a in it.S]
    new.x = np.full_like(it.x, scale)
    new.z = np.full_like(it.z, scale)
    return new


# ---------------------------------------------------------------------------
# Main loop

def _objectives(st: _Structure, it: _Iterate) -> tuple[float, float]:
    pobj = sum(_inner(C, X) for C, X in zip(st.C, it.X)) + float(st.c @ it.x) + st.offset
    dobj = _inner(st.B, it.yN) + float(st.h @ it.yr) + st.offset
    return pobj, dobj


def _run(st, ops, it, opts, trace, start_iter, gtol, ftol):
    """Iterate from ``it`` until the internal tolerances hold.

    Returns (iterate, status, iterations); status is None on a breakdown of
    the Newton system or the line search, in which case the best iterate seen
    is returned.
    """
    nvars = sum(st.sizes) + st.ns
    dd = st.d * st.d
    best = it.copy()
    best_score = math.inf
    for k in range(start_iter, opts.max_iters):
        ApN, Apr = ops.A(it.X, it.x)
        rpN = st.B - ApN
        rpr = st.h - Apr
        AtS, Ats = ops.At(it.yN, it.yr)
        RdX = [_herm(C - S - A) for C, S, A in zip(st.C, it.S, AtS)]
        Rds = st.c - it.z - Ats
        pinf = max(float(np.max(np.abs(rpN))), float(np.max(np.abs(rpr), initial=0.0)))
        dinf = max(max(float(np.max(np.abs(R))) for R in RdX), float(np.max(np.abs(Rds), initial=0.0)))
        pobj, dobj = _objectives(st, it)
        gap = pobj - dobj
        compl = sum(_inner(X, S) for X, S in zip(it.X, it.S)) + float(it.x @ it.z)
        mu = compl / nvars
        score = max(abs(gap), compl, pinf, dinf)
        if score < best_score:
            best, best_score = it.copy(), score
        if abs(gap) <= gtol and compl <= gtol and pinf <= ftol and dinf <= ftol:
            trace.append(IterationRecord(k, gap, pinf, dinf, mu, 0.0, 0.0))
            return it, Status.OPTIMAL, k
        try:
            Z = [_herm(np.linalg.inv(S)) for S in it.S]
            M = ops.schur(it.X, Z, it.x, it.z)
            M = 0.5 * (M + M.T)
            factor = _factor(M)
        except (LinAlgError, ValueError) as exc:
            log.debug("Newton system breakdown at iteration %d: %s", k, exc)
            return best, None, k

        def direction(sigma, corrX, corrx):
            GX = [sigma * mu * Zb - Xb - Xb @ Rb @ Zb for Xb, Rb, Zb in zip(it.X, RdX, Z)]
            gx = sigma * mu / it.z - it.x - it.x * Rds / it.z
            if corrX is not None:
                GX = [g - c @ Zb for g, c, Zb in zip(GX, corrX, Z)]
                gx = gx - corrx / it.z
            AGN, AGr = ops.A(GX, gx)
            rhs = np.concatenate([ops.to_coords(rpN - AGN), rpr - AGr])
            sol = _refined_solve(M, factor, rhs)
            dyN = ops.from_coords(sol[:dd])
            dyr = sol[dd:]
            AtdN, Atds = ops.At(dyN, dyr)
            dS = [_herm(R - A) for R, A in zip(RdX, AtdN)]
            dz = Rds - Atds
            dX = [sigma * mu * Zb - Xb - Xb @ dSb @ Zb for Xb, dSb, Zb in zip(it.X, dS, Z)]
            dx = sigma * mu / it.z - it.x - it.x * dz / it.z
            if corrX is not None:
                dX = [a - c @ Zb for a, c, Zb in zip(dX, corrX, Z)]
                dx = dx - corrx / it.z
            return [_herm(a) for a in dX], dx, dyN, dyr, dS, dz

        try:
            aX, ax, _, _, aS, az = direction(0.0, None, None)
            ap = min(1.0, _max_step(it.X, aX), _max_step_scalar(it.x, ax))
            ad = min(1.0, _max_step(it.S, aS), _max_step_scalar(it.z, az))
            mu_aff = (sum(_inner(X + ap * dX, S + ad * dS) for X, dX, S, dS in zip(it.X, aX, it.S, aS))
                      + float((it.x + ap * ax) @ (it.z + ad * az))) / nvars
            sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3 if mu > 0 else 0.0
            corr = [a @ b for a, b in zip(aX, aS)]
            dX, dx, dyN, dyr, dS, dz = direction(sigma, corr, ax * az)
            tp = min(1.0, STEP_FRACTION * min(_max_step(it.X, dX), _max_step_scalar(it.x, dx)))
            td = min(1.0, STEP_FRACTION * min(_max_step(it.S, dS), _max_step_scalar(it.z, dz)))
        except (LinAlgError, ValueError) as exc:
            log.debug("step computation failed at iteration %d: %s", k, exc)
            return best, None, k
        trace.append(IterationRecord(k, gap, pinf, dinf, mu, tp, td))
        log.debug("it %3d gap %.3e pinf %.3e dinf %.3e mu %.3e steps %.3f %.3f",
                  k, gap, pinf, dinf, mu, tp, td)
        if not (np.isfinite(tp) and np.isfinite(td)) or max(tp, td) < 1e-12:
            return best, None, k
        it = _Iterate([_herm(X + tp * d) for X, d in zip(it.X, dX)], it.x + tp * dx,
                      _herm(it.yN + td * dyN), it.yr + td * dyr,
                      [_herm(S + td * d) for S, d in zip(it.S, dS)], it.z + td * dz)
    return best, Status.MAX_ITERS, opts.max_iters


def _extract(model: ExclusionModel, st: _Structure, it: _Iterate, opts: SolveOptions):
    k, d = model.count, model.dim
    ms = [np.zeros((d, d), complex) for _ in range(k)]
    for E, X, i in zip(st.E, it.X, st.outcome):
        if i >= 0:
            ms[i] = linalg.hermitian_part(_lift(E, X))
    ms = tuple(ms)
    if model.variant is Variant.MIN_ERROR:
        p = PrimalVars(ms)
        dv = DualVars(linalg.hermitian_part(it.yN))
    elif model.variant is Variant.WORST_CASE:
        p = PrimalVars(ms, lam=float(it.x[0]))
        dv = DualVars(linalg.hermitian_part(it.yN), tuple(float(a) for a in it.yr))
    else:
        p = PrimalVars(ms)
        dv = DualVars(linalg.hermitian_part(-it.yN))
    return p, _repair_dual(model, dv, opts)


def _repair_dual(model: ExclusionModel, dv: DualVars, opts: SolveOptions) -> DualVars:
    """Shift N by a multiple of I so that the dual constraints hold exactly."""
    n = dv.N
    eye = np.eye(model.dim)
    if model.variant is Variant.MIN_ERROR:
        lo = min(linalg.psd_margin(op - n) for op in model.operators)
        return DualVars(n + min(0.0, lo) * eye) if lo < 0 else dv
    if model.variant is Variant.WORST_CASE:
        a = tuple(max(0.0, x) for x in dv.a)
        if sum(a) > 1:
            a = tuple(x / sum(a) for x in a)
        lo = min(linalg.psd_margin(ai * op - n) for ai, op in zip(a, model.operators))
        return DualVars(n + min(0.0, lo) * eye, a)
    # N >= 0 and N - sum rho~_j positive on every kernel, with a small cushion
    # so that the weights a_i stay finite
    cushion = 0.1 * opts.gap_tol / model.dim
    total = model.total
    lo = linalg.psd_margin(n)
    for op in model.operators:
        K = kernel_basis(op, opts.zero_trace_tol)
        if K.shape[1]:
            lo = min(lo, linalg.psd_margin(K.conj().T @ (n - total) @ K))
    n = n + (cushion - min(0.0, lo)) * eye
    return DualVars(n, unambiguous_weights(model, n, opts.zero_trace_tol))


def _summarize(model, st, it, opts):
    primal, dual = _extract(model, st, it, opts)
    alpha = primal_value(model, primal)
    beta = dual_bound(model, dual)
    pres = feasibility(model, primal).equality_residual
    dres = max(0.0, -feasibility(model, dual).min_margin)
    return primal, dual, alpha, beta, pres, dres


def solve(model: ExclusionModel, opts: SolveOptions | None = None) -> SolveReport:
    """Solve ``model`` to the requested gap; returns primal, dual and a status.

    ``Optimal`` is reported only when the extracted measurement and dual
    certificate meet ``gap_tol`` and ``feas_tol`` in the model's own terms.
    In the unambiguous variant each M_i is confined to the eigenvectors of
    rho~_i with eigenvalue at most ``zero_trace_tol`` (relative), which makes
    the trace-zero rows hold up to that tolerance by construction.
    """
    opts = opts or SolveOptions()
    if model.count * model.dim > MAX_KD:
        raise ScaleCap(f"k*d = {model.count * model.dim} exceeds the dense limit {MAX_KD}")
    st = _structure(model, opts)
    ops = _Ops(st)
    trace: list[IterationRecord] = []
    it = _initial_iterate(model, st, ops, opts)
    rng = np.random.default_rng(opts.seed)
    iters = 0
    restarts = 0
    tighten = 0.1
    while True:
        it, run_status, iters = _run(st, ops, it, opts, trace, iters,
                                     opts.gap_tol * tighten, opts.feas_tol * tighten)
        summary = _summarize(model, st, it, opts)
        _, _, alpha, beta, pres, dres = summary
        if abs(alpha - beta) <= opts.gap_tol and pres <= opts.feas_tol and dres <= opts.feas_tol:
            status = Status.OPTIMAL
            break
        if iters >= opts.max_iters:
            status = Status.MAX_ITERS
            break
        if run_status is Status.OPTIMAL and tighten > 1e-3:
            tighten *= 0.1
            continue
        if restarts < opts.max_restarts:
            restarts += 1
            log.info("restarting after numerical breakdown (attempt %d)", restarts)
            it = _perturbed_iterate(it, rng)
            continue
        status = Status.NUMERICAL_FAILURE
        break
    primal, dual, alpha, beta, pres, dres = summary
    return SolveReport(primal, dual, alpha, beta, alpha - beta, iters, status, pres, dres, trace)
