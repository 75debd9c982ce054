"""Regenerate tests/data/oracles.json with an independent SDP solver.

Uses cvxpy (not a package dependency) to solve the three exclusion SDPs on a
few fixed random ensembles, written in this package's ensemble file format
together with the optimal values. Run by hand; the tests only read the
frozen output.
"""

from __future__ import annotations

import json
from pathlib import Path

import cvxpy as cp
import numpy as np

from qexclusion import ensembles, io

OUT = Path(__file__).resolve().parents[1] / "data" / "oracles.json"
CASES = [(11, 2, 2), (12, 3, 2), (13, 3, 3), (14, 4, 3), (15, 4, 4), (16, 3, 4)]


def _run(prob):
    prob.solve(solver=cp.CLARABEL)
    if prob.status != cp.OPTIMAL:
        raise RuntimeError(f"oracle solve ended with status {prob.status}")


def solve_all(ops):
    k, d = len(ops), ops[0].shape[0]
    total = sum(ops)
    out = {}

    ms = [cp.Variable((d, d), hermitian=True) for _ in range(k)]
    cons = [m >> 0 for m in ms] + [sum(ms) == np.eye(d)]
    obj = cp.real(sum(cp.trace(op @ m) for op, m in zip(ops, ms)))
    prob = cp.Problem(cp.Minimize(obj), cons)
    _run(prob)
    out["min-error"] = prob.value

    lam = cp.Variable()
    ms = [cp.Variable((d, d), hermitian=True) for _ in range(k)]
    cons = [m >> 0 for m in ms] + [sum(ms) == np.eye(d)]
    cons += [cp.real(cp.trace(op @ m)) <= lam for op, m in zip(ops, ms)]
    prob = cp.Problem(cp.Minimize(lam), cons)
    _run(prob)
    out["worst-case"] = prob.value

    # unambiguous, written on the kernels so the zero-trace rows are exact
    qs, embeds = [], []
    for op in ops:
        w, v = np.linalg.eigh(op)
        K = v[:, w <= 1e-9 * max(1.0, w.max())]
        if K.shape[1]:
            qs.append(cp.Variable((K.shape[1], K.shape[1]), hermitian=True))
            embeds.append(K)
    if qs:
        lifted = [K @ q @ K.conj().T for K, q in zip(embeds, qs)]
        cons = [q >> 0 for q in qs] + [np.eye(d) - sum(lifted) >> 0]
        gain = cp.real(sum(cp.trace(total @ m) for m in lifted))
        prob = cp.Problem(cp.Maximize(gain), cons)
        _run(prob)
        out["unambiguous"] = float(np.trace(total).real) - prob.value
    else:
        out["unambiguous"] = float(np.trace(total).real)
    return out


def main():
    cases = []
    for seed, k, d in CASES:
        rng = np.random.default_rng(seed)
        ens = ensembles.random_ensemble(rng, k, d)
        values = solve_all(list(ens.weighted))
        cases.append({"seed": seed, "ensemble": io.ensemble_to_dict(ens), "alpha": values})
        print(seed, k, d, values)
    OUT.write_text(io.dumps({"solver": "cvxpy/Clarabel", "cases": cases}))


if __name__ == "__main__":
    main()
