"""The PBR exclusion game on n qubits.

Alice prepares |Psi_x> = |psi_x1> (x) ... (x) |psi_xn> for a uniformly random
bitstring x, with |psi_0,1> = cos(theta/2)|0> +- sin(theta/2)|1>. Bob wins by
naming any y != x. The closed-form quantities below need no dense algebra;
the ensemble, the zeta measurement and the certificate are 2^n x 2^n and are
capped at n = 10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import linalg
from .ensembles import Ensemble, Measurement, make_ensemble
from .errors import ScaleCap

MAX_DENSE_N = 10
# tan(theta/2) and 2^(1/n) - 1 are each rounded once; ties within this
# distance count as meeting the criterion
BOUNDARY_TOL = 1e-14


@dataclass(frozen=True)
class PbrGame:
    n: int
    theta: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta!r}")

    @property
    def dim(self) -> int:
        return 2 ** self.n

    @property
    def t(self) -> float:
        return math.tan(self.theta / 2)


@dataclass(frozen=True)
class PbrReport:
    criterion_met: bool
    p_win_global: float
    p_win_separable: float
    alpha_analytic: float
    c_theta: float
    q: float


@dataclass(frozen=True)
class CertificateCheck:
    margins: tuple
    zeta_residual: float
    trace: float
    trace_formula: float

    @property
    def min_margin(self) -> float:
        return min(self.margins)


def _dense_guard(n: int) -> None:
    if n > MAX_DENSE_N:
        raise ScaleCap(f"n = {n} exceeds the dense limit n <= {MAX_DENSE_N}")


def bitstrings(n: int) -> list:
    """All x in {0,1}^n in increasing binary order, first system most significant."""
    return [tuple(bits) for bits in product((0, 1), repeat=n)]


def label(x) -> str:
    return "".join(str(b) for b in x)


def qubit_states(theta: float) -> tuple:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([c, s], dtype=complex), np.array([c, -s], dtype=complex)


def product_state(game: PbrGame, x) -> np.ndarray:
    psi = qubit_states(game.theta)
    return linalg.tensor(*(psi[b] for b in x)).ravel()


def expanded_state(game: PbrGame, x) -> np.ndarray:
    """|Psi_x> from sum_r (-1)^(x.r) cos^(n-|r|) sin^|r| |r>."""
    c, s = math.cos(game.theta / 2), math.sin(game.theta / 2)
    out = np.empty(game.dim, dtype=complex)
    for idx, r in enumerate(bitstrings(game.n)):
        w = sum(r)
        sign = -1.0 if sum(a * b for a, b in zip(x, r)) % 2 else 1.0
        out[idx] = sign * c ** (game.n - w) * s ** w
    return out


def build_pbr_ensemble(game: PbrGame) -> Ensemble:
    """2^n product states with uniform priors, labelled by their bitstrings."""
    _dense_guard(game.n)
    xs = bitstrings(game.n)
    return make_ensemble([product_state(game, x) for x in xs], labels=[label(x) for x in xs])


def zeta_vectors(n: int) -> list:
    """(|0...0> - sum_{r != 0} (-1)^(x.r) |r>) / sqrt(2^n), one per x."""
    _dense_guard(n)
    rs = bitstrings(n)
    norm = 1.0 / math.sqrt(2 ** n)
    out = []
    for x in rs:
        v = np.empty(2 ** n, dtype=complex)
        for idx, r in enumerate(rs):
            if idx == 0:
                v[idx] = norm
            else:
                v[idx] = -norm * (-1.0 if sum(a * b for a, b in zip(x, r)) % 2 else 1.0)
        out.append(v)
    return out


def zeta_measurement(n: int) -> Measurement:
    """Rank-one projectors onto the zeta vectors; they do not depend on theta."""
    return Measurement(tuple(linalg.projector(v) for v in zeta_vectors(n)))


def threshold(n: int) -> float:
    return 2.0 ** (1.0 / n) - 1.0


def criterion(game: PbrGame) -> bool:
    """2^(1/n) - 1 <= tan(theta/2): the global strategy wins with certainty."""
    return game.t - threshold(game.n) >= -BOUNDARY_TOL


def c_theta(game: PbrGame) -> float:
    """C(theta) = cos^(2n)(theta/2) (2 - (1 + tan(theta/2))^n) / 2^n."""
    n = game.n
    return math.cos(game.theta / 2) ** (2 * n) * (2.0 - (1.0 + game.t) ** n) / 2 ** n


def certificate_trace(game: PbrGame) -> float:
    """tr N = cos^(2n)(theta/2) (2 - (1 + tan(theta/2))^n)^2 / 2^n."""
    n = game.n
    return math.cos(game.theta / 2) ** (2 * n) * (2.0 - (1.0 + game.t) ** n) ** 2 / 2 ** n


def alpha_analytic(game: PbrGame) -> float:
    """Optimal global exclusion error: zero when the criterion holds, tr N otherwise."""
    return 0.0 if criterion(game) else certificate_trace(game)


def analytic_certificate(game: PbrGame) -> np.ndarray:
    """Diagonal N = C(theta) (|0><0| - sum_{r != 0} tan^|r|(theta/2) |r><r|)."""
    _dense_guard(game.n)
    diag = np.array([1.0 if i == 0 else -game.t ** sum(r) for i, r in enumerate(bitstrings(game.n))])
    return np.diag(c_theta(game) * diag).astype(complex)


def verify_certificate(game: PbrGame, N: np.ndarray | None = None) -> CertificateCheck:
    """Direct checks of the analytic certificate.

    Margins are the smallest eigenvalues of rho~_x - N; the zeta residual is
    max_x |(rho~_x - N)|zeta_x>|, which vanishes when zeta is optimal.
    """
    N = analytic_certificate(game) if N is None else N
    ens = build_pbr_ensemble(game)
    margins, resid = [], 0.0
    for op, z in zip(ens.weighted, zeta_vectors(game.n)):
        A = op - N
        margins.append(linalg.psd_margin(A))
        resid = max(resid, float(np.linalg.norm(A @ z)))
    return CertificateCheck(tuple(margins), resid, float(np.trace(N).real), certificate_trace(game))


def p_win_global(game: PbrGame) -> float:
    return 1.0 - alpha_analytic(game)


def helstrom_q(theta: float) -> float:
    """Error of discriminating |psi_0> from |psi_1>: (1 - sin theta) / 2."""
    return 0.5 * (1.0 - math.sin(theta))


def p_win_separable(game: PbrGame) -> float:
    """Bob measures each qubit separately and names the complement of his guesses."""
    return 1.0 - helstrom_q(game.theta) ** game.n


def pbr_report(game: PbrGame) -> PbrReport:
    return PbrReport(
        criterion_met=criterion(game),
        p_win_global=p_win_global(game),
        p_win_separable=p_win_separable(game),
        alpha_analytic=alpha_analytic(game),
        c_theta=c_theta(game),
        q=helstrom_q(game.theta),
    )
