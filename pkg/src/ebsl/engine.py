"""Matrix-level reputation engine.

Direct referral trust is an n x n grid of opinions A with full uncertainty
on the diagonal.  Final referral trust R is the off-diagonal part of the
fixed point of

    f(X) = A (+) (offdiag X [x] A),   (X [x] A)_ij = (+)_k X_ik [x] A_kj

where (+) is consensus and [x] is evidence-flow discounting with the
configured weight function g.  The fold over k runs in ascending order;
that order is part of the determinism contract.

A legacy solver using the classic component-product discounting is provided
purely as a comparison baseline: it double-counts evidence and is expected
to converge poorly (or not at all) on loopy networks.

Matrices are stored as three parallel float64 arrays so the per-iteration
work is vectorized over (i, j); the sequential k loop preserves the mandated
reduction order.

The evidence-flow operators are evaluated in evidence coordinates: consensus
is exactly evidence addition and [x] is exactly evidence scaling, so one
sweep is P' = P_A + W P_A (and likewise for n) with W the weight matrix
g(offdiag X).  This is the same map as the opinion-space formulas, but it
avoids the catastrophic cancellation that near-dogmatic opinions (evidence
around 10^6, uncertainty around 10^-7) cause in opinion coordinates, where
the summed residual otherwise hits a floating-point floor above tight
tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InvalidOpinionError, ThetaViolationError
from .opinion import (
    AlgebraParams,
    DEFAULT_PARAMS,
    GFunction,
    GSelector,
    Opinion,
    UNCERTAINTY,
    consensus,
    discount_g,
    discount_legacy,
    opinion_from_evidence,
    Evidence,
)

#: Maps node index -> direct functional trust about one proposition.
#: Absent entries mean full uncertainty.
FunctionalTrustInput = Mapping[int, Opinion]

GOLDEN_RATIO = (1.0 + np.sqrt(5.0)) / 2.0


class OpinionMatrix:
    """Dense n x n grid of opinions, backed by read-only float64 arrays."""

    __slots__ = ("b", "d", "u")

    def __init__(self, b: np.ndarray, d: np.ndarray, u: np.ndarray):
        b = np.asarray(b, dtype=np.float64)
        d = np.asarray(d, dtype=np.float64)
        u = np.asarray(u, dtype=np.float64)
        if b.ndim != 2 or b.shape[0] != b.shape[1] or d.shape != b.shape or u.shape != b.shape:
            raise InvalidOpinionError(f"opinion matrix needs square arrays, got {b.shape}")
        if not (np.isfinite(b).all() and np.isfinite(d).all() and np.isfinite(u).all()):
            raise InvalidOpinionError("non-finite entries in opinion matrix")
        if (b < 0).any() or (d < 0).any() or (u <= 0).any():
            raise InvalidOpinionError("opinion matrix entry outside admissible space")
        if np.abs(b + d + u - 1.0).max() > 1e-12:
            raise InvalidOpinionError("opinion matrix entry does not sum to 1")
        for a in (b, d, u):
            a.flags.writeable = False
        self.b, self.d, self.u = b, d, u

    @property
    def n(self) -> int:
        return self.b.shape[0]

    @classmethod
    def uncertainty(cls, n: int) -> "OpinionMatrix":
        z = np.zeros((n, n))
        return cls(z, z.copy(), np.ones((n, n)))

    @classmethod
    def from_entries(cls, n: int, entries: Mapping[tuple[int, int], Opinion]) -> "OpinionMatrix":
        """Build from a sparse {(i, j): Opinion} map; missing entries are U."""
        b = np.zeros((n, n))
        d = np.zeros((n, n))
        u = np.ones((n, n))
        for (i, j), x in entries.items():
            b[i, j], d[i, j], u[i, j] = x.b, x.d, x.u
        return cls(b, d, u)

    def entry(self, i: int, j: int) -> Opinion:
        return Opinion(float(self.b[i, j]), float(self.d[i, j]), float(self.u[i, j]))

    def __getitem__(self, ij: tuple[int, int]) -> Opinion:
        return self.entry(*ij)

    def has_uncertain_diagonal(self) -> bool:
        idx = np.arange(self.n)
        return bool((self.b[idx, idx] == 0).all() and (self.d[idx, idx] == 0).all())

    def allclose(self, other: "OpinionMatrix", tol: float = 0.0) -> bool:
        return (np.abs(self.b - other.b).max() <= tol
                and np.abs(self.d - other.d).max() <= tol
                and np.abs(self.u - other.u).max() <= tol)


@dataclass(frozen=True)
class EngineConfig:
    params: AlgebraParams = DEFAULT_PARAMS
    g: GFunction = field(default_factory=GFunction.belief)
    tolerance: float = 1e-10
    max_iterations: int = 1000

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InvalidOpinionError(f"tolerance must be > 0, got {self.tolerance}")
        if self.max_iterations < 1:
            raise InvalidOpinionError(f"max_iterations must be >= 1, got {self.max_iterations}")


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    iterations: int
    residual_history: tuple[float, ...]

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1] if self.residual_history else 0.0


def offdiag(X: OpinionMatrix) -> OpinionMatrix:
    """Copy of X with the diagonal replaced by full uncertainty."""
    b, d, u = X.b.copy(), X.d.copy(), X.u.copy()
    idx = np.arange(X.n)
    b[idx, idx] = 0.0
    d[idx, idx] = 0.0
    u[idx, idx] = 1.0
    return OpinionMatrix(b, d, u)


def _consensus_arrays(b1, d1, u1, b2, d2, u2):
    denom = u1 + u2 - u1 * u2
    b = (u1 * b2 + u2 * b1) / denom
    d = (u1 * d2 + u2 * d1) / denom
    return b, d, 1.0 - b - d


#: Internal evidence constant for converting matrices to evidence
#: coordinates.  Consensus and evidence scaling commute with the mapping for
#: every c (Lemma 1), so any fixed value yields the same opinions; 2 is the
#: classic choice.
_EV_C = 2.0


def _evidence_arrays(X: OpinionMatrix, c: float = _EV_C) -> tuple[np.ndarray, np.ndarray]:
    return c * X.b / X.u, c * X.d / X.u


def _opinion_matrix_from_evidence(P: np.ndarray, N: np.ndarray, c: float = _EV_C) -> OpinionMatrix:
    s = P + N + c
    b = P / s
    d = N / s
    return OpinionMatrix(b, d, 1.0 - b - d)


def _weight_matrix(g: GFunction, P: np.ndarray, N: np.ndarray, c: float = _EV_C) -> np.ndarray:
    """g applied entrywise to the opinions whose evidence (at constant c) is (P, N)."""
    if g.selector is GSelector.BELIEF:
        return P / (P + N + c)
    if g.selector is GSelector.SQRT_BELIEF:
        return np.sqrt(P / (P + N + c))
    p = (g.c / c) * P  # p under g's own constant: g.c * b / u
    bad = np.argwhere(p > g.theta)
    if bad.size:
        i, k = (int(v) for v in bad[0])
        raise ThetaViolationError(float(p[i, k]), g.theta, where=f"entry ({i}, {k})")
    return p / g.theta


def _zero_diagonal(*arrays: np.ndarray) -> None:
    idx = np.arange(arrays[0].shape[0])
    for a in arrays:
        a[idx, idx] = 0.0


def _offdiag_opinion_arrays(
    P: np.ndarray, N: np.ndarray, c: float = _EV_C
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Opinion (b, d, u) arrays of the off-diagonal part of an evidence iterate."""
    Po, No = P.copy(), N.copy()
    _zero_diagonal(Po, No)
    s = Po + No + c
    b = Po / s
    d = No / s
    return b, d, 1.0 - b - d


def _discount_evidence(
    W: np.ndarray, Pa: np.ndarray, Na: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """(W [x] A) in evidence coordinates: ascending-k accumulation of W_ik * A_kj."""
    n = W.shape[0]
    P = np.zeros_like(Pa)
    N = np.zeros_like(Na)
    for k in range(n):
        P += W[:, k, None] * Pa[k, None, :]
        N += W[:, k, None] * Na[k, None, :]
    return P, N


def matrix_discount_product(X: OpinionMatrix, A: OpinionMatrix, g: GFunction) -> OpinionMatrix:
    """(X [x] A)_ij = consensus-fold over ascending k of g(X_ik) * A_kj."""
    if A.n != X.n:
        raise InvalidOpinionError(f"dimension mismatch: {X.n} vs {A.n}")
    Px, Nx = _evidence_arrays(X)
    P, N = _discount_evidence(_weight_matrix(g, Px, Nx), *_evidence_arrays(A))
    return _opinion_matrix_from_evidence(P, N)


def step(X: OpinionMatrix, A: OpinionMatrix, cfg: EngineConfig) -> OpinionMatrix:
    """One sweep of the fixed-point map f(X) = A (+) (offdiag X [x] A)."""
    Px, Nx = _evidence_arrays(X)
    _zero_diagonal(Px, Nx)
    Pa, Na = _evidence_arrays(A)
    P, N = _discount_evidence(_weight_matrix(cfg.g, Px, Nx), Pa, Na)
    return _opinion_matrix_from_evidence(P + Pa, N + Na)


def _residual(X: OpinionMatrix, Y: OpinionMatrix) -> float:
    """Sum over all entries of the L1 opinion distance."""
    return float(np.abs(X.b - Y.b).sum() + np.abs(X.d - Y.d).sum() + np.abs(X.u - Y.u).sum())


def solve_referral(
    A: OpinionMatrix, cfg: EngineConfig, on_iterate=None
) -> tuple[OpinionMatrix, ConvergenceReport]:
    """Iterate f from X0 = A until successive off-diagonal iterates agree.

    Returns the off-diagonal part of the final iterate together with the
    convergence report.  Non-convergence within the iteration cap is a
    reported condition, not an exception; the final matrix is still returned.
    ``on_iterate``, if given, is called with each full iterate f(X) as an
    OpinionMatrix (diagonal included) — useful for inspecting the per-sweep
    evidence bound.
    """
    if not A.has_uncertain_diagonal():
        raise InvalidOpinionError("direct referral trust matrix must have U diagonal")
    Pa, Na = _evidence_arrays(A)
    P, N = Pa, Na  # X0 = A
    prev = _offdiag_opinion_arrays(P, N)
    residuals: list[float] = []
    converged = False
    for _ in range(cfg.max_iterations):
        Po, No = P.copy(), N.copy()
        _zero_diagonal(Po, No)
        P, N = _discount_evidence(_weight_matrix(cfg.g, Po, No), Pa, Na)
        P += Pa
        N += Na
        if on_iterate is not None:
            on_iterate(_opinion_matrix_from_evidence(P, N))
        cur = _offdiag_opinion_arrays(P, N)
        r = sum(float(np.abs(a - b).sum()) for a, b in zip(cur, prev))
        residuals.append(r)
        prev = cur
        if not math.isfinite(r):
            break
        if r < cfg.tolerance:
            converged = True
            break
    return (OpinionMatrix(*prev),
            ConvergenceReport(converged, len(residuals), tuple(residuals)))


def functional_trust(
    R: OpinionMatrix, T: FunctionalTrustInput, i: int, cfg: EngineConfig
) -> Opinion:
    """F_iP: direct trust in P fused with discounted trust received from others."""
    if not R.has_uncertain_diagonal():
        raise InvalidOpinionError("referral matrix must have U diagonal")
    F = T.get(i, UNCERTAINTY)
    for j in range(R.n):
        if j == i:
            continue
        y = T.get(j, UNCERTAINTY)
        F = consensus(F, discount_g(R.entry(i, j), y, cfg.g))
    return F


def _legacy_product(X: OpinionMatrix, A: OpinionMatrix) -> OpinionMatrix:
    n = X.n
    mb = np.zeros((n, n))
    md = np.zeros((n, n))
    mu = np.ones((n, n))
    for k in range(n):
        xb = X.b[:, k][:, None]
        yb, yd = A.b[k, :][None, :], A.d[k, :][None, :]
        zb = xb * yb
        zd = xb * yd
        zu = 1.0 - zb - zd
        mb, md, mu = _consensus_arrays(mb, md, mu, zb, zd, zu)
    return OpinionMatrix(mb, md, mu)


def naive_sl_solve(
    A: OpinionMatrix, T: FunctionalTrustInput, cfg: EngineConfig
) -> tuple[dict[int, Opinion], ConvergenceReport]:
    """Comparison baseline: the same fixed-point scheme with legacy discounting.

    Double-counts evidence by construction; on loopy networks convergence to
    tight tolerances is typically not reached within the iteration cap.
    """
    if not A.has_uncertain_diagonal():
        raise InvalidOpinionError("direct referral trust matrix must have U diagonal")
    X = A
    R_prev = offdiag(X)
    residuals: list[float] = []
    converged = False
    for _ in range(cfg.max_iterations):
        M = _legacy_product(offdiag(X), A)
        b, d, u = _consensus_arrays(A.b, A.d, A.u, M.b, M.d, M.u)
        X = OpinionMatrix(b, d, u)
        R = offdiag(X)
        r = _residual(R, R_prev)
        residuals.append(r)
        R_prev = R
        if r < cfg.tolerance:
            converged = True
            break
    R = R_prev
    F: dict[int, Opinion] = {}
    for i in range(A.n):
        acc = T.get(i, UNCERTAINTY)
        for j in range(A.n):
            if j == i:
                continue
            acc = consensus(acc, discount_legacy(R.entry(i, j), T.get(j, UNCERTAINTY)))
        F[i] = acc
    return F, ConvergenceReport(converged, len(residuals), tuple(residuals))


def positive_evidence_matrix(X: OpinionMatrix, params: AlgebraParams = DEFAULT_PARAMS) -> np.ndarray:
    """Array of p(X_ij) = c * b / u."""
    return params.c * X.b / X.u


def negative_evidence_matrix(X: OpinionMatrix, params: AlgebraParams = DEFAULT_PARAMS) -> np.ndarray:
    """Array of n(X_ij) = c * d / u."""
    return params.c * X.d / X.u


def theta_bound(A: OpinionMatrix, params: AlgebraParams = DEFAULT_PARAMS) -> float:
    """Smallest safe threshold for evidence-over-theta discounting.

    Equals p_max * (1 + sqrt 5)/2 with p_max the largest positive evidence
    in A; smaller thresholds allow loop feedback to push evidence past theta.
    """
    return float(positive_evidence_matrix(A, params).max()) * GOLDEN_RATIO


def analytic_loop_solution(
    A12: Opinion,
    A23: Opinion,
    A32: Opinion,
    theta: float,
    params: AlgebraParams = DEFAULT_PARAMS,
) -> Opinion:
    """Closed-form final referral trust 1->2 for the three-node loop.

    Nodes: 1 -> 2 -> 3 -> 2.  With the linear weight p(x)/theta the fixed
    point is solvable exactly; used as an oracle for the iterative solver.
    """
    c = params.c
    p12, n12 = c * A12.b / A12.u, c * A12.d / A12.u
    p23 = c * A23.b / A23.u
    p32, n32 = c * A32.b / A32.u, c * A32.d / A32.u
    denom = theta * theta - p23 * p32
    if denom <= 0:
        raise ThetaViolationError(p23 * p32, theta * theta, where="loop feedback")
    p = p12 / (1.0 - p23 * p32 / (theta * theta))
    n = n12 + p12 * p23 * n32 / denom
    if p > theta:
        raise ThetaViolationError(p, theta, where="loop solution")
    return opinion_from_evidence(Evidence(p, n), params)
