"""Classic flow-based reputation without uncertainty.

The comparison column: aggregated ratings in [0, 1] and the normalized
fixed-point reputation vector

    r_x = (1 - alpha) * s_x + alpha * sum_y (r_y / l) * A_yx,  l = sum_z r_z

solved by repeated substitution starting from r = s.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EbslError, InvalidScalarError
from .engine import ConvergenceReport
from .opinion import Evidence


def aggregate_rating(ev: Evidence) -> float:
    """Map evidence to a rating in [0, 1]; no evidence is neutral (1/2)."""
    e = ev.p + ev.n
    if e == 0.0:
        return 0.5
    return 0.5 + (ev.p - ev.n) / (2.0 * e)


def validate_rating_matrix(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise EbslError(f"rating matrix must be square, got {A.shape}")
    if not np.isfinite(A).all() or (A < 0).any() or (A > 1).any():
        raise EbslError("rating entries must lie in [0, 1]")
    if np.diagonal(A).any():
        raise EbslError("rating matrix must have zero diagonal")
    return A


@dataclass(frozen=True)
class FlowConfig:
    alpha: float
    start: tuple[float, ...]
    tolerance: float = 1e-10
    max_iterations: int = 1000

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidScalarError(f"alpha must be in [0, 1], got {self.alpha}")
        s = np.asarray(self.start, dtype=np.float64)
        if s.ndim != 1 or not np.isfinite(s).all() or (s < 0).any() or (s > 1).any():
            raise InvalidScalarError("starting vector entries must lie in [0, 1]")
        if not s.any():
            raise InvalidScalarError("starting vector must have a nonzero entry")
        if not self.tolerance > 0 or self.max_iterations < 1:
            raise InvalidScalarError("tolerance must be > 0 and max_iterations >= 1")


def solve_flow(
    A: np.ndarray, cfg: FlowConfig, initial: np.ndarray | None = None
) -> tuple[np.ndarray, ConvergenceReport]:
    """Fixed point of the reputation equation via repeated substitution.

    ``initial`` overrides the first iterate (default: the starting vector s);
    it only seeds the iteration, s itself still enters the equation.
    """
    A = validate_rating_matrix(A)
    s = np.asarray(cfg.start, dtype=np.float64)
    if s.shape[0] != A.shape[0]:
        raise EbslError(f"start vector length {s.shape[0]} != matrix size {A.shape[0]}")
    r = s.copy() if initial is None else np.asarray(initial, dtype=np.float64).copy()
    if r.shape != s.shape or not r.any():
        raise EbslError("initial iterate must match s in length and be nonzero")
    residuals: list[float] = []
    converged = False
    for _ in range(cfg.max_iterations):
        ell = r.sum()
        if ell == 0.0:
            raise EbslError("reputation mass vanished mid-iteration")
        r_new = (1.0 - cfg.alpha) * s + cfg.alpha * (A.T @ r) / ell
        res = float(np.abs(r_new - r).max())
        residuals.append(res)
        r = r_new
        if res < cfg.tolerance:
            converged = True
            break
    return r, ConvergenceReport(converged, len(residuals), tuple(residuals))
