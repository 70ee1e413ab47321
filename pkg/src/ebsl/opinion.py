"""Core opinion/evidence algebra.

An opinion is a belief/disbelief/uncertainty triple on the simplex with
strictly positive uncertainty (dogmatic opinions, u = 0, correspond to an
infinite amount of evidence and are rejected at construction).  Every
opinion is equivalent to a pair of nonnegative evidence masses (p, n) via

    (b, d, u) = (p, n, c) / (p + n + c),      (p, n) = c * (b, d) / u

for a constant c > 0 (default 2).  All operators here are defined so that
they have an exact meaning in terms of evidence:

* ``consensus``       -- addition of evidence,
* ``scalar_mul``      -- multiplication of evidence by a scalar,
* ``discount_g``      -- scalar multiplication by a trust-derived weight
                         g(x) in [0, 1],
* ``discount_odot``   -- the linear special case g(x) = p(x)/theta,
* ``discount_legacy`` -- the classic component-product discounting, kept
                         only as a comparison baseline.

Every operator renormalizes its output so that b + d + u == 1 exactly,
by recomputing u = 1 - b - d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import (
    InvalidEvidenceError,
    InvalidOpinionError,
    InvalidScalarError,
    ThetaViolationError,
)

#: Tolerance on b + d + u = 1 accepted at construction.
SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class Opinion:
    """Immutable (belief, disbelief, uncertainty) triple with u > 0."""

    b: float
    d: float
    u: float

    def __post_init__(self):
        b, d, u = self.b, self.d, self.u
        if not (math.isfinite(b) and math.isfinite(d) and math.isfinite(u)):
            raise InvalidOpinionError(f"non-finite opinion components ({b}, {d}, {u})")
        if b < 0.0 or d < 0.0:
            raise InvalidOpinionError(f"negative belief mass in ({b}, {d}, {u})")
        if u <= 0.0:
            raise InvalidOpinionError(
                f"dogmatic opinion ({b}, {d}, {u}): uncertainty must be > 0"
            )
        if abs(b + d + u - 1.0) > SIMPLEX_TOL:
            raise InvalidOpinionError(
                f"opinion components ({b}, {d}, {u}) sum to {b + d + u}, not 1"
            )

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.b, self.d, self.u)


#: Full uncertainty: the additive zero of consensus.
UNCERTAINTY = Opinion(0.0, 0.0, 1.0)


def _normalized(b: float, d: float) -> Opinion:
    """Build an opinion from belief masses, forcing b + d + u = 1 exactly."""
    return Opinion(b, d, 1.0 - b - d)


def opinion_with_uncertainty_floor(
    b: float, d: float, u: float, floor: float = 1e-12
) -> Opinion:
    """Clamp a near- or fully-dogmatic triple into the admissible space.

    Intended for ingesting external data only; the regular constructor
    rejects u <= 0 rather than silently clamping.
    """
    if floor <= 0.0 or floor >= 1.0:
        raise InvalidOpinionError(f"uncertainty floor {floor} must be in (0, 1)")
    if u < floor:
        mass = b + d
        if mass <= 0.0:
            return UNCERTAINTY
        scale = (1.0 - floor) / mass
        b, d, u = b * scale, d * scale, floor
    return _normalized(b, d)


@dataclass(frozen=True)
class Evidence:
    """Nonnegative masses of supporting (p) and contradicting (n) evidence."""

    p: float
    n: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and math.isfinite(self.n)):
            raise InvalidEvidenceError(f"non-finite evidence ({self.p}, {self.n})")
        if self.p < 0.0 or self.n < 0.0:
            raise InvalidEvidenceError(f"negative evidence ({self.p}, {self.n})")

    @property
    def total(self) -> float:
        return self.p + self.n


@dataclass(frozen=True)
class AlgebraParams:
    """Evidence-to-opinion constant c > 0.

    c acts as a soft threshold on the amount of evidence needed before an
    opinion starts leaving full uncertainty.  The classic mapping uses c = 2.
    """

    c: float = 2.0

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0.0):
            raise InvalidEvidenceError(f"constant c must be finite and > 0, got {self.c}")


DEFAULT_PARAMS = AlgebraParams()


def opinion_from_evidence(ev: Evidence, params: AlgebraParams = DEFAULT_PARAMS) -> Opinion:
    """Map evidence (p, n) to the opinion (p, n, c)/(p + n + c)."""
    s = ev.p + ev.n + params.c
    return _normalized(ev.p / s, ev.n / s)


def evidence_from_opinion(x: Opinion, params: AlgebraParams = DEFAULT_PARAMS) -> Evidence:
    """Inverse mapping: (p, n) = c * (b, d) / u."""
    return Evidence(params.c * x.b / x.u, params.c * x.d / x.u)


def positive_evidence(x: Opinion, params: AlgebraParams = DEFAULT_PARAMS) -> float:
    """p(x) = c * b / u."""
    return params.c * x.b / x.u


def negative_evidence(x: Opinion, params: AlgebraParams = DEFAULT_PARAMS) -> float:
    """n(x) = c * d / u."""
    return params.c * x.d / x.u


def consensus(x: Opinion, y: Opinion) -> Opinion:
    """Fuse two independent opinions; equivalent to adding their evidence."""
    denom = x.u + y.u - x.u * y.u
    b = (x.u * y.b + y.u * x.b) / denom
    d = (x.u * y.d + y.u * x.d) / denom
    return _normalized(b, d)


def scalar_mul(alpha: float, x: Opinion) -> Opinion:
    """Multiply the evidence underlying ``x`` by ``alpha`` >= 0."""
    if not (math.isfinite(alpha) and alpha >= 0.0):
        raise InvalidScalarError(f"scalar must be finite and >= 0, got {alpha}")
    denom = alpha * (x.b + x.d) + x.u
    return _normalized(alpha * x.b / denom, alpha * x.d / denom)


def discount_legacy(x: Opinion, y: Opinion) -> Opinion:
    """Classic discounting (x_b*y_b, x_b*y_d, x_d + x_u + x_b*y_u).

    Kept purely as a comparison baseline: it mixes evidence from both
    operands in a way that has no clean evidence interpretation.
    """
    return _normalized(x.b * y.b, x.b * y.d)


class GSelector(str, Enum):
    """Closed enumeration of supported discount-weight functions."""

    BELIEF = "belief"
    SQRT_BELIEF = "sqrt-belief"
    EVIDENCE_OVER_THETA = "evidence-over-theta"


@dataclass(frozen=True)
class GFunction:
    """A weight function g: opinions -> [0, 1] used by ``discount_g``.

    ``evidence-over-theta`` computes p(x)/theta and requires p(x) <= theta;
    it needs both the threshold and the evidence constant c.
    """

    selector: GSelector
    theta: float | None = None
    c: float = 2.0

    def __post_init__(self):
        if self.selector is GSelector.EVIDENCE_OVER_THETA:
            if self.theta is None or not (math.isfinite(self.theta) and self.theta > 0):
                raise InvalidScalarError(
                    f"evidence-over-theta requires theta > 0, got {self.theta}"
                )
            if not (math.isfinite(self.c) and self.c > 0):
                raise InvalidScalarError(f"constant c must be > 0, got {self.c}")
        elif self.theta is not None:
            raise InvalidScalarError(f"{self.selector.value} takes no theta")

    @classmethod
    def belief(cls) -> "GFunction":
        return cls(GSelector.BELIEF)

    @classmethod
    def sqrt_belief(cls) -> "GFunction":
        return cls(GSelector.SQRT_BELIEF)

    @classmethod
    def evidence_over_theta(cls, theta: float, c: float = 2.0) -> "GFunction":
        return cls(GSelector.EVIDENCE_OVER_THETA, theta=theta, c=c)

    def evaluate(self, x: Opinion) -> float:
        if self.selector is GSelector.BELIEF:
            return x.b
        if self.selector is GSelector.SQRT_BELIEF:
            return math.sqrt(x.b)
        p = self.c * x.b / x.u
        if p > self.theta:
            raise ThetaViolationError(p, self.theta)
        return p / self.theta

    __call__ = evaluate


def discount_g(x: Opinion, y: Opinion, g: GFunction) -> Opinion:
    """Evidence-flow discounting: scale y's evidence by g(x)."""
    return scalar_mul(g.evaluate(x), y)


def discount_odot(
    x: Opinion, y: Opinion, theta: float, params: AlgebraParams = DEFAULT_PARAMS
) -> Opinion:
    """Linear discounting with weight p(x)/theta.

    Fully distributive and associative, but requires p(x) <= theta for every
    discounting opinion in the network; otherwise evidence would be amplified.
    """
    p = positive_evidence(x, params)
    if p > theta:
        raise ThetaViolationError(p, theta)
    return scalar_mul(p / theta, y)


def delta(x: Opinion, y: Opinion) -> float:
    """L1 distance between opinions; the solver's termination metric."""
    return abs(x.b - y.b) + abs(x.d - y.d) + abs(x.u - y.u)
