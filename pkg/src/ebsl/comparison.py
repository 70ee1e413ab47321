"""Side-by-side method comparison on the seven-node benchmark network.

Runs, for one observer node, the legacy canonical-form expression, the
naive legacy fixed point, the evidence-flow engine with each weight
function, and optionally the uncertainty-free flow baseline; reports each
method's opinion about the proposition together with the underlying
evidence and iteration count.

The flow baseline's weight parameter and starting vector are modeling
choices with no privileged values, so the report always includes a sweep
of the baseline over alpha instead of a single number, and a dedicated
flow-based row appears only when alpha and start are supplied explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import benchmarks
from .engine import (
    EngineConfig,
    FunctionalTrustInput,
    functional_trust,
    naive_sl_solve,
    solve_referral,
)
from .errors import EbslError
from .expr import evaluate
from .flow import FlowConfig, aggregate_rating, solve_flow
from .ingest import EvidenceMatrix, evidence_to_opinion_matrix
from .opinion import (
    AlgebraParams,
    Evidence,
    GFunction,
    Opinion,
    evidence_from_opinion,
    opinion_from_evidence,
)

ALPHA_SWEEP = tuple(round(0.1 * k, 1) for k in range(10))


@dataclass(frozen=True)
class MethodResult:
    opinion: Opinion
    evidence: Evidence
    iterations: int
    converged: bool


@dataclass(frozen=True)
class CompareReport:
    observer: int
    methods: dict[str, MethodResult]
    alpha_sweep: tuple[tuple[float, float], ...]
    flow_based: float | None = None

    def to_json_dict(self) -> dict:
        out = {
            "observer": self.observer,
            "methods": {
                name: {
                    "opinion": list(r.opinion.as_tuple()),
                    "evidence": [r.evidence.p, r.evidence.n],
                    "iterations": r.iterations,
                    "converged": r.converged,
                }
                for name, r in self.methods.items()
            },
            "alpha_sweep": [list(pair) for pair in self.alpha_sweep],
        }
        if self.flow_based is not None:
            out["flow_based"] = self.flow_based
        return out

    def format_table(self) -> str:
        lines = [
            f"{'method':<16} {'opinion (b, d, u)':<30} {'evidence (p, n)':<24} iters",
            "-" * 78,
        ]
        if self.flow_based is not None:
            lines.append(f"{'flow-based':<16} r = {self.flow_based:.3f}")
        for name, r in self.methods.items():
            b, d, u = r.opinion.as_tuple()
            op = f"({b:.3f}, {d:.3f}, {u:.3f})"
            ev = f"({r.evidence.p:.3f}, {r.evidence.n:.3f})"
            mark = "" if r.converged else "  [not converged]"
            lines.append(f"{name:<16} {op:<30} {ev:<24} {r.iterations}{mark}")
        lines.append("")
        lines.append("flow baseline alpha sweep (uniform start vector):")
        lines.append("  " + "  ".join(f"a={a:.1f}: {r:.3f}" for a, r in self.alpha_sweep))
        return "\n".join(lines)


def _rating_matrix_with_proposition(
    E: EvidenceMatrix, trust: dict[int, Evidence]
) -> np.ndarray:
    """Aggregated ratings over the n nodes plus the proposition as node n."""
    n = E.size
    A = np.zeros((n + 1, n + 1))
    for i in range(n + 1):
        for j in range(n + 1):
            if i == j:
                continue
            if i < n and j < n:
                A[i, j] = aggregate_rating(E.entry(i, j))
            elif i < n and j == n:
                A[i, j] = aggregate_rating(trust.get(i, Evidence(0.0, 0.0)))
            else:
                A[i, j] = 0.5  # the proposition rates nobody
    return A


def _flow_reputation(
    E: EvidenceMatrix, trust: dict[int, Evidence], alpha: float, start: np.ndarray
) -> float:
    A = _rating_matrix_with_proposition(E, trust)
    r, _ = solve_flow(A, FlowConfig(alpha=alpha, start=tuple(start)))
    return float(r[-1])


def compare_methods(
    E: EvidenceMatrix,
    trust_evidence: dict[int, Evidence],
    theta: float,
    params: AlgebraParams = AlgebraParams(),
    observer: int = benchmarks.OBSERVER,
    tolerance: float = 1e-10,
    max_iterations: int = 1000,
    alpha: float | None = None,
    start: np.ndarray | None = None,
) -> CompareReport:
    """Run every method on the benchmark network and collect one row each."""
    if E.size != benchmarks.N_NODES:
        raise EbslError(
            f"comparison expects the {benchmarks.N_NODES}-node benchmark network, "
            f"got {E.size} nodes"
        )
    if (alpha is None) != (start is None):
        raise EbslError("flow baseline needs both alpha and start")

    A = evidence_to_opinion_matrix(E, params)
    T: FunctionalTrustInput = {
        i: opinion_from_evidence(ev, params) for i, ev in trust_evidence.items()
    }
    bindings = benchmarks.edge_bindings(E, trust_evidence, params)
    methods: dict[str, MethodResult] = {}

    def add(name: str, op: Opinion, iters: int, converged: bool) -> None:
        methods[name] = MethodResult(op, evidence_from_opinion(op, params), iters, converged)

    F_naive, rep = naive_sl_solve(A, T, EngineConfig(params, GFunction.belief(),
                                                     tolerance, max_iterations))
    add("flow-sl", F_naive[observer], rep.iterations, rep.converged)

    add("sl-canonical", evaluate(benchmarks.canonical_expression(), bindings, params), 0, True)

    for name, g in (
        ("ebsl-xb", GFunction.belief()),
        ("ebsl-sqrt-xb", GFunction.sqrt_belief()),
        ("ebsl-odot", GFunction.evidence_over_theta(theta, params.c)),
    ):
        cfg = EngineConfig(params, g, tolerance, max_iterations)
        R, rep = solve_referral(A, cfg)
        add(name, functional_trust(R, T, observer, cfg), rep.iterations, rep.converged)

    uniform = np.full(E.size + 1, 0.5)
    sweep = tuple(
        (a, _flow_reputation(E, trust_evidence, a, uniform)) for a in ALPHA_SWEEP
    )
    flow_based = None
    if alpha is not None:
        flow_based = _flow_reputation(E, trust_evidence, alpha, np.asarray(start))
    return CompareReport(observer, methods, sweep, flow_based)
