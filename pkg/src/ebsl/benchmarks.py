"""The seven-node comparison network and its hand-written expressions.

Topology (nodes 1..7, proposition P; indices are node-1):

    1 -> 2 -> 3 -> {4, 5}, 4 -> 5, {4, 5} -> 6 -> 7,  7 => P

Three evidence assignments are provided:

* C1: the mixed-evidence base case,
* C2: C1 with the functional evidence about P changed to (10, 900),
* C3: every edge carries (10000, 0).

The canonical legacy-discounting expression drops the 4 -> 5 edge (the
network has no canonical form otherwise); the non-canonical variant keeps
the parallel paths separate and double-counts the shared prefix.
"""

from __future__ import annotations

from .expr import (
    ConsensusNode,
    LegacyDiscountNode,
    OdotDiscountNode,
    OpinionExpr,
    Var,
)
from .ingest import EvidenceMatrix
from .opinion import AlgebraParams, DEFAULT_PARAMS, Evidence, Opinion, opinion_from_evidence

import numpy as np

N_NODES = 7
OBSERVER = 0          # node 1
TRUST_SOURCE = 6      # node 7

#: Referral edges as (source node, target node) 1-based, matching the A_ij names.
EDGES: dict[tuple[int, int], tuple[float, float]] = {
    (1, 2): (400.0, 300.0),
    (2, 3): (10.0, 5.0),
    (3, 4): (500.0, 0.0),
    (3, 5): (500.0, 0.0),
    (4, 5): (500.0, 0.0),
    (4, 6): (500.0, 0.0),
    (5, 6): (500.0, 0.0),
    (6, 7): (5.0, 5.0),
}

CASES = ("C1", "C2", "C3")

#: Threshold used for the linear discounting rule per case.
CASE_THETA = {"C1": 1000.0, "C2": 1000.0, "C3": 20000.0}


def case_evidence(case: str) -> EvidenceMatrix:
    """Referral evidence matrix for one of the benchmark cases."""
    _check_case(case)
    p = np.zeros((N_NODES, N_NODES))
    n = np.zeros((N_NODES, N_NODES))
    for (i, j), (pp, nn) in EDGES.items():
        if case == "C3":
            pp, nn = 10000.0, 0.0
        p[i - 1, j - 1], n[i - 1, j - 1] = pp, nn
    return EvidenceMatrix(p, n, [str(i) for i in range(1, N_NODES + 1)])


def case_trust(case: str) -> dict[int, Evidence]:
    """Direct functional-trust evidence about P, keyed by node index."""
    _check_case(case)
    ev = {"C1": (10.0, 90.0), "C2": (10.0, 900.0), "C3": (10000.0, 0.0)}[case]
    return {TRUST_SOURCE: Evidence(*ev)}


def _check_case(case: str) -> None:
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {CASES}")


def edge_bindings(
    E: EvidenceMatrix,
    trust: dict[int, Evidence],
    params: AlgebraParams = DEFAULT_PARAMS,
) -> dict[str, Opinion]:
    """Name the benchmark-network opinions A12 ... A67, T7P for expressions."""
    if E.size != N_NODES:
        raise ValueError(f"benchmark network has {N_NODES} nodes, got {E.size}")
    bindings = {
        f"A{i}{j}": opinion_from_evidence(E.entry(i - 1, j - 1), params)
        for (i, j) in EDGES
    }
    bindings["T7P"] = opinion_from_evidence(
        trust.get(TRUST_SOURCE, Evidence(0.0, 0.0)), params
    )
    return bindings


def _chain(*exprs: OpinionExpr) -> OpinionExpr:
    out = exprs[0]
    for e in exprs[1:]:
        out = LegacyDiscountNode(out, e)
    return out


def canonical_expression() -> OpinionExpr:
    """Legacy-discounting expression with the 4 -> 5 edge dropped.

    F_1P = A12 (x) A23 (x) (A34 (x) A46 (+) A35 (x) A56) (x) A67 (x) T7P;
    every edge appears once.
    """
    middle = ConsensusNode(
        _chain(Var("A34"), Var("A46")),
        _chain(Var("A35"), Var("A56")),
    )
    return _chain(Var("A12"), Var("A23"), middle, Var("A67"), Var("T7P"))


def flow_sl_expression() -> OpinionExpr:
    """The recursive unrolling with the 4 -> 5 edge dropped; non-canonical.

    The two parallel paths each repeat the shared prefix A12 (x) A23, so
    their fusion double-counts that evidence.
    """
    path_a = _chain(Var("A12"), Var("A23"), Var("A34"), Var("A46"))
    path_b = _chain(Var("A12"), Var("A23"), Var("A35"), Var("A56"))
    return _chain(ConsensusNode(path_a, path_b), Var("A67"), Var("T7P"))


def _odot_chain(theta: float, *exprs: OpinionExpr) -> OpinionExpr:
    out = exprs[0]
    for e in exprs[1:]:
        out = OdotDiscountNode(out, e, theta)
    return out


def three_path_sum_expression(theta: float) -> OpinionExpr:
    """R_16 with linear discounting as a plain sum over the three paths."""
    p1 = _odot_chain(theta, Var("A12"), Var("A23"), Var("A34"), Var("A46"))
    p2 = _odot_chain(theta, Var("A12"), Var("A23"), Var("A35"), Var("A56"))
    p3 = _odot_chain(theta, Var("A12"), Var("A23"), Var("A34"), Var("A45"), Var("A56"))
    return ConsensusNode(ConsensusNode(p1, p2), p3)


def three_path_factored_expression(theta: float) -> OpinionExpr:
    """The same R_16 with the shared prefix A12 . A23 pulled outside.

    A12 . A23 . {A34 . A46 (+) (A35 (+) A34 . A45) . A56}; linear discounting
    is associative and fully distributive, so both groupings must agree.
    """
    inner = ConsensusNode(
        _odot_chain(theta, Var("A34"), Var("A46")),
        OdotDiscountNode(
            ConsensusNode(Var("A35"), _odot_chain(theta, Var("A34"), Var("A45"))),
            Var("A56"),
            theta,
        ),
    )
    return _odot_chain(theta, Var("A12"), Var("A23"), inner)
