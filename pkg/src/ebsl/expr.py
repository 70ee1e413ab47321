"""Expression trees over opinions.

Network expressions (chains of discounting plus consensus over parallel
paths) are represented as small immutable trees, so that hand-written
formulas for concrete trust networks become executable fixtures.  The
evaluator follows the tree structure literally: generic evidence-flow
discounting is not associative, so no re-association happens.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Union

from .errors import UnboundVariableError
from .opinion import (
    AlgebraParams,
    DEFAULT_PARAMS,
    GFunction,
    Opinion,
    consensus,
    discount_g,
    discount_legacy,
    discount_odot,
    scalar_mul,
)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class ConsensusNode:
    left: "OpinionExpr"
    right: "OpinionExpr"


@dataclass(frozen=True)
class LegacyDiscountNode:
    left: "OpinionExpr"
    right: "OpinionExpr"


@dataclass(frozen=True)
class GDiscountNode:
    left: "OpinionExpr"
    right: "OpinionExpr"
    g: GFunction


@dataclass(frozen=True)
class OdotDiscountNode:
    left: "OpinionExpr"
    right: "OpinionExpr"
    theta: float


@dataclass(frozen=True)
class ScaleNode:
    alpha: float
    child: "OpinionExpr"


OpinionExpr = Union[
    Var, ConsensusNode, LegacyDiscountNode, GDiscountNode, OdotDiscountNode, ScaleNode
]


def evaluate(
    expr: OpinionExpr,
    bindings: Mapping[str, Opinion],
    params: AlgebraParams = DEFAULT_PARAMS,
) -> Opinion:
    """Recursively evaluate an expression under the given variable bindings."""
    if isinstance(expr, Var):
        try:
            return bindings[expr.name]
        except KeyError:
            raise UnboundVariableError(f"no binding for variable {expr.name!r}") from None
    if isinstance(expr, ConsensusNode):
        return consensus(evaluate(expr.left, bindings, params),
                         evaluate(expr.right, bindings, params))
    if isinstance(expr, LegacyDiscountNode):
        return discount_legacy(evaluate(expr.left, bindings, params),
                               evaluate(expr.right, bindings, params))
    if isinstance(expr, GDiscountNode):
        return discount_g(evaluate(expr.left, bindings, params),
                          evaluate(expr.right, bindings, params), expr.g)
    if isinstance(expr, OdotDiscountNode):
        return discount_odot(evaluate(expr.left, bindings, params),
                             evaluate(expr.right, bindings, params),
                             expr.theta, params)
    if isinstance(expr, ScaleNode):
        return scalar_mul(expr.alpha, evaluate(expr.child, bindings, params))
    raise TypeError(f"not an opinion expression: {expr!r}")


def count_variable_occurrences(expr: OpinionExpr) -> dict[str, int]:
    """Exact occurrence count per variable name."""
    counts: Counter[str] = Counter()
    stack: list[OpinionExpr] = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            counts[node.name] += 1
        elif isinstance(node, ScaleNode):
            stack.append(node.child)
        else:
            stack.append(node.left)
            stack.append(node.right)
    return dict(counts)


def is_canonical(expr: OpinionExpr) -> bool:
    """True when every variable (network edge) appears at most once."""
    return all(k <= 1 for k in count_variable_occurrences(expr).values())
