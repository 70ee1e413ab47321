"""Expression-tree tests, including the benchmark network's hand-written forms."""

import pytest

from ebsl import (
    ConsensusNode,
    GDiscountNode,
    GFunction,
    LegacyDiscountNode,
    OdotDiscountNode,
    Opinion,
    ScaleNode,
    ThetaViolationError,
    UnboundVariableError,
    Var,
    consensus,
    count_variable_occurrences,
    delta,
    discount_g,
    discount_legacy,
    evaluate,
    is_canonical,
    scalar_mul,
)
from ebsl import benchmarks


X = Opinion(0.3, 0.6, 0.1)
Y = Opinion(0.5, 0.2, 0.3)
Z = Opinion(0.6, 0.1, 0.3)
BINDINGS = {"x": X, "y": Y, "z": Z}


def c1_bindings():
    return benchmarks.edge_bindings(
        benchmarks.case_evidence("C1"), benchmarks.case_trust("C1")
    )


class TestEvaluate:
    def test_variable_identity(self):
        assert evaluate(Var("x"), BINDINGS) == X

    def test_unbound_variable(self):
        with pytest.raises(UnboundVariableError):
            evaluate(Var("missing"), BINDINGS)

    def test_each_node_kind(self):
        g = GFunction.belief()
        assert evaluate(ConsensusNode(Var("x"), Var("y")), BINDINGS) == consensus(X, Y)
        assert evaluate(LegacyDiscountNode(Var("x"), Var("y")), BINDINGS) == \
            discount_legacy(X, Y)
        assert evaluate(GDiscountNode(Var("x"), Var("y"), g), BINDINGS) == \
            discount_g(X, Y, g)
        assert evaluate(ScaleNode(2.5, Var("x")), BINDINGS) == scalar_mul(2.5, X)

    def test_odot_theta_violation_propagates(self):
        big = benchmarks.edge_bindings(
            benchmarks.case_evidence("C3"), benchmarks.case_trust("C3")
        )
        with pytest.raises(ThetaViolationError):
            evaluate(OdotDiscountNode(Var("A12"), Var("A23"), 10.0), big)

    def test_canonical_expression_matches_table2(self):
        w = evaluate(benchmarks.canonical_expression(), c1_bindings())
        assert w.b == pytest.approx(0.014, abs=1e-3)
        assert w.d == pytest.approx(0.123, abs=1e-3)
        assert w.u == pytest.approx(0.863, abs=1e-3)

    def test_flow_sl_expression_double_counts(self):
        bindings = c1_bindings()
        canonical = evaluate(benchmarks.canonical_expression(), bindings)
        unrolled = evaluate(benchmarks.flow_sl_expression(), bindings)
        assert unrolled.u < canonical.u

    def test_odot_factoring_invariance(self):
        """Both groupings of the three-path linear-discount sum agree."""
        bindings = c1_bindings()
        theta = 1000.0
        plain = evaluate(benchmarks.three_path_sum_expression(theta), bindings)
        factored = evaluate(benchmarks.three_path_factored_expression(theta), bindings)
        assert delta(plain, factored) <= 1e-12


class TestOccurrenceCounting:
    def test_split_form_is_non_canonical(self):
        expr = ConsensusNode(LegacyDiscountNode(Var("x"), Var("y")),
                             LegacyDiscountNode(Var("x"), Var("z")))
        assert count_variable_occurrences(expr) == {"x": 2, "y": 1, "z": 1}
        assert not is_canonical(expr)

    def test_fused_form_is_canonical(self):
        expr = LegacyDiscountNode(Var("x"), ConsensusNode(Var("y"), Var("z")))
        assert count_variable_occurrences(expr) == {"x": 1, "y": 1, "z": 1}
        assert is_canonical(expr)

    def test_single_variable(self):
        assert count_variable_occurrences(Var("x")) == {"x": 1}

    def test_scale_node_transparent(self):
        assert count_variable_occurrences(ScaleNode(2.0, Var("x"))) == {"x": 1}

    def test_benchmark_expressions(self):
        assert is_canonical(benchmarks.canonical_expression())
        counts = count_variable_occurrences(benchmarks.flow_sl_expression())
        assert counts["A12"] == 2 and counts["A23"] == 2
        assert not is_canonical(benchmarks.flow_sl_expression())
