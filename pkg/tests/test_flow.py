"""Flow-baseline tests: aggregated ratings and the normalized fixed point."""

import numpy as np
import pytest

from ebsl import (
    EbslError,
    Evidence,
    FlowConfig,
    InvalidScalarError,
    aggregate_rating,
    solve_flow,
    validate_rating_matrix,
)


class TestAggregateRating:
    def test_table1_functional_edge(self):
        assert aggregate_rating(Evidence(10, 90)) == pytest.approx(0.1)

    def test_no_evidence_is_neutral(self):
        assert aggregate_rating(Evidence(0, 0)) == 0.5

    def test_pure_positive_is_full_trust(self):
        assert aggregate_rating(Evidence(500, 0)) == 1.0

    def test_pure_negative_is_full_distrust(self):
        assert aggregate_rating(Evidence(0, 3)) == 0.0


class TestValidation:
    def test_rejects_entries_outside_unit_interval(self):
        with pytest.raises(EbslError):
            validate_rating_matrix(np.array([[0.0, 1.5], [0.2, 0.0]]))

    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(EbslError):
            validate_rating_matrix(np.array([[0.1, 0.5], [0.2, 0.0]]))

    def test_rejects_bad_alpha(self):
        with pytest.raises(InvalidScalarError):
            FlowConfig(alpha=1.5, start=(1.0, 1.0))

    def test_rejects_zero_start(self):
        with pytest.raises(InvalidScalarError):
            FlowConfig(alpha=0.5, start=(0.0, 0.0))


def independent_fixed_point(A, alpha, s, sweeps=100_000, tol=1e-13):
    """Deliberately different implementation: scalar loops, L1 termination."""
    n = len(s)
    r = list(s)
    for _ in range(sweeps):
        ell = sum(r)
        nxt = [
            (1.0 - alpha) * s[x] + alpha * sum(r[y] / ell * A[y][x] for y in range(n))
            for x in range(n)
        ]
        if sum(abs(a - b) for a, b in zip(nxt, r)) < tol:
            return nxt
        r = nxt
    raise AssertionError("oracle failed to converge")


class TestSolveFlow:
    def test_alpha_zero_returns_start(self):
        A = np.array([[0.0, 0.8], [0.3, 0.0]])
        r, report = solve_flow(A, FlowConfig(alpha=0.0, start=(0.9, 0.4)))
        assert report.converged
        assert r.tolist() == [0.9, 0.4]

    def test_symmetric_pair_fixed_point(self):
        """Two mutually fully-trusting nodes: the normalized average is 1/2.

        Each reputation is the r-weighted average of the column ratings
        including the zero self-rating, so the symmetric fixed point sits at
        (0.5, 0.5) rather than at the rating value itself.
        """
        A = np.array([[0.0, 1.0], [1.0, 0.0]])
        r, report = solve_flow(A, FlowConfig(alpha=1.0, start=(1.0, 1.0)))
        assert report.converged
        assert r == pytest.approx([0.5, 0.5], abs=1e-9)

    def test_matches_independent_oracle(self):
        A = np.zeros((3, 3))
        A[0, 1], A[1, 2], A[2, 0] = 0.8, 0.6, 0.4
        s = (1 / 3, 1 / 3, 1 / 3)
        r, report = solve_flow(A, FlowConfig(alpha=0.5, start=s))
        assert report.converged
        oracle = independent_fixed_point(A.tolist(), 0.5, list(s))
        assert r == pytest.approx(oracle, abs=1e-9)

    def test_components_stay_in_unit_interval(self):
        rng = np.random.default_rng(11)
        A = rng.random((8, 8))
        np.fill_diagonal(A, 0.0)
        s = rng.random(8) * 0.9 + 0.05
        r, report = solve_flow(A, FlowConfig(alpha=0.7, start=tuple(s)))
        assert report.converged
        assert (r >= 0).all() and (r <= 1).all()

    def test_start_vector_independence(self):
        """Unique fixed point: different iteration seeds, same answer."""
        rng = np.random.default_rng(12)
        A = rng.random((6, 6))
        np.fill_diagonal(A, 0.0)
        cfg = FlowConfig(alpha=0.8, start=tuple(np.full(6, 0.5)))
        r1, rep1 = solve_flow(A, cfg)
        r2, rep2 = solve_flow(A, cfg, initial=rng.random(6) * 0.9 + 0.05)
        assert rep1.converged and rep2.converged
        assert np.abs(r1 - r2).max() <= 10 * cfg.tolerance

    def test_converges_within_500_iterations_on_random_instances(self):
        rng = np.random.default_rng(13)
        for n in (10, 50, 200):
            A = rng.random((n, n))
            np.fill_diagonal(A, 0.0)
            s = tuple(rng.random(n) * 0.9 + 0.05)
            _, report = solve_flow(A, FlowConfig(alpha=0.9, start=s,
                                                 max_iterations=500))
            assert report.converged

    def test_start_length_mismatch(self):
        with pytest.raises(EbslError):
            solve_flow(np.zeros((3, 3)), FlowConfig(alpha=0.5, start=(1.0, 1.0)))
