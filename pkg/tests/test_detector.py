"""End-to-end detection, alpha fitting, and the two baselines."""

from __future__ import annotations

import json

import numpy as np
import pytest

from qubodet import (
    Dataset,
    DetectionResult,
    DetectorConfig,
    SaConfig,
    baseline_knn_dist,
    baseline_mahalanobis_topk,
    detect,
    fit_alpha,
    fit_covariance,
    furthest_pairs,
    mahalanobis_to_centroid,
    pairwise_mahalanobis,
)


def _random_dataset(rng, n, d=2):
    return Dataset(rows=rng.normal(size=(n, d)))


def _exact_config(alpha, k, **kwargs):
    return DetectorConfig(alpha=alpha, k=k, solver="exact", **kwargs)


# ---------------------------------------------------------------------------
# detect

class TestDetect:
    def test_single_distant_point_is_flagged(self):
        # 9 jittered points at the origin and one far away; every feasible
        # selection is a singleton, so the argmax is the largest d_i
        rng = np.random.default_rng(0)
        rows = np.vstack([rng.normal(0.0, 0.1, size=(9, 2)), [[100.0, 100.0]]])
        data = Dataset(rows=rows)
        result = detect(data, _exact_config(alpha=0.5, k=1))
        assert np.array_equal(result.flags, [0] * 9 + [1])
        assert result.feasible
        assert int(result.solution.assignment.sum()) == 1

    def test_alpha_one_flags_largest_distances(self):
        rng = np.random.default_rng(1)
        for trial in range(10):
            data = _random_dataset(rng, 12)
            result = detect(data, _exact_config(alpha=1.0, k=3, ridge=0.0))
            model = fit_covariance(data, ridge=0.0)
            d = mahalanobis_to_centroid(model, data)
            expected = np.zeros(12, dtype=np.int8)
            expected[np.argsort(-d)[:3]] = 1
            assert np.array_equal(result.flags, expected)

    def test_exact_solver_flags_exactly_k(self):
        rng = np.random.default_rng(2)
        for trial in range(10):
            n = int(rng.integers(5, 16))
            k = int(rng.integers(1, n - 1))
            data = _random_dataset(rng, n)
            result = detect(data, _exact_config(alpha=0.4, k=k))
            assert int(result.flags.sum()) == k
            assert result.feasible

    def test_k_boundaries(self):
        rng = np.random.default_rng(3)
        data = _random_dataset(rng, 6)
        result = detect(data, _exact_config(alpha=0.5, k=5))
        assert int(result.flags.sum()) == 5
        with pytest.raises(ValueError, match="smaller than"):
            detect(data, _exact_config(alpha=0.5, k=6))

    def test_objective_is_unpenalized_blend_value(self):
        # recompute the blend objective by hand from the distances
        rng = np.random.default_rng(4)
        data = _random_dataset(rng, 10)
        config = _exact_config(alpha=0.7, k=3, ridge=0.0)
        result = detect(data, config)
        model = fit_covariance(data, ridge=0.0)
        d_lin = mahalanobis_to_centroid(model, data)
        d_quad = pairwise_mahalanobis(model, data)
        kept = furthest_pairs(d_quad, 3)
        flagged = np.flatnonzero(result.flags)
        expected = 0.7 * d_lin[flagged].sum() + 0.3 * sum(
            d_quad[i, j]
            for i, j in kept
            if result.flags[i] and result.flags[j]
        )
        assert np.isclose(result.objective, expected, rtol=1e-9)

    def test_scores_are_marginal_contributions(self):
        rng = np.random.default_rng(5)
        data = _random_dataset(rng, 11)
        config = _exact_config(alpha=0.6, k=3, ridge=0.0)
        result = detect(data, config)
        model = fit_covariance(data, ridge=0.0)
        d_lin = mahalanobis_to_centroid(model, data)
        d_quad = pairwise_mahalanobis(model, data)
        kept = furthest_pairs(d_quad, 3)
        for i in range(11):
            expected = 0.6 * d_lin[i] + 0.4 * sum(
                d_quad[min(i, j), max(i, j)]
                for j in np.flatnonzero(result.flags)
                if j != i and (min(i, j), max(i, j)) in kept
            )
            assert np.isclose(result.scores[i], expected, rtol=1e-9)

    def test_flags_invariant_under_common_scaling(self):
        # scaling all features by a positive factor rescales the objective
        # but preserves the argmax when no regularization is applied
        rng = np.random.default_rng(6)
        data = _random_dataset(rng, 14)
        scaled = Dataset(rows=data.rows * 37.5)
        config = _exact_config(alpha=0.5, k=4, ridge=0.0)
        assert np.array_equal(detect(data, config).flags, detect(scaled, config).flags)

    def test_sa_solver_end_to_end(self, small_labeled):
        config = DetectorConfig(alpha=0.5, k=3, sa=SaConfig(seed=2))
        result = detect(small_labeled, config)
        assert int(result.flags.sum()) == 3
        assert result.feasible
        assert result.solution.solver == "sa"

    def test_squared_distances_switch(self):
        rng = np.random.default_rng(7)
        data = _random_dataset(rng, 10)
        plain = detect(data, _exact_config(alpha=1.0, k=2, ridge=0.0))
        squared = detect(
            data,
            _exact_config(alpha=1.0, k=2, ridge=0.0, squared_distances=True),
        )
        # squaring is monotone, so the alpha=1 top-k set is unchanged
        assert np.array_equal(plain.flags, squared.flags)
        assert not np.isclose(plain.objective, squared.objective)


# ---------------------------------------------------------------------------
# alpha fitting

class TestFitAlpha:
    def test_singleton_grid_passthrough(self, small_labeled):
        config = _exact_config(alpha=0.0, k=1)
        best, table = fit_alpha(small_labeled, config, grid=[0.5])
        assert best == 0.5
        assert len(table) == 1 and table[0][0] == 0.5

    def test_k_comes_from_labels(self, small_labeled):
        # config.k deliberately wrong; the fitted runs use the true count
        config = _exact_config(alpha=0.0, k=1)
        _, table = fit_alpha(small_labeled, config, grid=[1.0])
        assert table[0][1] == 1.0  # separated outliers, alpha=1 is perfect

    def test_tie_goes_to_smaller_alpha(self):
        # k=1 and a dominant single outlier: every alpha flags the same
        # point, so all AUCs tie and the smallest alpha wins
        rng = np.random.default_rng(8)
        rows = np.vstack([rng.normal(size=(9, 2)), [[50.0, 50.0]]])
        labels = np.array([0] * 9 + [1], dtype=np.int8)
        data = Dataset(rows=rows, labels=labels)
        config = _exact_config(alpha=0.0, k=1)
        best, table = fit_alpha(data, config, grid=[0.3, 0.7])
        assert table[0][1] == table[1][1] == 1.0
        assert best == 0.3

    def test_table_covers_grid_and_best_attains_max(self, small_labeled):
        config = DetectorConfig(alpha=0.0, k=1, sa=SaConfig(seed=4))
        grid = [0.0, 0.25, 0.5, 0.75, 1.0]
        best, table = fit_alpha(small_labeled, config, grid=grid)
        assert [alpha for alpha, _ in table] == grid
        best_auc = max(auc for _, auc in table)
        assert (best, best_auc) in table

    def test_distant_tight_cluster_prefers_linear_end(self):
        # outliers far from the centroid but mutually close: pairwise
        # evidence is misleading, so high alpha wins
        rng = np.random.default_rng(11)
        inliers = rng.normal(0, 1, size=(36, 2))
        outliers = np.array([8.0, 8.0]) + rng.normal(0, 0.05, size=(4, 2))
        data = Dataset(
            rows=np.vstack([inliers, outliers]),
            labels=np.array([0] * 36 + [1] * 4, dtype=np.int8),
        )
        config = DetectorConfig(alpha=0.0, k=4, sa=SaConfig(seed=5))
        best, table = fit_alpha(data, config, grid=[0.0, 1.0])
        aucs = dict(table)
        assert aucs[1.0] > aucs[0.0]
        assert best == 1.0

    def test_unlabeled_rejected(self):
        data = Dataset(rows=np.zeros((4, 2)) + np.arange(4)[:, None])
        with pytest.raises(ValueError, match="labeled"):
            fit_alpha(data, _exact_config(alpha=0.0, k=1))

    def test_degenerate_labels_rejected(self):
        data = Dataset(
            rows=np.arange(8, dtype=float).reshape(4, 2),
            labels=np.ones(4, dtype=np.int8),
        )
        with pytest.raises(ValueError, match="both classes"):
            fit_alpha(data, _exact_config(alpha=0.0, k=1))

    def test_bad_grid_rejected(self, small_labeled):
        config = _exact_config(alpha=0.0, k=1)
        with pytest.raises(ValueError, match="non-empty"):
            fit_alpha(small_labeled, config, grid=[])
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            fit_alpha(small_labeled, config, grid=[0.5, 1.2])


# ---------------------------------------------------------------------------
# baselines

class TestMahalanobisTopk:
    def test_identity_covariance_flags_furthest(self):
        rng = np.random.default_rng(9)
        rows = rng.normal(size=(15, 3))
        data = Dataset(rows=rows)
        result = baseline_mahalanobis_topk(data, k=4, ridge=0.0)
        model = fit_covariance(data, ridge=0.0)
        d = mahalanobis_to_centroid(model, data)
        assert set(np.flatnonzero(result.flags)) == set(np.argsort(-d)[:4])
        assert np.array_equal(result.scores, d)
        assert result.alpha == 1.0

    def test_matches_detect_alpha_one(self):
        rng = np.random.default_rng(10)
        for trial in range(10):
            data = _random_dataset(rng, 11)
            k = int(rng.integers(1, 5))
            via_qubo = detect(data, _exact_config(alpha=1.0, k=k, ridge=0.0))
            direct = baseline_mahalanobis_topk(data, k=k, ridge=0.0)
            assert np.array_equal(via_qubo.flags, direct.flags)

    def test_k_zero_rejected(self):
        data = Dataset(rows=np.arange(8, dtype=float).reshape(4, 2))
        with pytest.raises(ValueError, match="k must"):
            baseline_mahalanobis_topk(data, k=0)


class TestKnnDist:
    def test_single_far_point_scores_highest(self):
        rng = np.random.default_rng(12)
        rows = np.vstack([rng.normal(size=(12, 2)), [[40.0, -40.0]]])
        result = baseline_knn_dist(Dataset(rows=rows), k=1, m=1)
        assert result.flags[12] == 1
        assert np.argmax(result.scores) == 12

    def test_duplicates_score_zero_with_one_neighbor(self):
        rng = np.random.default_rng(13)
        rows = rng.normal(size=(8, 2))
        rows[5] = rows[2]
        result = baseline_knn_dist(Dataset(rows=rows), k=1, m=1)
        assert result.scores[2] == 0.0
        assert result.scores[5] == 0.0

    def test_grid_corner_versus_interior(self):
        # 3x3 integer grid under its own (isotropic) metric: at m=2 the two
        # nearest neighbors of corner and interior points are all one grid
        # step away, so their scores tie; the difference appears at m=3
        grid = np.array(
            [[x, y] for x in range(3) for y in range(3)], dtype=float
        )
        data = Dataset(rows=grid)
        two = baseline_knn_dist(data, k=1, m=2, ridge=0.0)
        assert np.isclose(two.scores[0], two.scores[4], rtol=1e-12)
        three = baseline_knn_dist(data, k=1, m=3, ridge=0.0)
        assert three.scores[0] > three.scores[4] + 1e-9

    def test_m_bounds(self):
        data = Dataset(rows=np.arange(8, dtype=float).reshape(4, 2))
        with pytest.raises(ValueError, match="m must"):
            baseline_knn_dist(data, k=1, m=0)
        with pytest.raises(ValueError, match="m must"):
            baseline_knn_dist(data, k=1, m=4)


# ---------------------------------------------------------------------------
# result record

class TestDetectionResult:
    def test_json_payload(self, small_labeled):
        result = detect(small_labeled, _exact_config(alpha=1.0, k=3))
        payload = json.loads(json.dumps(result.to_dict()))
        assert sum(payload["flags"]) == 3
        assert payload["feasible"] is True
        assert payload["alpha"] == 1.0
        assert payload["solution"]["solver"] == "exact"
        assert len(payload["scores"]) == small_labeled.n

    def test_baseline_payload_has_null_solution(self):
        rng = np.random.default_rng(14)
        result = baseline_knn_dist(_random_dataset(rng, 6), k=2, m=2)
        payload = result.to_dict()
        assert payload["solution"] is None
        assert payload["alpha"] is None

    def test_validation(self):
        with pytest.raises(ValueError, match="0 or 1"):
            DetectionResult(
                flags=np.array([0, 2]), objective=0.0, alpha=0.5, k=1,
                feasible=True,
            )
        with pytest.raises(ValueError, match="match"):
            DetectionResult(
                flags=np.array([0, 1]), objective=0.0, alpha=0.5, k=1,
                feasible=True, scores=np.zeros(3),
            )
