from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import stats

from rcmperc import (
    RngStream,
    SpatialIndex,
    ball_volume,
    derive_seed,
    make_point,
    poisson_count,
    sample_uncovered,
    trial_stream,
    uniform_in_ball,
)

from support import poisson_gof_pvalue

ORIGIN2 = make_point((0.0, 0.0), 0)


class TestRngStream:
    def test_same_key_same_draws(self):
        a = RngStream(99, (3, 7))
        b = RngStream(99, (3, 7))
        assert a.gen.random(16).tolist() == b.gen.random(16).tolist()

    def test_different_keys_differ(self):
        draws = {
            key: tuple(RngStream(99, key).gen.random(4).tolist())
            for key in [(), (0,), (1,), (0, 0), (0, 1), (1, 0)]
        }
        assert len(set(draws.values())) == len(draws)

    def test_substream_extends_key(self):
        root = RngStream(5, (2,))
        sub = root.substream(9, 1)
        assert sub.key == (2, 9, 1)
        same = RngStream(5, (2, 9, 1))
        assert sub.gen.random(8).tolist() == same.gen.random(8).tolist()

    def test_substream_leaves_parent_untouched(self):
        a = RngStream(5)
        b = RngStream(5)
        a.substream(1).gen.random(100)
        assert a.gen.random(4).tolist() == b.gen.random(4).tolist()

    def test_trial_stream_key_layout(self):
        s = trial_stream(1729, 4, 17)
        assert (s.master_seed, s.key) == (1729, (4, 17))

    def test_validation(self):
        with pytest.raises(ValueError):
            RngStream(-1)
        with pytest.raises(ValueError):
            RngStream(3, (0, -2))


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(1729, 1, 2) == derive_seed(1729, 1, 2)

    def test_distinct_keys_distinct_seeds(self):
        seeds = {derive_seed(1729, t, d) for t in range(1, 6) for d in range(2, 6)}
        assert len(seeds) == 20

    def test_64_bit_range(self):
        for k in range(50):
            s = derive_seed(7, k)
            assert 0 <= s < 2**64


class TestPoissonCount:
    def test_zero_mean_is_zero(self):
        rng = RngStream(1)
        assert all(poisson_count(rng, 0.0) == 0 for _ in range(100))

    def test_bad_mean(self):
        rng = RngStream(1)
        for bad in (-0.5, math.inf, math.nan):
            with pytest.raises(ValueError):
                poisson_count(rng, bad)

    def test_moments(self):
        rng = RngStream(2024)
        n = 300_000
        draws = np.array([poisson_count(rng, 4.0) for _ in range(n)], dtype=float)
        # mean: 3 sigma window with sigma = sqrt(4/n)
        assert abs(draws.mean() - 4.0) <= 3.0 * math.sqrt(4.0 / n)
        # variance: SE of the sample variance is sqrt((mu + 2 mu^2) / n)
        assert abs(draws.var() - 4.0) <= 3.0 * math.sqrt((4.0 + 32.0) / n)

    def test_distribution_gof(self):
        rng = RngStream(77)
        samples = [poisson_count(rng, 50.0) for _ in range(100_000)]
        assert poisson_gof_pvalue(samples, 50.0) > 0.01


class TestUniformInBall:
    def test_stays_inside(self):
        for dim in (1, 2, 3, 5):
            rng = RngStream(11, (dim,))
            center = make_point((4.0,) + (0.0,) * (dim - 1), 0)
            for _ in range(300):
                p = uniform_in_ball(rng, center, 2.0, dim)
                assert math.dist(p.coords, center.coords) <= 2.0
                assert len(p.coords) == dim
                assert p.id == -1

    def test_norm_is_global_not_relative(self):
        rng = RngStream(12)
        center = make_point((10.0, -3.0), 0)
        p = uniform_in_ball(rng, center, 1.0, 2)
        assert p.norm == pytest.approx(math.hypot(*p.coords), rel=1e-15)
        assert p.norm > 8.0  # nowhere near the relative distance

    def test_radial_fraction_d2(self):
        # P(|X| <= 1) in a radius 2 disc is (1/2)^2 = 1/4
        rng = RngStream(13)
        n = 400_000
        hits = sum(
            math.hypot(*uniform_in_ball(rng, ORIGIN2, 2.0, 2).coords) <= 1.0
            for _ in range(n)
        )
        sigma = math.sqrt(0.25 * 0.75 / n)
        assert abs(hits / n - 0.25) <= 3.0 * sigma

    def test_radial_law_kolmogorov(self):
        # |X|^d / R^d is uniform on [0, 1]
        for dim in (2, 3):
            rng = RngStream(14, (dim,))
            center = make_point((0.0,) * dim, 0)
            u = [
                (math.hypot(*uniform_in_ball(rng, center, 2.0, dim).coords) / 2.0) ** dim
                for _ in range(50_000)
            ]
            assert stats.kstest(u, "uniform").pvalue > 0.01

    def test_coordinate_means_d3(self):
        rng = RngStream(15)
        center = make_point((0.0, 0.0, 0.0), 0)
        n = 200_000
        acc = np.zeros(3)
        for _ in range(n):
            acc += uniform_in_ball(rng, center, 2.0, 3).coords
        # per-coordinate variance is R^2/(d+2) = 4/5
        sigma = math.sqrt(0.8 / n)
        assert np.all(np.abs(acc / n) <= 3.0 * sigma)

    def test_centered_on_offset(self):
        rng = RngStream(16)
        center = make_point((10.0, -3.0), 0)
        n = 100_000
        acc = np.zeros(2)
        for _ in range(n):
            acc += uniform_in_ball(rng, center, 2.0, 2).coords
        sigma = math.sqrt(1.0 / n)  # R^2/(d+2) = 1
        assert abs(acc[0] / n - 10.0) <= 3.0 * sigma
        assert abs(acc[1] / n + 3.0) <= 3.0 * sigma


class TestSampleUncovered:
    def test_zero_intensity_empty(self):
        rng = RngStream(21)
        assert sample_uncovered(rng, ORIGIN2, 2.0, [], 0.0, 2) == []

    def test_fully_covered_empty(self):
        rng = RngStream(22)
        for _ in range(200):
            assert sample_uncovered(rng, ORIGIN2, 2.0, [ORIGIN2], 0.8, 2) == []

    def test_negative_intensity_rejected(self):
        rng = RngStream(23)
        with pytest.raises(ValueError):
            sample_uncovered(rng, ORIGIN2, 2.0, [], -0.1, 2)

    def test_count_is_poisson(self):
        rng = RngStream(24)
        mean = 0.3 * ball_volume(2, 2.0)
        counts = [
            len(sample_uncovered(rng, ORIGIN2, 2.0, [], 0.3, 2)) for _ in range(10_000)
        ]
        assert poisson_gof_pvalue(counts, mean) > 0.01

    def test_kept_points_avoid_covered(self):
        rng = RngStream(25)
        blockers = [
            make_point((1.0, 0.5), 1),
            make_point((-2.0, 1.0), 2),
            make_point((3.5, -0.5), 3),
        ]
        for _ in range(500):
            for p in sample_uncovered(rng, ORIGIN2, 2.0, blockers, 0.6, 2):
                assert all(math.dist(p.coords, b.coords) > 2.0 for b in blockers)
                assert math.dist(p.coords, ORIGIN2.coords) <= 2.0

    def test_partial_coverage_mean(self):
        # one covered ball at distance 2: lens area 8 pi/3 - 2 sqrt(3)
        rng = RngStream(26)
        blocker = make_point((2.0, 0.0), 1)
        lens = 8.0 * math.pi / 3.0 - 2.0 * math.sqrt(3.0)
        want = 0.5 * (ball_volume(2, 2.0) - lens)
        n = 20_000
        total = sum(
            len(sample_uncovered(rng, ORIGIN2, 2.0, [blocker], 0.5, 2))
            for _ in range(n)
        )
        assert abs(total / n - want) <= 3.0 * math.sqrt(want / n)

    def test_disjoint_halves_uncorrelated(self):
        rng = RngStream(27)
        n = 10_000
        left = np.empty(n)
        right = np.empty(n)
        for i in range(n):
            pts = sample_uncovered(rng, ORIGIN2, 2.0, [], 0.5, 2)
            left[i] = sum(p.coords[0] < 0.0 for p in pts)
            right[i] = len(pts) - left[i]
        rho = np.corrcoef(left, right)[0, 1]
        assert abs(rho) <= 3.0 / math.sqrt(n)

    def test_spatial_index_requires_matching_cell(self):
        rng = RngStream(28)
        idx = SpatialIndex(cell_size=3.0, dim=2)
        with pytest.raises(ValueError, match="cell size"):
            sample_uncovered(rng, ORIGIN2, 2.0, idx, 0.5, 2)

    def test_index_and_sequence_paths_agree(self):
        blockers = [make_point((1.5, 0.0), 1), make_point((-1.0, 1.0), 2)]
        idx = SpatialIndex.from_points(blockers, cell_size=4.0, dim=2)
        for trial in range(50):
            a = sample_uncovered(RngStream(29, (trial,)), ORIGIN2, 2.0, idx, 0.7, 2)
            b = sample_uncovered(RngStream(29, (trial,)), ORIGIN2, 2.0, blockers, 0.7, 2)
            assert [p.coords for p in a] == [p.coords for p in b]

    def test_rejection_consumes_no_randomness(self):
        # thinning must only filter: same stream, with and without a
        # blocker, yields the same survivors
        blocker = make_point((1.2, 0.3), 1)
        for trial in range(200):
            free = sample_uncovered(RngStream(30, (trial,)), ORIGIN2, 2.0, [], 0.8, 2)
            thinned = sample_uncovered(
                RngStream(30, (trial,)), ORIGIN2, 2.0, [blocker], 0.8, 2
            )
            survivors = [
                p.coords for p in free if math.dist(p.coords, blocker.coords) > 2.0
            ]
            assert [p.coords for p in thinned] == survivors
