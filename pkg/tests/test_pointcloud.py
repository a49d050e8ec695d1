import io
import math

import numpy as np
import pytest

from ripsep import (
    FormatError,
    ValidationError,
    format_points,
    load_points,
    pairwise_distances,
    perturb,
    sample_circle,
    sample_torus,
    sample_torus_lattice,
    save_points,
    scale_bounds,
)

from oracles import random_cloud


class TestLoadPoints:
    def test_basic_2d(self):
        pts = load_points(io.StringIO("0,0\n1,0\n0,1"))
        assert pts.shape == (3, 2)
        assert np.array_equal(pts, [[0, 0], [1, 0], [0, 1]])

    def test_basic_1d(self):
        pts = load_points(io.StringIO("1\n2\n4"))
        assert pts.shape == (3, 1)

    def test_duplicate_points_named(self):
        with pytest.raises(ValidationError, match=r"\(0, 1\)"):
            load_points(io.StringIO("0,0\n0,0"))

    def test_ragged_rows(self):
        with pytest.raises(FormatError, match="line 2"):
            load_points(io.StringIO("0,0\n1,2,3"))

    def test_trailing_comma(self):
        with pytest.raises(FormatError, match="trailing comma"):
            load_points(io.StringIO("0,0,\n1,1"))

    def test_not_a_number(self):
        with pytest.raises(FormatError):
            load_points(io.StringIO("0,zero\n1,1"))

    def test_too_few_points(self):
        with pytest.raises(ValidationError, match="at least 2"):
            load_points(io.StringIO("0,0"))

    def test_comments_and_blank_lines_ignored(self):
        pts = load_points(io.StringIO("# header\n0,0\n\n1,1\n"))
        assert pts.shape == (2, 2)

    def test_unknown_format(self):
        with pytest.raises(ValidationError):
            load_points(io.StringIO("0,0\n1,1"), format="tsv")

    def test_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(7)
        pts = rng.standard_normal((5, 3)) * 1e-7
        path = tmp_path / "pts.csv"
        save_points(pts, path)
        again = load_points(path)
        assert np.array_equal(pts, again)

    def test_format_points_reparses_identically(self):
        pts = np.array([[1 / 3, 2 / 7], [math.pi, math.e]])
        again = load_points(io.StringIO(format_points(pts)))
        assert np.array_equal(pts, again)


class TestPairwiseDistances:
    def test_three_four_five(self):
        D = pairwise_distances([[0, 0], [3, 4]])
        assert D[0, 1] == 5.0

    def test_line(self):
        D = pairwise_distances([[0], [1], [3]])
        assert D[0, 2] == 3.0 and D[1, 2] == 2.0

    def test_unit_square_diagonal(self):
        D = pairwise_distances([[0, 0], [1, 0], [1, 1], [0, 1]])
        assert D[0, 2] == pytest.approx(math.sqrt(2), abs=0)
        assert np.array_equal(D, D.T)
        assert np.all(np.diag(D) == 0.0)

    def test_triangle_inequality_brute(self):
        rng = np.random.default_rng(11)
        for n, d in [(10, 2), (30, 3), (50, 5)]:
            X = random_cloud(rng, n, d)
            D = pairwise_distances(X)
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        assert D[i, j] <= D[i, k] + D[k, j] + 1e-12


class TestScaleBounds:
    def test_line_example(self):
        sb = scale_bounds([[0], [1], [3]])
        assert sb.t_max == 2.0 and sb.r_min == 1.0

    def test_two_points(self):
        sb = scale_bounds([[0], [5]])
        assert sb.t_max == 5.0 and sb.r_min == 5.0

    def test_thirty_gon_chords(self):
        pts = sample_circle(30)
        sb = scale_bounds(pts)
        assert sb.t_max == pytest.approx(2.0, abs=1e-12)
        assert sb.r_min == pytest.approx(2 * math.sin(math.pi / 30), abs=1e-12)

    def test_brute_force_agreement(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            X = random_cloud(rng, int(rng.integers(2, 25)), 3)
            D = pairwise_distances(X)
            sb = scale_bounds(X)
            t = min(max(D[i, j] for j in range(len(X))) for i in range(len(X)))
            r = min(D[i, j] for i in range(len(X)) for j in range(len(X)) if i != j)
            assert sb.t_max == t and sb.r_min == r
            assert 0 < sb.r_min <= sb.t_max


class TestSampleCircle:
    def test_square(self):
        pts = sample_circle(4, 1.0, 0.0, 99)
        assert np.allclose(pts, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-15)

    def test_regular_30gon_nearest_neighbors(self):
        pts = sample_circle(30)
        D = pairwise_distances(pts)
        chord = 2 * math.sin(math.pi / 30)
        np.fill_diagonal(D, np.inf)
        assert np.allclose(D.min(axis=1), chord, atol=1e-12)

    def test_jitter_zero_ignores_seed(self):
        assert np.array_equal(sample_circle(7, 2.0, 0.0, 1), sample_circle(7, 2.0, 0.0, 2))

    def test_deterministic_per_seed(self):
        a = sample_circle(12, 1.0, 0.05, 42)
        b = sample_circle(12, 1.0, 0.05, 42)
        c = sample_circle(12, 1.0, 0.05, 43)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_too_few(self):
        with pytest.raises(ValidationError):
            sample_circle(2)


class TestSampleTorus:
    def test_surface_equation(self):
        pts = sample_torus(100, R=2.0, rho=0.5, seed=4)
        w = np.sqrt(pts[:, 0] ** 2 + pts[:, 1] ** 2)
        values = (w - 2.0) ** 2 + pts[:, 2] ** 2
        assert np.allclose(values, 0.25, atol=1e-9)

    def test_deterministic(self):
        assert np.array_equal(sample_torus(50, seed=8), sample_torus(50, seed=8))

    def test_distinct_points(self):
        pts = sample_torus(100, R=2.0, rho=0.5, seed=0)
        assert len({tuple(p) for p in pts}) == 100

    def test_bad_radii(self):
        with pytest.raises(ValidationError):
            sample_torus(10, R=1.0, rho=1.0)


class TestSampleTorusLattice:
    def test_count_and_surface(self):
        pts = sample_torus_lattice(6, 25, R=2.0, rho=0.5, jitter=0.02, seed=0)
        assert pts.shape == (150, 3)
        w = np.sqrt(pts[:, 0] ** 2 + pts[:, 1] ** 2)
        assert np.allclose((w - 2.0) ** 2 + pts[:, 2] ** 2, 0.25, atol=1e-9)

    def test_zero_jitter_regular(self):
        a = sample_torus_lattice(6, 25, jitter=0.0, seed=1)
        b = sample_torus_lattice(6, 25, jitter=0.0, seed=2)
        assert np.array_equal(a, b)

    def test_deterministic_per_seed(self):
        a = sample_torus_lattice(6, 25, jitter=0.05, seed=4)
        b = sample_torus_lattice(6, 25, jitter=0.05, seed=4)
        c = sample_torus_lattice(6, 25, jitter=0.05, seed=5)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_lattice_must_close(self):
        with pytest.raises(ValidationError, match="close"):
            sample_torus_lattice(5, 30, twist=0.5)  # 5 * 0.5 not an integer
        sample_torus_lattice(5, 30, twist=0.4)  # 5 * 0.4 = 2 closes fine

    def test_bad_arguments(self):
        with pytest.raises(ValidationError):
            sample_torus_lattice(2, 25)
        with pytest.raises(ValidationError):
            sample_torus_lattice(6, 25, R=0.5, rho=0.5)
        with pytest.raises(ValidationError):
            sample_torus_lattice(6, 25, jitter=-0.1)


class TestPerturb:
    def test_delta_zero_identity(self):
        X = np.array([[0.0, 0.0], [1.0, 2.0]])
        assert np.array_equal(perturb(X, 0.0, 5), X)

    def test_displacement_within_delta(self):
        rng = np.random.default_rng(21)
        X = random_cloud(rng, 20, 3)
        for delta in (1e-3, 0.1, 2.0):
            W = perturb(X, delta, 13)
            moves = np.linalg.norm(W - X, axis=1)
            assert np.all(moves <= delta)

    def test_identity_distortion_bound(self):
        rng = np.random.default_rng(22)
        X = random_cloud(rng, 15, 2)
        delta = 0.05
        W = perturb(X, delta, 3)
        gap = np.abs(pairwise_distances(X) - pairwise_distances(W))
        assert gap.max() <= 2 * delta

    def test_deterministic(self):
        X = np.array([[0.0], [1.0], [2.0]])
        assert np.array_equal(perturb(X, 0.1, 9), perturb(X, 0.1, 9))

    def test_negative_delta(self):
        with pytest.raises(ValidationError):
            perturb([[0.0], [1.0]], -1.0)
