import math

import numpy as np
import pytest

from ripsep import (
    Bar,
    Barcode,
    FormatError,
    ValidationError,
    build_vr_filtration,
    compute_barcode,
    dim0_barcode_unionfind,
    restrict_dim,
    sample_circle,
    scale_bounds,
)

from oracles import bars_as_tuples, euler_identity_gap, naive_barcode, random_cloud

CHORD30 = 2 * math.sin(math.pi / 30)


def barcode_of(points, dim_cap=2, t_max=None):
    return compute_barcode(build_vr_filtration(points, dim_cap=dim_cap, t_max=t_max))


class TestBarAndBarcodeTypes:
    def test_bar_requires_birth_before_death(self):
        with pytest.raises(ValidationError):
            Bar(dim=0, birth=1.0, death=1.0)
        with pytest.raises(ValidationError):
            Bar(dim=-1, birth=0.0, death=1.0)

    def test_bar_length(self):
        assert Bar(0, 0.25, 1.0).length == 0.75

    def test_barcode_canonical_order(self):
        bars = (Bar(1, 0.0, 1.0), Bar(0, 0.0, 0.5), Bar(0, 0.0, 2.0, True))
        bc = Barcode(bars=bars, t_max=2.0)
        assert [b.dim for b in bc.bars] == [0, 0, 1]

    def test_barcode_rejects_inconsistent_essential(self):
        with pytest.raises(ValidationError):
            Barcode(bars=(Bar(0, 0.0, 1.0, True),), t_max=2.0)
        with pytest.raises(ValidationError):
            Barcode(bars=(Bar(0, 0.0, 3.0),), t_max=2.0)

    def test_json_round_trip_exact(self):
        bc = barcode_of(sample_circle(12))
        again = Barcode.from_json(bc.to_json())
        assert again == bc

    def test_json_schema_errors(self):
        with pytest.raises(FormatError):
            Barcode.from_json("{not json")
        with pytest.raises(FormatError):
            Barcode.from_json('{"t_max": 1.0}')
        with pytest.raises(FormatError):
            Barcode.from_json(
                '{"t_max": 1.0, "scale_convention": "radius", "bars": []}'
            )


class TestComputeBarcode:
    def test_collinear_points(self):
        bc = barcode_of([[0.0], [1.0], [3.0]], dim_cap=1, t_max=2.0)
        assert sorted(bc.lengths()) == [1.0, 2.0, 2.0]
        assert sum(b.essential_at_cutoff for b in bc.bars) == 1

    def test_two_points(self):
        bc = barcode_of([[0.0], [5.0]], dim_cap=1, t_max=5.0)
        assert bars_as_tuples(bc) == [
            (0, 0.0, 5.0, False),
            (0, 0.0, 5.0, True),
        ]

    def test_thirty_gon(self):
        bc = barcode_of(sample_circle(30), dim_cap=2)
        d0 = [b for b in bc.bars if b.dim == 0]
        d1 = [b for b in bc.bars if b.dim == 1]
        assert len(d0) == 30
        essential = [b for b in d0 if b.essential_at_cutoff]
        assert len(essential) == 1
        assert essential[0].length == pytest.approx(2.0, abs=1e-12)
        finite = [b for b in d0 if not b.essential_at_cutoff]
        assert all(b.length == pytest.approx(CHORD30, abs=1e-12) for b in finite)
        assert len(d1) == 1
        assert d1[0].birth == pytest.approx(CHORD30, abs=1e-12)
        assert d1[0].death == pytest.approx(math.sqrt(3), abs=1e-12)

    def test_truncated_thirty_gon_dim_cap_1(self):
        # only edges in the complex: dimension-0 bars alone
        bc = barcode_of(sample_circle(30), dim_cap=1, t_max=0.5)
        assert {b.dim for b in bc.bars} == {0}
        finite = [b for b in bc.bars if not b.essential_at_cutoff]
        essential = [b for b in bc.bars if b.essential_at_cutoff]
        assert len(finite) == 29 and len(essential) == 1
        assert all(b.death == pytest.approx(CHORD30, abs=1e-12) for b in finite)
        assert essential[0].death == 0.5

    def test_truncated_thirty_gon_dim_cap_2_keeps_live_loop(self):
        # the loop is still alive at the cutoff and is flagged essential
        bc = barcode_of(sample_circle(30), dim_cap=2, t_max=0.5)
        d1 = [b for b in bc.bars if b.dim == 1]
        assert len(d1) == 1
        assert d1[0].essential_at_cutoff and d1[0].death == 0.5
        assert d1[0].birth == pytest.approx(CHORD30, abs=1e-12)

    def test_matches_naive_reduction(self):
        rng = np.random.default_rng(0)
        cases = [
            (random_cloud(rng, 6, 2), 2, None),
            (random_cloud(rng, 9, 3), 3, None),
            (random_cloud(rng, 12, 2), 2, 0.7),
            (sample_circle(10), 2, None),
            (random_cloud(rng, 8, 1), 2, None),
        ]
        for X, cap, t in cases:
            filt = build_vr_filtration(X, dim_cap=cap, t_max=t)
            assert bars_as_tuples(compute_barcode(filt)) == naive_barcode(filt)

    def test_matches_union_find(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            X = random_cloud(rng, int(rng.integers(3, 40)), int(rng.integers(1, 4)))
            reduction = restrict_dim(barcode_of(X, dim_cap=1), 0)
            oracle = dim0_barcode_unionfind(X)
            assert bars_as_tuples(reduction) == bars_as_tuples(oracle)

    def test_dim0_count_equals_point_count(self):
        rng = np.random.default_rng(2)
        for n in (2, 7, 23):
            X = random_cloud(rng, n, 2)
            bc = barcode_of(X, dim_cap=2)
            assert sum(b.dim == 0 for b in bc.bars) == n
            assert all(b.birth == 0.0 for b in bc.bars if b.dim == 0)

    def test_point_order_permutation_invariance(self):
        rng = np.random.default_rng(3)
        X = random_cloud(rng, 10, 2)
        base = bars_as_tuples(barcode_of(X, dim_cap=2))
        for _ in range(3):
            perm = rng.permutation(10)
            assert bars_as_tuples(barcode_of(X[perm], dim_cap=2)) == base

    def test_no_zero_length_bars_with_tied_distances(self):
        # unit square: many simplices share entry values
        square = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
        bc = barcode_of(square, dim_cap=3)
        assert all(b.birth < b.death for b in bc.bars)

    def test_euler_identity_small_clouds(self):
        rng = np.random.default_rng(4)
        for n in (5, 7, 8):
            X = random_cloud(rng, n, 2)
            filt = build_vr_filtration(X, dim_cap=n - 1)
            bc = compute_barcode(filt)
            sb = scale_bounds(X)
            for t in np.linspace(0.0, sb.t_max, 10):
                assert euler_identity_gap(filt, bc, float(t)) == 0

    def test_one_component_and_no_loops_at_stopping_scale(self):
        rng = np.random.default_rng(5)
        for _ in range(8):
            X = random_cloud(rng, int(rng.integers(4, 30)), int(rng.integers(2, 4)))
            bc = barcode_of(X, dim_cap=2)
            essential = [b for b in bc.bars if b.essential_at_cutoff]
            assert len(essential) == 1
            assert essential[0].dim == 0


class TestRestrictDim:
    def test_counts(self):
        bc = barcode_of(sample_circle(30), dim_cap=2)
        assert len(restrict_dim(bc, 0)) == 30
        assert len(restrict_dim(bc, 1)) == 1
        assert len(restrict_dim(bc, 5)) == 0

    def test_partition(self):
        bc = barcode_of(sample_circle(14), dim_cap=2)
        merged = []
        for k in range(3):
            merged.extend(restrict_dim(bc, k).bars)
        assert sorted(bars_as_tuples(Barcode(tuple(merged), bc.t_max))) == bars_as_tuples(bc)

    def test_negative_dim_rejected(self):
        bc = barcode_of([[0.0], [1.0]], dim_cap=1)
        with pytest.raises(ValidationError):
            restrict_dim(bc, -1)


class TestUnionFindOracle:
    def test_collinear(self):
        bc = dim0_barcode_unionfind([[0.0], [1.0], [3.0]], t_max=2.0)
        assert bars_as_tuples(bc) == [
            (0, 0.0, 1.0, False),
            (0, 0.0, 2.0, False),
            (0, 0.0, 2.0, True),
        ]

    def test_uniform_line(self):
        g = 0.25
        X = [[g * i] for i in range(8)]
        bc = dim0_barcode_unionfind(X)
        finite = [b for b in bc.bars if not b.essential_at_cutoff]
        assert len(finite) == 7
        assert all(b.death == g for b in finite)

    def test_components_at_small_cutoff(self):
        X = [[0.0], [0.1], [5.0], [5.1]]
        bc = dim0_barcode_unionfind(X, t_max=1.0)
        essential = [b for b in bc.bars if b.essential_at_cutoff]
        assert len(essential) == 2
