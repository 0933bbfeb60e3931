import math

import numpy as np
import pytest

from setlevy import indexing
from setlevy.errors import AlignmentError, DegenerateSetError
from setlevy.indexing import (
    DissectionLevel,
    IncrementRegion,
    RectSet,
    atoms,
    canonical_form,
    canonicalize,
    m_partition,
    measure,
    rect,
    region,
)


def cell_count_measure(reg, level):
    """Oracle: measure by counting dyadic cells whose center lies inside."""
    diss = DissectionLevel(level, reg.u0.dim)
    inside = sum(
        1 for f in range(diss.n_cells) if reg.contains_point(diss.cell_center(f))
    )
    return inside * diss.cell_measure


class TestMeasure:
    def test_full_unit_square(self):
        assert measure(region(rect(1.0, 1.0))) == 1.0

    def test_half_removed(self):
        assert measure(region(rect(1.0, 1.0), rect(0.5, 1.0))) == 0.5

    def test_two_overlapping_slabs(self):
        reg = region(rect(1.0, 1.0), rect(0.5, 1.0), rect(1.0, 0.5))
        # inclusion-exclusion: 1 - (0.5 + 0.5 - 0.25)
        assert measure(reg) == pytest.approx(0.25, abs=1e-15)
        assert cell_count_measure(reg, 4) == pytest.approx(0.25, abs=1e-15)

    def test_empty_region_is_zero(self):
        assert measure(region(RectSet.empty())) == 0.0
        assert measure(region(rect(0.5, 0.5), rect(1.0, 1.0))) == 0.0

    def test_matches_cell_count_on_random_regions(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            corners = rng.integers(0, 9, size=(3, 2)) / 8.0
            reg = region(
                RectSet(tuple(np.maximum(corners[0], 0.25))),
                RectSet(tuple(corners[1])),
                RectSet(tuple(corners[2])),
            )
            assert measure(reg) == pytest.approx(cell_count_measure(reg, 5), abs=1e-12)


class TestCanonicalForm:
    def test_clips_to_u0(self):
        # a subtracted set wider than u0 is stored clipped
        reg = IncrementRegion(rect(1.0, 1.0), (rect(1.0, 0.5),))
        u, subs = canonical_form(reg)
        assert u.corner == (1.0, 1.0)
        assert [s.corner for s in subs] == [(1.0, 0.5)]

    def test_full_subtraction_is_empty(self):
        u, subs = canonical_form(region(rect(1.0, 1.0), rect(1.0, 1.0)))
        assert u.is_empty and subs == ()

    def test_prunes_redundant_set(self):
        reg = region(rect(0.5, 0.5), rect(0.25, 0.25), rect(0.1, 0.1))
        u, subs = canonical_form(reg)
        assert u.corner == (0.5, 0.5)
        assert [s.corner for s in subs] == [(0.25, 0.25)]
        # cell-level set equality with the unpruned region
        pruned = IncrementRegion(u, subs)
        diss = DissectionLevel(6, 2)
        for f in range(diss.n_cells):
            c = diss.cell_center(f)
            assert reg.contains_point(c) == pruned.contains_point(c)

    def test_idempotent_and_point_set_preserving(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            corners = rng.integers(0, 17, size=(4, 2)) / 16.0
            reg = region(
                RectSet(tuple(np.maximum(corners[0], 0.25))),
                *[RectSet(tuple(c)) for c in corners[1:]],
            )
            once = canonicalize(reg)
            twice = canonicalize(once)
            assert canonical_form(once) == canonical_form(twice)
            for pt in rng.random((50, 2)):
                assert reg.contains_point(pt) == once.contains_point(pt)


class TestAtoms:
    def test_single_region(self):
        reg = region(rect(0.5, 0.5))
        out = atoms([reg])
        assert len(out) == 1
        atom, members = out[0]
        assert members == frozenset({0})
        assert atom.measure == pytest.approx(0.25)

    def test_nested_pair(self):
        out = atoms([region(rect(1.0, 1.0)), region(rect(0.5, 1.0))])
        got = {members: atom.measure for atom, members in out}
        assert got == {
            frozenset({0, 1}): pytest.approx(0.5),
            frozenset({0}): pytest.approx(0.5),
        }

    def test_three_overlapping_bucketed_by_membership(self):
        regions = [
            region(rect(0.75, 0.75)),
            region(rect(1.0, 0.5)),
            region(rect(0.5, 1.0)),
        ]
        out = atoms(regions, level=4)
        assert 1 <= len(out) <= 7
        # oracle: bucket cells by direct point membership
        diss = DissectionLevel(4, 2)
        buckets = {}
        for f in range(diss.n_cells):
            c = diss.cell_center(f)
            key = frozenset(i for i, r in enumerate(regions) if r.contains_point(c))
            if key:
                buckets[key] = buckets.get(key, 0) + 1
        got = {members: atom.n_cells for atom, members in out}
        assert got == buckets

    def test_atoms_partition_the_union(self):
        regions = [
            region(rect(1.0, 1.0), rect(0.5, 0.5)),
            region(rect(0.75, 0.75)),
        ]
        out = atoms(regions)
        union = indexing.union_measure([rect(1.0, 1.0)])
        assert sum(a.measure for a, _ in out) == pytest.approx(union, abs=1e-12)

    def test_additivity_over_disjoint_regions(self):
        regions = [
            region(rect(0.5, 0.5)),
            region(rect(1.0, 1.0), rect(0.5, 1.0), rect(1.0, 0.5)),
        ]
        out = atoms(regions)
        total = sum(a.measure for a, _ in out)
        assert total == pytest.approx(sum(measure(r) for r in regions), abs=1e-12)

    def test_alignment_error_names_coordinate(self):
        with pytest.raises(AlignmentError, match="0.3"):
            atoms([region(rect(0.3, 1.0))], level=4)


class TestMPartition:
    def test_identity_partition(self):
        parts = m_partition(rect(1.0, 1.0), 1)
        assert len(parts) == 1
        assert measure(parts[0]) == pytest.approx(1.0)

    def test_diagonal_split_in_two(self):
        parts = m_partition(rect(1.0, 1.0), 2)
        # analytic oracle: the cut solves t^2 = 0.5
        assert parts[0].u0.corner[0] == pytest.approx(0.7071067811865476, abs=1e-9)
        for p in parts:
            assert measure(p) == pytest.approx(0.5, abs=1e-12)

    def test_one_dimensional_quarters(self):
        parts = m_partition(rect(1.0), 4)
        for p in parts:
            assert measure(p) == pytest.approx(0.25, abs=1e-12)

    def test_sizes_and_total(self):
        u = rect(0.75, 0.5)
        parts = m_partition(u, 7)
        sizes = [measure(p) for p in parts]
        assert max(sizes) - min(sizes) <= 2e-12
        assert sum(sizes) == pytest.approx(u.measure, abs=7e-12)

    def test_degenerate_set_rejected(self):
        with pytest.raises(DegenerateSetError):
            m_partition(rect(0.0, 1.0), 2)


class TestDissection:
    def test_cells_tile_the_cube(self):
        diss = DissectionLevel(3, 2)
        assert diss.n_cells == 64
        assert diss.n_cells * diss.cell_measure == pytest.approx(1.0)

    def test_cell_of_point_unique_and_nested(self):
        rng = np.random.default_rng(11)
        for pt in rng.random((50, 2)):
            coarse = DissectionLevel(4, 2)
            fine = DissectionLevel(5, 2)
            lo_c, hi_c = coarse.cell_bounds(coarse.cell_of_point(pt))
            lo_f, hi_f = fine.cell_bounds(fine.cell_of_point(pt))
            assert all(a <= x < b for a, x, b in zip(lo_c, pt, hi_c))
            assert all(a <= c and d <= b for a, c, d, b in zip(lo_c, lo_f, hi_f, hi_c))

    def test_dissecting_system_separates_points(self):
        rng = np.random.default_rng(13)
        found = 0
        while found < 100:
            x, y = rng.random(2), rng.random(2)
            if np.max(np.abs(x - y)) <= 2.0 ** -8:
                continue
            found += 1
            diss = DissectionLevel(9, 2)
            assert diss.cell_of_point(x) != diss.cell_of_point(y)

    def test_left_neighborhood_is_one_cell(self):
        # the cell below a grid corner equals the rectangle minus every grid
        # rectangle that does not contain it
        level = 2
        h = 0.25
        a = rect(0.5, 0.75)
        cell = indexing.left_neighborhood(a, level)
        assert cell.n_cells == 1
        others = [
            rect(i * h, j * h)
            for i in range(5)
            for j in range(5)
            if not (i * h >= 0.5 and j * h >= 0.75)
        ]
        reg = canonicalize(IncrementRegion(a, tuple(others)))
        assert measure(reg) == pytest.approx(cell.measure, abs=1e-15)
        lo, hi = cell.dissection.cell_bounds(int(cell.cells[0]))
        center = tuple((x + y) / 2 for x, y in zip(lo, hi))
        assert reg.contains_point(center)

    def test_gn_expands_and_shrinks_to_identity(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            t = tuple(rng.uniform(0.05, 0.9, 2))
            a = RectSet(t)
            prev = None
            for n in (2, 4, 6, 8):
                g = indexing.gn(a, n)
                assert all(x < y for x, y in zip(t, g.corner))  # interior contains
                if prev is not None:
                    assert prev.contains_rect(g)                 # decreasing in n
                prev = g
            gap = max(y - x for x, y in zip(t, indexing.gn(a, 20).corner))
            assert gap <= 2.0 ** -20 + 1e-12                     # intersection is a

    def test_approximate_aligned_reports_gap(self):
        snapped, gap = indexing.approximate_aligned(RectSet((0.3, 0.6)), 2)
        assert snapped.corner == (0.5, 0.75)
        assert gap == pytest.approx(0.375 - 0.18)

    def test_infer_level_rejects_non_dyadic(self):
        with pytest.raises(AlignmentError, match="0.1"):
            indexing.infer_level([region(rect(0.1, 1.0))], 2)


class TestRectSet:
    def test_intersection_is_coordinatewise_min(self):
        assert rect(0.5, 1.0).intersect(rect(1.0, 0.25)).corner == (0.5, 0.25)

    def test_empty_propagates(self):
        assert rect(0.5, 1.0).intersect(RectSet.empty()).is_empty

    def test_origin_has_measure_zero(self):
        assert RectSet.origin(2).measure == 0.0

    def test_corner_outside_cube_rejected(self):
        with pytest.raises(ValueError):
            rect(1.5, 0.5)
