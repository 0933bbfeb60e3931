"""Point-mass jumps, counting measures and the Gaussian/jump decomposition.

The point-mass jump at t is the limit of increments over the nested dyadic
cells containing t.  For stored paths the Gaussian field is refined beyond
its sampled level by conditional splitting: a cell increment splits into
2^dim children that sum to it exactly, each child deterministic given the
path's seed and the cell index, so concurrent refinements agree.

The decomposition splits a path into a Gaussian-plus-drift part and a
compensated jump part; summing both reproduces ``evaluate`` exactly when the
truncation level matches the sampled spec.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import indexing, simulate, streams
from .errors import UnsupportedRefinementError, UnsupportedSetError
from .indexing import DissectionLevel, IncrementRegion, RectSet
from .laws import _as_intervals


@dataclass(frozen=True)
class JumpRecord:
    """A detected jump: location, mark estimate and the detecting level."""

    location: tuple[float, ...]
    mark: float
    detection_level: int


def _validate_jump_set(B) -> tuple[tuple[float, float], ...]:
    """Require B to be bounded away from zero."""
    intervals = _as_intervals(B)
    for lo, hi in intervals:
        if lo <= 0.0 <= hi:
            raise UnsupportedSetError(
                f"interval ({lo}, {hi}] touches 0; jump sets must be bounded away from it"
            )
    return intervals


def _mark_in_set(marks: np.ndarray, intervals) -> np.ndarray:
    hit = np.zeros(marks.shape, dtype=bool)
    for lo, hi in intervals:
        hit |= (marks > lo) & (marks <= hi)
    return hit


# ---------------------------------------------------------------------------
# Gaussian cell values at any level


def _aggregate_gauss(path: simulate.SamplePath, level: int) -> np.ndarray:
    """Cell Gaussian increments at a level at or below the stored one."""
    stored = path.spec.level
    if level > stored:
        raise ValueError("aggregation only goes to coarser levels")
    cells = path.cells
    factor = 1 << (stored - level)
    for axis in range(path.spec.dim):
        side = cells.shape[axis] // factor
        cells = cells.reshape(
            cells.shape[:axis] + (side, factor) + cells.shape[axis + 1 :]
        ).sum(axis=axis + 1)
    return cells


def _gauss_cell(path: simulate.SamplePath, level: int, index: tuple[int, ...]) -> float:
    """Gaussian increment of one cell, refining below the stored level.

    A parent value g over measure v splits into 2^dim children drawn as
    independent N(0, sigma^2 v / 2^dim) conditioned to sum to g.  Children
    are cached and keyed by (level, index) through a dedicated stream, so
    the refinement is deterministic and query-order independent.
    """
    spec = path.spec
    stored = spec.level
    if level <= stored:
        factor = 1 << (stored - level)
        block = path.cells[
            tuple(slice(i * factor, (i + 1) * factor) for i in index)
        ]
        return math.fsum(block.ravel().tolist())
    key = (level, index)
    if key in path._refined:
        return path._refined[key]
    parent_index = tuple(i // 2 for i in index)
    parent = _gauss_cell(path, level - 1, parent_index)
    n_children = 1 << spec.dim
    child_measure = 2.0 ** -(level * spec.dim)
    if spec.triplet.sigma > 0:
        flat_parent = int(
            np.ravel_multi_index(parent_index, (1 << (level - 1),) * spec.dim)
        )
        rng = streams.stream(
            spec.seed, streams.REFINE, path.path_index, level - 1, flat_parent
        )
        u = rng.normal(0.0, spec.triplet.sigma * math.sqrt(child_measure), n_children)
        children = u - u.mean() + parent / n_children
    else:
        children = np.full(n_children, parent / n_children)
    shape = (2,) * spec.dim
    for flat, child in enumerate(children):
        offset = np.unravel_index(flat, shape)
        child_index = tuple(2 * p + o for p, o in zip(parent_index, offset))
        path._refined[(level, child_index)] = float(child)
    return path._refined[key]


def cell_increment(path: simulate.SamplePath, level: int, index: tuple[int, ...]) -> float:
    """Full increment (drift, noise, jumps, compensation) of one cell."""
    diss = DissectionLevel(level, path.spec.dim)
    h = diss.cell_width
    lower = np.array([i * h for i in index])
    upper = lower + h
    if path.jump_marks.size:
        inside = np.all((path.jump_locs >= lower) & (path.jump_locs < upper), axis=1)
        marks = path.jump_marks[inside]
    else:
        marks = np.zeros(0)
    return (
        path.effective_rate * diss.cell_measure
        + _gauss_cell(path, level, index)
        + math.fsum(marks.tolist())
    )


def point_mass_jump(path: simulate.SamplePath, t, nmax: int) -> float:
    """Increment over the level-nmax dyadic cell containing t."""
    side = 1 << nmax
    index = tuple(min(int(math.floor(x * side)), side - 1) for x in t)
    return cell_increment(path, nmax, index)


# ---------------------------------------------------------------------------
# Counting measure and partial sums


def count_jumps(path: simulate.SamplePath, U: RectSet, B) -> int:
    """Number of jump atoms in U with mark in B (exact, from the atom list)."""
    intervals = _validate_jump_set(B)
    marks = simulate._marks_in_rect(path, U)
    return int(_mark_in_set(marks, intervals).sum())


def partial_sum(path: simulate.SamplePath, U: RectSet, B) -> float:
    """Sum of marks of jump atoms in U with mark in B."""
    intervals = _validate_jump_set(B)
    marks = simulate._marks_in_rect(path, U)
    return math.fsum(marks[_mark_in_set(marks, intervals)].tolist())


def extract_jumps(
    path: simulate.SamplePath, level: int, threshold: float
) -> list[JumpRecord]:
    """Cell-scan jump detector: cells whose increment exceeds the threshold.

    The mark estimate removes the deterministic per-cell rate; what remains
    is the jump mark plus the cell's Gaussian noise.
    """
    spec = path.spec
    diss = DissectionLevel(level, spec.dim)
    if level <= spec.level:
        gauss = _aggregate_gauss(path, level).ravel()
    else:
        side = 1 << level
        gauss = np.array(
            [
                _gauss_cell(path, level, tuple(np.unravel_index(f, (side,) * spec.dim)))
                for f in range(diss.n_cells)
            ]
        )
    values = gauss + path.effective_rate * diss.cell_measure
    if path.jump_marks.size:
        cell_of = np.zeros(path.jump_marks.size, dtype=np.int64)
        for k, loc in enumerate(path.jump_locs):
            cell_of[k] = diss.cell_of_point(loc)
        np.add.at(values, cell_of, path.jump_marks)
    hits = np.flatnonzero(np.abs(values) > threshold)
    base = path.effective_rate * diss.cell_measure
    return [
        JumpRecord(diss.cell_center(int(f)), float(values[f] - base), level)
        for f in hits
    ]


def scan_count_and_sum(
    path: simulate.SamplePath, U: RectSet, B, level: int, threshold: float
) -> tuple[int, float]:
    """Recover count_jumps / partial_sum from a cell scan instead of atoms."""
    intervals = _validate_jump_set(B)
    records = extract_jumps(path, level, threshold)
    count = 0
    total = []
    for rec in records:
        if U.contains_point(rec.location) and _mark_in_set(
            np.array([rec.mark]), intervals
        )[0]:
            count += 1
            total.append(rec.mark)
    return count, math.fsum(total)


# ---------------------------------------------------------------------------
# Gaussian / compensated-jump decomposition


class LevyItoDecomposition:
    """Split of a path into Gaussian-plus-drift and compensated-jump parts."""

    def __init__(self, path: simulate.SamplePath, epsilons):
        self.path = path
        eps = tuple(float(e) for e in epsilons)
        if not eps:
            raise ValueError("need at least one truncation level")
        if any(a < b for a, b in zip(eps, eps[1:])):
            raise ValueError("truncation levels must be decreasing")
        if any(e < 0 for e in eps):
            raise ValueError("truncation levels must be nonnegative")
        cutoff = path.spec.triplet.nu.truncation_cutoff()
        if cutoff > 0 and eps[-1] < cutoff:
            raise UnsupportedRefinementError(
                f"epsilon {eps[-1]} is below the sampled truncation {cutoff}; "
                "the path carries no jumps at that scale"
            )
        self.epsilons = eps

    @property
    def final_epsilon(self) -> float:
        return self.epsilons[-1]

    def gaussian_part(self, reg: IncrementRegion) -> float:
        """Drift plus cell noise over the region (triplet (sigma, gamma, 0))."""
        return self.path.drift_rate * indexing.measure(reg) + simulate._gauss_region_sum(
            self.path, reg
        )

    def jump_part(self, reg: IncrementRegion, eps: float | None = None) -> float:
        """Large jumps plus compensated jumps of size above eps."""
        if eps is None:
            eps = self.final_epsilon
        marks = simulate._marks_in_region(self.path, reg)
        big = marks[np.abs(marks) > 1.0]
        mid = marks[(np.abs(marks) > eps) & (np.abs(marks) <= 1.0)]
        compensation = self.path.spec.triplet.nu.trunc_mean(eps, 1.0)
        return (
            math.fsum(big.tolist())
            + math.fsum(mid.tolist())
            - indexing.measure(reg) * compensation
        )

    def reconstruction_error(self, regions) -> float:
        """Max |gaussian + jump - evaluate| over the regions."""
        worst = 0.0
        for reg in regions:
            rebuilt = self.gaussian_part(reg) + self.jump_part(reg)
            worst = max(worst, abs(rebuilt - simulate.evaluate(self.path, reg)))
        return worst

    def tail_curve(self, rects=None) -> list[tuple[float, float]]:
        """Per epsilon, the max over a dyadic family of the tail discrepancy.

        The discrepancy at eps is |jump_part(eps) - jump_part(final)|; the
        curve monitors the uniform-in-U convergence of the compensated sum.
        """
        if rects is None:
            rects = dyadic_family(self.path.spec.dim, 2)
        out = []
        for eps in self.epsilons:
            worst = 0.0
            for r in rects:
                reg = IncrementRegion(r)
                worst = max(
                    worst, abs(self.jump_part(reg, eps) - self.jump_part(reg))
                )
            out.append((eps, worst))
        return out


def dyadic_family(dim: int, level: int) -> list[RectSet]:
    """All rectangles with corners on the level-n grid (positive corners)."""
    side = 1 << level
    h = 1.0 / side
    corners = [()]
    for _ in range(dim):
        corners = [c + (i * h,) for c in corners for i in range(1, side + 1)]
    return [RectSet(c) for c in corners]


def levy_ito_decompose(path: simulate.SamplePath, epsilons) -> LevyItoDecomposition:
    """Validate the truncation ladder and wrap the path for decomposition.

    Finite-activity specs admit a final epsilon of zero (every sampled jump
    is kept and the reconstruction is exact); truncated specs reject ladders
    finer than their cutoff.
    """
    return LevyItoDecomposition(path, epsilons)


def gaussian_sup_diagnostic(path: simulate.SamplePath, levels) -> dict[int, float]:
    """Per level, the max absolute cell increment (Gaussian paths only)."""
    if path.spec.triplet.nu.total_mass() != 0:
        raise ValueError("sup diagnostic applies to paths with no jump part")
    out = {}
    for level in levels:
        diss = DissectionLevel(level, path.spec.dim)
        if level <= path.spec.level:
            gauss = _aggregate_gauss(path, level).ravel()
        else:
            side = 1 << level
            gauss = np.array(
                [
                    _gauss_cell(
                        path, level, tuple(np.unravel_index(f, (side,) * path.spec.dim))
                    )
                    for f in range(diss.n_cells)
                ]
            )
        out[level] = float(
            np.max(np.abs(gauss + path.effective_rate * diss.cell_measure))
        )
    return out


# ---------------------------------------------------------------------------
# Batched jump statistics


def jump_statistics(
    spec: simulate.ProcessSpec,
    rects,
    B,
    n_paths: int,
    seed: int | None = None,
    chunk_size: int = 4096,
) -> tuple[np.ndarray, np.ndarray]:
    """Counts and mark sums of jumps in each rectangle with mark in B.

    Returns (counts, sums), each of shape (n_paths, len(rects)).  Chunk c
    uses stream (seed, BATCH, c): deterministic and order-independent.
    """
    intervals = _validate_jump_set(B)
    rects = list(rects)
    if seed is None:
        seed = spec.seed
    nu = spec.triplet.nu
    lam = nu.total_mass()
    counts = np.zeros((n_paths, len(rects)), dtype=np.int64)
    sums = np.zeros((n_paths, len(rects)))
    n_chunks = (n_paths + chunk_size - 1) // chunk_size
    for c in range(n_chunks):
        rng = streams.stream(seed, streams.BATCH, c)
        lo = c * chunk_size
        rows = min(chunk_size, n_paths - lo)
        per_path = rng.poisson(lam, rows)
        total = int(per_path.sum())
        locs = rng.random((total, spec.dim))
        marks = nu.sample_marks(rng, total)
        path_of = np.repeat(np.arange(rows), per_path)
        in_B = _mark_in_set(marks, intervals)
        for j, r in enumerate(rects):
            pick = np.all(locs <= np.asarray(r.corner), axis=1) & in_B
            counts[lo : lo + rows, j] = np.bincount(path_of[pick], minlength=rows)
            sums[lo : lo + rows, j] = np.bincount(
                path_of[pick], weights=marks[pick], minlength=rows
            )
    return counts, sums
