"""Sampling and evaluation of set-indexed process realizations.

A realization is an independently scattered random measure stored as
  * one Gaussian increment per dyadic cell at the spec's dissection level,
  * a list of jump atoms (location in the unit cube, real mark),
  * analytic drift and small-jump compensation rates.

Increments over grid-aligned regions are evaluated exactly; the same value
can be reassembled by inclusion-exclusion over corner rectangles, and the
two code paths must agree.  Batched increment sampling draws one Gaussian
and one compound-sum term per overlap atom, which has the same joint law as
full-path evaluation and keeps Monte Carlo suites fast.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import indexing, streams
from .errors import AlignmentError
from .indexing import DissectionLevel, IncrementRegion, RectSet
from .laws import LevyTriplet


@dataclass(frozen=True)
class ProcessSpec:
    """Everything needed to sample one process: law, cube, grid, seed."""

    triplet: LevyTriplet
    dim: int = 2
    level: int = 6
    seed: int = 0

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError("dim must be 1, 2 or 3")
        if self.level < 1:
            raise ValueError("dissection level must be at least 1")

    @property
    def dissection(self) -> DissectionLevel:
        return DissectionLevel(self.level, self.dim)


class SamplePath:
    """One realization: cell white noise plus a jump-atom list."""

    __slots__ = ("spec", "path_index", "cells", "jump_locs", "jump_marks", "_refined")

    def __init__(self, spec, path_index, cells, jump_locs, jump_marks):
        self.spec = spec
        self.path_index = path_index
        self.cells = cells                  # shape (2^n,) * dim
        self.jump_locs = jump_locs          # (K, dim)
        self.jump_marks = jump_marks        # (K,)
        self._refined = {}                  # memoized conditional splits

    @property
    def drift_rate(self) -> float:
        return self.spec.triplet.gamma

    @property
    def compensation_rate(self) -> float:
        return self.spec.triplet.compensation_rate

    @property
    def effective_rate(self) -> float:
        """Deterministic rate applied per unit measure at evaluation."""
        return self.drift_rate - self.compensation_rate


def sample_path(spec: ProcessSpec, path_index: int = 0) -> SamplePath:
    """Draw one path from stream (seed, path_index); deterministic."""
    rng = streams.stream(spec.seed, streams.PATH, path_index)
    diss = spec.dissection
    sigma = spec.triplet.sigma
    cell_sd = sigma * math.sqrt(diss.cell_measure)
    if sigma > 0:
        cells = rng.normal(0.0, cell_sd, diss.shape)
    else:
        cells = np.zeros(diss.shape)
    total = spec.triplet.nu.total_mass()
    if total > 0:
        count = int(rng.poisson(total))
        locs = rng.random((count, spec.dim))
        marks = spec.triplet.nu.sample_marks(rng, count)
    else:
        locs = np.zeros((0, spec.dim))
        marks = np.zeros(0)
    return SamplePath(spec, path_index, cells, locs, marks)


# ---------------------------------------------------------------------------
# Evaluation


def _marks_in_rect(path: SamplePath, r: RectSet) -> np.ndarray:
    if r.is_empty or path.jump_marks.size == 0:
        return np.zeros(0)
    inside = np.all(path.jump_locs <= np.asarray(r.corner), axis=1)
    return path.jump_marks[inside]


def _marks_in_region(path: SamplePath, reg: IncrementRegion) -> np.ndarray:
    if reg.u0.is_empty or path.jump_marks.size == 0:
        return np.zeros(0)
    inside = np.all(path.jump_locs <= np.asarray(reg.u0.corner), axis=1)
    for v in reg.subtracted:
        inside &= ~np.all(path.jump_locs <= np.asarray(v.corner), axis=1)
    return path.jump_marks[inside]


def _gauss_rect_sum(path: SamplePath, r: RectSet) -> float:
    if r.is_empty:
        return 0.0
    counts = [indexing.aligned_index(x, path.spec.level) for x in r.corner]
    block = path.cells[tuple(slice(0, c) for c in counts)]
    return math.fsum(block.ravel().tolist())


def _gauss_region_sum(path: SamplePath, reg: IncrementRegion) -> float:
    mask = indexing.region_cell_mask(reg, path.spec.dissection)
    return math.fsum(path.cells.ravel()[mask].tolist())


def rect_value(path: SamplePath, r: RectSet) -> float:
    """X_U for a grid-aligned rectangle U."""
    return (
        path.effective_rate * r.measure
        + _gauss_rect_sum(path, r)
        + math.fsum(_marks_in_rect(path, r).tolist())
    )


def evaluate(path: SamplePath, reg: IncrementRegion) -> float:
    """Increment of the path over a grid-aligned region (exact, additive)."""
    if reg.u0.is_empty:
        return 0.0
    return (
        path.effective_rate * indexing.measure(reg)
        + _gauss_region_sum(path, reg)
        + math.fsum(_marks_in_region(path, reg).tolist())
    )


def inclusion_exclusion_value(reg: IncrementRegion, corner_fn) -> float:
    """Assemble the increment over u0 \\ union(V_i) from rectangle values.

    ``corner_fn`` maps a RectSet to its process value; the increment is the
    alternating sum over intersections of u0 with subsets of the V_i.
    """
    terms = [corner_fn(reg.u0)]
    subs = reg.subtracted
    for k in range(1, len(subs) + 1):
        sign = -1.0 if k % 2 == 1 else 1.0
        for combo in itertools.combinations(subs, k):
            terms.append(sign * corner_fn(indexing.intersect_all([reg.u0, *combo])))
    return math.fsum(terms)


def evaluate_incl_excl(path: SamplePath, reg: IncrementRegion) -> float:
    """Same increment as ``evaluate``, via corner values; the paths agree."""
    if reg.u0.is_empty:
        return 0.0
    return inclusion_exclusion_value(reg, lambda r: rect_value(path, r))


def evaluate_union(path: SamplePath, rects) -> float:
    """X over a finite union of rectangles, by inclusion-exclusion."""
    rects = [r for r in rects if not r.is_empty]
    terms = []
    for k in range(1, len(rects) + 1):
        sign = 1.0 if k % 2 == 1 else -1.0
        for combo in itertools.combinations(rects, k):
            terms.append(sign * rect_value(path, indexing.intersect_all(combo)))
    return math.fsum(terms)


def approximate_region(reg: IncrementRegion, level: int):
    """Snap a region's rectangles outward to the grid; returns (region, gap)."""
    u0, gap = indexing.approximate_aligned(reg.u0, level)
    subs = []
    for v in reg.subtracted:
        sv, g = indexing.approximate_aligned(v, level)
        subs.append(sv)
        gap += g
    return IncrementRegion(u0, tuple(subs)), gap


# ---------------------------------------------------------------------------
# Finite-dimensional distributions


def fdd_char(spec: ProcessSpec, regions, lambdas, level: int | None = None) -> complex:
    """Analytic joint characteristic value E[exp(i sum_j lam_j DX_{C_j})].

    Decomposes the regions into disjoint overlap atoms; each atom of measure
    m contributes exp(m * psi(sum of the lambdas of the regions covering
    it)).
    """
    regions = list(regions)
    lambdas = list(lambdas)
    if len(regions) != len(lambdas):
        raise ValueError("need one lambda per region")
    total = 0.0 + 0.0j
    for atom, members in indexing.atoms(regions, level=level):
        lam = math.fsum(lambdas[i] for i in members)
        total += atom.measure * spec.triplet.psi(lam)
    return complex(np.exp(total))


# ---------------------------------------------------------------------------
# Batched Monte Carlo increments


def _atom_layout(spec: ProcessSpec, regions, level=None):
    decomposition = indexing.atoms(regions, level=level)
    measures = np.array([atom.measure for atom, _ in decomposition])
    membership = np.zeros((len(decomposition), len(regions)))
    for a, (_, members) in enumerate(decomposition):
        for r in members:
            membership[a, r] = 1.0
    return measures, membership


def sample_increments(
    spec: ProcessSpec,
    regions,
    n_paths: int,
    seed: int | None = None,
    chunk_size: int = 4096,
    threads: int = 1,
    level: int | None = None,
) -> np.ndarray:
    """Increments of n_paths independent realizations over the regions.

    Returns an (n_paths, len(regions)) array whose rows are i.i.d. copies of
    the joint increment vector.  Sampling is per overlap atom (one Gaussian
    plus one compound-sum term each), which reproduces the joint law of
    ``evaluate`` exactly.  Chunk c of a run uses stream (seed, BATCH, c), so
    results do not depend on chunking order or thread count.
    """
    regions = list(regions)
    if seed is None:
        seed = spec.seed
    measures, membership = _atom_layout(spec, regions, level=level)
    triplet = spec.triplet
    sigma = triplet.sigma
    jump_total = triplet.nu.total_mass()
    region_measures = membership.T @ measures
    base = triplet.gamma - triplet.compensation_rate

    def one_chunk(c: int) -> np.ndarray:
        rng = streams.stream(seed, streams.BATCH, c)
        rows = min(chunk_size, n_paths - c * chunk_size)
        atom_vals = np.zeros((rows, measures.size))
        if sigma > 0 and measures.size:
            atom_vals += rng.normal(0.0, 1.0, (rows, measures.size)) * (
                sigma * np.sqrt(measures)
            )
        if jump_total > 0 and measures.size:
            counts = rng.poisson(jump_total * measures, (rows, measures.size))
            total = int(counts.sum())
            if total:
                marks = triplet.nu.sample_marks(rng, total)
                flat = counts.ravel()
                offsets = np.zeros(flat.size + 1, dtype=np.int64)
                np.cumsum(flat, out=offsets[1:])
                seg = np.zeros(flat.size)
                nonempty = flat > 0
                if nonempty.any():
                    seg[nonempty] = np.add.reduceat(marks, offsets[:-1][nonempty])
                atom_vals += seg.reshape(rows, measures.size)
        return atom_vals @ membership + base * region_measures

    n_chunks = (n_paths + chunk_size - 1) // chunk_size
    if threads > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one_chunk, range(n_chunks)))
    else:
        parts = [one_chunk(c) for c in range(n_chunks)]
    return np.vstack(parts) if parts else np.zeros((0, len(regions)))
