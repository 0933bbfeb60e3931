"""Dyadic-rectangle indexing collection on [0,1]^N with Lebesgue measure.

Index sets are rectangles [0, t] identified by their upper corner t, closed
under coordinatewise-minimum intersection.  Increment regions are differences
u0 \\ (V1 u ... u Vk).  Measures are exact via inclusion-exclusion over corner
products.  Grid-aligned regions decompose into half-open dyadic cells
[a, a + 2^-n) that tile the unit cube, which gives the common-refinement atom
decomposition used by the samplers and the joint-law formulas.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, DegenerateSetError

#: Coordinates are accepted as grid-aligned when within this distance of a
#: grid point; dyadic rationals are exact in binary floating point.
ALIGN_TOL = 1e-9

#: Refuse cell grids with more entries than this (memory guard).
MAX_CELLS = 1 << 24

#: Finest dissection level considered when inferring a common level.
MAX_LEVEL = 24


@dataclass(frozen=True)
class RectSet:
    """A rectangle [0, corner] in [0,1]^N, or the distinguished empty set.

    ``corner=None`` encodes the empty set.  The minimal nonempty set is the
    single point {0}, represented by an all-zero corner; it has measure zero.
    """

    corner: tuple[float, ...] | None

    def __post_init__(self):
        if self.corner is not None:
            c = tuple(float(x) for x in self.corner)
            if len(c) not in (1, 2, 3):
                raise ValueError(f"dimension {len(c)} not supported (use 1, 2 or 3)")
            if any(x < 0.0 or x > 1.0 for x in c):
                raise ValueError(f"corner {c} outside [0,1]^N")
            object.__setattr__(self, "corner", c)

    @classmethod
    def empty(cls) -> "RectSet":
        return cls(None)

    @classmethod
    def origin(cls, dim: int) -> "RectSet":
        """The minimal nonempty set {0}."""
        return cls((0.0,) * dim)

    @property
    def is_empty(self) -> bool:
        return self.corner is None

    @property
    def dim(self) -> int:
        if self.corner is None:
            raise ValueError("empty set has no dimension")
        return len(self.corner)

    @property
    def measure(self) -> float:
        if self.corner is None:
            return 0.0
        return math.prod(self.corner)

    def intersect(self, other: "RectSet") -> "RectSet":
        if self.corner is None or other.corner is None:
            return RectSet.empty()
        return RectSet(tuple(min(a, b) for a, b in zip(self.corner, other.corner)))

    def contains_point(self, t) -> bool:
        if self.corner is None:
            return False
        return all(x <= c for x, c in zip(t, self.corner))

    def contains_rect(self, other: "RectSet") -> bool:
        if other.corner is None:
            return True
        if self.corner is None:
            return False
        return all(b <= a for a, b in zip(self.corner, other.corner))


def intersect_all(rects) -> RectSet:
    out = None
    for r in rects:
        out = r if out is None else out.intersect(r)
    if out is None:
        raise ValueError("empty intersection list")
    return out


@dataclass(frozen=True)
class IncrementRegion:
    """A difference u0 \\ (V1 u ... u Vk) of index rectangles.

    Subtracted sets are stored intersected with u0; genuinely empty ones are
    dropped.  The region may still have measure zero without being empty as a
    point set.
    """

    u0: RectSet
    subtracted: tuple[RectSet, ...] = ()

    def __post_init__(self):
        if self.u0.is_empty:
            clipped: tuple[RectSet, ...] = ()
        else:
            clipped = tuple(
                v.intersect(self.u0) for v in self.subtracted if not v.is_empty
            )
        object.__setattr__(self, "subtracted", clipped)

    @property
    def dim(self) -> int:
        return self.u0.dim

    def contains_point(self, t) -> bool:
        if not self.u0.contains_point(t):
            return False
        return not any(v.contains_point(t) for v in self.subtracted)


def rect(*corner) -> RectSet:
    """Convenience constructor: rect(0.5, 1.0) is [0, (0.5, 1.0)]."""
    return RectSet(tuple(corner))


def region(u0: RectSet, *subtracted: RectSet) -> IncrementRegion:
    return IncrementRegion(u0, tuple(subtracted))


def measure(reg: IncrementRegion) -> float:
    """Lebesgue measure of the region, exact via inclusion-exclusion."""
    if reg.u0.is_empty:
        return 0.0
    total = reg.u0.measure
    subs = reg.subtracted
    removed = 0.0
    for k in range(1, len(subs) + 1):
        sign = 1.0 if k % 2 == 1 else -1.0
        for combo in itertools.combinations(subs, k):
            removed += sign * intersect_all(combo).measure
    return max(total - removed, 0.0)


def union_measure(rects) -> float:
    """Measure of a finite union of rectangles, via inclusion-exclusion."""
    rects = [r for r in rects if not r.is_empty]
    out = 0.0
    for k in range(1, len(rects) + 1):
        sign = 1.0 if k % 2 == 1 else -1.0
        for combo in itertools.combinations(rects, k):
            out += sign * intersect_all(combo).measure
    return max(out, 0.0)


def canonical_form(reg: IncrementRegion) -> tuple[RectSet, tuple[RectSet, ...]]:
    """Reduce a region to the representation U \\ (V1 u ... u Vk).

    U is the minimal rectangle containing the region (its own u0, since the
    top corner of u0 survives any proper subtraction), and the subtracted
    list is pruned of sets dominated by another subtracted set.  Point-set
    empty regions return ``(RectSet.empty(), ())``.
    """
    if reg.u0.is_empty:
        return RectSet.empty(), ()
    u0c = reg.u0.corner
    if any(v.corner == u0c for v in reg.subtracted):
        return RectSet.empty(), ()
    # A subtracted rectangle contributes iff its corner is not inside another
    # subtracted rectangle (unions of down-sets are determined by maximal
    # corners).
    corners = [v.corner for v in reg.subtracted]
    kept = []
    for i, c in enumerate(corners):
        dominated = False
        for j, d in enumerate(corners):
            if i == j:
                continue
            if all(a <= b for a, b in zip(c, d)) and (c != d or j < i):
                dominated = True
                break
        if not dominated:
            kept.append(c)
    kept.sort()
    return reg.u0, tuple(RectSet(c) for c in kept)


def canonicalize(reg: IncrementRegion) -> IncrementRegion:
    u, subs = canonical_form(reg)
    return IncrementRegion(u, subs)


# ---------------------------------------------------------------------------
# Dyadic dissection


def aligned_index(x: float, level: int, what: str = "coordinate") -> int:
    """Map a coordinate to its integer grid index at the given level."""
    scaled = x * (1 << level)
    idx = round(scaled)
    if abs(x - idx / (1 << level)) > ALIGN_TOL:
        raise AlignmentError(f"{what}={x!r} is not on the 2^-{level} grid")
    return idx


def required_level(x: float) -> int | None:
    """Smallest level at which x is grid-aligned, or None."""
    for n in range(MAX_LEVEL + 1):
        if abs(x - round(x * (1 << n)) / (1 << n)) <= ALIGN_TOL:
            return n
    return None


def infer_level(regions, dim: int) -> int:
    """Smallest common dissection level for a family of regions."""
    level = 0
    for reg in regions:
        rects = [] if reg.u0.is_empty else [reg.u0, *reg.subtracted]
        for r in rects:
            for axis, x in enumerate(r.corner):
                n = required_level(x)
                if n is None:
                    raise AlignmentError(
                        f"corner coordinate {x!r} (axis {axis}) is not dyadic"
                    )
                level = max(level, n)
    if (1 << (level * dim)) > MAX_CELLS:
        raise AlignmentError(
            f"common level {level} needs more than {MAX_CELLS} cells in dim {dim}"
        )
    return level


@dataclass(frozen=True)
class DissectionLevel:
    """The dyadic dissection of [0,1]^N into 2^(nN) half-open cells."""

    level: int
    dim: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be nonnegative")
        if (1 << (self.level * self.dim)) > MAX_CELLS:
            raise ValueError("cell grid too large")

    @property
    def cell_width(self) -> float:
        return 2.0 ** -self.level

    @property
    def n_cells(self) -> int:
        return 1 << (self.level * self.dim)

    @property
    def cell_measure(self) -> float:
        return 2.0 ** -(self.level * self.dim)

    @property
    def shape(self) -> tuple[int, ...]:
        return (1 << self.level,) * self.dim

    def cell_of_point(self, t) -> int:
        """Flat index of the cell containing t (upper boundary clamped)."""
        side = 1 << self.level
        idx = tuple(min(int(math.floor(x * side)), side - 1) for x in t)
        return int(np.ravel_multi_index(idx, self.shape))

    def cell_bounds(self, flat: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
        idx = np.unravel_index(flat, self.shape)
        h = self.cell_width
        lower = tuple(float(i) * h for i in idx)
        upper = tuple(float(i + 1) * h for i in idx)
        return lower, upper

    def cell_center(self, flat: int) -> tuple[float, ...]:
        lower, upper = self.cell_bounds(flat)
        return tuple((a + b) / 2.0 for a, b in zip(lower, upper))


def rect_cell_mask(r: RectSet, diss: DissectionLevel) -> np.ndarray:
    """Boolean mask (flat, C-order) of cells contained in the rectangle."""
    mask = np.zeros(diss.shape, dtype=bool)
    if r.is_empty:
        return mask.ravel()
    counts = [aligned_index(x, diss.level) for x in r.corner]
    if all(c > 0 for c in counts):
        mask[tuple(slice(0, c) for c in counts)] = True
    return mask.ravel()


def region_cell_mask(reg: IncrementRegion, diss: DissectionLevel) -> np.ndarray:
    mask = rect_cell_mask(reg.u0, diss)
    for v in reg.subtracted:
        mask &= ~rect_cell_mask(v, diss)
    return mask


class CellUnion:
    """A union of same-level dyadic cells (an atom of a region family)."""

    __slots__ = ("dissection", "cells")

    def __init__(self, dissection: DissectionLevel, cells: np.ndarray):
        self.dissection = dissection
        self.cells = np.asarray(cells, dtype=np.int64)

    @property
    def n_cells(self) -> int:
        return int(self.cells.size)

    @property
    def measure(self) -> float:
        return self.n_cells * self.dissection.cell_measure

    def __repr__(self):
        return (
            f"CellUnion(level={self.dissection.level}, "
            f"n_cells={self.n_cells}, measure={self.measure})"
        )


def atoms(
    regions, level: int | None = None
) -> list[tuple[CellUnion, frozenset[int]]]:
    """Disjoint overlap atoms of a region family with their membership sets.

    Each atom is a union of level-n cells together with the exact set of
    input regions containing it; the atoms partition the union of the
    regions.  All corners must be grid-aligned at the (given or inferred)
    common level.
    """
    regions = list(regions)
    if not regions:
        return []
    if len(regions) > 62:
        raise ValueError("at most 62 regions supported by the atom decomposition")
    dim = None
    for reg in regions:
        if not reg.u0.is_empty:
            dim = reg.u0.dim
            break
    if dim is None:
        return []
    if level is None:
        level = infer_level(regions, dim)
    diss = DissectionLevel(level, dim)
    keys = np.zeros(diss.n_cells, dtype=np.uint64)
    for i, reg in enumerate(regions):
        keys |= region_cell_mask(reg, diss).astype(np.uint64) << np.uint64(i)
    out = []
    for key in np.unique(keys):
        if key == 0:
            continue
        members = frozenset(i for i in range(len(regions)) if (int(key) >> i) & 1)
        out.append((CellUnion(diss, np.flatnonzero(keys == key)), members))
    return out


def approximate_aligned(r: RectSet, level: int) -> tuple[RectSet, float]:
    """Round a rectangle outward to the grid; returns (rectangle, measure gap)."""
    if r.is_empty:
        return r, 0.0
    h = 2.0 ** -level
    corner = tuple(min(1.0, math.ceil(x / h - ALIGN_TOL) * h) for x in r.corner)
    snapped = RectSet(corner)
    return snapped, snapped.measure - r.measure


def gn(r: RectSet, level: int) -> RectSet:
    """Smallest level-n rectangle whose interior contains r (clipped at 1)."""
    if r.is_empty:
        return r
    h = 2.0 ** -level
    corner = tuple(min(1.0, (math.floor(x / h + ALIGN_TOL) + 1) * h) for x in r.corner)
    return RectSet(corner)


def left_neighborhood(r: RectSet, level: int) -> CellUnion:
    """The single cell A \\ union of strictly smaller level-n rectangles."""
    diss = DissectionLevel(level, r.dim)
    counts = [aligned_index(x, level) for x in r.corner]
    if any(c == 0 for c in counts):
        raise DegenerateSetError("left neighborhood needs a positive corner")
    flat = int(np.ravel_multi_index(tuple(c - 1 for c in counts), diss.shape))
    return CellUnion(diss, np.array([flat]))


# ---------------------------------------------------------------------------
# Measure partitions


def _bisect_theta(theta, target: float, lo: float, hi: float, tol: float) -> float:
    """Leftmost t in [lo, hi] with theta(t) = target, for nondecreasing theta."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if theta(mid) >= target:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 and abs(theta(hi) - target) <= tol:
            break
    return hi


def m_partition(u: RectSet, n: int, tol: float = 1e-12) -> list[IncrementRegion]:
    """Split u into n disjoint regions of equal measure along its diagonal.

    Uses the diagonal flow f(t) = [0, t * corner], whose measure map
    theta(t) = t^dim * m(u) is continuous and strictly increasing, and
    bisection on theta to the requested tolerance.
    """
    if n < 1:
        raise ValueError("partition size must be positive")
    if u.is_empty or u.measure == 0.0:
        raise DegenerateSetError("m_partition needs a set of positive measure")
    total = u.measure
    dim = u.dim

    def theta(t: float) -> float:
        return (t ** dim) * total

    cuts = [0.0]
    for i in range(1, n):
        cuts.append(_bisect_theta(theta, total * i / n, cuts[-1], 1.0, tol))
    cuts.append(1.0)
    rects = [RectSet(tuple(t * c for c in u.corner)) for t in cuts]
    parts = [IncrementRegion(rects[1])]
    for i in range(2, n + 1):
        parts.append(IncrementRegion(rects[i], (rects[i - 1],)))
    return parts
