"""Increasing flows of index sets and measure-standard projections.

An elementary flow is a continuous increasing path of rectangles, realized
as a coordinatewise-nondecreasing polyline of corners.  The measure map
theta(t) = m[f(t)] is continuous and nondecreasing; projecting a process
along f with the time change theta^-1 yields a one-parameter process whose
clock is the measure itself, removing time-change effects.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from . import indexing, simulate
from .errors import AlignmentError
from .indexing import IncrementRegion, RectSet


@dataclass(frozen=True)
class ElementaryFlow:
    """Piecewise-linear increasing map t -> [0, corner(t)].

    ``vertices`` are coordinatewise nondecreasing corners; ``params`` are the
    strictly increasing parameter breakpoints (default: uniform on [0, 1]).
    """

    vertices: tuple[tuple[float, ...], ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        verts = tuple(tuple(float(x) for x in v) for v in self.vertices)
        if len(verts) < 2:
            raise ValueError("a flow needs at least two vertices")
        dim = len(verts[0])
        for a, b in zip(verts, verts[1:]):
            if len(b) != dim:
                raise ValueError("inconsistent vertex dimensions")
            if any(y < x for x, y in zip(a, b)):
                raise ValueError(f"vertices not nondecreasing: {a} -> {b}")
        params = self.params
        if not params:
            params = tuple(i / (len(verts) - 1) for i in range(len(verts)))
        params = tuple(float(t) for t in params)
        if len(params) != len(verts):
            raise ValueError("need one parameter per vertex")
        if any(t >= u for t, u in zip(params, params[1:])):
            raise ValueError("params must be strictly increasing")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "params", params)
        # Continuity and monotonicity of the measure map, checked on a mesh.
        mesh = np.linspace(params[0], params[-1], 1000)
        values = [self.theta(t) for t in mesh]
        worst = max(
            (a - b) for a, b in zip(values, values[1:])
        )
        if worst > 1e-12:
            raise ValueError(f"measure map decreases by {worst:.3e} along the flow")

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    @property
    def domain(self) -> tuple[float, float]:
        return self.params[0], self.params[-1]

    def corner_at(self, t: float) -> tuple[float, ...]:
        a, b = self.domain
        if not a - 1e-12 <= t <= b + 1e-12:
            raise ValueError(f"parameter {t!r} outside [{a}, {b}]")
        t = min(max(t, a), b)
        i = bisect.bisect_right(self.params, t) - 1
        i = min(i, len(self.params) - 2)
        t0, t1 = self.params[i], self.params[i + 1]
        w = (t - t0) / (t1 - t0)
        v0, v1 = self.vertices[i], self.vertices[i + 1]
        return tuple(x + w * (y - x) for x, y in zip(v0, v1))

    def value(self, t: float) -> RectSet:
        return RectSet(self.corner_at(t))

    def theta(self, t: float) -> float:
        return math.prod(self.corner_at(t))

    @property
    def theta_range(self) -> tuple[float, float]:
        return self.theta(self.params[0]), self.theta(self.params[-1])

    def theta_inverse(self, s: float, tol: float = 1e-12) -> float:
        """Leftmost parameter with theta(t) = s, by bisection.

        On flat stretches of theta the leftmost parameter is returned, so the
        inverse is deterministic.
        """
        lo_s, hi_s = self.theta_range
        if not lo_s - 1e-12 <= s <= hi_s + 1e-12:
            raise ValueError(f"s={s!r} outside theta range [{lo_s}, {hi_s}]")
        s = min(max(s, lo_s), hi_s)
        a, b = self.domain
        if self.theta(a) >= s:
            return a
        lo, hi = a, b
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.theta(mid) >= s:
                hi = mid
            else:
                lo = mid
            if hi - lo <= 1e-14 and abs(self.theta(hi) - s) <= tol:
                break
        return hi

    def with_params(self, params) -> "ElementaryFlow":
        """Same geometric path, reparametrized by new breakpoints."""
        return ElementaryFlow(self.vertices, tuple(params))


def theta(flow: ElementaryFlow, t: float) -> float:
    return flow.theta(t)


def theta_inverse(flow: ElementaryFlow, s: float) -> float:
    return flow.theta_inverse(s)


def diagonal_flow(dim: int) -> ElementaryFlow:
    """f(t) = [0, (t, ..., t)] on [0, 1]; theta(t) = t^dim."""
    return ElementaryFlow(((0.0,) * dim, (1.0,) * dim))


@dataclass(frozen=True)
class SimpleFlow:
    """A finite composition of elementary flows with accumulated unions.

    On segment i the value is f_i(t) together with the terminal sets of the
    earlier segments, so the flow takes values in finite unions of
    rectangles and is nested increasing.
    """

    segments: tuple[ElementaryFlow, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("a simple flow needs at least one segment")
        for f, g in zip(segs, segs[1:]):
            if abs(f.domain[1] - g.domain[0]) > 1e-12:
                raise ValueError("segment domains must abut")
            if f.dim != g.dim:
                raise ValueError("segment dimensions differ")
        object.__setattr__(self, "segments", segs)
        # Joint agreement: the accumulated union just before and just after a
        # breakpoint must be the same set.
        for i in range(len(segs) - 1):
            t = segs[i].domain[1]
            before = _prune_union(self._union_at(t, i))
            after = _prune_union(self._union_at(t, i + 1))
            if {r.corner for r in before} != {r.corner for r in after}:
                raise ValueError(f"segments disagree at breakpoint {t!r}")

    @property
    def dim(self) -> int:
        return self.segments[0].dim

    @property
    def domain(self) -> tuple[float, float]:
        return self.segments[0].domain[0], self.segments[-1].domain[1]

    def _segment_index(self, t: float) -> int:
        for i, f in enumerate(self.segments):
            if t <= f.domain[1] + 1e-12:
                return i
        return len(self.segments) - 1

    def _union_at(self, t: float, i: int) -> list[RectSet]:
        parts = [self.segments[j].value(self.segments[j].domain[1]) for j in range(i)]
        parts.append(self.segments[i].value(min(t, self.segments[i].domain[1])))
        return parts

    def value(self, t: float) -> tuple[RectSet, ...]:
        a, b = self.domain
        if not a - 1e-12 <= t <= b + 1e-12:
            raise ValueError(f"parameter {t!r} outside [{a}, {b}]")
        t = min(max(t, a), b)
        return tuple(_prune_union(self._union_at(t, self._segment_index(t))))

    def theta(self, t: float) -> float:
        return indexing.union_measure(self.value(t))


def _prune_union(rects) -> list[RectSet]:
    """Drop rectangles contained in another one; sort for determinism."""
    corners = [r.corner for r in rects if not r.is_empty]
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
    return [RectSet(c) for c in sorted(kept)]


@dataclass(frozen=True)
class ProjectionResult:
    """Trajectory of a measure-standard projection on a mesh of s-values."""

    s: tuple[float, ...]
    values: tuple[float, ...]
    gaps: tuple[float, ...]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values)


def project(
    path: simulate.SamplePath,
    flow: ElementaryFlow,
    mesh,
    snap: bool = False,
) -> ProjectionResult:
    """Evaluate s -> X_{f(theta^-1(s))} on the mesh.

    With ``snap=False`` every projected rectangle must be grid-aligned at the
    path's level; with ``snap=True`` rectangles are rounded outward to the
    grid and the measure gap is reported per mesh point.
    """
    svals, values, gaps = [], [], []
    level = path.spec.level
    for s in mesh:
        t = flow.theta_inverse(float(s))
        r = flow.value(t)
        gap = 0.0
        if snap:
            r, gap = indexing.approximate_aligned(r, level)
        else:
            for axis, x in enumerate(r.corner):
                try:
                    indexing.aligned_index(x, level)
                except AlignmentError as exc:
                    raise AlignmentError(
                        f"projected corner (axis {axis}) at s={s!r}: {exc}"
                    ) from exc
        svals.append(float(s))
        values.append(simulate.rect_value(path, r))
        gaps.append(gap)
    return ProjectionResult(tuple(svals), tuple(values), tuple(gaps))


def projection_regions(flow: ElementaryFlow, mesh) -> list[IncrementRegion]:
    """Consecutive increment regions f(theta^-1(s_k)) \\ f(theta^-1(s_{k-1}))."""
    rects = [flow.value(flow.theta_inverse(float(s))) for s in mesh]
    out = [IncrementRegion(rects[0])]
    for prev, cur in zip(rects, rects[1:]):
        out.append(IncrementRegion(cur, (prev,)))
    return out
