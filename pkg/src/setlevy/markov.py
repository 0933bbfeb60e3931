"""Volume-parameterized transition kernels and semilattice joint laws.

For an independent-increment, measure-stationary process the transition
kernel between nested index unions depends only on the measure of the added
set: Q(v, x, B) = mu^v(B - x).  The kernel is spatially homogeneous by
construction (a shift in x shifts B) and measure-homogeneous by carrying
only the volume parameter.  Chapman-Kolmogorov composition then reduces to
convolution of grid laws, and the joint law of left-neighborhood increments
over an intersection-closed family collapses to a product of independent
factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from . import indexing
from .errors import ConsistencyError
from .indexing import IncrementRegion, RectSet
from .laws import GridLaw, LevyTriplet, _as_intervals, mu_power_t, default_half_width


class TransitionKernel:
    """Grid evaluator for Q(v, x, B) = mu^v(B - x) with a shared grid.

    The grid is fixed at construction (wide enough for ``v_max``), so laws
    for different volumes share a step and compose by discrete convolution.
    """

    def __init__(
        self,
        triplet: LevyTriplet,
        v_max: float = 1.0,
        n_nodes: int = 1 << 14,
        half_width: float | None = None,
    ):
        self.triplet = triplet
        self.n_nodes = int(n_nodes)
        if half_width is None:
            half_width = default_half_width(triplet, v_max, n_nodes)
        self.half_width = float(half_width)
        self._laws: dict[float, GridLaw] = {}

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / self.n_nodes

    def law(self, v: float) -> GridLaw:
        """mu^v on the kernel grid (cached)."""
        if v < 0:
            raise ValueError("volume must be nonnegative")
        v = float(v)
        if v not in self._laws:
            self._laws[v] = mu_power_t(
                self.triplet, v, n_nodes=self.n_nodes, half_width=self.half_width
            )
        return self._laws[v]

    def eval(self, v: float, x: float, B) -> float:
        """Probability Q(v, x, B) for B a finite union of intervals."""
        shifted = tuple((lo - x, hi - x) for lo, hi in _as_intervals(B))
        return self.law(v).prob_of(shifted)


def kernel_eval(kernel: TransitionKernel, v: float, x: float, B) -> float:
    return kernel.eval(v, x, B)


def chapman_kolmogorov_check(
    kernel: TransitionKernel, v1: float, v2: float
) -> float:
    """Max grid discrepancy between composed kernels and the direct law.

    Composes mu^{v1} and mu^{v2} by discrete convolution and compares with
    mu^{v1+v2}, both per node and in cumulative form; mass convolved outside
    the grid window counts as error.
    """
    a = kernel.law(v1)
    b = kernel.law(v2)
    direct = kernel.law(v1 + v2)
    masses = fftconvolve(a.masses, b.masses)
    origin = a.origin + b.origin
    lo = origin - direct.origin
    window = masses[lo : lo + direct.masses.size]
    outside = masses.sum() - window.sum()
    node_err = float(np.max(np.abs(window - direct.masses)))
    cum_err = float(np.max(np.abs(np.cumsum(window) - np.cumsum(direct.masses))))
    return max(node_err, cum_err, abs(float(outside)))


# ---------------------------------------------------------------------------
# Semilattice joint laws


def validate_semilattice(rects) -> list[RectSet]:
    """Check intersection closure and consistent ordering; first element {0}.

    A consistent ordering never places a set after one of its supersets.
    """
    rects = list(rects)
    if not rects:
        raise ConsistencyError("empty semilattice")
    dim = rects[0].dim
    if rects[0].corner != (0.0,) * dim:
        raise ConsistencyError("first element must be the minimal set {0}")
    corners = {r.corner for r in rects}
    for i, a in enumerate(rects):
        for j, b in enumerate(rects):
            if j <= i:
                continue
            inter = a.intersect(b).corner
            if inter not in corners:
                raise ConsistencyError(
                    f"not intersection-closed: elements {i} and {j} "
                    f"meet in {inter} which is missing"
                )
            if a.contains_rect(b) and a.corner != b.corner:
                raise ConsistencyError(
                    f"ordering violation: element {i} {a.corner} strictly "
                    f"contains element {j} {b.corner}"
                )
    return rects


def left_neighborhoods(rects) -> list[IncrementRegion]:
    """The disjoint differences A_i \\ union of the earlier elements."""
    rects = validate_semilattice(rects)
    return [
        IncrementRegion(r, tuple(rects[:i])) for i, r in enumerate(rects)
    ]


@dataclass(frozen=True)
class SemilatticeLaw:
    """Joint law of left-neighborhood increments over a semilattice.

    By spatial homogeneity the chain of kernels over accumulated unions
    collapses: the increments are independent with laws mu^{m(L_i)} held in
    ``factors``.  ``chain_prob`` evaluates the uncollapsed kernel chain
    numerically for cross-checks.
    """

    elements: tuple[RectSet, ...]
    neighborhoods: tuple[IncrementRegion, ...]
    volumes: tuple[float, ...]
    factors: tuple[GridLaw, ...]
    kernel: TransitionKernel

    def product_prob(self, Bs) -> float:
        """P(all increments in their sets), product form."""
        if len(Bs) != len(self.factors):
            raise ValueError("need one set per neighborhood")
        out = 1.0
        for law, B in zip(self.factors, Bs):
            out *= law.prob_of(B)
        return out

    def chain_prob(self, Bs) -> float:
        """Same probability assembled through the kernel chain.

        Starts from the point mass at zero (the minimal set has measure
        zero) and applies each kernel restricted to its increment set; the
        restriction acts on the convolution variable.
        """
        if len(Bs) != len(self.factors):
            raise ValueError("need one set per neighborhood")
        if self.volumes[0] != 0.0:
            raise ConsistencyError("chain must start at the minimal set")
        state = self.factors[0].masses * _indicator_on_grid(self.factors[0], Bs[0])
        for law, B in zip(self.factors[1:], Bs[1:]):
            step = law.masses * _indicator_on_grid(law, B)
            state = fftconvolve(state, step)
        return float(state.sum())

    def marginal_of_element(self, k: int) -> GridLaw:
        """Law of the increment over element k, convolved from its factors."""
        target = self.elements[k]
        out = None
        for element, law in zip(self.elements, self.factors):
            if target.contains_rect(element):
                out = law if out is None else _convolve_window(out, law)
        assert out is not None  # element 0 is contained in every element
        return out

    def collapse_tv(self) -> float:
        """Max TV between factor-convolved marginals and direct laws."""
        worst = 0.0
        for k, element in enumerate(self.elements):
            direct = self.kernel.law(element.measure)
            worst = max(worst, self.marginal_of_element(k).total_variation(direct))
        return worst


def _indicator_on_grid(law: GridLaw, B) -> np.ndarray:
    """Indicator of B on the law's nodes, half weight on boundary nodes.

    Matches the half-weight convention of ``GridLaw.prob_of`` so the chain
    and product forms agree on interval families.
    """
    x = law.x
    mask = np.zeros(x.size)
    tol = 1e-9
    for lo, hi in _as_intervals(B):
        interior = (x > lo + tol) & (x < hi - tol)
        mask = np.maximum(mask, np.where(interior, 1.0, 0.0))
        boundary = (np.abs(x - lo) <= tol) | (np.abs(x - hi) <= tol)
        mask = np.maximum(mask, np.where(boundary, 0.5, 0.0))
    return mask


def _convolve_window(a: GridLaw, b: GridLaw) -> GridLaw:
    """Convolution trimmed back to the kernel window around the origin."""
    masses = fftconvolve(a.masses, b.masses)
    masses[masses < 0.0] = 0.0
    origin = a.origin + b.origin
    size = max(a.masses.size, b.masses.size)
    lo = origin - size // 2
    window = masses[max(lo, 0) : lo + size]
    return GridLaw(a.h, window, origin - max(lo, 0), check=False)


def semilattice_fdd(kernel: TransitionKernel, rects) -> SemilatticeLaw:
    """Joint law of left-neighborhood increments over a consistent family."""
    rects = validate_semilattice(rects)
    regions = left_neighborhoods(rects)
    volumes = tuple(indexing.measure(reg) for reg in regions)
    factors = tuple(kernel.law(v) for v in volumes)
    return SemilatticeLaw(tuple(rects), tuple(regions), volumes, factors, kernel)
