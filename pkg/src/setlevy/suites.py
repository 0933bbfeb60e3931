"""Named verification suites behind the ``verify`` subcommand.

Each suite checks one theorem cluster at desk scale and returns a list of
TestReport entries.  Everything is deterministic given (seed, paths): all
randomness flows through derived sub-seeds, so a rerun reproduces the same
reports byte for byte.
"""

from __future__ import annotations

import math

import numpy as np

from . import flows, indexing, jumps, laws, markov, simulate, stats, streams
from .indexing import IncrementRegion, RectSet
from .laws import (
    CompoundJumps,
    LevyTriplet,
    NormalMark,
    PointMass,
    TruncStableJumps,
    TwoPointMark,
    brownian_triplet,
    compound_poisson_triplet,
    convolve,
    mu_power_t,
)
from .simulate import ProcessSpec
from .stats import TestReport, check

DEFAULT_PATHS = 10_000


# ---------------------------------------------------------------------------
# Shipped fixtures


def shipped_triplets() -> dict[str, LevyTriplet]:
    return {
        "brownian": brownian_triplet(1.0, 0.0),
        "poisson": compound_poisson_triplet(2.0, PointMass(1.0)),
        "compound-gauss": compound_poisson_triplet(1.0, NormalMark(0.0, 1.0)),
        "trunc-stable": LevyTriplet(0.0, 0.0, TruncStableJumps(1.5, 1e-3, 1.0, 0.01)),
    }


def shipped_specs(seed: int) -> dict[str, ProcessSpec]:
    return {
        name: ProcessSpec(trip, dim=2, level=6, seed=streams.derive_seed(seed, streams.SUITE, i))
        for i, (name, trip) in enumerate(sorted(shipped_triplets().items()))
    }


def shipped_flows() -> dict[str, flows.ElementaryFlow]:
    """Three flows whose equal-measure mesh points are grid vertices."""
    stair2 = (
        (0.0, 0.0), (0.5, 0.25), (0.5, 0.5), (0.75, 0.5), (1.0, 0.5),
        (1.0, 0.625), (1.0, 0.75), (1.0, 0.875), (1.0, 1.0),
    )
    stair3 = (
        (0.0, 0.0, 0.0), (0.5, 0.5, 0.5), (0.5, 0.5, 1.0), (0.5, 0.75, 1.0),
        (0.5, 1.0, 1.0), (0.625, 1.0, 1.0), (0.75, 1.0, 1.0),
        (0.875, 1.0, 1.0), (1.0, 1.0, 1.0),
    )
    return {
        "line-1d": flows.ElementaryFlow(((0.0,), (1.0,))),
        "staircase-2d": flows.ElementaryFlow(stair2),
        "staircase-3d": flows.ElementaryFlow(stair3),
    }


def random_regions(rng, count: int, dim: int = 2, level: int = 4, max_sub: int = 2):
    """Seeded grid-aligned regions with measure at least one cell row."""
    side = 1 << level
    h = 1.0 / side
    out = []
    while len(out) < count:
        u0 = RectSet(tuple(int(rng.integers(side // 4, side + 1)) * h for _ in range(dim)))
        subs = []
        for _ in range(int(rng.integers(0, max_sub + 1))):
            subs.append(
                RectSet(tuple(int(rng.integers(0, side + 1)) * h for _ in range(dim)))
            )
        reg = IncrementRegion(u0, tuple(subs))
        if indexing.measure(reg) >= 1.0 / 16.0:
            out.append(reg)
    return out


def equal_measure_pairs() -> list[tuple[IncrementRegion, IncrementRegion]]:
    """Grid-exact equal-measure region pairs of different shapes."""
    r = indexing.rect
    reg = indexing.region
    return [
        (reg(r(0.5, 0.5)), reg(r(1.0, 0.25))),                              # 1/4
        (reg(r(0.5, 0.25)), reg(r(1.0, 1.0), r(1.0, 0.875))),               # 1/8
        (reg(r(1.0, 0.5)), reg(r(1.0, 1.0), r(1.0, 0.5))),                  # 1/2
        (reg(r(0.25, 0.25)), reg(r(0.0625, 1.0))),                          # 1/16
        (reg(r(1.0, 0.5), r(0.25, 0.5)), reg(r(0.375, 1.0))),               # 3/8
    ]


_Z_GRID = tuple(np.linspace(-4.0, 4.0, 17)[np.linspace(-4.0, 4.0, 17) != 0.0])


# ---------------------------------------------------------------------------
# Helpers


def _ecf_deviation(spec, regions, n_paths, seed, z=_Z_GRID, threads=1):
    """Max |empirical cf - exp(m psi)| over the regions and the z grid."""
    inc = simulate.sample_increments(spec, regions, n_paths, seed=seed, threads=threads)
    worst = 0.0
    for j, reg in enumerate(regions):
        est = stats.ecf(inc[:, j], z)
        ref = np.exp(indexing.measure(reg) * spec.triplet.psi(np.asarray(z)))
        worst = max(worst, est.max_abs_error(ref))
    return worst


def _suite_seed(seed: int, tag: int) -> int:
    return streams.derive_seed(seed, streams.SUITE, tag)


# ---------------------------------------------------------------------------
# Suites


def suite_semigroup(seed: int, paths: int, threads: int = 1) -> list[TestReport]:
    """Convolution powers compose: mu^0.5 * mu^0.5 = mu^1 per shipped law."""
    reports = []
    for name, trip in sorted(shipped_triplets().items()):
        half = mu_power_t(trip, 0.5)
        full = mu_power_t(trip, 1.0)
        tv = convolve(half, half).total_variation(full)
        reports.append(check(f"semigroup-tv-{name}", tv, 1e-5))
    return reports


def suite_canonical(seed: int, paths: int, threads: int = 1) -> list[TestReport]:
    """Increment laws match exp(m(C) psi) for every shipped process."""
    reports = []
    for i, (name, spec) in enumerate(sorted(shipped_specs(seed).items())):
        rng = streams.stream(seed, streams.SUITE, 100 + i)
        regions = random_regions(rng, 5)
        dev = _ecf_deviation(
            spec, regions, paths, _suite_seed(seed, 200 + i), threads=threads
        )
        reports.append(
            check(f"canonical-ecf-{name}", dev, 5.0 / math.sqrt(paths), regions=5)
        )
    return reports


def suite_fdd(seed: int, paths: int, threads: int = 1) -> list[TestReport]:
    """Joint increment laws over overlapping families match the atom formula."""
    r = indexing.rect
    reg = indexing.region
    families = {
        "nested": [reg(r(1.0, 1.0)), reg(r(0.5, 1.0))],
        "crossing": [reg(r(1.0, 0.5)), reg(r(0.5, 1.0))],
        "triple": [reg(r(0.75, 0.75)), reg(r(1.0, 0.5)), reg(r(0.5, 1.0))],
    }
    reports = []
    specs = shipped_specs(seed)
    for s, spec_name in enumerate(("brownian", "compound-gauss")):
        spec = specs[spec_name]
        for f, (fam_name, regions) in enumerate(sorted(families.items())):
            rng = streams.stream(seed, streams.SUITE, 300 + 10 * s + f)
            lam = rng.uniform(-2.0, 2.0, (8, len(regions)))
            inc = simulate.sample_increments(
                spec, regions, paths, seed=_suite_seed(seed, 400 + 10 * s + f),
                threads=threads,
            )
            emp = stats.ecf_joint(inc, lam)
            ref = np.array(
                [simulate.fdd_char(spec, regions, row) for row in lam]
            )
            dev = float(np.max(np.abs(emp - ref)))
            reports.append(
                check(
                    f"fdd-ecf-{spec_name}-{fam_name}", dev, 5.0 / math.sqrt(paths)
                )
            )
    # Analytic factorization over disjoint regions.
    spec = specs["brownian"]
    disjoint = [
        reg(r(0.5, 0.5)),
        reg(r(1.0, 1.0), r(0.5, 1.0), r(1.0, 0.5)),
    ]
    lam = (0.7, -1.3)
    joint = simulate.fdd_char(spec, disjoint, lam)
    product = simulate.fdd_char(spec, [disjoint[0]], [lam[0]]) * simulate.fdd_char(
        spec, [disjoint[1]], [lam[1]]
    )
    reports.append(check("fdd-disjoint-product", abs(joint - product), 1e-12))
    return reports


def suite_stationarity(seed: int, paths: int, threads: int = 1) -> list[TestReport]:
    """Equal-measure regions have equal increment laws (two-sample KS)."""
    specs = shipped_specs(seed)
    pairs = equal_measure_pairs()
    alpha = stats.bonferroni(0.01, 2 * len(pairs))
    rejections = 0
    worst_p = 1.0
    for s, spec_name in enumerate(("brownian", "trunc-stable")):
        spec = specs[spec_name]
        for k, (rega, regb) in enumerate(pairs):
            a = simulate.sample_increments(
                spec, [rega], paths, seed=_suite_seed(seed, 500 + 100 * s + 2 * k),
                threads=threads,
            )[:, 0]
            b = simulate.sample_increments(
                spec, [regb], paths, seed=_suite_seed(seed, 500 + 100 * s + 2 * k + 1),
                threads=threads,
            )[:, 0]
            _, p = stats.ks_two_sample(a, b)
            worst_p = min(worst_p, p)
            if p < alpha:
                rejections += 1
    return [
        TestReport(
            "stationarity-ks-rejections",
            float(rejections),
            1.0,
            rejections <= 1,
            {"pairs": 2 * len(pairs), "alpha": alpha, "min_p": worst_p},
        )
    ]


def suite_representation(seed: int, paths: int, threads: int = 1) -> list[TestReport]:
    """Evaluation is representation-independent and finitely additive."""
    trip = LevyTriplet(1.0, 0.3, CompoundJumps(2.0, NormalMark(0.0, 1.0)))
    spec = ProcessSpec(trip, dim=2, level=6, seed=_suite_seed(seed, 600))
    path = simulate.sample_path(spec)
    rng = streams.stream(seed, streams.SUITE, 601)
    regions = random_regions(rng, 50, level=6, max_sub=3)
    worst_dual = 0.0
    worst_canon = 0.0
    for reg in regions:
        direct = simulate.evaluate(path, reg)
        worst_dual = max(worst_dual, abs(direct - simulate.evaluate_incl_excl(path, reg)))
        worst_canon = max(
            worst_canon, abs(direct - simulate.evaluate(path, indexing.canonicalize(reg)))
        )
    # Disjoint additivity: a rectangle split along a random axis cut.
    worst_add = 0.0
    side = 1 << spec.level
    for _ in range(25):
        cut = int(rng.integers(1, side)) / side
        whole = IncrementRegion(RectSet((1.0, 1.0)))
        left = IncrementRegion(RectSet((cut, 1.0)))
        right = IncrementRegion(RectSet((1.0, 1.0)), (RectSet((cut, 1.0)),))
        worst_add = max(
            worst_add,
            abs(
                simulate.evaluate(path, left)
                + simulate.evaluate(path, right)
                - simulate.evaluate(path, whole)
            ),
        )
    return [
        check("representation-dual", worst_dual, 1e-12, regions=len(regions)),
        check("representation-canonical", worst_canon, 1e-12),
        check("additivity-disjoint", worst_add, 1e-12),
    ]


def suite_flows(seed: int, paths: int, threads: int = 1) -> list[TestReport]:
    """Projections along flows are one-parameter processes with the same law."""
    reports = []
    mesh = np.linspace(0.0, 1.0, 9)
    delta = 1.0 / 8.0
    z = np.asarray(_Z_GRID)
    triplets = {
        "brownian": brownian_triplet(1.0, 0.0),
        "compound-gauss": compound_poisson_triplet(1.0, NormalMark(0.0, 1.0)),
    }
    levels = {"line-1d": 6, "staircase-2d": 4, "staircase-3d": 3}
    for fi, (flow_name, flow) in enumerate(sorted(shipped_flows().items())):
        dim = flow.dim
        regions = flows.projection_regions(flow, mesh)[1:]   # 8 equal steps
        for ti, (trip_name, trip) in enumerate(sorted(triplets.items())):
            spec = ProcessSpec(
                trip, dim=dim, level=levels[flow_name],
                seed=_suite_seed(seed, 700 + 10 * fi + ti),
            )
            inc = simulate.sample_increments(
                spec, regions, paths,
                seed=_suite_seed(seed, 800 + 10 * fi + ti), threads=threads,
            )
            # (a) per-step law matches exp(delta_s * psi)
            ref = np.exp(delta * trip.psi(z))
            dev = 0.0
            for k in range(inc.shape[1]):
                est = stats.ecf(inc[:, k], z)
                dev = max(dev, est.max_abs_error(ref))
            reports.append(
                check(
                    f"flow-cf-{flow_name}-{trip_name}", dev, 5.0 / math.sqrt(paths)
                )
            )
            # (b) stationarity across disjoint equal steps
            alpha = stats.bonferroni(0.01, inc.shape[1] - 1)
            rej = 0
            for k in range(1, inc.shape[1]):
                _, p = stats.ks_two_sample(inc[:, 0], inc[:, k])
                if p < alpha:
                    rej += 1
            reports.append(
                TestReport(
                    f"flow-stationarity-{flow_name}-{trip_name}",
                    float(rej), 1.0, rej <= 1, {"alpha": alpha},
                )
            )
            # (c) pairwise independence factorization
            zp = [(1.0, 1.0), (2.0, -1.0), (-1.5, 0.5), (0.5, 2.5)]
            gap_worst, radius = 0.0, 0.0
            for a, b in ((0, 1), (2, 5), (3, 7)):
                gap, radius = stats.factorization_gap(inc[:, (a, b)], zp)
                gap_worst = max(gap_worst, gap)
            reports.append(
                check(
                    f"flow-independence-{flow_name}-{trip_name}", gap_worst, radius
                )
            )
    # Monotone reparametrization leaves trajectories unchanged.
    flow = shipped_flows()["staircase-2d"]
    params = np.asarray(flow.params)
    squashed = flow.with_params(tuple(params ** 2))
    spec = ProcessSpec(
        brownian_triplet(), dim=2, level=4, seed=_suite_seed(seed, 900)
    )
    path = simulate.sample_path(spec)
    base = flows.project(path, flow, mesh)
    other = flows.project(path, squashed, mesh)
    dev = max(abs(a - b) for a, b in zip(base.values, other.values))
    reports.append(check("flow-reparametrization", dev, 1e-12))
    return reports


def suite_markov(seed: int, paths: int, threads: int = 1) -> list[TestReport]:
    """Kernel composition and semilattice product collapse on the grid."""
    reports = []
    kernels = {
        "gaussian": markov.TransitionKernel(brownian_triplet()),
        "compound-poisson": markov.TransitionKernel(
            compound_poisson_triplet(1.0, PointMass(1.0))
        ),
    }
    for name, kernel in sorted(kernels.items()):
        worst = 0.0
        for v1, v2 in ((0.0, 1.0), (0.5, 0.5), (0.3, 0.7)):
            worst = max(worst, markov.chapman_kolmogorov_check(kernel, v1, v2))
        reports.append(check(f"chapman-kolmogorov-{name}", worst, 1e-5))
        a = RectSet((1.0, 0.5))
        b = RectSet((0.5, 1.0))
        semilattice = [RectSet((0.0, 0.0)), a.intersect(b), a, b]
        law = markov.semilattice_fdd(kernel, semilattice)
        reports.append(check(f"semilattice-collapse-{name}", law.collapse_tv(), 1e-5))
        Bs = [(-10.0, 10.0), (-1.0, 1.0), (-0.5, 2.0), (0.0, 3.0)]
        chain = law.chain_prob(Bs)
        product = law.product_prob(Bs)
        reports.append(
            check(f"semilattice-chain-vs-product-{name}", abs(chain - product), 1e-8)
        )
    return reports


def suite_jumps(seed: int, paths: int, threads: int = 1) -> list[TestReport]:
    """Counting-measure moments, independence and exact jump recovery."""
    reports = []
    trip = compound_poisson_triplet(2.0, TwoPointMark((2.0, -0.5), 0.5))
    spec = ProcessSpec(trip, dim=2, level=6, seed=_suite_seed(seed, 1000))
    cases = [
        (RectSet((0.5, 0.5)), (1.0, np.inf)),
        (RectSet((1.0, 0.5)), (-1.0, -0.25)),
        (RectSet((1.0, 1.0)), (1.5, 3.0)),
    ]
    worst_sigmas = 0.0
    for i, (U, B) in enumerate(cases):
        counts, _ = jumps.jump_statistics(
            spec, [U], B, paths, seed=_suite_seed(seed, 1100 + i)
        )
        expected = U.measure * trip.nu.nu_measure(B)
        se = counts.std(ddof=1) / math.sqrt(paths)
        worst_sigmas = max(worst_sigmas, abs(counts.mean() - expected) / se)
    reports.append(check("jump-mean-measure", worst_sigmas, 3.0, cases=len(cases)))

    # Disjoint mark sets give independent counting processes.
    U = RectSet((1.0, 1.0))
    c1, _ = jumps.jump_statistics(spec, [U], (1.0, np.inf), paths,
                                  seed=_suite_seed(seed, 1200))
    c2, _ = jumps.jump_statistics(spec, [U], (-1.0, -0.25), paths,
                                  seed=_suite_seed(seed, 1200))
    corr = float(np.corrcoef(c1[:, 0], c2[:, 0])[0, 1])
    reports.append(check("jump-disjoint-correlation", abs(corr), 3.0 / math.sqrt(paths)))

    # Compound law of the restricted partial-sum process.
    _, sums = jumps.jump_statistics(spec, [RectSet((0.5, 1.0))], (1.0, np.inf),
                                    paths, seed=_suite_seed(seed, 1300))
    z = np.asarray(_Z_GRID)
    est = stats.ecf(sums[:, 0], z)
    ref = np.exp(0.5 * trip.nu.exp_m1_integral(z, (1.0, np.inf)))
    reports.append(
        check("jump-partial-sum-cf", est.max_abs_error(ref), 5.0 / math.sqrt(paths))
    )

    # Exact recovery of planted jumps by cell scan at a separating level.
    rec_trip = LevyTriplet(1.0, 0.3, CompoundJumps(3.0, TwoPointMark((2.0, -1.5), 0.6)))
    rec_spec = ProcessSpec(rec_trip, dim=2, level=8, seed=_suite_seed(seed, 1400))
    n_paths_rec = 100
    failures = 0
    worst_mark_err = 0.0
    tol = 4.0 * 2.0 ** -8  # 4 sigma at level 8 in two dimensions
    for r in range(n_paths_rec):
        path = simulate.sample_path(rec_spec, r)
        records = jumps.extract_jumps(path, 8, threshold=0.75)
        if len(records) != path.jump_marks.size:
            failures += 1
            continue
        got = sorted(rec.mark for rec in records)
        want = sorted(path.jump_marks.tolist())
        err = max((abs(a - b) for a, b in zip(got, want)), default=0.0)
        worst_mark_err = max(worst_mark_err, err)
        if err > tol:
            failures += 1
    reports.append(
        TestReport(
            "jump-exact-recovery", float(failures), 0.0, failures == 0,
            {"paths": n_paths_rec, "worst_mark_error": worst_mark_err, "mark_tol": tol},
        )
    )
    return reports


def suite_levy_ito(seed: int, paths: int, threads: int = 1) -> list[TestReport]:
    """Reconstruction exactness and the compensated-tail convergence curve."""
    reports = []
    specs = shipped_specs(seed)
    regions = [
        indexing.region(indexing.rect(0.5, 0.5)),
        indexing.region(indexing.rect(1.0, 1.0), indexing.rect(0.5, 0.5)),
        indexing.region(indexing.rect(0.75, 1.0), indexing.rect(0.75, 0.25)),
    ]
    for name in ("poisson", "compound-gauss"):
        path = simulate.sample_path(specs[name])
        dec = jumps.levy_ito_decompose(path, [0.1, 0.01, 0.0])
        err = dec.reconstruction_error(regions)
        reports.append(check(f"levy-ito-reconstruction-{name}", err, 1e-12))
    spec = specs["trunc-stable"]
    epsilons = (0.1, 0.01, 0.001)
    err = 0.0
    curves = []
    for r in range(32):
        path = simulate.sample_path(spec, r)
        dec = jumps.levy_ito_decompose(path, epsilons)
        err = max(err, dec.reconstruction_error(regions))
        curves.append([v for _, v in dec.tail_curve()])
    reports.append(check("levy-ito-reconstruction-trunc-stable", err, 1e-12))
    # Root-mean-square of the per-path sup discrepancies: the compensated
    # remainder shrinks with epsilon, so the aggregated curve decreases.
    rms = np.sqrt(np.mean(np.square(np.asarray(curves)), axis=0))
    worst_increase = float(np.max(np.diff(rms)))
    reports.append(
        TestReport(
            "levy-ito-tail-monotone",
            worst_increase,
            0.0,
            worst_increase <= 0.0 and rms[-1] == 0.0,
            {"epsilons": list(epsilons), "rms_curve": [float(v) for v in rms]},
        )
    )
    return reports


def suite_gaussian_continuity(seed: int, paths: int, threads: int = 1) -> list[TestReport]:
    """Cell-sup decay of Gaussian paths and the no-jump dichotomy."""
    spec = ProcessSpec(
        brownian_triplet(), dim=2, level=8, seed=_suite_seed(seed, 1500)
    )
    n_paths = 200
    levels = range(3, 9)
    decreasing = 0
    no_jumps = 0
    threshold = 4.0 * 2.0 ** -3  # 4 sigma cells at the scan level
    for r in range(n_paths):
        path = simulate.sample_path(spec, r)
        sup = jumps.gaussian_sup_diagnostic(path, levels)
        vals = [sup[n] for n in levels]
        if all(a > b for a, b in zip(vals, vals[1:])):
            decreasing += 1
        if not jumps.extract_jumps(path, 3, threshold=threshold):
            no_jumps += 1
    return [
        TestReport(
            "gaussian-sup-decay",
            float(decreasing) / n_paths,
            0.95,
            decreasing >= 0.95 * n_paths,
            {"paths": n_paths},
        ),
        TestReport(
            "gaussian-no-jumps",
            float(no_jumps) / n_paths,
            0.99,
            no_jumps >= 0.99 * n_paths,
            {"threshold": threshold},
        ),
    ]


def suite_brownian_core(seed: int, paths: int, threads: int = 1) -> list[TestReport]:
    """Core invariants of the white-noise process, bundled for the CLI."""
    reports = []
    spec = ProcessSpec(brownian_triplet(), dim=2, level=6,
                       seed=_suite_seed(seed, 1600))
    r = indexing.rect
    reg = indexing.region

    # Covariance of rectangle values is the measure of the intersection.
    U, V = r(0.75, 0.5), r(0.5, 1.0)
    inc = simulate.sample_increments(
        spec, [reg(U), reg(V)], paths, seed=_suite_seed(seed, 1601), threads=threads
    )
    prod = inc[:, 0] * inc[:, 1]
    se = prod.std(ddof=1) / math.sqrt(paths)
    sigmas = abs(prod.mean() - U.intersect(V).measure) / se
    reports.append(check("brownian-covariance", sigmas, 3.0))

    # Canonical law of one increment.
    dev = _ecf_deviation(
        spec, [reg(r(1.0, 1.0), r(0.5, 0.5))], paths,
        _suite_seed(seed, 1602), threads=threads,
    )
    reports.append(check("brownian-ecf", dev, 5.0 / math.sqrt(paths)))

    # Stationarity across one equal-measure pair.
    rega, regb = equal_measure_pairs()[0]
    a = simulate.sample_increments(spec, [rega], paths,
                                   seed=_suite_seed(seed, 1603), threads=threads)[:, 0]
    b = simulate.sample_increments(spec, [regb], paths,
                                   seed=_suite_seed(seed, 1604), threads=threads)[:, 0]
    _, p = stats.ks_two_sample(a, b)
    reports.append(TestReport("brownian-stationarity-ks", p, 0.01, p >= 0.01))

    # Independence over disjoint regions.
    disjoint = [reg(r(0.5, 0.5)), reg(r(1.0, 1.0), r(0.5, 1.0), r(1.0, 0.5))]
    inc = simulate.sample_increments(spec, disjoint, paths,
                                     seed=_suite_seed(seed, 1605), threads=threads)
    gap, radius = stats.factorization_gap(
        inc, [(1.0, 1.0), (2.0, -1.0), (-0.5, 1.5), (2.5, 2.5)]
    )
    reports.append(check("brownian-independence", gap, radius))

    # Dual representation and additivity on one path.
    path = simulate.sample_path(spec)
    rng = streams.stream(seed, streams.SUITE, 1606)
    worst = 0.0
    for region_ in random_regions(rng, 50, level=6, max_sub=3):
        worst = max(
            worst,
            abs(simulate.evaluate(path, region_) - simulate.evaluate_incl_excl(path, region_)),
        )
    reports.append(check("brownian-dual-representation", worst, 1e-12))
    left = reg(r(0.5, 1.0))
    right = reg(r(1.0, 1.0), r(0.5, 1.0))
    whole = reg(r(1.0, 1.0))
    add_err = abs(
        simulate.evaluate(path, left)
        + simulate.evaluate(path, right)
        - simulate.evaluate(path, whole)
    )
    reports.append(check("brownian-additivity", add_err, 1e-12))

    # Continuity in probability along shrinking dyadic rectangles.
    corners = [0.5 + 2.0 ** -k for k in range(2, 11)]
    shells = [reg(r(c, c), r(0.5, 0.5)) for c in corners]
    inc = simulate.sample_increments(spec, shells, paths,
                                     seed=_suite_seed(seed, 1607), threads=threads)
    probs = (np.abs(inc) > 0.1).mean(axis=0)
    ses = np.sqrt(probs * (1 - probs) / paths)
    monotone = all(
        probs[i + 1] <= probs[i] + 2 * math.hypot(ses[i], ses[i + 1])
        for i in range(len(probs) - 1)
    )
    reports.append(
        TestReport(
            "brownian-continuity-in-probability",
            float(probs[-1]),
            0.05,
            bool(monotone and probs[-1] < 0.05),
            {"exceedance": [float(p) for p in probs]},
        )
    )
    return reports


SUITES = {
    "laws-semigroup": suite_semigroup,
    "canonical": suite_canonical,
    "fdd": suite_fdd,
    "stationarity": suite_stationarity,
    "representation": suite_representation,
    "flows": suite_flows,
    "markov": suite_markov,
    "jumps": suite_jumps,
    "levy-ito": suite_levy_ito,
    "gaussian-continuity": suite_gaussian_continuity,
    "brownian-core": suite_brownian_core,
}


def run_suite(name: str, seed: int, paths: int | None = None, threads: int = 1) -> dict:
    """Run one named suite; returns a JSON-ready deterministic report."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; available: {sorted(SUITES)}")
    paths = DEFAULT_PATHS if paths is None else paths
    reports = SUITES[name](seed, paths, threads)
    return {
        "suite": name,
        "seed": seed,
        "paths": paths,
        "pass": all(rep.passed for rep in reports),
        "reports": [rep.to_dict() for rep in reports],
    }
