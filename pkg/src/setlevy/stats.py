"""Statistical verification primitives shared by the test suites.

Empirical characteristic functions with sub-Gaussian confidence radii,
two-sample Kolmogorov-Smirnov tests (asymptotic p-values, sample sizes of at
least 500 enforced), independence factorization gaps, and small report
structures.  Every function here is deterministic given its input arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import ks_2samp

#: Default confidence-radius constant for empirical cf bounds.
DEFAULT_CONFIDENCE = 5.0


@dataclass(frozen=True)
class EcfEstimate:
    """Empirical characteristic function on a z-grid with its radius."""

    z: tuple[float, ...]
    estimate: tuple[complex, ...]
    n: int
    radius: float

    def max_abs_error(self, reference) -> float:
        ref = np.asarray(reference, dtype=complex)
        return float(np.max(np.abs(np.asarray(self.estimate) - ref)))


def ecf(samples, zgrid, confidence: float = DEFAULT_CONFIDENCE) -> EcfEstimate:
    """(1/n) sum of exp(i z x_k) per z, with radius confidence / sqrt(n)."""
    samples = np.asarray(samples, dtype=float).ravel()
    n = samples.size
    if n < 100:
        raise ValueError(f"empirical cf needs at least 100 samples, got {n}")
    z = np.asarray(zgrid, dtype=float).ravel()
    est = np.exp(1j * np.outer(z, samples)).mean(axis=1)
    est[z == 0.0] = 1.0 + 0.0j     # exact by definition
    return EcfEstimate(
        tuple(float(v) for v in z),
        tuple(complex(v) for v in est),
        n,
        confidence / np.sqrt(n),
    )


def ecf_joint(samples, lambda_rows) -> np.ndarray:
    """Empirical joint cf at each row of lambdas: mean exp(i samples @ lam)."""
    samples = np.asarray(samples, dtype=float)
    lam = np.atleast_2d(np.asarray(lambda_rows, dtype=float))
    if samples.ndim != 2 or samples.shape[1] != lam.shape[1]:
        raise ValueError("samples and lambdas disagree on the number of regions")
    return np.exp(1j * samples @ lam.T).mean(axis=0)


def ks_two_sample(a, b) -> tuple[float, float]:
    """Two-sided two-sample KS statistic and asymptotic p-value."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size < 500 or b.size < 500:
        raise ValueError("two-sample KS requires at least 500 points per sample")
    res = ks_2samp(a, b, method="asymp")
    return float(res.statistic), float(res.pvalue)


def factorization_gap(
    samples, zpairs, confidence: float = DEFAULT_CONFIDENCE
) -> tuple[float, float]:
    """Max |joint cf - product of marginals| over (z1, z2) pairs.

    Returns (gap, radius) with radius 3 * confidence / sqrt(n); under
    independence the gap stays below the radius with high probability.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 2:
        raise ValueError("factorization gap expects (n, 2) samples")
    n = samples.shape[0]
    gap = 0.0
    for z1, z2 in zpairs:
        joint = np.exp(1j * (z1 * samples[:, 0] + z2 * samples[:, 1])).mean()
        m1 = np.exp(1j * z1 * samples[:, 0]).mean()
        m2 = np.exp(1j * z2 * samples[:, 1]).mean()
        gap = max(gap, abs(joint - m1 * m2))
    return float(gap), float(3.0 * confidence / np.sqrt(n))


def bonferroni(alpha: float, n_tests: int) -> float:
    return alpha / max(n_tests, 1)


@dataclass
class TestReport:
    """One verification outcome, JSON-serializable and deterministic."""

    test: str
    statistic: float
    threshold: float
    passed: bool
    info: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "test": self.test,
            "statistic": float(self.statistic),
            "threshold": float(self.threshold),
            "pass": bool(self.passed),
            **({"info": self.info} if self.info else {}),
        }


def check(test: str, statistic: float, threshold: float, **info) -> TestReport:
    """Report that a statistic stayed at or below its threshold."""
    return TestReport(test, float(statistic), float(threshold),
                      float(statistic) <= float(threshold), info)
