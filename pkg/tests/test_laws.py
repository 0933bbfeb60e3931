import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from setlevy.errors import GridCompatibilityError, InversionError
from setlevy.laws import (
    CompoundJumps,
    GridLaw,
    LevyTriplet,
    NoJumps,
    NormalMark,
    PointMass,
    TruncStableJumps,
    TwoPointMark,
    UniformMark,
    brownian_triplet,
    char_exponent,
    compound_poisson_triplet,
    convolve,
    default_half_width,
    mu_power_t,
)

GAUSS = brownian_triplet(1.0, 0.0)
POINT_CP = LevyTriplet(0.0, 0.0, CompoundJumps(1.0, PointMass(1.0)))
UNIF_CP = LevyTriplet(0.0, 0.0, CompoundJumps(1.0, UniformMark(-1.0, 1.0)))
TRUNC = LevyTriplet(0.0, 0.0, TruncStableJumps(1.5, 1e-3, 1.0, 0.01))


class TestCharExponent:
    def test_pure_gaussian(self):
        assert char_exponent(GAUSS, 2.0) == pytest.approx(-2.0)

    def test_point_mass_with_truncation_term(self):
        got = char_exponent(POINT_CP, math.pi)
        want = (cmath.exp(1j * math.pi) - 1.0) - 1j * math.pi
        assert got == pytest.approx(want, abs=1e-12)

    def test_uniform_marks_closed_form_vs_quadrature(self):
        got = char_exponent(UNIF_CP, 1.0)
        assert got == pytest.approx(math.sin(1.0) - 1.0, abs=1e-12)
        # independent oracle: adaptive quadrature of the integrand
        re, _ = quad(lambda x: (math.cos(x) - 1.0) * 0.5, -1.0, 1.0, epsabs=1e-13)
        im, _ = quad(lambda x: (math.sin(x) - x) * 0.5, -1.0, 1.0, epsabs=1e-13)
        assert got == pytest.approx(complex(re, im), abs=1e-10)

    def test_zero_is_zero_exactly(self):
        for trip in (GAUSS, POINT_CP, UNIF_CP, TRUNC):
            assert char_exponent(trip, 0.0) == 0.0

    def test_hermitian_symmetry(self):
        z = np.linspace(0.1, 6.0, 9)
        for trip in (GAUSS, POINT_CP, UNIF_CP, TRUNC):
            plus = trip.psi(z)
            minus = trip.psi(-z)
            assert np.allclose(minus, np.conj(plus), atol=1e-12)

    def test_drift_only(self):
        trip = LevyTriplet(0.0, 2.5)
        assert char_exponent(trip, 3.0) == pytest.approx(7.5j)


class TestCompoundConsistency:
    @pytest.mark.parametrize(
        "marks",
        [
            PointMass(1.0),
            UniformMark(-1.0, 2.0),
            NormalMark(0.3, 0.8),
            TwoPointMark((2.0, -0.5), 0.25),
        ],
    )
    def test_compensated_exponent_is_rate_times_cf_minus_one(self, marks):
        rate = 1.7
        trip = compound_poisson_triplet(rate, marks)
        z = np.linspace(-5.0, 5.0, 33)
        z = z[z != 0]
        got = np.exp(0.8 * trip.psi(z))
        want = np.exp(0.8 * rate * (marks.cf(z) - 1.0))
        assert np.max(np.abs(got - want)) < 1e-10


class TestGridInversion:
    def test_matches_brute_force_dft(self):
        # independent oracle: direct O(M^2) inversion sum at small size
        M, L = 64, 8.0
        law = mu_power_t(GAUSS, 1.0, n_nodes=M, half_width=L)
        z = (np.arange(M) - M // 2) * math.pi / L
        phi = np.exp(GAUSS.psi(z))
        x = law.x
        brute = np.array(
            [np.mean(phi * np.exp(-1j * z * x[j])) for j in range(M)]
        ).real
        assert np.max(np.abs(law.masses - brute)) < 1e-14

    def test_standard_normal_on_grid(self):
        law = mu_power_t(GAUSS, 1.0)
        assert law.cdf(0.0) == pytest.approx(0.5, abs=1e-4)
        assert law.mean() == pytest.approx(0.0, abs=1e-8)
        assert law.variance() == pytest.approx(1.0, rel=1e-6)

    def test_zero_power_is_point_mass(self):
        law = mu_power_t(POINT_CP, 0.0)
        assert law.prob_of((-1e-9, 1e-9)) == 1.0
        assert law.mean() == 0.0

    def test_poisson_masses(self):
        trip = compound_poisson_triplet(1.0, PointMass(1.0))
        law = mu_power_t(trip, 1.0)
        h = law.h
        for k in range(4):
            got = law.interval_prob(k - h / 2, k + h / 2)
            assert got == pytest.approx(math.exp(-1) / math.factorial(k), abs=1e-4)

    def test_moments_match_rates(self):
        trip = compound_poisson_triplet(2.0, NormalMark(0.5, 1.0), sigma=0.7)
        for t in (0.5, 1.0):
            law = mu_power_t(trip, t)
            assert law.mean() == pytest.approx(t * trip.mean_rate, rel=1e-3)
            assert law.variance() == pytest.approx(t * trip.var_rate, rel=1e-3)

    def test_off_lattice_atom_on_coarse_grid_fails(self):
        # a point mass away from the node lattice rings negative
        trip = LevyTriplet(0.0, 0.0, CompoundJumps(5.0, PointMass(1.0 / 3.0)))
        with pytest.raises(InversionError):
            mu_power_t(trip, 1.0, n_nodes=256, half_width=16.0)

    def test_tail_mass_inside_grid(self):
        L = default_half_width(POINT_CP, 1.0, 1 << 14)
        # Poisson(1) beyond the half-width is far below the inversion floor
        assert L >= 12.0


class TestConvolve:
    def test_delta_is_identity(self):
        law = mu_power_t(GAUSS, 1.0)
        delta = mu_power_t(GAUSS, 0.0)
        out = convolve(law, delta)
        assert out.total_variation(law) < 1e-12

    def test_point_masses_shift(self):
        h = 0.25
        a = GridLaw(h, [0.0, 1.0, 0.0], 0)      # point at x = h
        b = GridLaw(h, [0.0, 0.0, 1.0], 0)      # point at x = 2h
        out = convolve(a, b)
        assert out.prob_of((3 * h - 1e-9, 3 * h + 1e-9)) == pytest.approx(1.0)

    @pytest.mark.parametrize("name,trip", [
        ("gauss", GAUSS), ("poisson", POINT_CP), ("trunc", TRUNC),
    ])
    def test_semigroup_property(self, name, trip):
        for s, t in ((0.25, 0.25), (0.25, 0.5), (0.5, 0.5)):
            left = convolve(mu_power_t(trip, s), mu_power_t(trip, t))
            right = mu_power_t(trip, s + t)
            assert left.total_variation(right) < 1e-5

    def test_mismatched_steps_rejected(self):
        a = GridLaw(0.25, [1.0], 0)
        b = GridLaw(0.5, [1.0], 0)
        with pytest.raises(GridCompatibilityError):
            convolve(a, b)


class TestGridLaw:
    def test_masses_must_sum_to_one(self):
        with pytest.raises(InversionError):
            GridLaw(0.5, [0.4, 0.4], 0)

    def test_negative_mass_rejected(self):
        with pytest.raises(InversionError):
            GridLaw(0.5, [1.1, -0.1], 0)

    def test_interval_prob_half_weight_at_nodes(self):
        law = GridLaw(1.0, [0.25, 0.5, 0.25], 1)
        assert law.interval_prob(-math.inf, 0.0) == pytest.approx(0.5)
        assert law.interval_prob(0.0, math.inf) == pytest.approx(0.5)
        assert law.interval_prob(-0.5, 0.5) == pytest.approx(0.5)


class TestTruncStable:
    def test_total_mass_closed_form(self):
        nu = TRUNC.nu
        want = 2 * 0.01 * (1e-3 ** -1.5 - 1.0) / 1.5
        assert nu.total_mass() == pytest.approx(want)

    def test_nu_measure_matches_sampled_marks(self):
        nu = TRUNC.nu
        rng = np.random.default_rng(5)
        marks = nu.sample_marks(rng, 200_000)
        for B in [(0.01, 0.1), (-0.1, -0.01), (0.5, 1.0)]:
            frac = float(np.mean((marks > B[0]) & (marks <= B[1])))
            want = nu.nu_measure(B) / nu.total_mass()
            assert frac == pytest.approx(want, abs=4 / math.sqrt(200_000))

    def test_discarded_small_jump_variance(self):
        nu = TRUNC.nu
        want, _ = quad(lambda x: 2 * x * x * 0.01 * x ** -2.5, 0.0, 1e-3)
        assert nu.discarded_small_jump_variance() == pytest.approx(want, rel=1e-9)

    def test_second_moment_vs_quadrature(self):
        nu = TRUNC.nu
        want, _ = quad(lambda x: 2 * x * x * 0.01 * x ** -2.5, 1e-3, 1.0)
        assert nu.second_moment() == pytest.approx(want, rel=1e-9)

    def test_truncation_cutoff_reported(self):
        assert TRUNC.nu.truncation_cutoff() == 1e-3
        assert NoJumps().truncation_cutoff() == 0.0


class TestMarkLaws:
    @pytest.mark.parametrize(
        "marks",
        [
            PointMass(0.8),
            UniformMark(-0.5, 1.5),
            NormalMark(0.2, 0.9),
            TwoPointMark((1.2, -0.4), 0.3),
        ],
    )
    def test_signed_mean_between_vs_sampling(self, marks):
        rng = np.random.default_rng(23)
        x = marks.sample(rng, 400_000)
        got = marks.signed_mean_between(0.0, 1.0)
        want = float(np.mean(x * (np.abs(x) <= 1.0)))
        assert got == pytest.approx(want, abs=5e-3)

    def test_uniform_cf_scalar_and_array(self):
        m = UniformMark(-1.0, 1.0)
        assert m.cf(1.0) == pytest.approx(math.sin(1.0))
        assert np.allclose(m.cf(np.array([0.0, 1.0])), [1.0, math.sin(1.0)])

    def test_sigma_must_be_nonnegative(self):
        with pytest.raises(ValueError):
            LevyTriplet(-1.0, 0.0)
