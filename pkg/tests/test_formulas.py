import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nthneighbour import formulas as f
from nthneighbour.errors import DomainError, ParameterError
from nthneighbour.params import ProblemParams as P
from nthneighbour.specfun import geometry_constants

mpmath.mp.dps = 30

DISC_MEAN = 0.376126389031837524632052967707  # (2/3)/sqrt(pi)
# R(3) * binom(4,1) * 3 * ∫ V^(4/3) (1-V)^2 dV by mpmath quadrature
EXACT_3_2_5 = 0.441744085827265066814141114513


def mp_exact(dim, n, N):
    s = mpmath.mpf(1) / dim
    radius = mpmath.gamma(mpmath.mpf(dim) / 2 + 1) ** s / mpmath.sqrt(mpmath.pi)
    return radius * mpmath.gamma(n + s) / mpmath.gamma(n) * mpmath.gamma(N) / mpmath.gamma(N + s)


@st.composite
def problems(draw, max_dim=50, max_points=10_000):
    dim = draw(st.integers(1, max_dim))
    N = draw(st.integers(2, max_points))
    n = draw(st.integers(1, N - 1))
    return P(dim, n, N)


class TestParams:
    @pytest.mark.parametrize("args", [(1, 0, 5), (0, 1, 5), (2, 5, 5), (2, 6, 4), (2.0, 1, 3), (2, 1, True)])
    def test_invalid(self, args):
        with pytest.raises(ParameterError):
            P(*args)

    def test_last_neighbour_allowed(self):
        p = P(3, 9, 10)
        assert 0 < f.exact_mean_distance(p) <= geometry_constants(3).unit_ball_radius


class TestExact:
    def test_line_closed_form(self):
        assert f.exact_mean_distance(P(1, 3, 10)) == pytest.approx(0.15, rel=1e-13)

    def test_disc_single_point(self):
        assert f.exact_mean_distance(P(2, 1, 2)) == pytest.approx(DISC_MEAN, abs=1e-12)

    def test_quadrature_oracle(self):
        assert f.exact_mean_distance(P(3, 2, 5)) == pytest.approx(EXACT_3_2_5, rel=1e-13)

    @pytest.mark.parametrize(
        "dim,n,N", [(2, 7, 30), (5, 1, 1000), (10, 50, 51), (3, 100, 10**6), (7, 12345, 10**7), (50, 3, 40)]
    )
    def test_against_mpmath(self, dim, n, N):
        assert f.exact_mean_distance(P(dim, n, N)) == pytest.approx(float(mp_exact(dim, n, N)), rel=1e-12)

    def test_finite_for_huge_counts(self):
        r = f.exact_mean_distance(P(3, 10, 10**7))
        assert math.isfinite(r) and r > 0

    @given(st.integers(2, 10_000).flatmap(lambda N: st.tuples(st.integers(1, N - 1), st.just(N))))
    def test_line_collapse(self, nN):
        n, N = nN
        assert f.exact_mean_distance(P(1, n, N)) == pytest.approx(n / (2 * N), rel=1e-13)

    @given(problems(max_points=2000))
    def test_monotone_in_n(self, p):
        if p.n + 1 < p.N:
            assert f.exact_mean_distance(p.with_n(p.n + 1)) > f.exact_mean_distance(p)

    @given(problems(max_points=2000))
    def test_monotone_in_N(self, p):
        bigger = P(p.dim, p.n, p.N + 1)
        assert f.exact_mean_distance(bigger) < f.exact_mean_distance(p)

    @given(problems())
    def test_bounded_by_unit_ball(self, p):
        assert f.exact_mean_distance(p) <= geometry_constants(p.dim).unit_ball_radius


class TestHeuristic:
    @pytest.mark.parametrize("args,expected", [((2, 4, 100), 0.2), ((1, 1, 8), 0.125), ((3, 27, 1000), 0.3)])
    def test_values(self, args, expected):
        assert f.heuristic_mean_distance(P(*args)) == pytest.approx(expected, rel=1e-14)


class TestAsymptotic:
    @pytest.mark.parametrize("N", [2, 100, 12345])
    def test_disc_first_neighbour(self, N):
        assert f.asymptotic_mean_distance_large_N(P(2, 1, N)) == pytest.approx(0.5 / math.sqrt(N), rel=1e-14)

    def test_line(self):
        assert f.asymptotic_mean_distance_large_N(P(1, 2, 10)) == pytest.approx(0.1, rel=1e-14)

    def test_large_N_ratio(self):
        p = P(3, 1, 10**6)
        assert f.exact_mean_distance(p) / f.asymptotic_mean_distance_large_N(p) == pytest.approx(1, abs=1e-5)

    @pytest.mark.parametrize("dim,n", [(2, 1), (3, 1), (3, 5), (8, 2)])
    def test_first_order_convergence(self, dim, n):
        devs = [abs(f.exact_mean_distance(P(dim, n, N)) / f.asymptotic_mean_distance_large_N(P(dim, n, N)) - 1)
                for N in (10**2, 10**3, 10**4, 10**5)]
        for a, b in zip(devs, devs[1:]):
            assert 8 <= a / b <= 12

    def test_full_line(self):
        assert f.asymptotic_mean_distance_full(P(1, 3, 40)) == pytest.approx(3 / 80, rel=1e-14)

    def test_full_disc(self):
        expected = 0.1 / math.sqrt(math.pi)
        assert f.asymptotic_mean_distance_full(P(2, 9, 900)) == pytest.approx(expected, rel=1e-14)

    @given(problems())
    def test_full_equals_mean_volume_estimate(self, p):
        assert f.asymptotic_mean_distance_full(p) == f.mean_volume_distance_estimate(p)

    @given(problems())
    def test_prefactor_identity(self, p):
        ratio = f.asymptotic_mean_distance_full(p) / f.heuristic_mean_distance(p)
        assert ratio == pytest.approx(geometry_constants(p.dim).unit_ball_radius, rel=1e-13)


class TestMeanVolume:
    def test_half(self):
        for dim in (1, 2, 9):
            assert f.mean_enclosed_volume(P(dim, 1, 2)) == 0.5

    def test_dimension_free(self):
        assert f.mean_enclosed_volume(P(7, 3, 12)) == 0.25

    def test_estimate_values(self):
        assert f.mean_volume_distance_estimate(P(2, 1, 100)) == pytest.approx(0.0564189583547756318, rel=1e-14)
        assert f.mean_volume_distance_estimate(P(1, 5, 20)) == pytest.approx(0.125, rel=1e-14)

    @pytest.mark.parametrize("dim", range(2, 51))
    def test_estimate_dominates_exact(self, dim):
        for n, N in [(1, 2), (1, 10), (3, 7), (10, 100), (99, 100), (100, 1000), (5, 10**5)]:
            p = P(dim, n, N)
            assert f.mean_volume_distance_estimate(p) >= f.exact_mean_distance(p)


class TestErrors:
    @given(problems(max_dim=1))
    def test_zero_on_line(self, p):
        assert abs(f.estimate_error_exact(p)) <= 1e-14

    @given(problems())
    def test_nonnegative(self, p):
        if p.dim >= 2:
            assert f.estimate_error_exact(p) >= 0

    def test_dual_path(self):
        p = P(2, 1, 100)
        err = f.estimate_error_exact(p)
        s = mpmath.mpf(1) / 2
        rhs = (mpmath.mpf(1) / 100) ** s - mpmath.gamma(1 + s) / mpmath.gamma(1) * mpmath.gamma(100) / mpmath.gamma(100 + s)
        assert err > 0
        assert err == pytest.approx(float(rhs / mpmath.sqrt(mpmath.pi)), rel=1e-9)
        assert f.rescaled_error_exact(p) == pytest.approx(float(rhs), rel=1e-9)

    def test_decays_with_dimension(self):
        assert f.estimate_error_exact(P(50, 10, 1000)) < f.estimate_error_exact(P(5, 10, 1000))

    def test_log_form(self):
        p = P(6, 7, 300)
        _, log_form = f.estimate_error_large_D_approx(p)
        assert log_form == pytest.approx((7 / 300) ** (1 / 6) - (1 + math.log(7 / 300) / 6), rel=1e-14)

    def test_harmonic_form_tends_to_log_form(self):
        harmonic_form, log_form = f.estimate_error_large_D_approx(P(20, 1000, 100_000))
        assert harmonic_form == pytest.approx(log_form, abs=1e-3)

    def test_forms_track_exact_at_large_D(self):
        p = P(50, 100, 10_000)
        exact = f.rescaled_error_exact(p)
        for approx in f.estimate_error_large_D_approx(p):
            assert approx == pytest.approx(exact, abs=1e-2)


class TestGammaRatioLargeD:
    @pytest.mark.parametrize("dim", [1, 2, 10, 1000])
    def test_first_index(self, dim):
        assert f.gamma_ratio_large_D_approx(1, dim) == pytest.approx(math.gamma(1 + 1 / dim), rel=1e-14)

    def _rel_err(self, m, dim):
        exact = float(mpmath.gamma(m + mpmath.mpf(1) / dim) / mpmath.gamma(m))
        return abs(f.gamma_ratio_large_D_approx(m, dim) / exact - 1)

    def test_accurate_at_large_D(self):
        assert self._rel_err(5, 100) <= 1e-3

    def test_improves_with_D(self):
        assert self._rel_err(5, 10) > self._rel_err(5, 100)

    @pytest.mark.parametrize("m", [0, -1, 1.5])
    def test_domain(self, m):
        with pytest.raises(DomainError):
            f.gamma_ratio_large_D_approx(m, 3)


class TestBundle:
    def test_line(self):
        b = f.bundle(P(1, 3, 10))
        assert b.exact == pytest.approx(0.15, rel=1e-13)
        assert b.heuristic == pytest.approx(0.3, rel=1e-15)
        assert b.asymptotic_large_N == pytest.approx(0.15, rel=1e-13)
        assert b.mean_enclosed_volume == pytest.approx(0.3)

    def test_disc(self):
        b = f.bundle(P(2, 1, 2))
        assert b.exact == pytest.approx(DISC_MEAN, abs=1e-12)
        assert b.mean_enclosed_volume == 0.5

    @given(problems())
    def test_fields_match_operations(self, p):
        b = f.bundle(p)
        assert b.exact == f.exact_mean_distance(p)
        assert b.heuristic == f.heuristic_mean_distance(p)
        assert b.asymptotic_large_N == f.asymptotic_mean_distance_large_N(p)
        assert b.asymptotic_full == f.asymptotic_mean_distance_full(p)
        assert b.mean_volume_estimate == f.mean_volume_distance_estimate(p)
        assert b.mean_enclosed_volume == f.mean_enclosed_volume(p)
        assert b.error == f.estimate_error_exact(p)

    @given(problems())
    def test_invariants(self, p):
        b = f.bundle(p)
        radius = geometry_constants(p.dim).unit_ball_radius
        for value in (b.exact, b.asymptotic_large_N, b.asymptotic_full, b.mean_volume_estimate):
            assert 0 < value <= radius * (1 + 1e-9)
        assert 0 < b.heuristic <= 1 and 0 < b.mean_enclosed_volume < 1
        if p.dim == 1:
            assert b.mean_volume_estimate == pytest.approx(b.exact, abs=1e-12)
        else:
            assert b.mean_volume_estimate >= b.exact
        assert b.asymptotic_full == pytest.approx(b.heuristic * radius, rel=1e-12)

    def test_relative_deviations(self):
        devs = f.bundle(P(3, 4, 100)).relative_deviations()
        assert set(devs) == {"heuristic", "asymptotic_large_N", "asymptotic_full", "mean_volume_estimate"}
        assert devs["asymptotic_full"] == devs["mean_volume_estimate"] > 0
