"""Symbolic module: split index, partitions, phase derivatives, separation."""

import math

import numpy as np
import pytest

from juliazeta import (
    CapacityError,
    RelationError,
    build_partition,
    make_system,
    orthogonality_stats,
    phase_derivatives,
    separation_ratio,
    split_index,
)
from juliazeta.dynamics import branch_derivative, compose_inverse, words_of_length
from juliazeta.symbolic import (
    branch_image_intervals,
    covers_all_words,
    hull_image_length,
    is_prefix_free,
    second_derivative_ratio,
)

# Constants recorded at c = -4 over tau in {1e-1, 1e-2, 1e-3}; the suite
# asserts stability against these bounds.
RECORDED_BAND_CONSTANT = 40.0
RECORDED_MAX_RELATED = 2
RECORDED_MAX_MULTIPLICITY = 2
RECORDED_SECOND_DERIVATIVE_BOUND = 1.0


class TestSplitIndex:
    def test_diverging_after_common_prefix(self):
        m, related = split_index("++-", "+-+")
        assert m == 2
        assert related is False

    def test_prefix_extension(self):
        m, related = split_index("++", "++-")
        assert m == 3
        assert related is True

    def test_first_letters_differ(self):
        m, related = split_index("-++", "+--")
        assert m == 1
        assert related is False

    def test_equal_words(self):
        m, related = split_index("+-+", "+-+")
        assert m == 4
        assert related is True

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            w = "".join(rng.choice(["-", "+"], size=int(rng.integers(1, 9))))
            v = "".join(rng.choice(["-", "+"], size=int(rng.integers(1, 9))))
            mw, rw = split_index(w, v)
            mv, rv = split_index(v, w)
            assert mw == mv
            assert rw == rv


class TestBuildPartition:
    def test_large_tau_is_alphabet(self, system_m4):
        p = build_partition(10.0, system_m4)
        assert p.words == ("-", "+")

    @pytest.mark.parametrize("tau", [0.1, 0.01, 0.001])
    def test_structure(self, system_m4, tau):
        p = build_partition(tau, system_m4)
        assert is_prefix_free(p.words)
        assert covers_all_words(p)
        for s in p.stats:
            assert s.interval_length < tau
            # every proper prefix still exceeded tau
            for j in range(1, len(s.word)):
                assert hull_image_length(s.word[:j], system_m4) >= tau

    def test_capacity(self, system_m4):
        with pytest.raises(CapacityError):
            build_partition(1e-9, system_m4)

    def test_invalid_tau(self, system_m4):
        with pytest.raises(ValueError):
            build_partition(0.0, system_m4)

    @pytest.mark.parametrize("tau", [0.1, 0.01, 0.001])
    def test_derivative_band(self, system_m4, tau):
        # sampled |g_w'| / tau stays in [1/C, C] for one recorded constant
        p = build_partition(tau, system_m4)
        lo = min(s.deriv_min / tau for s in p.stats)
        hi = max(s.deriv_max / tau for s in p.stats)
        assert hi <= RECORDED_BAND_CONSTANT
        assert lo >= 1.0 / RECORDED_BAND_CONSTANT


class TestPhaseDerivatives:
    def test_single_letter_value(self, system_m4):
        # x_1 = g_+(2) = sqrt(6), phi' = -1/(2 x_1^2) = -1/12
        data = phase_derivatives("+", 2.0, system_m4)
        assert data.phi_prime == pytest.approx(-1.0 / 12.0, rel=1e-13)

    def test_two_letters_at_fixed_point(self, system_m4):
        zc = system_m4.zeta_c
        data = phase_derivatives("++", zc, system_m4)
        expected = -1.0 / (2 * zc**2) - 1.0 / (4 * zc**3)
        assert data.phi_prime == pytest.approx(expected, rel=1e-13)

    def test_against_central_differences(self, system_m4):
        # h = 1e-6 suits the first difference; the second difference is
        # roundoff-limited there (eps / h^2), so it uses h = 1e-4 where
        # truncation and roundoff are both ~1e-8
        rng = np.random.default_rng(23)
        h1, h2 = 1e-6, 1e-4
        checked = 0
        while checked < 100:
            n = int(rng.integers(1, 11))
            word = "".join(rng.choice(["-", "+"], size=n))
            if rng.random() < 0.5:
                x = float(rng.uniform(*system_m4.i_plus))
            else:
                x = float(rng.uniform(*system_m4.i_minus))
            data = phase_derivatives(word, x, system_m4)

            def phi(t):
                return math.log(abs(branch_derivative(word, t, system_m4)))

            fd_prime = (phi(x + h1) - phi(x - h1)) / (2 * h1)
            fd_second = (phi(x + h2) - 2 * phi(x) + phi(x - h2)) / h2**2
            assert abs(fd_prime - data.phi_prime) <= 1e-5 * max(1.0, abs(data.phi_prime))
            assert abs(fd_second - data.phi_second) <= 1e-5 * max(1.0, abs(data.phi_second))
            checked += 1

    def test_finite_on_hull(self, system_m4):
        for x in np.linspace(*system_m4.i_minus, 9):
            data = phase_derivatives("-+-", float(x), system_m4)
            assert math.isfinite(data.phi_prime)
            assert math.isfinite(data.phi_second)


class TestSeparation:
    def test_regression_fixture(self, system_m4):
        value = separation_ratio("+--", "+++", system_m4.zeta_c, system_m4)
        assert value == pytest.approx(1.016567913224723, rel=1e-12)
        assert value > 0

    def test_related_pair_rejected(self, system_m4):
        with pytest.raises(RelationError):
            separation_ratio("++", "++-", 2.0, system_m4)

    def test_positive_on_random_pairs(self, system_m4):
        rng = np.random.default_rng(12345)
        smallest = math.inf
        trials = 0
        while trials < 1000:
            lw = int(rng.integers(2, 13))
            lv = int(rng.integers(2, 13))
            w = "".join(rng.choice(["-", "+"], size=lw))
            v = "".join(rng.choice(["-", "+"], size=lv))
            _, related = split_index(w, v)
            if related:
                continue
            trials += 1
            if rng.random() < 0.5:
                x = float(rng.uniform(*system_m4.i_plus))
            else:
                x = float(rng.uniform(*system_m4.i_minus))
            smallest = min(smallest, separation_ratio(w, v, x, system_m4))
        assert smallest > 0

    def test_second_derivative_ratio_bounded(self, system_m4):
        rng = np.random.default_rng(999)
        largest = 0.0
        trials = 0
        while trials < 300:
            w = "".join(rng.choice(["-", "+"], size=int(rng.integers(2, 13))))
            v = "".join(rng.choice(["-", "+"], size=int(rng.integers(2, 13))))
            _, related = split_index(w, v)
            if related:
                continue
            trials += 1
            if rng.random() < 0.5:
                x = float(rng.uniform(*system_m4.i_plus))
            else:
                x = float(rng.uniform(*system_m4.i_minus))
            largest = max(largest, second_derivative_ratio(w, v, x, system_m4))
        assert largest <= RECORDED_SECOND_DERIVATIVE_BOUND

    def test_weaker_regime_reported_not_asserted(self, capsys):
        # at c = -3 the separation can degrade; report the observed minimum
        sys3 = make_system(-3.0)
        rng = np.random.default_rng(77)
        smallest = math.inf
        trials = 0
        while trials < 200:
            w = "".join(rng.choice(["-", "+"], size=int(rng.integers(2, 11))))
            v = "".join(rng.choice(["-", "+"], size=int(rng.integers(2, 11))))
            _, related = split_index(w, v)
            if related:
                continue
            trials += 1
            x = float(rng.uniform(*sys3.i_plus))
            smallest = min(smallest, separation_ratio(w, v, x, sys3))
        print(f"minimum separation ratio at c=-3 over 200 pairs: {smallest:.6f}")


class TestOrthogonality:
    def test_alphabet_partition(self, system_m4):
        p = build_partition(10.0, system_m4)
        max_related, max_mult = orthogonality_stats(p)
        # single-letter words are all mutually related: m = 1 can never be
        # <= min(|w|,|v|) - 1 = 0, so each of the two words counts the other
        assert max_related == 2
        assert max_mult == 1

    @pytest.mark.parametrize("tau", [0.1, 0.01, 0.001])
    def test_stats_bounded_and_stable(self, system_m4, tau):
        p = build_partition(tau, system_m4)
        max_related, max_mult = orthogonality_stats(p)
        assert max_related <= RECORDED_MAX_RELATED
        assert max_mult <= RECORDED_MAX_MULTIPLICITY

    def test_tau_005_snapshot(self, system_m4):
        p = build_partition(0.05, system_m4)
        assert orthogonality_stats(p) == (2, 1)


class TestImageDisjointness:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_equal_length_images_disjoint(self, system_m4, n):
        intervals = []
        for word in words_of_length(n):
            img_minus, img_plus = branch_image_intervals(word, system_m4)
            intervals.extend([img_minus, img_plus])
        intervals.sort()
        for (_, hi), (lo, _) in zip(intervals, intervals[1:]):
            assert hi < lo

    def test_images_inside_hull(self, system_m4):
        for word in words_of_length(5):
            for lo, hi in branch_image_intervals(word, system_m4):
                inside_minus = (
                    system_m4.i_minus[0] - 1e-12 <= lo and hi <= system_m4.i_minus[1] + 1e-12
                )
                inside_plus = (
                    system_m4.i_plus[0] - 1e-12 <= lo and hi <= system_m4.i_plus[1] + 1e-12
                )
                assert inside_minus or inside_plus

    def test_image_endpoints_match_compose(self, system_m4):
        img_minus, img_plus = branch_image_intervals("+-", system_m4)
        ends = sorted(
            compose_inverse("+-", e, system_m4)
            for e in system_m4.i_plus
        )
        assert img_plus == pytest.approx(tuple(ends), rel=1e-14)
