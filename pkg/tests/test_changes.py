import math

import numpy as np
import pytest

from structshift import (
    DepthClass,
    DispersionClass,
    align,
    classify_depth,
    detect_distinctive,
    diagnostics,
    difference_profile,
    format_interval,
    normalize,
    relative_differences,
)


def profile_for(table, a, b):
    return difference_profile(align(normalize(table, a), normalize(table, b)))


class TestDifferenceProfile:
    def test_I_vs_V_golden(self, market_table):
        prof = profile_for(market_table, "I", "V")
        np.testing.assert_allclose(prof.d, [0.03, 0.03, 0.03, 0.03, -0.12], atol=1e-12)
        assert prof.d_min == pytest.approx(-0.12, abs=1e-12)
        assert prof.d_max == pytest.approx(0.03, abs=1e-12)
        assert prof.g_p == pytest.approx(0.03, abs=1e-12)

    def test_I_vs_IV_intervals(self, market_table):
        prof = profile_for(market_table, "I", "IV")
        assert prof.g_p == pytest.approx(0.04, abs=1e-12)
        assert format_interval(prof.abs_interval) == "[-0.1, -0.04) ∪ (0.04, 0.1]"

    def test_identical_structures(self, market_table):
        prof = profile_for(market_table, "III", "III")
        assert np.all(prof.d == 0.0)
        assert prof.g_p == 0.0
        assert prof.r is None
        assert prof.rel_interval is None
        assert relative_differences(prof) is None

    def test_omega_cross_check(self, market_table):
        pair = align(normalize(market_table, "I"), normalize(market_table, "V"))
        with pytest.raises(ValueError, match="disagrees"):
            difference_profile(pair, omega_p=0.5)
        prof = difference_profile(pair, omega_p=0.88)
        assert prof.omega_p == pytest.approx(0.88, abs=1e-12)

    def test_zero_sum_and_bound(self, market_table):
        for other in ["II", "III", "IV", "V", "VI"]:
            prof = profile_for(market_table, "I", other)
            assert abs(prof.d.sum()) <= 1e-12
            assert prof.d_min <= 0.0 <= prof.d_max
            assert np.max(np.abs(prof.d)) <= 1.0 - prof.omega_p + 1e-12

    def test_bound_tight_when_one_tail_is_single_category(self, market_table):
        # one dominant single-category tail makes the bound an equality
        for other in ["IV", "V"]:
            prof = profile_for(market_table, "I", other)
            assert np.max(np.abs(prof.d)) == pytest.approx(1.0 - prof.omega_p, abs=1e-12)


class TestRelativeDifferences:
    def test_I_vs_V(self, market_table):
        r = relative_differences(profile_for(market_table, "I", "V"))
        np.testing.assert_allclose(r, [1, 1, 1, 1, -4.0], atol=1e-9)

    def test_I_vs_VI_rounded(self, market_table):
        r = relative_differences(profile_for(market_table, "I", "VI"))
        np.testing.assert_allclose(
            np.round(r, 2), [-0.83, 1.33, -0.83, 1.33, -1.00], atol=0
        )

    def test_I_vs_II(self, market_table):
        r = relative_differences(profile_for(market_table, "I", "II"))
        np.testing.assert_allclose(r, [0, 0, 0, -1, 1], atol=1e-9)

    def test_extreme_side_reaches_unity(self, market_table):
        for other in ["II", "III", "IV", "V", "VI"]:
            r = relative_differences(profile_for(market_table, "I", other))
            assert np.isclose(np.abs(r), 1.0, atol=1e-9).any()


class TestClassifyDepth:
    @pytest.mark.parametrize(
        "r,expected",
        [
            (1.0, DepthClass.NOT_DISTINCTIVE),
            (-1.0, DepthClass.NOT_DISTINCTIVE),
            (0.0, DepthClass.NOT_DISTINCTIVE),
            (1.05, DepthClass.INSIGNIFICANT),
            (1.10, DepthClass.BARELY),
            (1.2, DepthClass.BARELY),
            (1.25, DepthClass.MODERATELY),
            (1.33, DepthClass.MODERATELY),
            (1.40, DepthClass.HIGHLY),
            (-1.5, DepthClass.HIGHLY),
            (1.60, DepthClass.HUGE),
            (2.5, DepthClass.HUGE),
            (-4.0, DepthClass.HUGE),
        ],
    )
    def test_bands(self, r, expected):
        assert classify_depth(r) is expected

    def test_bands_partition_the_half_line(self):
        # no gaps, no overlaps: walking up |r| changes class monotonically
        grid = np.linspace(0.0, 3.0, 3001)
        classes = [classify_depth(float(v)) for v in grid]
        order = list(DepthClass)
        indices = [order.index(c) for c in classes]
        assert indices == sorted(indices)


class TestDetectDistinctive:
    def test_none_for_II_and_III(self, market_table):
        for other in ["II", "III"]:
            summary = detect_distinctive(profile_for(market_table, "I", other))
            assert summary.distinctive == ()
            assert summary.side == "none"

    def test_single_positive_for_IV(self, market_table):
        summary = detect_distinctive(profile_for(market_table, "I", "IV"))
        assert summary.distinctive == ("D",)
        assert summary.side == "positive"

    def test_single_negative_for_V(self, market_table):
        summary = detect_distinctive(profile_for(market_table, "I", "V"))
        assert summary.distinctive == ("E",)
        assert summary.side == "negative"

    def test_two_for_VI(self, market_table):
        summary = detect_distinctive(profile_for(market_table, "I", "VI"))
        assert summary.distinctive == ("B", "D")
        assert summary.side == "positive"

    def test_no_change_profile(self, market_table):
        summary = detect_distinctive(profile_for(market_table, "I", "I"))
        assert summary.flags == (False,) * 5

    def test_flags_match_depth_classes(self, market_table):
        for other in ["II", "III", "IV", "V", "VI"]:
            prof = profile_for(market_table, "I", other)
            summary = detect_distinctive(prof)
            for flag, ri in zip(summary.flags, prof.r):
                assert flag == (classify_depth(float(ri)) is not DepthClass.NOT_DISTINCTIVE)


class TestDiagnostics:
    def brute_force_moments(self, d):
        # independent recomputation with plain Python arithmetic
        k = len(d)
        s = math.sqrt(sum(v * v for v in d) / k)
        m3 = sum(v**3 for v in d) / k
        return s, m3

    @pytest.mark.parametrize(
        "other,expected_a",
        [("II", 0.0), ("III", 0.0), ("IV", 1.22), ("V", -1.50), ("VI", 0.40)],
    )
    def test_asymmetry_golden(self, market_table, other, expected_a):
        diag = diagnostics(profile_for(market_table, "I", other))
        assert diag.A == pytest.approx(expected_a, abs=0.005)

    def test_asymmetry_exact_for_V(self, market_table):
        diag = diagnostics(profile_for(market_table, "I", "V"))
        assert diag.A == pytest.approx(-1.5, abs=1e-9)

    def test_against_brute_force(self, market_table):
        for other in ["II", "III", "IV", "V", "VI"]:
            prof = profile_for(market_table, "I", other)
            diag = diagnostics(prof)
            s, m3 = self.brute_force_moments([float(v) for v in prof.d])
            assert diag.S == pytest.approx(s, abs=1e-15)
            assert diag.M3 == pytest.approx(m3, abs=1e-15)
            assert diag.A == pytest.approx(m3 / s**3, abs=1e-12)

    def test_mean_is_zero(self, market_table):
        for other in ["II", "III", "IV", "V", "VI"]:
            diag = diagnostics(profile_for(market_table, "I", other))
            assert abs(diag.mean) <= 1e-12

    def test_dispersion_classes_for_V(self, market_table):
        diag = diagnostics(profile_for(market_table, "I", "V"))
        assert diag.S == pytest.approx(0.06, abs=1e-12)
        assert diag.dispersion_class == (
            DispersionClass.TYPICAL,
            DispersionClass.TYPICAL,
            DispersionClass.TYPICAL,
            DispersionClass.TYPICAL,
            DispersionClass.ATYPICAL,
        )

    def test_no_outliers_in_market_example(self, market_table):
        for other in ["II", "III", "IV", "V", "VI"]:
            diag = diagnostics(profile_for(market_table, "I", other))
            assert DispersionClass.OUTLIER not in diag.dispersion_class

    def test_degenerate_zero_spread(self, market_table):
        diag = diagnostics(profile_for(market_table, "I", "I"))
        assert diag.S == 0.0
        assert diag.A is None
