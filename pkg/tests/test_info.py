import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_array_equal

from milambda.datagen import gen_binary_markov, gen_bivariate_normal
from milambda.errors import (
    AlreadyCorrected,
    CountMismatch,
    InvalidProbabilities,
    LengthMismatch,
    PerfectCorrelation,
    TooFewPoints,
    TooShort,
)
from milambda.info import (
    DiscretizedSeries,
    binary_correlation_function,
    binary_mi_approx,
    default_bins,
    entropy_of,
    equal_frequency_bins,
    gaussian_mi,
    joint_histogram,
    lagged_binary_mi,
    miller_madow,
    mutual_information,
    plugin_entropy,
)


def _labels(values, m):
    return DiscretizedSeries(labels=np.asarray(values), bin_count=m, boundaries=np.zeros((m, 2)))


def enumerate_entropy(symbols):
    """Entropy by counting symbols in a plain dict."""
    n = len(symbols)
    return -sum((c / n) * math.log(c / n) for c in Counter(symbols).values())


def enumerate_mi(a, b):
    return enumerate_entropy(list(a)) + enumerate_entropy(list(b)) - enumerate_entropy(list(zip(a, b)))


class TestEqualFrequencyBins:
    def test_one_per_bin(self):
        d = equal_frequency_bins([5, 1, 3, 2, 4], 5)
        assert_array_equal(d.labels, [4, 0, 2, 1, 3])

    def test_divisible(self):
        d = equal_frequency_bins(np.random.default_rng(0).permutation(100).astype(float), 4)
        assert_array_equal(d.occupancy(), [25, 25, 25, 25])

    def test_ties_split_by_index(self):
        d = equal_frequency_bins([1, 1, 1, 1, 2, 2], 2)
        assert_array_equal(d.labels, [0, 0, 0, 1, 1, 1])
        assert_array_equal(d.occupancy(), [3, 3])

    def test_too_few_points(self):
        with pytest.raises(TooFewPoints):
            equal_frequency_bins([1.0, 2.0], 3)

    def test_default_bins(self):
        assert default_bins(10_000) == 50
        assert default_bins(40) == 5
        assert default_bins(10**7) == 50

    @given(arrays(np.float64, st.integers(2, 300), elements=st.floats(-5, 5)), st.integers(2, 40))
    def test_balanced(self, s, m):
        if s.size < m:
            return
        d = equal_frequency_bins(s, m)
        occ = d.occupancy()
        assert occ.max() - occ.min() <= 1
        assert occ.min() >= 1
        # labels never decrease along the sorted values
        assert np.all(np.diff(d.labels[np.argsort(s, kind="stable")]) >= 0)


class TestEntropy:
    def test_uniform(self):
        assert plugin_entropy([25, 25, 25, 25], 100).value == pytest.approx(math.log(4))

    def test_single_symbol(self):
        assert plugin_entropy([100], 100).value == 0.0

    def test_hand_value(self):
        assert plugin_entropy([75, 25], 100).value == pytest.approx(0.5623, abs=5e-5)

    def test_zero_bins_ignored(self):
        e = plugin_entropy([0, 50, 0, 50])
        assert e.nonempty_bins == 2
        assert e.value == pytest.approx(math.log(2))

    def test_count_mismatch(self):
        with pytest.raises(CountMismatch):
            plugin_entropy([1, 2], 4)

    def test_miller_madow_printed_divisor(self):
        e = miller_madow(plugin_entropy([25, 25, 25, 25], 100), divisor=1.0)
        assert e.value == pytest.approx(1.4163, abs=5e-5)
        assert e.corrected
        e = miller_madow(plugin_entropy([75, 25], 100), divisor=1.0)
        assert e.value == pytest.approx(0.5723, abs=5e-5)

    def test_miller_madow_default_is_classical(self):
        e = miller_madow(plugin_entropy([25, 25, 25, 25], 100))
        assert e.value == pytest.approx(math.log(4) + 3 / 200)

    def test_miller_madow_single_bin(self):
        assert miller_madow(plugin_entropy([100])).value == 0.0

    def test_already_corrected(self):
        with pytest.raises(AlreadyCorrected):
            miller_madow(miller_madow(plugin_entropy([1, 1])))

    @given(st.lists(st.integers(0, 50), min_size=1, max_size=30).filter(lambda c: sum(c) > 0))
    def test_bounds(self, counts):
        e = plugin_entropy(counts)
        assert 0.0 <= e.value <= math.log(e.nonempty_bins) + 1e-12
        c = miller_madow(e, divisor=1.0)
        assert c.value == pytest.approx(e.value + (e.nonempty_bins - 1) / e.n, abs=1e-15)


class TestJointHistogram:
    def test_identical(self):
        d = _labels([0, 1, 2] * 3, 3)
        assert_array_equal(joint_histogram(d, d).counts, 3 * np.eye(3, dtype=int))

    def test_independent(self):
        h = joint_histogram(_labels([0, 0, 1, 1], 2), _labels([0, 1, 0, 1], 2))
        assert_array_equal(h.counts, np.ones((2, 2)))

    def test_hand_traced(self):
        h = joint_histogram(_labels([0, 0, 1, 1, 2, 2], 3), _labels([0, 1, 1, 2, 2, 0], 3))
        assert_array_equal(h.counts, [[1, 1, 0], [0, 1, 1], [1, 0, 1]])
        assert_array_equal(h.row_sums(), [2, 2, 2])
        assert_array_equal(h.col_sums(), [2, 2, 2])

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            joint_histogram(_labels([0, 1], 2), _labels([0, 1, 1], 2))


class TestMutualInformation:
    def test_self_information(self):
        d = equal_frequency_bins(np.arange(60.0), 6)
        assert mutual_information(d, d, correction=False) == pytest.approx(math.log(6))

    def test_independent(self):
        vals = []
        for seed in range(5):
            s = gen_bivariate_normal(0.0, 10_000, seed)
            vals.append(mutual_information(equal_frequency_bins(s.x, 50), equal_frequency_bins(s.y, 50)))
        assert np.median(vals) < 0.05

    def test_gaussian_oracle(self):
        s = gen_bivariate_normal(0.9, 10_000, seed=1)
        mi = mutual_information(equal_frequency_bins(s.x, 50), equal_frequency_bins(s.y, 50))
        assert mi == pytest.approx(gaussian_mi(0.9), abs=0.1)

    def test_net_correction(self, rng):
        x, y = rng.normal(size=(2, 400))
        dx, dy = equal_frequency_bins(x, 8), equal_frequency_bins(y, 8)
        raw = mutual_information(dx, dy, correction=False)
        mxy = np.count_nonzero(joint_histogram(dx, dy).counts)
        expected = raw - (mxy - 8 - 8 + 1) / (2 * 400)
        assert mutual_information(dx, dy) == pytest.approx(max(0.0, expected), abs=1e-12)

    @settings(max_examples=80)
    @given(st.integers(3, 50), st.integers(2, 4), st.integers(2, 4), st.integers(0, 2**32 - 1))
    def test_matches_enumeration(self, n, mx, my, seed):
        r = np.random.default_rng(seed)
        a = r.integers(0, mx, n)
        b = (a + r.integers(0, 2, n)) % my
        dx, dy = _labels(a, mx), _labels(b, my)
        assert entropy_of(dx, correction=False).value == pytest.approx(enumerate_entropy(list(a)), abs=1e-12)
        assert mutual_information(dx, dy, correction=False) == pytest.approx(
            max(0.0, enumerate_mi(a, b)), abs=1e-12
        )

    @settings(max_examples=60)
    @given(st.integers(0, 2**32 - 1), st.booleans())
    def test_symmetry_bound_relabel(self, seed, corr):
        r = np.random.default_rng(seed)
        a = r.integers(0, 5, 80)
        b = (a * r.integers(0, 3, 80)) % 4
        dx, dy = _labels(a, 5), _labels(b, 4)
        mi = mutual_information(dx, dy, corr)
        assert mi == mutual_information(dy, dx, corr)
        assert mi >= 0.0
        raw = mutual_information(dx, dy, False)
        hx = entropy_of(dx, False).value
        hy = entropy_of(dy, False).value
        assert raw <= min(hx, hy) + 1e-12
        perm = r.permutation(5)
        assert mutual_information(_labels(perm[a], 5), dy, corr) == pytest.approx(mi, abs=1e-15)

    def test_balanced_marginals(self, rng):
        d = equal_frequency_bins(rng.normal(size=1000), 10)
        assert entropy_of(d, correction=False).value == pytest.approx(math.log(10), abs=1e-9)


class TestGaussianMI:
    def test_values(self):
        assert gaussian_mi(0.0) == 0.0
        assert gaussian_mi(0.96) == pytest.approx(-0.5 * math.log(0.0784), rel=1e-15)
        assert gaussian_mi(0.96) == pytest.approx(1.287, abs=0.02)
        assert gaussian_mi(-0.6) == gaussian_mi(0.6) == pytest.approx(0.2231, abs=1e-4)

    def test_perfect(self):
        with pytest.raises(PerfectCorrelation):
            gaussian_mi(1.0)


class TestBinary:
    def test_period_two(self):
        seq = np.tile([0, 1], 500)
        assert binary_correlation_function(seq, 1) == pytest.approx(-0.25, abs=1e-3)
        assert binary_correlation_function(seq, 2) == pytest.approx(0.25, abs=1e-3)

    def test_fair_coin(self):
        seq = gen_binary_markov(0.5, 100_000, seed=4)
        for d in (1, 2, 5):
            assert abs(binary_correlation_function(seq, d)) < 0.005

    def test_chain_autocovariance(self):
        seq = gen_binary_markov(0.4, 400_000, seed=2)
        assert binary_correlation_function(seq, 3) == pytest.approx(0.25 * 0.2**3, abs=0.002)

    def test_approx_values(self):
        assert binary_mi_approx(0.0, 0.5, 0.5) == 0.0
        assert binary_mi_approx(0.01, 0.5, 0.5) == pytest.approx(0.0008)

    def test_approx_vs_exact(self):
        seq = gen_binary_markov(0.45, 2_000_000, seed=9)
        p1 = seq.mean()
        g = 0.25 * 0.1**2
        approx = binary_mi_approx(g, 1 - p1, p1)
        assert approx == pytest.approx(lagged_binary_mi(seq, 2), rel=0.2)

    def test_errors(self):
        with pytest.raises(InvalidProbabilities):
            binary_mi_approx(0.1, 0.3, 0.3)
        with pytest.raises(InvalidProbabilities):
            binary_correlation_function([0, 2, 1], 1)
        with pytest.raises(TooShort):
            binary_correlation_function([0, 1], 2)
