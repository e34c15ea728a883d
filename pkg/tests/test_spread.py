import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from discrete_uncertainty.errors import ComputationError
from discrete_uncertainty.periodization import discrete_gaussian
from discrete_uncertainty.signal import Signal, dft, make_grid
from discrete_uncertainty.spread import (
    Domain,
    Measure,
    angular_spread,
    circular_variance,
    circular_variance_at,
    entropy,
    piece_minima,
    sparsity,
    spread,
)
from corpus import comb, variance_corpus
from oracles import brute_variance

SIZES = st.sampled_from([2, 4, 8, 16, 32, 64])


@st.composite
def signals(draw, sizes=SIZES):
    n = draw(sizes)
    re = draw(arrays(np.float64, n, elements=st.floats(-10, 10)))
    im = draw(arrays(np.float64, n, elements=st.floats(-10, 10)))
    vals = re + 1j * im
    if not np.any(np.abs(vals) > 1e-3):
        vals[0] = 1.0
    return Signal(make_grid(n), vals)


class TestCircularVariance:
    @pytest.mark.parametrize("n", [2, 4, 16, 64, 256])
    def test_delta_at_origin(self, n):
        rep = circular_variance(Signal.delta(make_grid(n)))
        assert rep.variance == 0
        assert rep.mean == 0

    def test_uniform_n16(self):
        x = Signal.uniform(make_grid(16))
        rep = circular_variance(x)
        # the scan lands on the optimum (a half-grid point) exactly
        oracle = brute_variance(x.values, refine=False)
        assert rep.variance == pytest.approx(oracle, abs=1e-12)
        assert rep.variance == pytest.approx(85 / 64, abs=1e-14)
        # centering on a grid point is worse by (spacing / 2)^2
        assert circular_variance_at(x, 0.0) - rep.variance == pytest.approx(1 / 64)

    def test_uniform_tie_breaks_to_smallest_center(self):
        rep = circular_variance(Signal.uniform(make_grid(16)))
        assert rep.mean == pytest.approx(-1.875)

    def test_two_pulse_tie(self):
        g = make_grid(16)
        vals = np.zeros(16)
        vals[g.position(-4)] = vals[g.position(4)] = 1
        rep = circular_variance(Signal(g, vals))
        # centers 0 and 2 (antipodal) both give 1; the smaller wins
        assert rep.variance == pytest.approx(1.0)
        assert rep.mean == pytest.approx(0.0, abs=1e-15)

    def test_zero_signal(self):
        with pytest.raises(ComputationError, match="zero signal has no spread"):
            circular_variance(Signal(make_grid(4), np.zeros(4)))

    @pytest.mark.parametrize("idx", range(0, 200, 7))
    def test_matches_dense_scan(self, idx):
        x = variance_corpus()[idx]
        rep = circular_variance(x)
        assert abs(rep.variance - brute_variance(x.values)) < 1e-9

    @settings(max_examples=200, deadline=None)
    @given(signals())
    def test_bounded_by_quarter_n(self, x):
        rep = circular_variance(x)
        assert 0 <= rep.variance <= x.n / 4 + 1e-12
        assert -x.grid.period / 2 < rep.mean <= x.grid.period / 2

    @settings(max_examples=100, deadline=None)
    @given(signals(), st.floats(-20, 20))
    def test_min_below_any_center(self, x, a):
        assert circular_variance(x).variance <= circular_variance_at(x, a) + 1e-12

    @settings(max_examples=100, deadline=None)
    @given(signals(), st.floats(0.01, 100))
    def test_scale_invariant(self, x, lam):
        assert circular_variance(x).variance == pytest.approx(
            circular_variance(Signal(x.grid, lam * x.values)).variance, rel=1e-10, abs=1e-12
        )

    def test_piece_minima_shape(self, rng):
        x = Signal(make_grid(32), rng.standard_normal(32))
        a, v = piece_minima(x)
        assert a.shape == v.shape == (32,)
        assert v.min() == pytest.approx(circular_variance(x).variance)

    def test_shift_covariance(self, rng):
        g = make_grid(64)
        for _ in range(20):
            x = Signal(g, rng.standard_normal(64) + 1j * rng.standard_normal(64))
            r0, r1 = circular_variance(x), circular_variance(x.shifted(1))
            assert r1.variance == pytest.approx(r0.variance, abs=1e-12)
            assert r1.mean == pytest.approx(g.wrap(r0.mean + g.spacing), abs=1e-12)

    def test_modulation_duality(self, rng):
        g = make_grid(64)
        for p in (1, 5, -13):
            x = Signal(g, rng.standard_normal(64) + 1j * rng.standard_normal(64))
            y = x.modulated(p / g.period)
            assert circular_variance(y).variance == pytest.approx(circular_variance(x).variance, abs=1e-12)
            fx, fy = dft(x), dft(y)
            np.testing.assert_allclose(fy.values, np.roll(fx.values, p), atol=1e-12)
            assert circular_variance(fy).variance == pytest.approx(circular_variance(fx).variance, abs=1e-12)


class TestCircularVarianceAt:
    def test_delta_examples(self):
        x = Signal.delta(make_grid(16))
        assert circular_variance_at(x, 0.0) == 0
        assert circular_variance_at(x, 2.0) == 4.0

    def test_sampled_centers(self, rng):
        x = Signal(make_grid(32), rng.standard_normal(32))
        a = rng.uniform(-3, 3, 10_000)
        best = min(circular_variance_at(x, v) for v in a)
        assert best >= circular_variance(x).variance - 1e-9

    def test_zero(self):
        with pytest.raises(ComputationError):
            circular_variance_at(Signal(make_grid(4), np.zeros(4)), 0.0)


class TestAngular:
    def test_delta(self):
        rep = angular_spread(Signal.delta(make_grid(64)))
        assert rep.variance == 0
        assert rep.mean == 0

    def test_uniform_undefined(self):
        with pytest.raises(ComputationError, match="zero first circular moment"):
            angular_spread(Signal.uniform(make_grid(16)))

    def test_antipodal_pair_undefined(self):
        g = make_grid(16)
        vals = np.zeros(16)
        vals[g.position(0)] = vals[g.position(8)] = 1
        with pytest.raises(ComputationError):
            angular_spread(Signal(g, vals))

    def test_gaussian_agrees_with_circular_variance(self):
        g = make_grid(256)
        x = discrete_gaussian(1.0, g)
        angular = angular_spread(x).variance
        # radians^2 back to grid units
        in_grid_units = angular * (g.period / (2 * math.pi)) ** 2
        assert in_grid_units == pytest.approx(circular_variance(x).variance, rel=0.05)

    def test_mean_follows_center(self):
        g = make_grid(64)
        x = Signal.delta(g, 3)
        assert angular_spread(x).mean == pytest.approx(3 / 8)


class TestSparsityEntropy:
    def test_delta(self):
        x = Signal.delta(make_grid(16))
        assert sparsity(x).variance == 1
        assert entropy(x).variance == 0

    def test_comb_equality_case(self):
        x = comb(16, 4)
        assert sparsity(x).variance == 4
        assert sparsity(dft(x), threshold=1e-12).variance == 4
        assert sparsity(x).variance * sparsity(dft(x), threshold=1e-12).variance == 16
        assert entropy(x).variance == pytest.approx(math.log(4), abs=1e-15)

    def test_uniform(self):
        x = Signal.uniform(make_grid(16))
        assert sparsity(x, 0).variance == 16
        assert entropy(x).variance == pytest.approx(math.log(16), abs=1e-14)

    def test_threshold_validation(self):
        with pytest.raises(ValueError):
            sparsity(Signal.delta(make_grid(4)), -1)

    def test_entropy_zero_signal(self):
        with pytest.raises(ComputationError):
            entropy(Signal(make_grid(4), np.zeros(4)))

    @pytest.mark.parametrize("idx", range(200))
    def test_entropy_sum_sanity(self, idx):
        x = variance_corpus()[idx]
        total = entropy(x).variance + entropy(dft(x)).variance
        assert total >= math.log(x.n) - 1e-9

    def test_geometry_blindness(self):
        g = make_grid(64)
        near = np.zeros(64)
        far = np.zeros(64)
        near[g.position(0)] = near[g.position(1)] = 1
        far[g.position(0)] = far[g.position(20)] = 1
        a, b = Signal(g, near), Signal(g, far)
        assert sparsity(a).variance == sparsity(b).variance
        assert entropy(a).variance == entropy(b).variance
        assert circular_variance(a).variance < circular_variance(b).variance


class TestDispatch:
    def test_frequency_domain(self):
        g = make_grid(16)
        rep = spread(Signal.delta(g), "circular_variance", "frequency")
        assert rep.domain is Domain.FREQUENCY
        assert rep.variance == pytest.approx(circular_variance(Signal.uniform(g)).variance)

    def test_json(self):
        rep = spread(Signal.delta(make_grid(16)), Measure.SPARSITY)
        assert rep.to_json() == {"measure": "sparsity", "domain": "time", "mean": None, "value": 1.0}
