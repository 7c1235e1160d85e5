import math

import numpy as np
import pytest

from zetalab import hunter as hu
from zetalab.numkit import primes_upto

TWO_PI = 2.0 * math.pi


def scan_oracle(t0, primes, delta, m_max):
    # independent exhaustive scan, kept deliberately plain
    x = np.mod(t0 * np.log(np.asarray(primes, dtype=float)) / TWO_PI, 1.0)
    for lo in range(1, m_max + 1, 1 << 20):
        ms = np.arange(lo, min(lo + (1 << 20), m_max + 1), dtype=np.float64)
        f = np.mod(ms[:, None] * x[None, :], 1.0)
        ok = np.nonzero((np.minimum(f, 1.0 - f) <= delta).all(axis=1))[0]
        if ok.size:
            return int(ms[ok[0]])
    return None


class TestSimultaneousApprox:
    def test_trivial_tolerance(self):
        assert hu.simultaneous_approx(123.456, [2, 3, 5, 7], 0.5, 10) == 1

    def test_constructed_zero_fraction(self):
        t0 = TWO_PI / math.log(2.0)
        assert hu.simultaneous_approx(t0, [2], 0.01, 10) == 1

    def test_matches_exhaustive_scan(self):
        m = hu.simultaneous_approx(1.0, [2, 3, 5], 0.05, 10**7)
        assert m == scan_oracle(1.0, [2, 3, 5], 0.05, 10**7) == 1550

    def test_budget_exhaustion_reported(self):
        assert hu.simultaneous_approx(1.0, [2, 3, 5, 7, 11, 13], 0.01, 1000) is None

    def test_validation(self):
        with pytest.raises(ValueError):
            hu.simultaneous_approx(1.0, [], 0.1, 100)
        with pytest.raises(ValueError):
            hu.simultaneous_approx(1.0, [2], 0.7, 100)


class TestFejer:
    @pytest.mark.parametrize("L", [4, 16, 64])
    def test_kernel_nonnegative(self, L):
        rng = np.random.default_rng(L)
        for theta in rng.uniform(0.0, TWO_PI, size=1000):
            assert hu.fejer_kernel_sum(float(theta), L) >= -1e-9

    def test_all_positive_at_zero_multiplier_phase(self):
        n, value = hu.fejer_select(0.0, 50.0, 10**4, 50)
        s0 = hu.prime_reciprocal_sum(50.0, 10**4)
        assert n == 1
        assert value == pytest.approx(s0, rel=1e-12)
        assert value > 0

    def test_lower_bound_on_random_instances(self):
        rng = np.random.default_rng(9)
        s0 = hu.prime_reciprocal_sum(50.0, 10**4)
        for t1 in rng.uniform(1.0, 1e3, size=20):
            _, value = hu.fejer_select(float(t1), 50.0, 10**4, 50)
            assert value >= -s0 / 49.0

    def test_argmax_matches_direct_scan(self):
        t1 = 37.25
        y, pmax, L = 50.0, 10**4, 50
        ps = primes_upto(pmax).astype(float)
        ps = ps[ps >= y]
        vals = [float(np.sum(np.cos(n * t1 * np.log(ps)) / ps)) for n in range(1, L + 1)]
        n, value = hu.fejer_select(t1, y, pmax, L)
        assert n == int(np.argmax(vals)) + 1
        assert value == pytest.approx(max(vals), rel=1e-12)

    def test_allowed_mask(self):
        allowed = np.zeros(50, dtype=bool)
        allowed[0] = True
        n, _ = hu.fejer_select(37.25, 50.0, 10**4, 50, allowed=allowed)
        assert n == 1

    def test_empty_range_rejected(self):
        with pytest.raises(ValueError):
            hu.fejer_select(1.0, 100.0, 50.0, 8)


class TestHunt:
    def _small_config(self):
        return hu.HuntConfig(T=1e5, y=5.0, m_max=10**5, L=4, P_max=10**4)

    def test_candidates_reconstruct(self):
        res = hu.hunt(self._small_config(), n_starts=8, master_seed=77)
        assert res.candidates, "expected at least one candidate"
        cfg = res.config
        log_p = np.log(primes_upto(cfg.y).astype(float))
        for c in res.candidates:
            assert c.t == pytest.approx(c.m * c.n * c.t0, rel=1e-12)
            fracs = np.mod(c.t * log_p / TWO_PI, 1.0)
            dist = float(np.max(np.minimum(fracs, 1.0 - fracs)))
            assert dist == pytest.approx(c.max_frac_part, abs=1e-12)
            assert c.max_frac_part <= cfg.delta * (1.0 + 1e-9)
            assert c.zeta_abs > 0

    def test_sorted_by_score(self):
        res = hu.hunt(self._small_config(), n_starts=8, master_seed=77)
        scores = [c.score for c in res.candidates]
        assert scores == sorted(scores, reverse=True)

    def test_deterministic(self):
        a = hu.hunt(self._small_config(), n_starts=6, master_seed=5)
        b = hu.hunt(self._small_config(), n_starts=6, master_seed=5)
        assert [(c.t, c.score) for c in a.candidates] == [(c.t, c.score) for c in b.candidates]

    def test_budget_misses_are_recorded(self):
        cfg = hu.HuntConfig(T=1e5, y=13.0, delta=0.02, m_max=50, L=4, P_max=10**4)
        res = hu.hunt(cfg, n_starts=6, master_seed=3)
        assert res.skipped, "tiny budget should miss"
        assert all(s.reason for s in res.skipped)

    def test_grid_starts_distinct_ordinates(self):
        cfg = hu.HuntConfig(T=1e6, y=5.0, start_mode="grid")
        res = hu.hunt(cfg, n_starts=8, master_seed=1)
        ts = sorted(c.t for c in res.candidates)
        assert len(ts) >= 2
        assert all(b - a >= 1.0 for a, b in zip(ts, ts[1:]))


class TestStability:
    def test_exact_width(self):
        assert hu.stability_width(math.exp(10.0)) == pytest.approx(1e-2, rel=1e-12)

    def test_decreasing(self):
        assert hu.stability_width(1e6) < hu.stability_width(1e4)

    def test_measured_variation_small(self):
        _, variation = hu.stability_scan(1e5)
        assert variation < 0.5

    def test_domain(self):
        with pytest.raises(ValueError):
            hu.stability_width(5.0)
