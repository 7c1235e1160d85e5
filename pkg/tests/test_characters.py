import cmath
import math

import numpy as np
import pytest

from zetalab import characters as ch
from zetalab.numkit import MomentSpec

PI_OVER_SQRT7 = math.pi / math.sqrt(7.0)


class TestBuildTable:
    def test_q7_index_layout(self):
        t = ch.build_table(7)
        assert t.g == 3
        assert t.ind[3] == 1
        assert t.ind[2] == 2  # 3^2 = 2 mod 7

    def test_index_bijection(self):
        t = ch.build_table(101)
        assert sorted(int(i) for i in t.ind[1:]) == list(range(100))

    def test_orthogonality_q13(self):
        t = ch.build_table(13)
        vals = np.array([[t.chi(j, n) for n in range(1, 13)] for j in range(12)])
        gram = vals @ vals.conj().T
        assert np.allclose(np.diag(gram), 12.0, atol=1e-10)
        off = gram - np.diag(np.diag(gram))
        assert np.max(np.abs(off)) < 1e-10

    def test_complete_multiplicativity(self):
        t = ch.build_table(31)
        rng = np.random.default_rng(4)
        for _ in range(40):
            j = int(rng.integers(0, 30))
            m = int(rng.integers(1, 31))
            n = int(rng.integers(1, 31))
            assert t.chi(j, m * n) == pytest.approx(t.chi(j, m) * t.chi(j, n), abs=1e-12)

    def test_nonprincipal_sums_vanish(self):
        t = ch.build_table(13)
        for j in range(1, 12):
            assert abs(sum(t.chi(j, n) for n in range(1, 13))) < 1e-10

    def test_rejections(self):
        with pytest.raises(ValueError):
            ch.build_table(12)
        with pytest.raises(ValueError):
            ch.build_table(2)


class TestEulerProduct:
    def test_empty(self):
        t = ch.build_table(7)
        assert ch.L1_chi_euler(t, 3, 1.5) == 1.0 + 0j

    def test_quadratic_is_real(self):
        t = ch.build_table(7)
        v = ch.L1_chi_euler(t, 3, 100.0)
        assert abs(v.imag) < 1e-12

    def test_conjugate_pair_same_modulus(self):
        t = ch.build_table(101)
        for j in (1, 7, 33):
            a = ch.L1_chi_euler(t, j, 200.0)
            b = ch.L1_chi_euler(t, t.order - j, 200.0)
            assert abs(a) == pytest.approx(abs(b), rel=1e-12)

    def test_principal_rejected(self):
        t = ch.build_table(7)
        with pytest.raises(ValueError):
            ch.L1_chi_euler(t, 0, 100.0)


class TestExactValues:
    def test_class_number_oracle_q7(self):
        t = ch.build_table(7)
        v = ch.L1_chi_exact(t, 3, 1e-11)
        assert abs(v - PI_OVER_SQRT7) < 1e-10

    def test_dual_methods_q13(self):
        t = ch.build_table(13)
        for j in range(1, 12):
            partial = ch._partial_sum_value(t, j, 1e-9)
            closed = ch._closed_form_single(t, j)
            assert abs(partial - closed) < 1e-8

    def test_conjugate_symmetry_q101(self):
        t = ch.build_table(101)
        for j in (3, 11, 40, 77, 90):
            a = ch.L1_chi_exact(t, j, 1e-9)
            b = ch.L1_chi_exact(t, t.order - j, 1e-9)
            assert abs(a - b.conjugate()) < 2e-8

    def test_bulk_matches_single(self):
        t = ch.build_table(101)
        allv = ch.closed_form_all(t)
        for j in range(1, 100):
            assert abs(allv[j] - ch._closed_form_single(t, j)) < 1e-10

    def test_tail_budget_guard(self):
        t = ch.build_table(13)
        with pytest.raises(RuntimeError):
            ch._partial_sum_value(t, 1, 1e-60)

    def test_principal_rejected(self):
        t = ch.build_table(13)
        with pytest.raises(ValueError):
            ch.L1_chi_exact(t, 0)


class TestDistribution:
    def test_tau_zero(self):
        t = ch.build_table(101)
        est = ch.char_distribution(t, [0.0, 1.0])
        assert est.phi[0] == 1.0

    def test_monotone(self):
        t = ch.build_table(997)
        est = ch.char_distribution(t, np.arange(0.5, 2.5, 0.25))
        assert np.all(np.diff(est.phi) <= 0)
        assert np.all(np.diff(est.psi) <= 0)

    def test_small_q_rejected(self):
        t = ch.build_table(31)
        with pytest.raises(ValueError):
            ch.char_distribution(t, [1.0])

    def test_euler_method_approaches_exact(self):
        t = ch.build_table(10007)
        exact = np.abs(ch.closed_form_all(t)[1:])
        r64 = np.abs(np.exp(ch._log_abs_euler_all(t, 64.0, False)[1:]) / exact - 1.0)
        r256 = np.abs(np.exp(ch._log_abs_euler_all(t, 256.0, False)[1:]) / exact - 1.0)
        assert np.median(r256) < np.median(r64)


class TestCharHunt:
    def test_deterministic_and_consistent(self):
        t = ch.build_table(997)
        a = ch.char_hunt(t, 10.0)
        b = ch.char_hunt(t, 10.0)
        assert a.count == b.count and a.top == b.top
        vals = np.abs(ch.closed_form_all(t)[1:])
        assert a.count == int(np.sum(vals >= a.threshold))

    def test_top_sorted(self):
        t = ch.build_table(997)
        res = ch.char_hunt(t, 12.0)
        tops = [v for _, v in res.top]
        assert tops == sorted(tops, reverse=True)

    def test_small_q_domain_error(self):
        t = ch.build_table(13)
        with pytest.raises(ValueError, match="17"):
            ch.char_hunt(t, 10.0)

    def test_a_validation(self):
        t = ch.build_table(101)
        with pytest.raises(ValueError):
            ch.char_hunt(t, 5.0)


class TestDyadicMoment:
    def test_zero_exponent(self):
        assert ch.dyadic_moment(200.0, MomentSpec(k=0, delta=1, y=30.0)) == 1.0

    def test_matches_local_factor_product(self):
        from zetalab import moments as mo

        spec = MomentSpec(k=1, delta=1, y=50.0)
        val = ch.dyadic_moment(500.0, spec)
        prod = mo.restricted_sum(spec)
        assert abs(val - prod) / prod < 0.10

    def test_increasing_in_k(self):
        vals = [ch.dyadic_moment(200.0, MomentSpec(k=k, delta=1, y=30.0)) for k in (1, 2, 3)]
        assert vals[0] < vals[1] < vals[2]

    def test_guards(self):
        with pytest.raises(ValueError):
            ch.dyadic_moment(10**5, MomentSpec(k=1, delta=1, y=30.0))
        with pytest.raises(ValueError):
            ch.dyadic_moment(500.0, MomentSpec(k=6, delta=1, y=30.0))
