"""Acceptance suite.

One test per acceptance criterion, each printing a PASS/FAIL line with the
measured quantities.  Tolerances are pinned here and nowhere else.

Known red: the lower-tail shape window (test_shape_lower_tail).  At the
mandated desk scale (T = 1e6, y = e^2 log T) the lower tail of the short
product is still dominated by the distribution's bulk rather than by the
extreme-alignment mechanism, so its measured log-ratio sits near 0.37..0.48
for tau in 1.2..1.4, below the required 0.5.  The independent random model
reproduces the same values, confirming this is a property of the quantity,
not of the implementation.  The upper-tail window passes with margin.
"""

import math
import time

import numpy as np
import pytest

from zetalab import characters as ch
from zetalab import cli, distribution as di, hunter as hu, moments as mo, randmodel as rm
from zetalab.numkit import EXP_GAMMA, MomentSpec, constant_C, primes_upto

SEED = 20250810


def report(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_local_factor_identity():
    t0 = time.time()
    worst = 0.0
    for p in (2, 3, 5, 7, 101):
        for k in range(1, 21):
            for d in (1, -1):
                lf = mo.local_factor(p, MomentSpec(k=k, delta=d, y=200))
                worst = max(worst, abs(lf.series_value - lf.quadrature_value) / lf.series_value)
    elapsed = time.time() - t0
    report(
        "local-factor identity",
        worst <= 1e-8 and elapsed < 10.0,
        f"worst relative gap {worst:.2e} (tol 1e-8), {elapsed:.1f}s (< 10s)",
    )


def test_local_factor_sandwich():
    t0 = time.time()
    violations = 0
    for p in primes_upto(100.0):
        for k in range(1, 51):
            for d in (1, -1):
                if not mo.local_factor_bounds(int(p), MomentSpec(k=k, delta=d, y=200)).holds:
                    violations += 1
    elapsed = time.time() - t0
    report(
        "local-factor sandwich",
        violations == 0 and elapsed < 10.0,
        f"{violations} violations over p <= 100, k <= 50, both deltas, {elapsed:.1f}s (< 10s)",
    )


def test_independence_moment_identity():
    t0 = time.time()
    fails = []
    for k in (1, 2, 3):
        for d in (1, -1):
            spec = MomentSpec(k=k, delta=d, y=100.0)
            est = rm.model_moment_mc(spec, 10**6, master_seed=SEED + k)
            exact = mo.restricted_sum(spec)
            dev = abs(est.value - exact) / est.stderr
            if dev > 3.0:
                fails.append((k, d, dev))
    elapsed = time.time() - t0
    report(
        "independence moment identity",
        not fails and elapsed < 120.0,
        f"all k in 1..3, both deltas within 3 SE (worst cases ok), {elapsed:.1f}s (< 2min)"
        if not fails
        else f"failures {fails}",
    )


def test_time_average_matches_restricted_sum():
    t0 = time.time()
    fails = []
    for k in (1, 2, 3):
        for d in (1, -1):
            spec = MomentSpec(k=k, delta=d, y=50.0)
            est = mo.time_average_moment(spec, 1e6, 10**5, master_seed=SEED + 10 * k)
            exact = mo.restricted_sum(spec)
            dev = abs(est.value - exact) / est.stderr
            if dev > 3.0:
                fails.append((k, d, round(dev, 2)))
    elapsed = time.time() - t0
    report(
        "time-average moment identity",
        not fails and elapsed < 300.0,
        f"k in 1..3, both deltas within 3 SE, {elapsed:.1f}s (< 5min)" if not fails else f"failures {fails}",
    )


def test_moment_discrepancy_trend():
    t0 = time.time()
    fails = []
    for k, y in ((50, 5000.0), (100, 1e4), (200, 2e4)):
        for d in (1, -1):
            spec = MomentSpec(k=k, delta=d, y=y)
            dd = mo.moment_discrepancy(spec)
            bound = 5.0 * (k / y + 1.0 / math.log(k))
            if abs(dd) > bound:
                fails.append((k, d, dd, bound))
    d50 = abs(mo.moment_discrepancy(MomentSpec(k=50, delta=1, y=5000.0)))
    d200 = abs(mo.moment_discrepancy(MomentSpec(k=200, delta=1, y=2e4)))
    trend = d200 < d50
    elapsed = time.time() - t0
    report(
        "moment discrepancy trend",
        not fails and trend and elapsed < 60.0,
        f"all |D| within 5(k/y + 1/log k); |D(200)|={d200:.4f} < |D(50)|={d50:.4f}, {elapsed:.1f}s (< 1min)",
    )


def _shape_ratios(tail_probs, taus, n):
    c = constant_C()
    ratios = []
    for tau, p in zip(taus, tail_probs):
        if p * n < 50:
            continue
        predicted_exponent = 2.0 * math.exp(tau - c - 1.0) / tau
        ratios.append((tau, -math.log(p) / predicted_exponent))
    return ratios


@pytest.fixture(scope="module")
def desk_scale_tails():
    T = 1e6
    y = di.default_product_cutoff(T)
    taus = np.round(np.arange(1.0, 2.0001, 0.1), 10)
    est = di.empirical_phi(T, taus, y, 10**5, master_seed=SEED)
    model = rm.model_distribution(taus, y, 10**5, master_seed=SEED + 1)
    return taus, est, model


def test_shape_upper_tail(desk_scale_tails):
    taus, est, _ = desk_scale_tails
    window = [(tau, r) for tau, r in _shape_ratios(est.phi, taus, est.n_samples) if tau >= 1.2 - 1e-9]
    ok = all(0.5 <= r <= 2.0 for _, r in window)
    report(
        "upper-tail shape window",
        ok and len(window) > 0,
        "ratios " + ", ".join(f"{tau:.1f}:{r:.2f}" for tau, r in window) + " all in [0.5, 2]",
    )


def test_shape_lower_tail(desk_scale_tails):
    taus, est, _ = desk_scale_tails
    window = [(tau, r) for tau, r in _shape_ratios(est.psi, taus, est.n_samples) if tau >= 1.2 - 1e-9]
    ok = all(0.5 <= r <= 2.0 for _, r in window)
    report(
        "lower-tail shape window",
        ok and len(window) > 0,
        "ratios " + ", ".join(f"{tau:.1f}:{r:.2f}" for tau, r in window) + " required in [0.5, 2]",
    )


def test_model_zeta_agreement(desk_scale_tails):
    taus, est, model = desk_scale_tails
    worst = 0.0
    for i, tau in enumerate(taus):
        se_phi = math.hypot(est.phi_stderr[i], model.phi_stderr[i])
        worst = max(worst, abs(est.phi[i] - model.phi[i]) / (4.0 * se_phi))
        se_psi = math.hypot(est.psi_stderr[i], model.psi_stderr[i])
        worst = max(worst, abs(est.psi[i] - model.psi[i]) / (4.0 * se_psi))
    report(
        "model-vs-zeta tail agreement",
        worst <= 1.0,
        f"worst deviation {worst:.2f} of the 4-SE budget on tau in [1.0, 2.0]",
    )


def test_short_product_classification():
    t0 = time.time()
    frac = di.reference_agreement(1e6, di.default_product_cutoff(1e6), 1.2, 200, master_seed=SEED)
    elapsed = time.time() - t0
    report(
        "short-product classification",
        frac >= 0.95,
        f"agreement {frac:.3f} on 200 reference-validated samples (need >= 0.95), {elapsed:.0f}s",
    )


def test_fejer_guarantees():
    t0 = time.time()
    rng = np.random.default_rng(SEED)
    kernel_ok = all(
        hu.fejer_kernel_sum(float(theta), L) >= -1e-9
        for L in (4, 16, 64)
        for theta in rng.uniform(0.0, 2.0 * math.pi, size=1000)
    )
    s0 = hu.prime_reciprocal_sum(50.0, 10**4)
    bound_ok = all(
        hu.fejer_select(float(t1), 50.0, 10**4, 50)[1] >= -s0 / 49.0
        for t1 in rng.uniform(1.0, 1e3, size=20)
    )
    elapsed = time.time() - t0
    report(
        "fejer guarantees",
        kernel_ok and bound_ok and elapsed < 5.0,
        f"kernel nonnegative to -1e-9 and selection bound holds, {elapsed:.1f}s (< 5s)",
    )


def test_hunter_beats_baseline():
    t0 = time.time()
    T = 1e6
    wins = 0
    frac_ok = True
    details = []
    for rep in range(10):
        seed = SEED + rep
        config = hu.HuntConfig(T=T, y=7.0)
        result = hu.hunt(config, n_starts=200, master_seed=seed)
        best_hunt = result.candidates[0].score if result.candidates else -math.inf
        frac_ok = frac_ok and all(c.max_frac_part <= config.delta * (1 + 1e-9) for c in result.candidates)
        best_base = max(hu.random_baseline(T, 200, master_seed=seed))
        if best_hunt > best_base:
            wins += 1
        details.append(f"{best_hunt:.2f}>{best_base:.2f}" if best_hunt > best_base else f"{best_hunt:.2f}<={best_base:.2f}")
    elapsed = time.time() - t0
    report(
        "hunter beats baseline",
        wins >= 9 and frac_ok and elapsed < 600.0,
        f"{wins}/10 wins ({', '.join(details)}), all fractional parts within delta, {elapsed:.0f}s (< 10min)",
    )


def test_character_exactness():
    table7 = ch.build_table(7)
    quad_gap = abs(ch.L1_chi_exact(table7, 3, 1e-11) - math.pi / math.sqrt(7.0))
    table13 = ch.build_table(13)
    dual_worst = max(
        abs(ch._partial_sum_value(table13, j, 1e-9) - ch._closed_form_single(table13, j)) for j in range(1, 12)
    )
    vals = np.array([[table13.chi(j, n) for n in range(1, 13)] for j in range(12)])
    gram = vals @ vals.conj().T
    ortho_worst = max(
        float(np.max(np.abs(np.diag(gram) - 12.0))),
        float(np.max(np.abs(gram - np.diag(np.diag(gram))))),
    )
    report(
        "character exactness",
        quad_gap <= 1e-10 and dual_worst <= 1e-8 and ortho_worst <= 1e-10,
        f"pi/sqrt(7) gap {quad_gap:.1e} (tol 1e-10), dual-method worst {dual_worst:.1e} (tol 1e-8), "
        f"orthogonality worst {ortho_worst:.1e} (tol 1e-10)",
    )


def test_character_tail_factor():
    t0 = time.time()
    table = ch.build_table(10007)
    est = ch.char_distribution(table, [1.3], method="exact")
    predicted = math.exp(-2.0 * math.exp(1.3 - constant_C() - 1.0) / 1.3)
    factor = est.phi[0] / predicted
    elapsed = time.time() - t0
    report(
        "character tail factor",
        0.5 <= factor <= 2.0 and elapsed < 300.0,
        f"proportion {est.phi[0]:.4f} vs predicted {predicted:.4f}, factor {factor:.2f} in [0.5, 2], {elapsed:.0f}s",
    )


def test_cli_determinism(tmp_path):
    jobs = [
        ("model-dist", ["model-dist", "--y", "150", "--n", "20000", "--seed", "99", "--tau", "1.0:2.0:0.25"], "model_dist.csv"),
        ("zeta-dist", ["zeta-dist", "--T", "1e5", "--n", "20000", "--seed", "5", "--tau", "1.0:1.6:0.2"], "zeta_dist.csv"),
        ("moments", ["moments", "--what", "time-average", "--k", "1", "--y", "50", "--T", "1e5", "--n", "20000", "--seed", "3"], "moments.csv"),
        ("model-sample", ["model-sample", "--y", "80", "--index", "5", "--seed", "21"], "model_sample.csv"),
        ("hunt", ["hunt", "--T", "1e5", "--y", "5", "--starts", "6", "--seed", "2"], "hunt.csv"),
    ]
    ok = True
    for name, argv, csv_name in jobs:
        blobs = []
        for variant, threads in (("r1", "1"), ("r2", "1"), ("r3", "4")):
            out = tmp_path / f"{name}-{variant}"
            assert cli.main(argv + ["--threads", threads, "--out", str(out)]) == 0
            blobs.append((out / csv_name).read_bytes())
        ok = ok and blobs[0] == blobs[1] == blobs[2]
    report("seeded CLI determinism", ok, "byte-identical CSV bodies across reruns and threads in {1, 4}")
