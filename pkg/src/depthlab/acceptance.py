"""Acceptance suites: the numbered exit criteria of the artifact.

Each criterion is a function returning AssertionResults; the pytest gate
(tests/test_acceptance.py) and `depthlab verify` both run these. Tolerances
are pinned here, not configurable, so a green run means the stated contract.
"""

from __future__ import annotations

import math
import time

import numpy as np
from scipy import special

from . import measures as meas
from .ballbodies import BallBodyOracle, kt_inclusion_check, volume_identity_check
from .centroid import CentroidOracle
from .depth import (
    DepthOptions,
    TailEstimator,
    depth_estimate_batch,
    depth_upper_cramer_batch,
    expected_depth,
    gaussian_expected_depth_oracle,
)
from .geometry import direction_net
from .harness.experiments import sandwich_lower_inputs
from .harness.records import AssertionResult
from .measures import make_measure
from .polytopes import (
    dilation_check,
    expected_measure,
    kappa_mu_estimate,
    lower_bound_lemma,
    sample_polytope,
    threshold_sweep,
    upper_bound_lemma,
)
from .rng import RngStream
from .transforms import LaplaceOracle, bt_in_zt_check, cramer_batch, measure_alpha_emp

SEED = 20_240_817

DENSITY_KINDS = (
    meas.GAUSSIAN,
    meas.CUBE,
    meas.CUBE_UNIT,
    meas.BALL,
    meas.SIMPLEX,
    meas.EXPONENTIAL,
)


def _result(name: str, passed: bool, value: float, detail: str = "") -> AssertionResult:
    return AssertionResult(name=name, status="pass" if passed else "fail",
                           value=value, detail=detail)


def criterion_1() -> list[AssertionResult]:
    """1D distribution-free identity: E(phi) = 1/4 within 0.005, under 10 s."""
    out = []
    for i, kind in enumerate((meas.GAUSSIAN, meas.CUBE, meas.EXPONENTIAL)):
        m = make_measure(kind, 1)
        t0 = time.time()
        est = expected_depth(m, RngStream(SEED, 10 + i), 100_000)
        elapsed = time.time() - t0
        err = abs(est.value - 0.25)
        out.append(_result(
            f"1.expected-depth-1d[{kind}]",
            err <= 0.005 and elapsed < 10.0,
            est.value,
            f"err={err:.2e} runtime={elapsed:.1f}s",
        ))
    return out


def criterion_2() -> list[AssertionResult]:
    """Gaussian Cramér exactness over 10^3 random targets, under 30 s."""
    t0 = time.time()
    gen = RngStream(SEED, 20).generator()
    worst = 0.0
    for n in range(1, 11):
        m = make_measure(meas.GAUSSIAN, n)
        oracle = LaplaceOracle(m)
        g = gen.standard_normal((100, n))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        V = g * (5.0 * gen.random(100) ** (1.0 / n))[:, None]
        res = cramer_batch(oracle, V, tol=1e-9)
        worst = max(worst, float(np.max(np.abs(res.values - 0.5 * np.sum(V * V, axis=1)))))
    elapsed = time.time() - t0
    return [_result("2.gaussian-cramer-exact", worst <= 1e-6 and elapsed < 30.0,
                    worst, f"max error over 1000 targets, runtime={elapsed:.1f}s")]


def criterion_3() -> list[AssertionResult]:
    """Depth estimates never exceed the Cramér bound beyond 3 combined sigma."""
    out = []
    opts = DepthOptions(net_size=64, refine_rounds=2, pool_size=20_000)
    for kind in DENSITY_KINDS:
        worst_excess = -math.inf
        violations = 0
        for n in (2, 3, 5):
            m = make_measure(kind, n)
            rng = RngStream(SEED, 30)
            X = m.sample_batch(rng.child(1), 1000)
            oracle = LaplaceOracle(m, rng=rng.child(2))
            bounds, cres = depth_upper_cramer_batch(oracle, X)
            tails = TailEstimator(m, rng.child(3), opts.pool_size)
            vals, ses = depth_estimate_batch(m, X, opts, rng.child(4), tails,
                                             extra_directions=cres.maximizers)
            excess = vals - bounds - (3.0 * ses + 1e-12)
            worst_excess = max(worst_excess, float(np.max(excess)))
            violations += int(np.sum(excess > 0))
        out.append(_result(
            f"3.depth-cramer-sandwich[{kind}]",
            violations == 0,
            worst_excess,
            f"violations={violations} over 3000 points (n=2,3,5)",
        ))
    return out


def criterion_4() -> list[AssertionResult]:
    """Grünbaum floor 1/e - 0.01 over 100 directions; exponential edge case."""
    out = []
    floor = 1.0 / math.e - 0.01
    for kind in DENSITY_KINDS:
        worst = math.inf
        for n in (2, 3, 5):
            m = make_measure(kind, n)
            rng = RngStream(SEED, 40)
            net = direction_net(n, 100, rng.child(n)) if n != 3 else direction_net(3, 100)
            tails = TailEstimator(m, rng.child(10 + n), 200_000)
            vals = tails.tails_for_point(np.zeros(n), net)
            worst = min(worst, float(np.min(vals)))
        out.append(_result(
            f"4.grunbaum-floor[{kind}]", worst >= floor, worst,
            f"min tail over 100 directions x n in (2,3,5); floor={floor:.5f}",
        ))
    m1 = make_measure(meas.EXPONENTIAL, 1)
    tail = m1.marginal(np.array([1.0])).tail(0.0)
    out.append(_result(
        "4.exponential-attains-1/e", abs(tail - 1.0 / math.e) <= 0.002, tail,
        "half-space mass at the barycenter along +1",
    ))
    return out


def criterion_5() -> list[AssertionResult]:
    """Gaussian expected-depth decay versus the chi_n quadrature oracle.

    The oracle-match clause is the operative one. The decay-band clause is
    implemented exactly as stated; the band [0.30, 0.40] does not contain the
    true value of ln(1/E phi)/n at n = 8 (0.5626: ln2/2 is the n -> infinity
    limit and the O(log n / n) correction is still large at n = 8), so that
    sub-assertion fails by design rather than being weakened. See the
    regression values in the detail string.
    """
    out = []
    values = {}
    worst_sigma = 0.0
    for n in range(1, 9):
        m = make_measure(meas.GAUSSIAN, n)
        est = expected_depth(m, RngStream(SEED, 50 + n), 200_000)
        oracle = gaussian_expected_depth_oracle(n)
        values[n] = est.value
        dist_sigma = abs(est.value - oracle) / est.std_error
        worst_sigma = max(worst_sigma, dist_sigma)
    out.append(_result(
        "5.gaussian-oracle-match", worst_sigma <= 3.0, worst_sigma,
        "max |estimate - E[Phi(-R)]| in sigmas over n=1..8",
    ))
    rate = math.log(1.0 / values[8]) / 8.0
    local = math.log(values[7] / values[8])
    ys = [math.log(1.0 / values[n]) for n in range(1, 9)]
    slope = float(np.polyfit(np.arange(1, 9), ys, 1)[0])
    out.append(_result(
        "5.decay-rate-band", 0.30 <= rate <= 0.40, rate,
        f"ln(1/E)/n at n=8 (oracle 0.5626); local slope {local:.4f}, "
        f"OLS slope {slope:.4f}, asymptote ln2/2 = {math.log(2)/2:.4f}",
    ))
    return out


def criterion_6() -> list[AssertionResult]:
    """B_t inside 4 e alpha_emp Z_t over direction nets, alpha_emp <= 2."""
    out = []
    rng = RngStream(SEED, 60)
    pairs = [(2.0, 4.0), (2.0, 8.0), (4.0, 8.0), (8.0, 16.0)]
    for kind in DENSITY_KINDS:
        worst_gauge = 0.0
        worst_alpha = 1.0
        ok = True
        for n in (1, 2, 3):
            m = make_measure(kind, n)
            net = direction_net(n, 1000, rng.child(n))
            alpha = measure_alpha_emp(m, pairs, net[:: len(net) // 8], rng=rng.child(100 + n))
            worst_alpha = max(worst_alpha, alpha)
            oracle = LaplaceOracle(m, rng=rng.child(200 + n))
            for t in (2.0, 4.0, 8.0):
                zt = CentroidOracle(m, t, rng=rng.child(300 + n))
                rep = bt_in_zt_check(oracle, zt, t, net, alpha_emp=alpha)
                worst_gauge = max(worst_gauge, rep.worst / rep.details["bound"])
                ok = ok and rep.passed
        out.append(_result(
            f"6.bt-in-4ea-zt[{kind}]", ok and worst_alpha <= 2.0, worst_gauge,
            f"max gauge/bound over n=1..3, t=2,4,8; alpha_emp={worst_alpha:.3f}",
        ))
    return out


def criterion_7() -> list[AssertionResult]:
    """Ball-body identities: K_t(cube) = cube, |K_n| f(0) = 1, inclusions."""
    out = []
    # K_t of a uniform measure equals the body, via the generic quadrature path
    worst = 0.0
    for n in (1, 2, 3):
        m = make_measure(meas.CUBE, n)
        net = direction_net(n, 64, RngStream(SEED, 70 + n))
        for t in (1.0, 2.0, float(n), float(n + 1), 7.5):
            oracle = BallBodyOracle(m, t)
            rho = np.array([oracle._quad_radial(xi) for xi in net])
            ref = np.array([m.support_radius(xi) for xi in net])
            worst = max(worst, float(np.max(np.abs(rho - ref) / ref)))
    out.append(_result("7.kt-of-cube-is-cube", worst <= 1e-8, worst,
                       "sup relative radial error, quadrature path vs support radius"))
    for n in (2, 3):
        rep = volume_identity_check(make_measure(meas.GAUSSIAN, n), RngStream(SEED, 72 + n))
        ident = rep.details["f0_times_vol_Kn"]
        out.append(_result(f"7.volume-identity[gaussian n={n}]",
                           abs(ident - 1.0) <= 0.02, ident, str(rep.details)))
    ok = True
    worst_margin = math.inf
    for kind in DENSITY_KINDS:
        for n in (2, 3):
            m = make_measure(kind, n)
            net = direction_net(n, 64, RngStream(SEED, 74 + n))
            for (t, s) in [(1.0, 2.0), (2.0, float(n)), (float(n), float(n + 1)),
                           (float(n + 1), float(2 * n))]:
                if not (0 < t <= s):
                    continue
                rep = kt_inclusion_check(m, t, s, net)
                ok = ok and rep.passed
                worst_margin = min(worst_margin, rep.worst)
    out.append(_result("7.kt-inclusion-chain", ok, worst_margin,
                       "min margin over catalog x n in (2,3) x (t,s) pairs"))
    return out


def criterion_8() -> list[AssertionResult]:
    """Lemma-based sandwich around measured E[mu(K_N)], within 10 minutes."""
    out = []
    t0 = time.time()
    for kind in (meas.GAUSSIAN, meas.CUBE):
        for n in (2, 3):
            m = make_measure(kind, n)
            rng = RngStream(SEED, 80)
            oracle = LaplaceOracle(m, rng=rng.child(0))
            inf_depth, mu_a = sandwich_lower_inputs(m, 0.25, 256, 20_000, rng.child(1))
            ok = True
            detail_parts = []
            for j, N in enumerate((25, 100, 400)):
                measured = expected_measure(m, m, N, reps=8, test_points=600,
                                            rng=rng.child(10 + j))
                ts = sorted({2.0, 4.0, 8.0, math.log(4.0 * N), math.log(20.0 * N)})
                uppers = [upper_bound_lemma(oracle, m, t, N, rng.child(100 + 10 * j + k),
                                            mc_points=2000)
                          for k, t in enumerate(ts)]
                best = min(uppers, key=lambda u: u.value)
                lower = lower_bound_lemma(inf_depth, N, n,
                                          max(0.0, mu_a.value - 3 * mu_a.std_error))
                lower_ok = lower <= measured.value + 3 * measured.std_error
                upper_ok = measured.value <= best.value + 3 * math.hypot(
                    measured.std_error, best.std_error)
                ok = ok and lower_ok and upper_ok
                detail_parts.append(f"N={N}: {lower:.3g} <= {measured.value:.3g} <= {best.value:.3g}")
            out.append(_result(f"8.bound-sandwich[{kind} n={n}]", ok,
                               measured.value, "; ".join(detail_parts)))
    elapsed = time.time() - t0
    out.append(_result("8.runtime-under-10min", elapsed < 600.0, elapsed,
                       f"runtime={elapsed:.0f}s"))
    return out


def criterion_9() -> list[AssertionResult]:
    """Dilation inequality: zero violations beyond 3 sigma."""
    out = []
    for kind, n in ((meas.GAUSSIAN, 3), (meas.CUBE, 2)):
        m = make_measure(kind, n)
        violations = 0
        worst = -math.inf
        for seed_idx in range(10):
            rng = RngStream(SEED, 90).child(seed_idx)
            poly = sample_polytope(m, 20, rng.child(0))
            for d_idx, delta in enumerate((0.1, 0.5)):
                rep = dilation_check(m, poly, delta, rng.child(1 + d_idx), mc_points=50_000)
                worst = max(worst, rep.worst / (3.0 * rep.details["combined_se"]))
                if not rep.passed:
                    violations += 1
        out.append(_result(f"9.dilation[{kind} n={n}]", violations == 0, worst,
                           "margin/(3 sigma) max over 10 seeds x delta in (0.1, 0.5)"))
    return out


def criterion_10() -> list[AssertionResult]:
    """Solid-cube threshold at n=8: monotone curve, kappa_emp near the
    Dyer-Füredi-McDiarmid constant; runtime under 30 minutes."""
    t0 = time.time()
    n = 8
    m = make_measure(meas.CUBE, n)
    rng = RngStream(SEED, 100)
    kappa_ref = math.log(2 * math.pi) - np.euler_gamma - 0.5
    grid = [9, 18, 36, 72, 144, 288, 576, 1152, 2304, 4608, 9216, 18432]
    curve = threshold_sweep(m, m, grid, reps=3, test_points=256, rng=rng.child(1))
    drops = []
    for a, b in zip(curve.estimates, curve.estimates[1:]):
        drops.append((a.value - b.value) - 2.0 * (a.std_error + b.std_error))
    monotone = all(d <= 0 for d in drops)
    kappa_ok = (math.isfinite(curve.kappa_emp)
                and 0.4 * kappa_ref <= curve.kappa_emp <= 1.5 * kappa_ref)
    elapsed = time.time() - t0
    detail = (f"crossing_N={curve.crossing_N:.1f} kappa_emp={curve.kappa_emp:.4f} "
              f"kappa_ref={kappa_ref:.5f} runtime={elapsed:.0f}s")
    return [
        _result("10.threshold-monotone", monotone, max(drops), detail),
        _result("10.kappa-emp-band", kappa_ok and elapsed < 1800.0,
                curve.kappa_emp if math.isfinite(curve.kappa_emp) else -1.0, detail),
    ]


def criterion_11() -> list[AssertionResult]:
    """Discrete-cube smoke at n=10: the membership fraction rises by >= 0.3."""
    n = 10
    m = make_measure(meas.DISCRETE_CUBE, n)
    rng = RngStream(SEED, 110)
    low = expected_measure(m, m, n + 2, reps=3, test_points=400, rng=rng.child(0))
    high = expected_measure(m, m, 1000, reps=3, test_points=400, rng=rng.child(1))
    gain = high.value - low.value
    curve = threshold_sweep(m, m, [n + 2, 50, 200, 1000], reps=2, test_points=300,
                            rng=rng.child(2))
    detail = (f"est(N=12)={low.value:.4f} est(N=1000)={high.value:.4f} "
              f"kappa_emp={curve.kappa_emp:.4f} (reported)")
    return [_result("11.discrete-cube-smoke", gain >= 0.3, gain, detail)]


CRITERIA = {
    "acceptance-1": criterion_1,
    "acceptance-2": criterion_2,
    "acceptance-3": criterion_3,
    "acceptance-4": criterion_4,
    "acceptance-5": criterion_5,
    "acceptance-6": criterion_6,
    "acceptance-7": criterion_7,
    "acceptance-8": criterion_8,
    "acceptance-9": criterion_9,
    "acceptance-10": criterion_10,
    "acceptance-11": criterion_11,
}

SUITES = dict(CRITERIA)
SUITES["quick"] = None  # resolved in run_suite
SUITES["all"] = None

_QUICK = ("acceptance-1", "acceptance-2", "acceptance-4", "acceptance-7")


def run_suite(name: str) -> list[AssertionResult]:
    """Run one named suite; 'all' chains every criterion in order."""
    if name == "all":
        names = list(CRITERIA)
    elif name == "quick":
        names = list(_QUICK)
    elif name in CRITERIA:
        names = [name]
    else:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    results: list[AssertionResult] = []
    for key in names:
        results.extend(CRITERIA[key]())
    return results
