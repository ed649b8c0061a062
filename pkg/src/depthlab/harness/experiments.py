"""The named experiments behind `depthlab run` and the service endpoint.

Each experiment consumes a validated ExperimentConfig and produces metric
tables plus assertion results; the runner wraps them into a RunRecord. All
randomness flows from RngStream(cfg.seed) through indexed children, so a rep
count or thread count change never silently reshuffles other draws.
"""

from __future__ import annotations

import math

import numpy as np

from .. import measures as meas
from ..ballbodies import kt_inclusion_check, rt_contains_kn1_check, volume_identity_check
from ..centroid import CentroidOracle, even_halving_check, pz_moment_check, zt_plus_inclusion_check
from ..depth import (
    DepthOptions,
    depth_lower_pz,
    expected_depth,
    gaussian_expected_depth_oracle,
    grunbaum_check,
)
from ..estimates import EstimateWithCI
from ..geometry import direction_net
from ..measures import MeasureSpec, make_measure
from ..polytopes import (
    default_n_grid,
    expected_measure,
    kappa_mu_estimate,
    lower_bound_lemma,
    sample_polytope,
    threshold_sweep,
    upper_bound_lemma,
    dilation_check,
)
from ..rng import RngStream
from ..transforms import (
    LaplaceOracle,
    bt_in_zt_check,
    bt_nesting_check,
    cramer_batch,
)
from .config import ExperimentConfig
from .records import AssertionResult, MetricTable


def run_experiment(cfg: ExperimentConfig):
    handler = _HANDLERS[cfg.experiment]
    return handler(cfg)


def _ball_point(gen, n: int, radius: float) -> np.ndarray:
    g = gen.standard_normal(n)
    g /= np.linalg.norm(g)
    return g * radius * gen.random() ** (1.0 / n)


def _check_assertion(report) -> AssertionResult:
    return AssertionResult(
        name=report.name,
        status="pass" if report.passed else "fail",
        value=report.worst,
        detail="; ".join(f"{k}={v}" for k, v in report.details.items()),
    )


# ---------------------------------------------------------------------------


def _expected_depth(cfg: ExperimentConfig):
    root = RngStream(cfg.seed)
    rows = []
    assertions = []
    opts = DepthOptions(net_size=cfg.net_size, pool_size=cfg.mc_budget)
    for i, n in enumerate(cfg.dims()):
        m = make_measure(cfg.kind, n)
        est = expected_depth(m, root.child(i), cfg.samples, opts)
        oracle = math.nan
        if m.kind == meas.GAUSSIAN:
            oracle = gaussian_expected_depth_oracle(n)
        elif n == 1 and not m.atomic:
            oracle = 0.25
        rows.append([cfg.kind, n, est.value, est.std_error, est.ci_low, est.ci_high, oracle])
        if not math.isnan(oracle):
            dist = abs(est.value - oracle)
            assertions.append(AssertionResult(
                name=f"expected-depth-oracle[{m.describe()}]",
                status="pass" if dist <= 3 * est.std_error + 1e-12 else "fail",
                value=est.value,
                detail=f"oracle={oracle:.6g} dist={dist:.3g} se={est.std_error:.3g}",
            ))
    table = MetricTable(
        name="expected-depth",
        columns=["kind", "n", "value", "std_error", "ci_low", "ci_high", "oracle"],
        rows=rows,
        plot={"x": "n", "y": "value", "lo": "ci_low", "hi": "ci_high", "logx": False},
    )
    return [table], assertions


def _cramer_surface(cfg: ExperimentConfig):
    n = cfg.dimension
    m = make_measure(cfg.kind, n)
    oracle = LaplaceOracle(m, rng=RngStream(cfg.seed, 1), mc_budget=cfg.mc_budget)
    gen = RngStream(cfg.seed).generator()
    V = np.array([_ball_point(gen, n, cfg.radius) for _ in range(cfg.samples)])
    res = cramer_batch(oracle, V, tol=cfg.cramer_tol)
    rows = [
        [*(float(v) for v in V[i]), float(res.values[i]), bool(res.converged[i])]
        for i in range(len(V))
    ]
    table = MetricTable(
        name="cramer-surface",
        columns=[*(f"v{j+1}" for j in range(n)), "lambda_star", "converged"],
        rows=rows,
    )
    assertions = [AssertionResult(
        name="cramer-nonnegative",
        status="pass" if float(np.nanmin(res.values)) >= -1e-12 else "fail",
        value=float(np.nanmin(res.values)),
    )]
    if m.kind == meas.GAUSSIAN:
        err = float(np.max(np.abs(res.values - 0.5 * np.sum(V * V, axis=1))))
        assertions.append(AssertionResult(
            name="cramer-gaussian-exact",
            status="pass" if err <= 1e-6 else "fail",
            value=err,
            detail="max |Lambda*(v) - |v|^2/2|",
        ))
    return [table], assertions


def _inclusion_suite(cfg: ExperimentConfig):
    rows = []
    assertions = []
    root = RngStream(cfg.seed)
    for i, n in enumerate(cfg.dims()):
        m = make_measure(cfg.kind, n)
        if m.atomic:
            assertions.append(AssertionResult(
                name=f"inclusion-suite[{m.describe()}]", status="skipped", value=0.0,
                detail="atomic measure: no density checks",
            ))
            continue
        rng = root.child(i)
        net = direction_net(n, cfg.net_size, rng.child(0))
        oracle = LaplaceOracle(m, rng=rng.child(1), mc_budget=cfg.mc_budget)
        reports = []
        reports.append(meas.fradelizi_checks(m, rng.child(2), directions=20, mc_points=2000))
        reports.append(grunbaum_check(m, direction_net(n, 100, rng.child(3)), rng.child(4)))
        gen = rng.child(5).generator()
        for _ in range(5):
            xi = gen.standard_normal(n)
            xi /= np.linalg.norm(xi)
            t = 1.0 + 4.0 * gen.random()
            s = t * (1.0 + 3.0 * gen.random())
            reports.append(bt_nesting_check(oracle, xi, t, s, tol=cfg.bisect_tol))
        for t in cfg.t_grid:
            zt = CentroidOracle(m, t, rng=rng.child(6), mc_budget=cfg.mc_budget)
            reports.append(bt_in_zt_check(oracle, zt, t, net[: min(len(net), 200)], rng=rng.child(7)))
        if m.even:
            reports.append(even_halving_check(
                CentroidOracle(m, cfg.t, rng=rng.child(8), mc_budget=cfg.mc_budget),
                net[:50], tol=cfg.check_tol,
            ))
        if cfg.t < cfg.s:
            reports.append(zt_plus_inclusion_check(m, cfg.t, cfg.s, net[:50], rng=rng.child(9)))
        reports.append(pz_moment_check(
            CentroidOracle(m, cfg.t, rng=rng.child(10), mc_budget=cfg.mc_budget), net[0], cfg.t,
        ))
        for (t, s) in [(1.0, 2.0), (2.0, float(n)), (float(n), float(n + 1)), (float(n + 1), float(2 * n))]:
            if 0 < t <= s:
                reports.append(kt_inclusion_check(m, t, s, net[:100]))
        if n <= 4:
            reports.append(volume_identity_check(m, rng.child(11)))
        reports.append(rt_contains_kn1_check(m, 5.0 * n, net[:50], rng=rng.child(12)))
        for rep in reports:
            rows.append([rep.name, n, rep.passed, rep.worst])
            assertions.append(_check_assertion(rep))
    table = MetricTable(name="inclusion-checks", columns=["check", "n", "passed", "worst"], rows=rows)
    return [table], assertions


def _threshold_sweep(cfg: ExperimentConfig):
    n = cfg.dimension
    m = make_measure(cfg.kind, n)
    root = RngStream(cfg.seed)
    assertions = []
    kappa_hat = None
    if m.has_density:
        oracle = LaplaceOracle(m, rng=root.child(0), mc_budget=cfg.mc_budget)
        kappa_hat = kappa_mu_estimate(oracle, m, root.child(1), n_samples=min(cfg.samples, 2000))
    if cfg.n_grid:
        grid = list(cfg.n_grid)
    else:
        if kappa_hat is None:
            raise ValueError("atomic measures need an explicit n-grid")
        grid = default_n_grid(n, kappa_hat.value)
    curve = threshold_sweep(m, m, grid, cfg.reps, cfg.test_points, root.child(2),
                            dilation=cfg.delta, threads=cfg.threads)
    rows = curve.as_rows()
    table = MetricTable(
        name="threshold-curve",
        columns=["N", "value", "std_error", "ci_low", "ci_high"],
        rows=[list(r) for r in rows],
        plot={"x": "N", "y": "value", "lo": "ci_low", "hi": "ci_high", "logx": True},
    )
    monotone = True
    worst_drop = 0.0
    ests = curve.estimates
    for a, b in zip(ests, ests[1:]):
        drop = a.value - b.value
        slack = 2.0 * (a.std_error + b.std_error)
        worst_drop = max(worst_drop, drop - slack)
        if drop > slack:
            monotone = False
    assertions.append(AssertionResult(
        name="threshold-monotone-2sigma", status="pass" if monotone else "fail",
        value=worst_drop, detail="max drop beyond 2 sigma slack",
    ))
    summary_rows = [[
        curve.crossing_N, curve.kappa_emp,
        kappa_hat.value if kappa_hat else math.nan,
        kappa_hat.std_error if kappa_hat else math.nan,
    ]]
    table2 = MetricTable(
        name="threshold-summary",
        columns=["crossing_N", "kappa_emp", "kappa_mu", "kappa_mu_se"],
        rows=summary_rows,
    )
    if kappa_hat is not None and math.isfinite(curve.kappa_emp):
        lo, hi = cfg.kappa_band[0], cfg.kappa_band[-1]
        ok = lo * kappa_hat.value <= curve.kappa_emp <= hi * kappa_hat.value
        assertions.append(AssertionResult(
            name="kappa-emp-band", status="pass" if ok else "fail",
            value=curve.kappa_emp,
            detail=f"band=[{lo}, {hi}] x kappa_mu={kappa_hat.value:.5g}",
        ))
    else:
        assertions.append(AssertionResult(
            name="kappa-emp-band", status="skipped",
            value=curve.kappa_emp, detail="no kappa_mu reference or no crossing",
        ))
    return [table, table2], assertions


def sandwich_lower_inputs(m: MeasureSpec, epsilon: float, net_size: int,
                          mc_budget: int, rng: RngStream):
    """(inf_depth, mu(A) estimate) for A = (1 - epsilon) Z_{5n}^+(mu)."""
    n = m.dimension
    t = 5.0 * n
    zplus = CentroidOracle(m, t, one_sided=True, rng=rng.child(0), mc_budget=mc_budget)
    net = direction_net(n, net_size, rng.child(1))
    pz = depth_lower_pz(zplus, np.zeros(n), t, 1.0 - epsilon, net)
    X = m.sample_batch(rng.child(2), mc_budget)
    H = zplus.support_batch(net)
    # gauge of each sample against the net, plus its own direction
    G = np.max(np.maximum(X @ net.T, 0.0) / H[None, :], axis=1)
    norms = np.linalg.norm(X, axis=1)
    units = X / np.maximum(norms, 1e-300)[:, None]
    own = norms / zplus.support_batch(units)
    G = np.maximum(G, own)
    inside = G <= 1.0 - epsilon
    p = float(np.mean(inside))
    se = math.sqrt(max(p * (1 - p), 1e-12) / len(X))
    return pz.value, EstimateWithCI(p, se, len(X), rng.seed, rng.stream)


def _bound_sandwich(cfg: ExperimentConfig):
    n = cfg.dimension
    m = make_measure(cfg.kind, n)
    root = RngStream(cfg.seed)
    oracle = LaplaceOracle(m, rng=root.child(0), mc_budget=cfg.mc_budget)
    inf_depth, mu_a = sandwich_lower_inputs(m, cfg.epsilon, min(cfg.net_size, 256),
                                            min(cfg.mc_budget, 20_000), root.child(1))
    grid = list(cfg.n_grid) if cfg.n_grid else [25, 100, 400]
    rows = []
    assertions = []
    for j, N in enumerate(grid):
        measured = expected_measure(m, m, N, cfg.reps, cfg.test_points, root.child(10 + j),
                                    threads=cfg.threads)
        t_candidates = sorted(set(list(cfg.t_grid) + [math.log(4.0 * N), math.log(20.0 * N)]))
        uppers = [
            upper_bound_lemma(oracle, m, t, N, root.child(100 + 10 * j + k), mc_points=2000)
            for k, t in enumerate(t_candidates)
        ]
        best = min(uppers, key=lambda u: u.value)
        lower = lower_bound_lemma(inf_depth, N, n, max(0.0, mu_a.value - 3 * mu_a.std_error))
        ok = (lower <= measured.value + 3 * measured.std_error
              and measured.value <= best.value + 3 * math.hypot(measured.std_error, best.std_error))
        rows.append([N, lower, measured.value, measured.std_error, best.value, best.std_error])
        assertions.append(AssertionResult(
            name=f"bound-sandwich[{m.describe()}, N={N}]",
            status="pass" if ok else "fail",
            value=measured.value,
            detail=f"lower={lower:.4g} upper={best.value:.4g} inf_depth={inf_depth:.3g} "
                   f"mu_A={mu_a.value:.3g}",
        ))
    table = MetricTable(
        name="bound-sandwich",
        columns=["N", "lower", "measured", "measured_se", "upper", "upper_se"],
        rows=rows,
        plot={"x": "N", "y": "measured", "lo": "lower", "hi": "upper", "logx": True},
    )
    return [table], assertions


def _dilation(cfg: ExperimentConfig):
    n = cfg.dimension
    m = make_measure(cfg.kind, n)
    root = RngStream(cfg.seed)
    N = cfg.n_grid[0] if cfg.n_grid else 20
    rows = []
    assertions = []
    for r in range(cfg.reps):
        poly = sample_polytope(m, N, root.child(r).child(0))
        rep = dilation_check(m, poly, cfg.delta, root.child(r).child(1),
                             mc_points=max(cfg.samples, 10_000))
        rows.append([r, cfg.delta, rep.details["mu_A"], rep.details["mu_dilated"],
                     rep.details["factor"], rep.worst, rep.passed])
        assertions.append(_check_assertion(rep))
    table = MetricTable(
        name="dilation",
        columns=["rep", "delta", "mu_A", "mu_dilated", "factor", "margin", "passed"],
        rows=rows,
    )
    return [table], assertions


_HANDLERS = {
    "expected-depth": _expected_depth,
    "cramer-surface": _cramer_surface,
    "inclusion-suite": _inclusion_suite,
    "threshold-sweep": _threshold_sweep,
    "bound-sandwich": _bound_sandwich,
    "dilation": _dilation,
}
