"""Logarithmic Laplace transform, Cramér transform, and the B_t level sets.

The Cramér transform is computed as a certified lower bound: gradient ascent
with backtracking on the concave map u -> <v,u> - Lambda(u), reporting the
value attained at a feasible maximizer. Steps that leave the effective domain
of Lambda (where the integral diverges) are backtracked, so open domains such
as the exponential's {u < 1} are handled without regularization. Everything
ascent-related is vectorized over batches of target points because the level
set computations (radial functions by bisection) evaluate thousands of
transforms per experiment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate, special
from scipy.linalg import expm

from . import measures as meas
from .centroid import CentroidOracle
from .estimates import CheckReport
from .measures import MeasureSpec
from .rng import RngStream

# objective values above this are treated as a divergence certificate
DIVERGENCE_THRESHOLD = 1.0e6
RADIAL_CAP = 2.0**60


class TransformError(Exception):
    pass


# ---------------------------------------------------------------------------
# stable coordinate log-MGFs
# ---------------------------------------------------------------------------


def _log_sinhc(x: np.ndarray) -> np.ndarray:
    """ln(sinh x / x), even in x, stable at 0 and for large |x|."""
    ax = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(ax)
    small = ax < 1e-4
    mid = (~small) & (ax < 34.0)
    big = ax >= 34.0
    out[small] = ax[small] ** 2 / 6.0 - ax[small] ** 4 / 180.0
    out[mid] = np.log(np.sinh(ax[mid]) / ax[mid])
    out[big] = ax[big] - np.log(2.0 * ax[big])
    return out


def _dlog_sinhc(x: np.ndarray) -> np.ndarray:
    """d/dx ln(sinh x / x) = coth x - 1/x (odd)."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.empty_like(ax)
    small = ax < 1e-4
    mid = (~small) & (ax < 34.0)
    big = ax >= 34.0
    out[small] = ax[small] / 3.0 - ax[small] ** 3 / 45.0
    out[mid] = 1.0 / np.tanh(ax[mid]) - 1.0 / ax[mid]
    out[big] = 1.0 - 1.0 / ax[big]
    return np.sign(x) * out


def _exp_lam(a: np.ndarray) -> np.ndarray:
    """Coordinate log-MGF of the centered exponential: -a - ln(1-a), a < 1."""
    a = np.asarray(a, dtype=float)
    out = np.full_like(a, np.inf)
    ok = a < 1.0
    out[ok] = -a[ok] - np.log1p(-a[ok])
    return out


def _exp_dlam(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore"):
        return a / (1.0 - a)


def _ball_lam(s: np.ndarray, n: int) -> np.ndarray:
    """log E e^{s T} for the ball marginal, via scaled Bessel I_{n/2}."""
    s = np.asarray(s, dtype=float)
    nu = n / 2.0
    out = np.empty_like(s)
    small = s < 1e-6
    out[small] = s[small] ** 2 / (2.0 * (n + 2.0))
    big = ~small
    sb = s[big]
    out[big] = (
        special.gammaln(nu + 1.0)
        + nu * (math.log(2.0) - np.log(sb))
        + np.log(special.ive(nu, sb))
        + sb
    )
    return out


def _ball_dlam(s: np.ndarray, n: int) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    nu = n / 2.0
    out = np.empty_like(s)
    small = s < 1e-6
    out[small] = s[small] / (n + 2.0)
    big = ~small
    sb = s[big]
    out[big] = special.ive(nu + 1.0, sb) / special.ive(nu, sb)
    return out


def _simplex_vertices(n: int) -> np.ndarray:
    bar = np.full(n, 1.0 / (n + 1))
    return np.vstack([np.zeros(n), np.eye(n)]) - bar


def _divided_difference_exp(a: np.ndarray) -> float:
    """Divided difference of exp at nodes a, via expm of a bidiagonal matrix.

    Stable for arbitrarily clustered nodes (Opitz' formula); used as the
    fallback when the direct sum formula would cancel catastrophically.
    """
    shift = float(np.max(a))
    m = len(a)
    A = np.diag(a - shift) + np.diag(np.ones(m - 1), 1)
    val = expm(A)[0, -1]
    if val <= 0.0:  # theoretically positive; guard against underflow
        return -np.inf
    return shift + math.log(val)


def _log_dd_exp_rows(A: np.ndarray) -> np.ndarray:
    """log of the divided difference of exp, batched over rows of nodes.

    Well-separated rows use the direct sum over e^{a_i}/prod(a_i - a_j);
    rows with clustered nodes fall back to the matrix-exponential form.
    """
    A = np.atleast_2d(A)
    k, m = A.shape
    shift = A.max(axis=1)
    B = A - shift[:, None]
    diff = B[:, :, None] - B[:, None, :]
    off = ~np.eye(m, dtype=bool)
    min_gap = np.abs(diff[:, off]).reshape(k, -1).min(axis=1)
    out = np.empty(k)
    direct = min_gap >= 1e-2
    if direct.any():
        d = diff[direct].copy()
        d[:, np.arange(m), np.arange(m)] = 1.0
        prods = np.prod(d, axis=2)
        dd = np.sum(np.exp(B[direct]) / prods, axis=1)
        out[direct] = shift[direct] + np.log(dd)
    for i in np.flatnonzero(~direct):
        out[i] = _divided_difference_exp(A[i])
    return out


# ---------------------------------------------------------------------------
# Laplace oracle
# ---------------------------------------------------------------------------

_ANALYTIC_KINDS = {
    meas.GAUSSIAN,
    meas.CUBE,
    meas.CUBE_UNIT,
    meas.EXPONENTIAL,
    meas.BALL,
    meas.SIMPLEX,
}


class LaplaceOracle:
    """Evaluates Lambda_mu and its gradient, in batches.

    Modes: "analytic" (closed/semi-closed forms for the catalog),
    "quadrature-1d" (per-coordinate quadrature; product kinds only, used as
    an independent cross-check), "monte-carlo" (plain averaging over a cached
    pool, with a standard error and an unreliable flag above 10% relative).
    """

    def __init__(
        self,
        measure: MeasureSpec,
        mode: str = "auto",
        mc_budget: int = 100_000,
        rng: Optional[RngStream] = None,
    ):
        if measure.atomic:
            raise meas.AtomicMeasureError("transforms reject the discrete cube")
        if mode == "auto":
            if measure.kind in _ANALYTIC_KINDS or measure.analytic_log_mgf is not None:
                mode = "analytic"
            else:
                mode = "monte-carlo"
        if mode == "quadrature-1d" and not measure.is_product:
            raise TransformError("quadrature-1d mode needs a product measure")
        if mode == "monte-carlo" and measure.kind == meas.CUSTOM and measure.sampler_fn is None:
            raise meas.SamplerUnavailableError("monte-carlo mode needs a sampler")
        self.measure = measure
        self.mode = mode
        self.mc_budget = mc_budget
        self.rng = rng if rng is not None else RngStream(0)
        self._pool: Optional[np.ndarray] = None
        self._cache: dict = {}

    def pool(self) -> np.ndarray:
        if self._pool is None:
            self._pool = self.measure.sample_batch(self.rng, self.mc_budget)
        return self._pool

    # -- batch evaluation ----------------------------------------------------

    def log_mgf_batch(self, U: np.ndarray) -> np.ndarray:
        U = np.atleast_2d(np.asarray(U, dtype=float))
        m = self.measure
        if self.mode == "analytic":
            if m.analytic_log_mgf is not None and m.kind == meas.CUSTOM:
                return np.asarray([float(m.analytic_log_mgf(u)) for u in U])
            if m.kind == meas.GAUSSIAN:
                return 0.5 * np.sum(U * U, axis=1)
            if m.kind in (meas.CUBE, meas.CUBE_UNIT):
                return np.sum(_log_sinhc(U * m.cube_halfwidth), axis=1)
            if m.kind == meas.EXPONENTIAL:
                return np.sum(_exp_lam(U), axis=1)
            if m.kind == meas.BALL:
                return _ball_lam(np.linalg.norm(U, axis=1), m.dimension)
            if m.kind == meas.SIMPLEX:
                W = _simplex_vertices(m.dimension)
                lognf = special.gammaln(m.dimension + 1)
                return lognf + _log_dd_exp_rows(U @ W.T)
            raise TransformError(f"no analytic transform for {m.kind}")
        if self.mode == "quadrature-1d":
            return np.asarray([self._quad_logmgf(u) for u in U])
        return np.asarray([self._mc_logmgf(u)[0] for u in U])

    def grad_batch(self, U: np.ndarray) -> np.ndarray:
        U = np.atleast_2d(np.asarray(U, dtype=float))
        m = self.measure
        if self.mode == "analytic":
            if m.kind == meas.GAUSSIAN:
                return U.copy()
            if m.kind in (meas.CUBE, meas.CUBE_UNIT):
                h = m.cube_halfwidth
                return h * _dlog_sinhc(U * h)
            if m.kind == meas.EXPONENTIAL:
                return _exp_dlam(U)
            if m.kind == meas.BALL:
                s = np.linalg.norm(U, axis=1)
                d = _ball_dlam(s, m.dimension)
                with np.errstate(invalid="ignore"):
                    unit = np.where(s[:, None] > 0, U / np.maximum(s, 1e-300)[:, None], 0.0)
                return unit * d[:, None]
        if self.mode == "monte-carlo":
            return np.vstack([self._mc_grad(u) for u in U])
        return self._fd_grad(U)

    def _fd_grad(self, U: np.ndarray) -> np.ndarray:
        k, n = U.shape
        h = 1e-6 * np.maximum(1.0, np.linalg.norm(U, axis=1))
        eye = np.eye(n)
        # one batched evaluation of all central-difference probes
        probes = np.concatenate([
            U[:, None, :] + h[:, None, None] * eye[None, :, :],
            U[:, None, :] - h[:, None, None] * eye[None, :, :],
        ], axis=1).reshape(2 * k * n, n)
        vals = self.log_mgf_batch(probes).reshape(k, 2, n)
        return (vals[:, 0, :] - vals[:, 1, :]) / (2.0 * h[:, None])

    # -- scalar API ------------------------------------------------------------

    def log_mgf(self, u: np.ndarray) -> float:
        u = np.asarray(u, dtype=float).reshape(-1)
        key = u.tobytes()
        if key not in self._cache:
            self._cache[key] = float(self.log_mgf_batch(u[None, :])[0])
        return self._cache[key]

    def log_mgf_with_error(self, u: np.ndarray):
        """(value, std_error, reliable); errors are zero outside MC mode."""
        u = np.asarray(u, dtype=float).reshape(-1)
        if self.mode != "monte-carlo":
            return self.log_mgf(u), 0.0, True
        val, se = self._mc_logmgf(u)
        return val, se, se <= 0.10

    def mean(self) -> np.ndarray:
        """grad Lambda(0) = barycenter of the measure."""
        return self.grad_batch(np.zeros((1, self.measure.dimension)))[0]

    # -- mode backends ----------------------------------------------------------

    def _mc_logmgf(self, u: np.ndarray):
        proj = self.pool() @ np.asarray(u, dtype=float)
        top = float(np.max(proj))
        w = np.exp(proj - top)
        mw = float(np.mean(w))
        se_rel = float(np.std(w, ddof=1) / (math.sqrt(len(w)) * mw))
        return top + math.log(mw), se_rel

    def _mc_grad(self, u: np.ndarray) -> np.ndarray:
        pool = self.pool()
        proj = pool @ np.asarray(u, dtype=float)
        w = np.exp(proj - np.max(proj))
        return (pool.T @ w) / np.sum(w)

    def _quad_logmgf(self, u: np.ndarray) -> float:
        total = 0.0
        for a in np.asarray(u, dtype=float):
            total += self._coord_quad(float(a))
            if not np.isfinite(total):
                return math.inf
        return total

    def _coord_quad(self, a: float) -> float:
        kind = self.measure.kind
        if kind == meas.GAUSSIAN:
            val, _ = integrate.quad(
                lambda x: math.exp(a * x - a * a / 2) * math.exp(-x * x / 2) / math.sqrt(2 * math.pi),
                -40 + min(a, 0), 40 + max(a, 0),
            )
            return a * a / 2 + math.log(val)
        if kind in (meas.CUBE, meas.CUBE_UNIT):
            h = self.measure.cube_halfwidth
            shift = abs(a) * h
            val, _ = integrate.quad(lambda x: math.exp(a * x - shift) / (2 * h), -h, h)
            return shift + math.log(val)
        if kind == meas.EXPONENTIAL:
            if a >= 1.0 - 1e-12:
                return math.inf
            hi = -1.0 + 200.0 / (1.0 - a)
            val, _ = integrate.quad(lambda x: math.exp(a * x) * math.exp(-(x + 1.0)), -1.0, hi)
            return math.log(val)
        if kind == meas.DISCRETE_CUBE:
            return float(np.log(np.cosh(a)))
        raise TransformError(f"quadrature-1d unsupported for {kind}")


# ---------------------------------------------------------------------------
# Cramér transform by certified ascent
# ---------------------------------------------------------------------------


@dataclass
class CramerValue:
    point: np.ndarray
    value: float
    maximizer: np.ndarray
    converged: bool
    iterations: int
    diverged: bool = False


@dataclass
class CramerBatch:
    points: np.ndarray
    values: np.ndarray
    maximizers: np.ndarray
    converged: np.ndarray
    iterations: np.ndarray
    diverged: np.ndarray

    def __getitem__(self, i: int) -> CramerValue:
        return CramerValue(
            point=self.points[i],
            value=float(self.values[i]),
            maximizer=self.maximizers[i],
            converged=bool(self.converged[i]),
            iterations=int(self.iterations[i]),
            diverged=bool(self.diverged[i]),
        )


def cramer_batch(
    oracle: LaplaceOracle,
    V: np.ndarray,
    tol: float = 1e-8,
    max_iter: int = 300,
    U0: Optional[np.ndarray] = None,
) -> CramerBatch:
    """Lambda*(v) for every row of V by backtracking gradient ascent from 0.

    Values are certified lower bounds attained at the returned maximizers;
    rows whose objective passes DIVERGENCE_THRESHOLD are reported as +inf.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    V = np.atleast_2d(np.asarray(V, dtype=float))
    k, n = V.shape
    U = np.zeros((k, n)) if U0 is None else np.array(U0, dtype=float, copy=True)
    lam = oracle.log_mgf_batch(U)
    # a warm start must be feasible; shrink toward 0 until it is
    for _ in range(80):
        bad = ~np.isfinite(lam)
        if not bad.any():
            break
        U[bad] *= 0.5
        lam[bad] = oracle.log_mgf_batch(U[bad])
    g = np.sum(V * U, axis=1) - lam

    step = np.ones(k)
    active = np.ones(k, dtype=bool)
    diverged = np.zeros(k, dtype=bool)
    converged = np.zeros(k, dtype=bool)
    iters = np.zeros(k, dtype=int)
    vnorm = 1.0 + np.linalg.norm(V, axis=1)
    prev_u = U.copy()
    prev_grad = np.zeros_like(U)
    have_prev = np.zeros(k, dtype=bool)

    for _ in range(max_iter):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        grad = V[idx] - oracle.grad_batch(U[idx])
        gsq = np.sum(grad * grad, axis=1)
        gnorm = np.sqrt(gsq)

        # Barzilai-Borwein step seed: much faster than plain doubling on
        # ill-conditioned rows (targets near the support boundary)
        du = U[idx] - prev_u[idx]
        dg = prev_grad[idx] - grad  # curvature of -g along the step
        denom = np.sum(du * dg, axis=1)
        bb = np.where(denom > 0, np.sum(du * du, axis=1) / np.maximum(denom, 1e-300), step[idx])
        usable = have_prev[idx] & (denom > 0) & np.isfinite(bb)
        step[idx[usable]] = np.clip(bb[usable], 1e-12, 1e8)
        prev_u[idx] = U[idx]
        prev_grad[idx] = grad
        have_prev[idx] = True

        done = gnorm <= tol * vnorm[idx]
        over = g[idx] > DIVERGENCE_THRESHOLD
        converged[idx[done & ~over]] = True
        diverged[idx[over]] = True
        keep = ~(done | over)
        idx = idx[keep]
        if len(idx) == 0:
            active[:] = False
            break
        active[:] = False
        active[idx] = True
        grad, gsq = grad[keep], gsq[keep]

        iters[idx] += 1
        searching = np.ones(len(idx), dtype=bool)
        s = step[idx].copy()
        for _bt in range(110):
            if not searching.any():
                break
            rows = np.flatnonzero(searching)
            trial = U[idx[rows]] + s[rows, None] * grad[rows]
            lt = oracle.log_mgf_batch(trial)
            with np.errstate(invalid="ignore"):
                gt = np.sum(V[idx[rows]] * trial, axis=1) - lt
            ok = np.isfinite(gt) & (gt >= g[idx[rows]] + 1e-4 * s[rows] * gsq[rows])
            acc = rows[ok]
            U[idx[acc]] = trial[ok]
            g[idx[acc]] = gt[ok]
            searching[acc] = False
            s[rows[~ok]] *= 0.5
            floor = rows[~ok][s[rows[~ok]] < 1e-14]
            if len(floor) > 0:  # step floor: stop at the current certificate
                converged[idx[floor]] = True
                active[idx[floor]] = False
                searching[floor] = False
        step[idx] = np.minimum(s * 2.0, 1e8)
        active[idx[~np.isfinite(g[idx])]] = False

    values = g.copy()
    values[diverged] = math.inf
    return CramerBatch(
        points=V,
        values=values,
        maximizers=U,
        converged=converged | diverged,
        iterations=iters,
        diverged=diverged,
    )


def cramer(oracle: LaplaceOracle, v: np.ndarray, tol: float = 1e-8, max_iter: int = 300,
           u0: Optional[np.ndarray] = None) -> CramerValue:
    """Cramér transform at a single point (certified lower bound)."""
    v = np.asarray(v, dtype=float).reshape(1, -1)
    U0 = None if u0 is None else np.asarray(u0, dtype=float).reshape(1, -1)
    return cramer_batch(oracle, v, tol=tol, max_iter=max_iter, U0=U0)[0]


def log_mgf(oracle: LaplaceOracle, u: np.ndarray) -> float:
    """Lambda_mu(u); +inf where the defining integral diverges."""
    return oracle.log_mgf(u)


# ---------------------------------------------------------------------------
# B_t level sets
# ---------------------------------------------------------------------------


@dataclass
class RadialBatch:
    radii: np.ndarray
    unbounded: np.ndarray
    maximizers: np.ndarray


def bt_radial_batch(
    oracle: LaplaceOracle,
    directions: np.ndarray,
    t: float,
    tol: float = 1e-8,
) -> RadialBatch:
    """Radial function of B_t = {Lambda* <= t} along each direction.

    Bisection on r -> Lambda*(r xi), which is nondecreasing along rays from
    the barycenter; brackets double until Lambda* > t, capping at 2^60 (the
    direction is then reported unbounded). Cramér solves reuse the previous
    maximizer as a warm start.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    if not oracle.measure.centered:
        raise TransformError("B_t radial functions assume a centered measure")
    Xi = np.atleast_2d(np.asarray(directions, dtype=float))
    Xi = Xi / np.linalg.norm(Xi, axis=1, keepdims=True)
    k, n = Xi.shape

    r_lo = np.zeros(k)
    r_hi = np.ones(k)
    U = np.zeros((k, n))
    unbounded = np.zeros(k, dtype=bool)

    # expansion phase
    for _ in range(80):
        res = cramer_batch(oracle, Xi * r_hi[:, None], U0=U)
        U = res.maximizers
        inside = res.values <= t
        if not inside.any():
            break
        r_lo[inside] = r_hi[inside]
        r_hi[inside] *= 2.0
        capped = inside & (r_hi > RADIAL_CAP)
        if capped.any():
            unbounded |= capped
            r_hi[capped] = RADIAL_CAP
        if not (inside & ~capped).any():
            break

    # bisection phase (relative tolerance)
    for _ in range(80):
        width = r_hi - r_lo
        open_rows = ~unbounded & (width > tol * np.maximum(r_hi, 1e-300))
        if not open_rows.any():
            break
        mid = 0.5 * (r_lo + r_hi)
        idx = np.flatnonzero(open_rows)
        res = cramer_batch(oracle, Xi[idx] * mid[idx, None], U0=U[idx])
        U[idx] = res.maximizers
        inside = res.values <= t
        r_lo[idx[inside]] = mid[idx[inside]]
        r_hi[idx[~inside]] = mid[idx[~inside]]

    radii = 0.5 * (r_lo + r_hi)
    radii[unbounded] = math.inf
    return RadialBatch(radii=radii, unbounded=unbounded, maximizers=U)


def bt_radial(oracle: LaplaceOracle, xi: np.ndarray, t: float, tol: float = 1e-8) -> float:
    return float(bt_radial_batch(oracle, np.asarray(xi, float)[None, :], t, tol).radii[0])


def bt_nesting_check(
    oracle: LaplaceOracle,
    xi: np.ndarray,
    t: float,
    s: float,
    tol: float = 1e-8,
) -> CheckReport:
    """B_t ⊆ B_s ⊆ (s/t) B_t along a direction, via radial functions."""
    if not (0 < t <= s):
        raise ValueError("need 0 < t <= s")
    rho_t = bt_radial(oracle, xi, t, tol)
    rho_s = bt_radial(oracle, xi, s, tol)
    slack = 1.0 + 100.0 * tol
    if math.isinf(rho_s):
        left_ok = True
        right_ok = math.isinf(rho_t)
    else:
        left_ok = rho_t <= rho_s * slack
        right_ok = rho_s <= (s / t) * rho_t * slack
    passed = bool(left_ok and right_ok)
    return CheckReport(
        name=f"bt-nesting[{oracle.measure.describe()}, t={t}, s={s}]",
        passed=passed,
        worst=float(rho_s / rho_t) if rho_t > 0 and not math.isinf(rho_s) else math.inf,
        witness={"direction": np.asarray(xi, float).tolist()},
        details={"rho_t": rho_t, "rho_s": rho_s, "ratio_cap": s / t},
    )


# ---------------------------------------------------------------------------
# M_t membership and regularity
# ---------------------------------------------------------------------------


def mt_membership(oracle: LaplaceOracle, v: np.ndarray, t: float, rng: Optional[RngStream] = None) -> bool:
    """v in M_t(mu), i.e. E |<v,x>|^t <= 1."""
    if t < 2:
        raise ValueError("M_t is used for t >= 2 here")
    helper = CentroidOracle(oracle.measure, max(t, 1.0), rng=rng or oracle.rng,
                            mc_budget=oracle.mc_budget)
    return bool(helper.direction_moment(np.asarray(v, float), t, one_sided=False).value <= 1.0)


def regularity_ratio(
    m: MeasureSpec,
    y: np.ndarray,
    s: float,
    t: float,
    rng: Optional[RngStream] = None,
    mc_budget: int = 100_000,
) -> float:
    """(E|<y,x>|^s)^{1/s} / (E|<y,x>|^t)^{1/t} for s >= t >= 2."""
    if not (2 <= t <= s):
        raise ValueError("need s >= t >= 2")
    helper = CentroidOracle(m, 1.0, rng=rng, mc_budget=mc_budget)
    hi = helper.direction_moment(np.asarray(y, float), s, one_sided=False).value
    lo = helper.direction_moment(np.asarray(y, float), t, one_sided=False).value
    return hi ** (1.0 / s) / lo ** (1.0 / t)


def measure_alpha_emp(
    m: MeasureSpec,
    pairs: list[tuple[float, float]],
    directions: np.ndarray,
    rng: Optional[RngStream] = None,
) -> float:
    """alpha_emp = max over tested (s, t, y) of regularity_ratio * t / s."""
    worst = 1.0
    for (t, s) in pairs:
        for y in directions:
            ratio = regularity_ratio(m, y, s, t, rng=rng)
            worst = max(worst, ratio * t / s)
    return worst


def bt_in_zt_check(
    oracle: LaplaceOracle,
    zt: CentroidOracle,
    t: float,
    net: np.ndarray,
    alpha_emp: Optional[float] = None,
    rng: Optional[RngStream] = None,
) -> CheckReport:
    """Gauge of B_t boundary points with respect to 4 e alpha Z_t.

    For each net direction xi, finds the boundary point rho_{B_t}(xi) xi and
    measures its Minkowski gauge against Z_t using the same net of support
    evaluations (a certified lower bound on the gauge).
    """
    if t < 2:
        raise ValueError("the containment check needs t >= 2")
    m = oracle.measure
    if alpha_emp is None:
        sub = net[:: max(1, len(net) // 8)]
        alpha_emp = measure_alpha_emp(m, [(2.0, 4.0), (t, 2.0 * t)], sub, rng=rng)
    rad = bt_radial_batch(oracle, net, t)
    if rad.unbounded.any():
        i = int(np.flatnonzero(rad.unbounded)[0])
        return CheckReport(
            name=f"bt-in-zt[{m.describe()}, t={t}]",
            passed=False,
            worst=math.inf,
            witness={"direction": net[i].tolist()},
            details={"reason": "B_t unbounded along direction"},
        )
    H = zt.support_batch(net)
    points = net * rad.radii[:, None]
    # gauge against the same net, plus each point's own direction
    ratios = np.maximum(points @ net.T, 0.0) / H[None, :]
    own = rad.radii / H
    gauges = np.maximum(ratios.max(axis=1), own)
    bound = 4.0 * math.e * alpha_emp
    i = int(np.argmax(gauges))
    return CheckReport(
        name=f"bt-in-zt[{m.describe()}, t={t}]",
        passed=bool(gauges[i] <= bound),
        worst=float(gauges[i]),
        witness={"direction": net[i].tolist(), "radius": float(rad.radii[i])},
        details={"bound": bound, "alpha_emp": alpha_emp, "max_gauge": float(gauges[i])},
    )
