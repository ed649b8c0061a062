"""Random polytopes K_N: LP membership, expected-measure estimation, the
upper/lower bound lemmas, the dilation inequality, and threshold sweeps.

Membership is decided by a linear feasibility program in the barycentric
weights (tolerance 1e-9, boundary counts as inside). For dimensions up to
four a facet representation from Qhull provides a fast vectorized route used
by the estimators; it decides the same predicate and is cross-checked against
the LP in the test suite. In higher dimensions the estimators first test
membership in the hull of a vertex subset (a sound shortcut: inside the
sub-hull implies inside) before paying for the full LP.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import special
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from .estimates import CheckReport, EstimateWithCI
from .measures import MeasureSpec
from .rng import RngStream
from .transforms import LaplaceOracle, cramer_batch

LP_TOL = 1e-9
FACET_DIM_CAP = 4
SUBSET_PREFILTER = 512


class PolytopeError(Exception):
    pass


class LpFailureError(PolytopeError):
    """The feasibility solve ended in neither 'feasible' nor 'infeasible'."""


@dataclass
class PolytopeSample:
    """conv{X_1, ..., X_N} with its generating stream."""

    vertices: np.ndarray
    generator: RngStream
    _facets: Optional[tuple] = field(default=None, repr=False)
    _lp_matrix: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return self.vertices.shape[0]

    @property
    def n(self) -> int:
        return self.vertices.shape[1]

    def lp_matrix(self) -> np.ndarray:
        if self._lp_matrix is None:
            self._lp_matrix = np.vstack([self.vertices.T, np.ones(self.N)])
        return self._lp_matrix

    def facets(self) -> Optional[tuple]:
        """(A, b) with A x <= b iff inside; None when unavailable."""
        if self._facets is None and self.n <= FACET_DIM_CAP:
            try:
                hull = ConvexHull(self.vertices)
            except QhullError:
                self._facets = ()
            else:
                eq = hull.equations
                self._facets = (eq[:, :-1], -eq[:, -1])
        if not self._facets:
            return None
        return self._facets


def sample_polytope(m: MeasureSpec, N: int, rng: RngStream) -> PolytopeSample:
    """N i.i.d. vertices drawn from m."""
    if N <= m.dimension:
        raise PolytopeError(f"need N > n, got N={N}, n={m.dimension}")
    return PolytopeSample(vertices=m.sample_batch(rng, N), generator=rng)


def _lp_contains(lp_matrix: np.ndarray, x: np.ndarray, tol: float) -> bool:
    N = lp_matrix.shape[1]
    b_eq = np.concatenate([np.asarray(x, dtype=float), [1.0]])
    res = linprog(
        np.zeros(N),
        A_eq=lp_matrix,
        b_eq=b_eq,
        bounds=(0.0, None),
        method="highs",
        options={"primal_feasibility_tolerance": tol, "presolve": True},
    )
    if res.status == 0:
        return True
    if res.status == 2:
        return False
    raise LpFailureError(f"linprog status {res.status}: {res.message}")


def contains(p: PolytopeSample, x: np.ndarray, tol: float = LP_TOL) -> bool:
    """x in conv(vertices), by feasibility of the barycentric program.

    Boundary ties resolve to inside through the feasibility tolerance.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != p.n:
        raise PolytopeError("point dimension mismatch")
    return _lp_contains(p.lp_matrix(), x, tol)


def membership_batch(
    p: PolytopeSample,
    X: np.ndarray,
    tol: float = LP_TOL,
    max_failure_rate: float = 1e-3,
) -> np.ndarray:
    """Membership indicator for a batch of points (fast routes + LP)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    facets = p.facets()
    if facets is not None:
        A, b = facets
        return np.all(X @ A.T <= b[None, :] + tol, axis=1)

    sub_matrix = None
    if p.N > 2 * SUBSET_PREFILTER:
        sub = p.vertices[:SUBSET_PREFILTER]
        sub_matrix = np.vstack([sub.T, np.ones(len(sub))])

    out = np.zeros(len(X), dtype=bool)
    failures = 0
    for i, x in enumerate(X):
        try:
            if sub_matrix is not None and _lp_contains(sub_matrix, x, tol):
                out[i] = True  # inside the sub-hull implies inside
                continue
            out[i] = _lp_contains(p.lp_matrix(), x, tol)
        except LpFailureError:
            failures += 1
            if failures > max(1, int(max_failure_rate * len(X))):
                raise PolytopeError(
                    f"LP failure rate above {max_failure_rate:.1%} "
                    f"({failures} failures in {i + 1} points)"
                )
            out[i] = False
    return out


# ---------------------------------------------------------------------------
# expected measure of K_N
# ---------------------------------------------------------------------------


def expected_measure(
    m: MeasureSpec,
    nu: MeasureSpec,
    N: int,
    reps: int,
    test_points: int,
    rng: RngStream,
    dilation: float = 0.0,
    threads: int = 1,
) -> EstimateWithCI:
    """E over polytopes of the nu-mass of (1 + dilation) K_N.

    Each rep draws a fresh polytope and fresh nu test points from child
    streams, so the spread of rep means carries both Monte-Carlo layers.
    """
    if reps < 1:
        raise PolytopeError("reps must be >= 1")
    if test_points < 100:
        raise PolytopeError("need at least 100 test points")

    def one_rep(r: int) -> float:
        stream = rng.child(r)
        poly = sample_polytope(m, N, stream.child(0))
        pts = nu.sample_batch(stream.child(1), test_points)
        if dilation > 0.0:
            pts = pts / (1.0 + dilation)
        return float(np.mean(membership_batch(poly, pts)))

    if threads > 1 and reps > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            means = list(pool.map(one_rep, range(reps)))
    else:
        means = [one_rep(r) for r in range(reps)]
    means = np.asarray(means)
    value = float(np.mean(means))
    if reps > 1:
        se = float(np.std(means, ddof=1) / math.sqrt(reps))
    else:
        se = math.sqrt(max(value * (1 - value), 1e-12) / test_points)
    return EstimateWithCI(value=value, std_error=se, n_samples=reps * test_points,
                          seed=rng.seed, stream=rng.stream)


# ---------------------------------------------------------------------------
# bound lemmas
# ---------------------------------------------------------------------------


@dataclass
class UpperBoundValue:
    value: float
    nu_bt_mass: float
    tail_term: float
    std_error: float
    conservative: bool = True  # certified-lower Lambda* can only enlarge B_t


def upper_bound_lemma(
    oracle: LaplaceOracle,
    nu: MeasureSpec,
    t: float,
    N: int,
    rng: RngStream,
    mc_points: int = 4000,
) -> UpperBoundValue:
    """nu(B_t(mu)) + N e^{-t}, clamped to 1.

    B_t membership uses certified Cramér lower bounds, which can only
    overcount the set, keeping the bound valid (flagged conservative).
    """
    if t <= 0:
        raise ValueError("t must be positive")
    X = nu.sample_batch(rng, mc_points)
    vals = cramer_batch(oracle, X).values
    inside = vals <= t
    frac = float(np.mean(inside))
    se = math.sqrt(max(frac * (1 - frac), 1e-12) / mc_points)
    tail = N * math.exp(-t)
    return UpperBoundValue(
        value=min(1.0, frac + tail),
        nu_bt_mass=frac,
        tail_term=tail,
        std_error=se,
    )


def lower_bound_lemma(inf_depth: float, N: int, n: int, a_measure: float) -> float:
    """mu(A) * max(0, 1 - 2 C(N,n) (1 - inf_depth)^{N-n}), in log space."""
    if not (0.0 <= inf_depth <= 1.0):
        raise ValueError("inf_depth must lie in [0, 1]")
    if N <= n:
        raise ValueError("need N > n")
    if inf_depth == 1.0:
        return a_measure
    log_term = (
        math.log(2.0)
        + special.gammaln(N + 1) - special.gammaln(n + 1) - special.gammaln(N - n + 1)
        + (N - n) * math.log1p(-inf_depth)
    )
    if log_term >= 0.0:
        return 0.0
    return a_measure * max(0.0, 1.0 - math.exp(log_term))


def dilation_check(
    m: MeasureSpec,
    A: PolytopeSample,
    delta: float,
    rng: RngStream,
    mc_points: int = 50_000,
) -> CheckReport:
    """mu((1+delta) A) <= (1+delta)^n e^{n delta} mu(A), within combined CI."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if not (m.has_density and m.centered):
        raise PolytopeError("the dilation inequality needs a centered density")
    X = m.sample_batch(rng, mc_points)
    in_a = membership_batch(A, X)
    in_dilated = in_a if delta == 0.0 else membership_batch(A, X / (1.0 + delta))
    p_a = float(np.mean(in_a))
    p_d = float(np.mean(in_dilated))
    factor = (1.0 + delta) ** m.dimension * math.exp(m.dimension * delta)
    se_a = math.sqrt(max(p_a * (1 - p_a), 1e-12) / mc_points)
    se_d = math.sqrt(max(p_d * (1 - p_d), 1e-12) / mc_points)
    se = math.sqrt(se_d**2 + (factor * se_a) ** 2)
    margin = p_d - factor * p_a
    return CheckReport(
        name=f"dilation[{m.describe()}, delta={delta}]",
        passed=bool(margin <= 3.0 * se),
        worst=float(margin),
        details={"mu_A": p_a, "mu_dilated": p_d, "factor": factor, "combined_se": se},
    )


# ---------------------------------------------------------------------------
# threshold sweeps
# ---------------------------------------------------------------------------


@dataclass
class ThresholdCurve:
    N_values: list[int]
    estimates: list[EstimateWithCI]
    crossing_N: float  # interpolated N where the curve passes 1/2 (nan if none)
    kappa_emp: float

    def as_rows(self) -> list[tuple]:
        return [
            (N, est.value, est.std_error, est.ci_low, est.ci_high)
            for N, est in zip(self.N_values, self.estimates)
        ]


def _interpolate_crossing(N_values, values, level: float = 0.5) -> float:
    for i in range(len(values) - 1):
        lo, hi = values[i], values[i + 1]
        if lo < level <= hi:
            x0, x1 = math.log(N_values[i]), math.log(N_values[i + 1])
            frac = (level - lo) / (hi - lo)
            return math.exp(x0 + frac * (x1 - x0))
    if values and values[0] >= level:
        return float(N_values[0])
    return math.nan


def default_n_grid(n: int, kappa_est: float, ratio: float = 2.0) -> list[int]:
    """Geometric grid from n+1 up to exp(1.6 * kappa_est * n)."""
    top = max(n + 2.0, math.exp(1.6 * kappa_est * n))
    grid = []
    N = float(n + 1)
    while N <= top:
        grid.append(int(round(N)))
        N *= ratio
    if grid[-1] < top:
        grid.append(int(round(top)))
    return sorted(set(grid))


def threshold_sweep(
    m: MeasureSpec,
    nu: MeasureSpec,
    N_grid: list[int],
    reps: int,
    test_points: int,
    rng: RngStream,
    dilation: float = 0.0,
    threads: int = 1,
) -> ThresholdCurve:
    """Sweep E[nu((1+delta) K_N)] over an increasing N grid."""
    if any(b <= a for a, b in zip(N_grid, N_grid[1:])):
        raise PolytopeError("N grid must be strictly increasing")
    estimates = []
    for j, N in enumerate(N_grid):
        estimates.append(
            expected_measure(m, nu, N, reps, test_points, rng.child(j),
                             dilation=dilation, threads=threads)
        )
    values = [e.value for e in estimates]
    crossing = _interpolate_crossing(N_grid, values)
    kappa = math.log(crossing) / m.dimension if math.isfinite(crossing) else math.nan
    return ThresholdCurve(list(N_grid), estimates, crossing, kappa)


def kappa_mu_estimate(
    oracle: LaplaceOracle,
    m: MeasureSpec,
    rng: RngStream,
    n_samples: int = 2000,
) -> EstimateWithCI:
    """(1/n) E_mu Lambda*_mu by Monte Carlo over certified Cramér values."""
    if not m.centered:
        raise PolytopeError("kappa_mu assumes a centered measure")
    X = m.sample_batch(rng, n_samples)
    vals = cramer_batch(oracle, X).values / m.dimension
    finite = np.isfinite(vals)
    vals = vals[finite]
    return EstimateWithCI(
        value=float(np.mean(vals)),
        std_error=float(np.std(vals, ddof=1) / math.sqrt(len(vals))),
        n_samples=int(len(vals)),
        seed=rng.seed,
        stream=rng.stream,
    )
