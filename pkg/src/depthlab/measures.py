"""Catalog of log-concave probability measures.

Each measure ships a density, a log-density (-inf outside the support), an
exact sampler, and closed-form first/second moments where known. The discrete
sign-cube is carried as an atomic member of the catalog for the polytope
experiments only: operations that need a density reject it explicitly.

Direction marginals: for several kinds the law of <x, xi> reduces to a known
one-dimensional distribution (Gaussian: always; uniform ball: always; product
kinds: along coordinate axes). Those reductions power exact tail masses and
moment integrals; everything else falls back to Monte Carlo at the call site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize, special

from .estimates import CheckReport
from .rng import RngStream

GAUSSIAN = "gaussian-standard"
CUBE = "uniform-cube"
CUBE_UNIT = "uniform-cube-unit-volume"
DISCRETE_CUBE = "discrete-cube"
BALL = "uniform-ball"
SIMPLEX = "uniform-simplex"
EXPONENTIAL = "product-exponential-centered"
CUSTOM = "custom-density"

CATALOG_KINDS = (GAUSSIAN, CUBE, CUBE_UNIT, DISCRETE_CUBE, BALL, SIMPLEX, EXPONENTIAL)
ALL_KINDS = CATALOG_KINDS + (CUSTOM,)

_EVEN_KINDS = {GAUSSIAN, CUBE, CUBE_UNIT, DISCRETE_CUBE, BALL}
_PRODUCT_KINDS = {GAUSSIAN, CUBE, CUBE_UNIT, DISCRETE_CUBE, EXPONENTIAL}
_UNIFORM_BODY_KINDS = {CUBE, CUBE_UNIT, BALL, SIMPLEX}


class MeasureError(Exception):
    """Base error for measure-catalog misuse."""


class DimensionMismatchError(MeasureError):
    pass


class AtomicMeasureError(MeasureError):
    """Raised when a density-dependent operation meets the discrete cube."""


class SingularCovarianceError(MeasureError):
    pass


class SamplerUnavailableError(MeasureError):
    pass


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2) / special.gamma(n / 2 + 1)


def sphere_surface_area(n: int) -> float:
    """Surface area of the unit sphere S^{n-1} in R^n."""
    return 2 * math.pi ** (n / 2) / special.gamma(n / 2)


# ---------------------------------------------------------------------------
# One-dimensional direction marginals
# ---------------------------------------------------------------------------


class Marginal1D:
    """Law of <x, xi> when it reduces to one dimension.

    Subclasses provide exact tails and one/two-sided power moments, which the
    depth and centroid modules use in place of Monte Carlo.
    """

    def tail(self, s: float) -> float:
        """P(<x, xi> >= s)."""
        raise NotImplementedError

    def tail_batch(self, s: np.ndarray) -> np.ndarray:
        return np.asarray([self.tail(float(v)) for v in np.asarray(s, dtype=float)])

    def cdf(self, s: float) -> float:
        return 1.0 - self.tail(s)

    def abs_moment(self, t: float) -> float:
        """E |<x, xi>|^t."""
        raise NotImplementedError

    def pos_moment(self, t: float) -> float:
        """E max(<x, xi>, 0)^t."""
        raise NotImplementedError


@dataclass(frozen=True)
class NormalMarginal(Marginal1D):
    scale: float

    def tail(self, s: float) -> float:
        return float(special.ndtr(-s / self.scale))

    def tail_batch(self, s: np.ndarray) -> np.ndarray:
        return special.ndtr(-np.asarray(s, dtype=float) / self.scale)

    def abs_moment(self, t: float) -> float:
        return self.scale**t * 2 ** (t / 2) * special.gamma((t + 1) / 2) / math.sqrt(math.pi)

    def pos_moment(self, t: float) -> float:
        return 0.5 * self.abs_moment(t)


@dataclass(frozen=True)
class UniformMarginal(Marginal1D):
    """Uniform on [-a, a]."""

    halfwidth: float

    def tail(self, s: float) -> float:
        a = self.halfwidth
        return float(np.clip((a - s) / (2 * a), 0.0, 1.0))

    def tail_batch(self, s: np.ndarray) -> np.ndarray:
        a = self.halfwidth
        return np.clip((a - np.asarray(s, dtype=float)) / (2 * a), 0.0, 1.0)

    def abs_moment(self, t: float) -> float:
        return self.halfwidth**t / (t + 1)

    def pos_moment(self, t: float) -> float:
        return 0.5 * self.abs_moment(t)


@dataclass(frozen=True)
class BallMarginal(Marginal1D):
    """a * T where T has density c_n (1 - t^2)^{(n-1)/2} on [-1, 1]."""

    n: int
    scale: float

    def tail(self, s: float) -> float:
        u = s / self.scale
        if u <= -1.0:
            return 1.0
        if u >= 1.0:
            return 0.0
        half = (self.n + 1) / 2
        return float(1.0 - special.betainc(half, half, (u + 1) / 2))

    def tail_batch(self, s: np.ndarray) -> np.ndarray:
        u = np.clip(np.asarray(s, dtype=float) / self.scale, -1.0, 1.0)
        half = (self.n + 1) / 2
        return 1.0 - special.betainc(half, half, (u + 1) / 2)

    def abs_moment(self, t: float) -> float:
        half = (self.n + 1) / 2
        return self.scale**t * special.beta((t + 1) / 2, half) / special.beta(0.5, half)

    def pos_moment(self, t: float) -> float:
        return 0.5 * self.abs_moment(t)


@dataclass(frozen=True)
class CenteredExpMarginal(Marginal1D):
    """c * X with X = E - 1, E ~ Exp(1); supports negative c."""

    scale: float  # signed

    def tail(self, s: float) -> float:
        c = self.scale
        u = s / c
        if c > 0:
            return math.exp(-(u + 1)) if u >= -1 else 1.0
        # c < 0 flips the inequality
        return 1.0 - math.exp(-(u + 1)) if u >= -1 else 0.0

    def tail_batch(self, s: np.ndarray) -> np.ndarray:
        u = np.asarray(s, dtype=float) / self.scale
        expo = np.exp(-(np.maximum(u, -1.0) + 1.0))
        if self.scale > 0:
            return np.where(u >= -1.0, expo, 1.0)
        return np.where(u >= -1.0, 1.0 - expo, 0.0)

    def abs_moment(self, t: float) -> float:
        right = math.exp(-1) * special.gamma(t + 1)
        left, _ = integrate.quad(lambda v: v**t * math.exp(v - 1), 0.0, 1.0)
        return abs(self.scale) ** t * (right + left)

    def pos_moment(self, t: float) -> float:
        if self.scale > 0:
            return self.scale**t * math.exp(-1) * special.gamma(t + 1)
        left, _ = integrate.quad(lambda v: v**t * math.exp(v - 1), 0.0, 1.0)
        return abs(self.scale) ** t * left


@dataclass(frozen=True)
class TwoPointMarginal(Marginal1D):
    """Uniform on {-a, +a}."""

    scale: float

    def tail(self, s: float) -> float:
        a = abs(self.scale)
        if s <= -a:
            return 1.0
        if s <= a:
            return 0.5
        return 0.0

    def abs_moment(self, t: float) -> float:
        return abs(self.scale) ** t

    def pos_moment(self, t: float) -> float:
        return 0.5 * self.abs_moment(t)


@dataclass(frozen=True)
class QuadratureMarginal(Marginal1D):
    """Fallback 1D law integrated from a density (custom measures at n=1)."""

    density: Callable[[float], float]
    lo: float
    hi: float

    def tail(self, s: float) -> float:
        if s <= self.lo:
            return 1.0
        if s >= self.hi:
            return 0.0
        val, _ = integrate.quad(self.density, s, self.hi, limit=200)
        return float(min(max(val, 0.0), 1.0))

    def abs_moment(self, t: float) -> float:
        val, _ = integrate.quad(lambda x: abs(x) ** t * self.density(x), self.lo, self.hi, limit=200)
        return float(val)

    def pos_moment(self, t: float) -> float:
        if self.hi <= 0:
            return 0.0
        val, _ = integrate.quad(lambda x: x**t * self.density(x), max(self.lo, 0.0), self.hi, limit=200)
        return float(val)


# ---------------------------------------------------------------------------
# Measure specification
# ---------------------------------------------------------------------------


def _simplex_barycenter(n: int) -> np.ndarray:
    return np.full(n, 1.0 / (n + 1))


@dataclass(frozen=True)
class MeasureSpec:
    """A catalog measure, or a custom density-defined measure.

    Custom measures supply `density_fn` (vectorized over (k, n) arrays or a
    single point), optionally `log_density_fn`, `sampler_fn(rng, count)` and
    an `analytic_log_mgf(u)`.
    """

    dimension: int
    kind: str
    density_fn: Optional[Callable] = None
    log_density_fn: Optional[Callable] = None
    sampler_fn: Optional[Callable] = None
    analytic_log_mgf: Optional[Callable] = None
    custom_centered: bool = False

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise MeasureError(f"dimension must be positive, got {self.dimension}")
        if self.kind not in ALL_KINDS:
            raise MeasureError(f"unknown measure kind {self.kind!r}")
        if self.kind == CUSTOM and self.density_fn is None:
            raise MeasureError("custom-density measures require density_fn")

    # -- flags ------------------------------------------------------------

    @property
    def atomic(self) -> bool:
        return self.kind == DISCRETE_CUBE

    @property
    def has_density(self) -> bool:
        return not self.atomic

    @property
    def even(self) -> bool:
        return self.kind in _EVEN_KINDS

    @property
    def spherically_symmetric(self) -> bool:
        return self.kind in (GAUSSIAN, BALL)

    @property
    def is_product(self) -> bool:
        return self.kind in _PRODUCT_KINDS

    @property
    def centered(self) -> bool:
        if self.kind == CUSTOM:
            return self.custom_centered
        return True

    @property
    def uniform_on_body(self) -> bool:
        return self.kind in _UNIFORM_BODY_KINDS

    @property
    def cube_halfwidth(self) -> float:
        if self.kind == CUBE:
            return 1.0
        if self.kind == CUBE_UNIT:
            return 0.5
        raise MeasureError(f"{self.kind} has no cube halfwidth")

    def describe(self) -> str:
        return f"{self.kind}(n={self.dimension})"

    # -- density ----------------------------------------------------------

    def density_batch(self, points: np.ndarray) -> np.ndarray:
        """Density at a (k, n) batch of points."""
        x = np.atleast_2d(np.asarray(points, dtype=float))
        if x.shape[1] != self.dimension:
            raise DimensionMismatchError(
                f"points have dimension {x.shape[1]}, measure has {self.dimension}"
            )
        n = self.dimension
        if self.kind == GAUSSIAN:
            return np.exp(-0.5 * np.sum(x * x, axis=1)) / (2 * math.pi) ** (n / 2)
        if self.kind in (CUBE, CUBE_UNIT):
            h = self.cube_halfwidth
            inside = np.max(np.abs(x), axis=1) <= h
            return np.where(inside, (2 * h) ** (-n), 0.0)
        if self.kind == BALL:
            inside = np.sum(x * x, axis=1) <= 1.0
            return np.where(inside, 1.0 / unit_ball_volume(n), 0.0)
        if self.kind == SIMPLEX:
            y = x + _simplex_barycenter(n)
            inside = (np.min(y, axis=1) >= 0.0) & (np.sum(y, axis=1) <= 1.0)
            return np.where(inside, float(special.factorial(n)), 0.0)
        if self.kind == EXPONENTIAL:
            inside = np.min(x, axis=1) >= -1.0
            out = np.zeros(len(x))
            out[inside] = np.exp(-np.sum(x[inside], axis=1) - n)
            return out
        if self.kind == CUSTOM:
            return np.asarray([float(self.density_fn(row)) for row in x])
        raise AtomicMeasureError(f"{self.kind} carries no density")

    def log_density_batch(self, points: np.ndarray) -> np.ndarray:
        """Log-density at a (k, n) batch; -inf outside the support."""
        x = np.atleast_2d(np.asarray(points, dtype=float))
        if x.shape[1] != self.dimension:
            raise DimensionMismatchError(
                f"points have dimension {x.shape[1]}, measure has {self.dimension}"
            )
        n = self.dimension
        if self.kind == GAUSSIAN:
            return -0.5 * np.sum(x * x, axis=1) - (n / 2) * math.log(2 * math.pi)
        if self.kind == EXPONENTIAL:
            inside = np.min(x, axis=1) >= -1.0
            return np.where(inside, -np.sum(x, axis=1) - n, -np.inf)
        if self.kind == CUSTOM and self.log_density_fn is not None:
            return np.asarray([float(self.log_density_fn(row)) for row in x])
        with np.errstate(divide="ignore"):
            return np.log(self.density_batch(x))

    def support_radius(self, xi: np.ndarray) -> float:
        """Radial function of the support along direction xi (may be +inf)."""
        xi = np.asarray(xi, dtype=float)
        if self.kind == GAUSSIAN:
            return math.inf
        if self.kind in (CUBE, CUBE_UNIT, DISCRETE_CUBE):
            h = 1.0 if self.kind == DISCRETE_CUBE else self.cube_halfwidth
            top = np.max(np.abs(xi))
            return h / top if top > 0 else math.inf
        if self.kind == BALL:
            return 1.0 / float(np.linalg.norm(xi))
        if self.kind == SIMPLEX:
            bar = _simplex_barycenter(self.dimension)
            bounds = [bar[i] / -xi[i] for i in range(self.dimension) if xi[i] < 0]
            s = float(np.sum(xi))
            if s > 0:
                bounds.append((1.0 - bar.sum()) / s)
            return min(bounds) if bounds else math.inf
        if self.kind == EXPONENTIAL:
            bounds = [1.0 / -x for x in xi if x < 0]
            return min(bounds) if bounds else math.inf
        return math.inf

    def circumradius(self) -> float:
        """Radius of a ball containing the support (inf when unbounded)."""
        n = self.dimension
        if self.kind in (CUBE, CUBE_UNIT, DISCRETE_CUBE):
            h = 1.0 if self.kind == DISCRETE_CUBE else self.cube_halfwidth
            return h * math.sqrt(n)
        if self.kind == BALL:
            return 1.0
        if self.kind == SIMPLEX:
            bar = _simplex_barycenter(n)
            verts = np.vstack([np.zeros(n), np.eye(n)]) - bar
            return float(np.max(np.linalg.norm(verts, axis=1)))
        return math.inf

    def support_membership_batch(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        """Indicator of the support for bounded uniform kinds."""
        x = np.atleast_2d(np.asarray(points, dtype=float))
        if self.kind in (CUBE, CUBE_UNIT):
            return np.max(np.abs(x), axis=1) <= self.cube_halfwidth + tol
        if self.kind == BALL:
            return np.linalg.norm(x, axis=1) <= 1.0 + tol
        if self.kind == SIMPLEX:
            y = x + _simplex_barycenter(self.dimension)
            return (np.min(y, axis=1) >= -tol) & (np.sum(y, axis=1) <= 1.0 + tol)
        raise MeasureError(f"{self.kind} is not a bounded uniform-on-body kind")

    # -- sampling ----------------------------------------------------------

    def sample_batch(self, rng: RngStream, count: int) -> np.ndarray:
        if count < 1:
            raise MeasureError(f"count must be >= 1, got {count}")
        gen = rng.generator()
        n = self.dimension
        if self.kind == GAUSSIAN:
            return gen.standard_normal((count, n))
        if self.kind in (CUBE, CUBE_UNIT):
            h = self.cube_halfwidth
            return gen.uniform(-h, h, size=(count, n))
        if self.kind == DISCRETE_CUBE:
            return gen.integers(0, 2, size=(count, n)).astype(float) * 2.0 - 1.0
        if self.kind == BALL:
            g = gen.standard_normal((count, n))
            g /= np.linalg.norm(g, axis=1, keepdims=True)
            r = gen.random(count) ** (1.0 / n)
            return g * r[:, None]
        if self.kind == SIMPLEX:
            d = gen.dirichlet(np.ones(n + 1), size=count)
            return d[:, :n] - _simplex_barycenter(n)
        if self.kind == EXPONENTIAL:
            return gen.exponential(1.0, size=(count, n)) - 1.0
        if self.kind == CUSTOM:
            if self.sampler_fn is None:
                raise SamplerUnavailableError("custom-density measure has no sampler")
            out = np.asarray(self.sampler_fn(gen, count), dtype=float)
            return out.reshape(count, n)
        raise MeasureError(f"no sampler for kind {self.kind}")

    # -- direction marginals -----------------------------------------------

    def marginal(self, xi: np.ndarray) -> Optional[Marginal1D]:
        """Exact 1D law of <x, xi> when available, else None."""
        xi = np.asarray(xi, dtype=float)
        norm = float(np.linalg.norm(xi))
        if norm == 0.0:
            raise MeasureError("direction must be nonzero")
        if self.kind == GAUSSIAN:
            return NormalMarginal(norm)
        if self.kind == BALL:
            return BallMarginal(self.dimension, norm)
        if self.dimension == 1:
            return self._coordinate_marginal(float(xi[0]))
        if self.is_product:
            nonzero = np.flatnonzero(np.abs(xi) > 0)
            if len(nonzero) == 1:
                return self._coordinate_marginal(float(xi[nonzero[0]]))
        return None

    def _coordinate_marginal(self, c: float) -> Optional[Marginal1D]:
        if self.kind == GAUSSIAN:
            return NormalMarginal(abs(c))
        if self.kind in (CUBE, CUBE_UNIT):
            return UniformMarginal(abs(c) * self.cube_halfwidth)
        if self.kind == BALL:  # n = 1 ball is U[-1, 1]
            return UniformMarginal(abs(c))
        if self.kind == SIMPLEX:  # n = 1 simplex is U[-1/2, 1/2]
            return UniformMarginal(abs(c) * 0.5)
        if self.kind == EXPONENTIAL:
            return CenteredExpMarginal(c)
        if self.kind == DISCRETE_CUBE:
            return TwoPointMarginal(c)
        if self.kind == CUSTOM and self.dimension == 1 and self.density_fn is not None:
            dens = self.density_fn
            if c > 0:
                f = lambda s: float(dens(np.array([s / c]))) / c
            else:
                f = lambda s: float(dens(np.array([s / c]))) / -c
            return QuadratureMarginal(f, -_custom_cutoff(self), _custom_cutoff(self))
        return None


def _custom_cutoff(m: MeasureSpec) -> float:
    # crude integration window for 1D custom densities
    return 60.0


def make_measure(kind: str, dimension: int, **kwargs) -> MeasureSpec:
    """Build a catalog or custom measure by kind string."""
    return MeasureSpec(dimension=dimension, kind=kind, **kwargs)


def catalog_density_measures(dimension: int) -> list[MeasureSpec]:
    """All catalog measures of a given dimension that carry a density."""
    return [make_measure(k, dimension) for k in CATALOG_KINDS if k != DISCRETE_CUBE]


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def density(m: MeasureSpec, x) -> float:
    """f_mu(x); zero outside the support. Rejects atomic kinds."""
    if m.atomic:
        raise AtomicMeasureError("density is undefined for the discrete cube")
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != m.dimension:
        raise DimensionMismatchError(
            f"point has dimension {x.shape[0]}, measure has {m.dimension}"
        )
    return float(m.density_batch(x[None, :])[0])


def log_density(m: MeasureSpec, x) -> float:
    if m.atomic:
        raise AtomicMeasureError("log-density is undefined for the discrete cube")
    x = np.asarray(x, dtype=float).reshape(-1)
    return float(m.log_density_batch(x[None, :])[0])


def sample(m: MeasureSpec, rng: RngStream, count: int) -> np.ndarray:
    """count i.i.d. draws as a (count, n) array; deterministic given rng."""
    return m.sample_batch(rng, count)


@dataclass(frozen=True)
class MeasureStats:
    mean: np.ndarray
    covariance: np.ndarray
    sup_density: float
    isotropic_constant: float


def _analytic_stats(m: MeasureSpec) -> MeasureStats:
    n = m.dimension
    if m.kind == GAUSSIAN:
        cov = np.eye(n)
        f_max = (2 * math.pi) ** (-n / 2)
    elif m.kind in (CUBE, CUBE_UNIT):
        h = m.cube_halfwidth
        cov = np.eye(n) * (h * h / 3.0)
        f_max = (2 * h) ** (-n)
    elif m.kind == BALL:
        cov = np.eye(n) / (n + 2)
        f_max = 1.0 / unit_ball_volume(n)
    elif m.kind == SIMPLEX:
        d = (n + 1) ** 2 * (n + 2)
        cov = ((n + 1) * np.eye(n) - np.ones((n, n))) / d
        f_max = float(special.factorial(n))
    elif m.kind == EXPONENTIAL:
        cov = np.eye(n)
        f_max = 1.0
    else:
        raise MeasureError(f"no analytic stats for {m.kind}")
    sign, logdet = np.linalg.slogdet(cov)
    iso = f_max ** (1.0 / n) * math.exp(logdet / (2.0 * n))
    return MeasureStats(np.zeros(n), cov, f_max, iso)


def _empirical_sup_density(m: MeasureSpec, samples: np.ndarray) -> float:
    """Lower bound on sup f: best sample plus a local ascent from it."""
    vals = m.density_batch(samples)
    best_idx = int(np.argmax(vals))
    x0 = samples[best_idx]
    res = optimize.minimize(
        lambda x: -float(m.density_batch(x[None, :])[0]),
        x0,
        method="Nelder-Mead",
        options={"maxiter": 200 * m.dimension, "xatol": 1e-8, "fatol": 1e-12},
    )
    return max(float(vals[best_idx]), -float(res.fun))


def stats(m: MeasureSpec, samples: Optional[np.ndarray] = None) -> MeasureStats:
    """Mean, covariance, sup-density and the isotropic constant of m."""
    if m.atomic:
        raise AtomicMeasureError("stats needs a density; the discrete cube has none")
    if m.kind != CUSTOM:
        return _analytic_stats(m)
    if samples is None:
        raise MeasureError("custom measures need samples for stats")
    samples = np.asarray(samples, dtype=float)
    mean = samples.mean(axis=0)
    cov = np.cov(samples, rowvar=False, ddof=0)
    cov = np.atleast_2d(cov)
    eigvals = np.linalg.eigvalsh(cov)
    if eigvals.min() <= 1e-12 * max(eigvals.max(), 1.0):
        raise SingularCovarianceError("empirical covariance is singular")
    f_max = _empirical_sup_density(m, samples)
    n = m.dimension
    sign, logdet = np.linalg.slogdet(cov)
    iso = f_max ** (1.0 / n) * math.exp(logdet / (2.0 * n))
    return MeasureStats(mean, cov, f_max, iso)


@dataclass(frozen=True)
class AffineMap:
    """x -> matrix @ x + shift."""

    matrix: np.ndarray
    shift: np.ndarray

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return pts @ self.matrix.T + self.shift


def isotropize(samples: np.ndarray) -> AffineMap:
    """Affine map sending the sample cloud to mean 0, covariance identity."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    count, n = samples.shape
    if count <= n:
        raise MeasureError(f"need more samples ({count}) than dimensions ({n})")
    mean = samples.mean(axis=0)
    cov = np.atleast_2d(np.cov(samples, rowvar=False, ddof=0))
    eigvals, eigvecs = np.linalg.eigh(cov)
    if eigvals.min() <= 1e-12 * max(eigvals.max(), 1.0):
        raise SingularCovarianceError("empirical covariance is singular")
    inv_sqrt = eigvecs @ np.diag(eigvals**-0.5) @ eigvecs.T
    return AffineMap(inv_sqrt, -inv_sqrt @ mean)


# ---------------------------------------------------------------------------
# Fradelizi checks
# ---------------------------------------------------------------------------


def _section_area(m: MeasureSpec, basis: np.ndarray, offset: np.ndarray, gen, mc_points: int) -> float:
    """MC estimate of the (n-1)-volume of K intersected with an affine hyperplane.

    basis: (n-1, n) orthonormal spanning set of the hyperplane's direction.
    """
    n = m.dimension
    radius = m.circumradius()
    k = n - 1
    if k == 0:
        # 0-dimensional section: either the point is in K or not
        return float(m.support_membership_batch(offset[None, :])[0])
    g = gen.standard_normal((mc_points, k))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = gen.random(mc_points) ** (1.0 / k)
    disk = g * (r * radius)[:, None]
    points = offset[None, :] + disk @ basis
    frac = float(np.mean(m.support_membership_batch(points)))
    return frac * unit_ball_volume(k) * radius**k


def fradelizi_checks(
    m: MeasureSpec,
    rng: RngStream,
    directions: int = 100,
    section_grid: int = 21,
    mc_points: int = 4000,
) -> CheckReport:
    """Verify sup f <= e^n f(0), and the max-vs-central section inequality
    for uniform-on-body kinds, along random directions. Report-only."""
    if not m.has_density:
        raise AtomicMeasureError("fradelizi checks need a density")
    if not m.centered:
        raise MeasureError("fradelizi checks assume a centered measure")

    n = m.dimension
    st = stats(m)
    f0 = density(m, np.zeros(n))
    density_ratio = st.sup_density / f0
    ratio_bound = math.exp(n)
    worst = density_ratio / ratio_bound
    passed = density_ratio <= ratio_bound * (1 + 1e-12)
    details = {"sup_over_center": density_ratio, "bound": ratio_bound}

    if m.uniform_on_body and n >= 2:
        gen = rng.generator()
        worst_section = 0.0
        for _ in range(directions):
            xi = gen.standard_normal(n)
            xi /= np.linalg.norm(xi)
            # orthonormal basis of xi-perp via QR of [xi | random]
            full = np.linalg.qr(np.column_stack([xi, gen.standard_normal((n, n - 1))]))[0]
            basis = full[:, 1:].T
            lo, hi = -m.support_radius(-xi), m.support_radius(xi)
            central = _section_area(m, basis, np.zeros(n), gen, mc_points)
            top = 0.0
            for y in np.linspace(lo, hi, section_grid):
                area = _section_area(m, basis, y * xi, gen, mc_points)
                top = max(top, area)
            if central > 0:
                worst_section = max(worst_section, top / (math.e * central))
        # MC noise allowance: section areas carry ~1/sqrt(mc_points) error
        slack = 4.0 / math.sqrt(mc_points)
        passed = passed and worst_section <= 1.0 + slack
        worst = max(worst, worst_section)
        details["worst_section_ratio_over_e"] = worst_section

    return CheckReport(
        name=f"fradelizi[{m.describe()}]",
        passed=passed,
        worst=worst,
        details=details,
    )
