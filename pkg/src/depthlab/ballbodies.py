"""Ball's bodies K_t(mu), the density level sets R_t(mu), and their
inclusion and volume identities.

Radial functions of K_t come from the one-dimensional moment integral of the
density along rays. Uniform-on-body kinds collapse to the support radius
(exact), spherically symmetric kinds to a single quadrature, the exponential
to an incomplete-gamma expression; everything else runs through adaptive
quadrature with an exponential-tail cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate, special

from . import measures as meas
from .centroid import CentroidOracle
from .estimates import CheckReport
from .geometry import direction_net, polar_volume, radial_from_support
from .measures import MeasureSpec, unit_ball_volume
from .rng import RngStream

# integration stops where the log-density falls this far below log f(0)
LOG_TAIL_CUTOFF = 80.0


class BallBodyError(Exception):
    pass


@dataclass
class BallBodyOracle:
    measure: MeasureSpec
    t: float
    quad_rel_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.t <= 0:
            raise BallBodyError("K_t needs t > 0")
        if not self.measure.has_density:
            raise meas.AtomicMeasureError("K_t needs a density")
        f0 = meas.density(self.measure, np.zeros(self.measure.dimension))
        if f0 <= 0.0:
            raise BallBodyError("K_t is undefined when f(0) = 0")
        object.__setattr__(self, "_f0", f0)

    # -- radial function ---------------------------------------------------

    def radial(self, xi: np.ndarray) -> float:
        return float(self.radial_batch(np.asarray(xi, float)[None, :])[0])

    def radial_batch(self, directions: np.ndarray) -> np.ndarray:
        """rho_{K_t} on a batch of (not necessarily unit) directions."""
        D = np.atleast_2d(np.asarray(directions, dtype=float))
        m, t = self.measure, self.t
        norms = np.linalg.norm(D, axis=1)
        if np.any(norms == 0):
            raise BallBodyError("radial function needs nonzero directions")
        if m.uniform_on_body:
            # indicator density: the moment integral is exactly rho_K^t
            return np.array([m.support_radius(d) for d in D])
        if m.kind == meas.GAUSSIAN:
            unit_val = (2.0 ** (t / 2) * special.gamma(t / 2 + 1.0)) ** (1.0 / t)
            return unit_val / norms
        if m.kind == meas.EXPONENTIAL:
            return np.array([self._exponential_radial(d) for d in D])
        return np.array([self._quad_radial(d) for d in D])

    def _exponential_radial(self, d: np.ndarray) -> float:
        # f(r d)/f(0) = exp(-r s) on [0, R), s = sum(d); R = support radius
        t = self.t
        s = float(np.sum(d))
        R = self.measure.support_radius(d)
        if s > 0:
            cap = 1.0 if math.isinf(R) else float(special.gammainc(t, s * R))
            return (special.gamma(t + 1.0) * cap) ** (1.0 / t) / s
        # s <= 0 needs the growing branch; R is finite (some coordinate < 0)
        nodes, wts = np.polynomial.legendre.leggauss(128)
        r = (nodes + 1.0) * (R / 2.0)
        vals = t * r ** (t - 1.0) * np.exp(-r * s)
        return float((R / 2.0) * np.dot(wts, vals)) ** (1.0 / t)

    def _quad_radial(self, d: np.ndarray) -> float:
        m, t = self.measure, self.t
        f0 = self._f0
        logf0 = math.log(f0)

        def integrand(r: float) -> float:
            val = m.log_density_batch((r * d)[None, :])[0]
            if val == -math.inf:
                return 0.0
            return t * r ** (t - 1.0) * math.exp(val - logf0)

        r_cut = self._tail_cutoff(d, logf0)
        val, _ = integrate.quad(integrand, 0.0, r_cut, epsrel=self.quad_rel_tol, limit=400)
        return val ** (1.0 / t)

    def _tail_cutoff(self, d: np.ndarray, logf0: float) -> float:
        m = self.measure
        R = m.support_radius(d)
        if math.isfinite(R):
            return R
        r = 1.0
        for _ in range(200):
            val = m.log_density_batch((r * d)[None, :])[0]
            if val < logf0 - LOG_TAIL_CUTOFF:
                return r
            r *= 2.0
        raise BallBodyError("could not locate an integrable tail cutoff")


def kt_radial(b: BallBodyOracle, xi: np.ndarray) -> float:
    """rho_{K_t(mu)}(xi); homogeneous of degree -1 in xi."""
    return b.radial(xi)


def kt_inclusion_check(
    m: MeasureSpec,
    t: float,
    s: float,
    net: np.ndarray,
    rel_tol: float = 1e-9,
) -> CheckReport:
    """Gamma-ratio and e^{n/t - n/s} inclusion chain between K_t and K_s."""
    if not (0 < t <= s):
        raise ValueError("need 0 < t <= s")
    n = m.dimension
    rho_t = BallBodyOracle(m, t).radial_batch(net)
    rho_s = BallBodyOracle(m, s).radial_batch(net)
    gamma_ratio = math.exp(special.gammaln(t + 1.0) / t - special.gammaln(s + 1.0) / s)
    expand = math.exp(n / t - n / s)
    left_ok = gamma_ratio * rho_s <= rho_t * (1 + rel_tol)
    right_ok = rho_t <= expand * rho_s * (1 + rel_tol)
    passed = bool(np.all(left_ok) and np.all(right_ok))
    margins = np.minimum(rho_t / (gamma_ratio * rho_s), expand * rho_s / rho_t)
    i = int(np.argmin(margins))
    return CheckReport(
        name=f"kt-inclusion[{m.describe()}, t={t}, s={s}]",
        passed=passed,
        worst=float(margins[i]),
        witness={"direction": net[i].tolist()},
        details={
            "gamma_ratio": gamma_ratio,
            "expansion": expand,
            "left_violations": int(np.sum(~left_ok)),
            "right_violations": int(np.sum(~right_ok)),
        },
    )


def volume_identity_check(
    m: MeasureSpec,
    rng: Optional[RngStream] = None,
    vol_tol: float = 0.02,
    band: Optional[tuple[float, float]] = None,
) -> CheckReport:
    """|K_n| f(0) = 1 within tolerance, and f(0)|K_{n+1}| inside a band.

    Volumes come from polar integration of the radial function over a
    direction net (10^4 directions for n <= 3, 10^5 for n = 4); spherically
    symmetric measures use the exact one-radius formula.
    """
    n = m.dimension
    if n > 4:
        raise BallBodyError("volume identities are checked for n <= 4 only")
    f0 = meas.density(m, np.zeros(n))
    if band is None:
        band = (1.0 / math.e, math.e * (n + 1.0) / n)

    def body_volume(t: float) -> float:
        oracle = BallBodyOracle(m, t)
        if m.spherically_symmetric:
            rho = oracle.radial(np.eye(n)[0] if n > 1 else np.array([1.0]))
            return unit_ball_volume(n) * rho**n
        size = 10_000 if n <= 3 else 100_000
        net = direction_net(n, size, rng if rng is not None else RngStream(0))
        return polar_volume(oracle.radial_batch(net), n)

    vol_n = body_volume(float(n))
    identity = vol_n * f0
    vol_n1 = body_volume(float(n + 1))
    ratio_n1 = f0 * vol_n1
    passed = bool(abs(identity - 1.0) <= vol_tol and band[0] <= ratio_n1 <= band[1])
    return CheckReport(
        name=f"kt-volume[{m.describe()}]",
        passed=passed,
        worst=float(identity),
        details={
            "f0_times_vol_Kn": identity,
            "f0_times_vol_Kn1": ratio_n1,
            "band": list(band),
        },
    )


# ---------------------------------------------------------------------------
# density superlevel sets R_t
# ---------------------------------------------------------------------------


@dataclass
class RtOracle:
    measure: MeasureSpec
    t: float

    def __post_init__(self) -> None:
        if self.t <= 0:
            raise BallBodyError("R_t needs t > 0")
        if not self.measure.has_density:
            raise meas.AtomicMeasureError("R_t needs a density")
        f0 = meas.density(self.measure, np.zeros(self.measure.dimension))
        if f0 <= 0.0:
            raise BallBodyError("R_t is undefined when f(0) = 0")
        object.__setattr__(self, "_logf0", math.log(f0))

    def membership(self, x: np.ndarray) -> bool:
        """f(x) >= e^{-t} f(0), compared in log space."""
        val = self.measure.log_density_batch(np.asarray(x, float)[None, :])[0]
        return bool(val >= self._logf0 - self.t - 1e-12)

    def membership_batch(self, X: np.ndarray) -> np.ndarray:
        vals = self.measure.log_density_batch(X)
        return vals >= self._logf0 - self.t - 1e-12

    def radial(self, xi: np.ndarray, tol: float = 1e-10) -> float:
        """Bisection on ray membership (an interval by convexity of R_t)."""
        xi = np.asarray(xi, dtype=float)
        lo, hi = 0.0, 1.0
        for _ in range(90):
            if not self.membership(hi * xi):
                break
            lo, hi = hi, hi * 2.0
            if hi > 2.0**60:
                return math.inf
        for _ in range(200):
            if hi - lo <= tol * max(hi, 1.0):
                break
            mid = 0.5 * (lo + hi)
            if self.membership(mid * xi):
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


def rt_membership(r: RtOracle, x: np.ndarray) -> bool:
    return r.membership(x)


def rt_contains_kn1_check(
    m: MeasureSpec,
    t: float,
    net: np.ndarray,
    rng: Optional[RngStream] = None,
    floor: float = 0.01,
    gauge_net: Optional[np.ndarray] = None,
) -> CheckReport:
    """Empirical inclusion constants of R_t and Z_t^+ against K_{n+1}.

    Reports c0 = min_xi rho_{R_t}/rho_{K_{n+1}} and
    c0' = min_xi rho_{Z_t^+}/rho_{K_{n+1}}, both required above the floor;
    applies for t >= 5n.
    """
    n = m.dimension
    if t < 5 * n:
        raise ValueError(f"the inclusion lemmas need t >= 5n = {5 * n}")
    rt = RtOracle(m, t)
    kn1 = BallBodyOracle(m, float(n + 1))
    zplus = CentroidOracle(m, t, one_sided=True, rng=rng)
    gnet = gauge_net if gauge_net is not None else net

    rho_k = kn1.radial_batch(net)
    rho_r = np.array([rt.radial(xi) for xi in net])
    rho_z = np.array([radial_from_support(xi, zplus.support_batch, gnet) for xi in net])

    c0 = float(np.min(rho_r / rho_k))
    c0p = float(np.min(rho_z / rho_k))
    passed = bool(c0 >= floor and c0p >= floor)
    return CheckReport(
        name=f"rt-zt-contain-kn1[{m.describe()}, t={t}]",
        passed=passed,
        worst=min(c0, c0p),
        details={"c0_emp": c0, "c0_prime_emp": c0p, "floor": floor},
    )
