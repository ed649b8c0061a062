"""Direction nets, Minkowski gauges and polar volume integration.

Convex bodies appear here only through callables: a support function
h(U) -> (k,) evaluated on batches of directions, or a radial function.
Gauges and radial functions of support-defined bodies are computed by
optimizing over a direction net followed by a short local refinement, so the
reported gauge is a certified lower bound (each candidate direction yields a
valid separating functional).
"""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from .measures import sphere_surface_area
from .rng import RngStream

SupportFn = Callable[[np.ndarray], np.ndarray]


def fibonacci_sphere(size: int) -> np.ndarray:
    """Near-uniform deterministic net on S^2."""
    i = np.arange(size, dtype=float) + 0.5
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    z = 1.0 - 2.0 * i / size
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, 1.0))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def direction_net(n: int, size: int, rng: Optional[RngStream] = None) -> np.ndarray:
    """Unit directions: signs in n=1, Fibonacci net in n=3, random otherwise.

    Random nets are nested: the first k rows of a size-m net (k <= m) equal
    the size-k net for the same stream.
    """
    if n == 1:
        out = np.ones((size, 1))
        out[1::2] = -1.0
        return out
    if n == 3:
        return fibonacci_sphere(size)
    if rng is None:
        if n == 2:
            angles = 2 * math.pi * np.arange(size) / size
            return np.column_stack([np.cos(angles), np.sin(angles)])
        raise ValueError(f"random direction nets in n={n} require an RngStream")
    g = rng.generator().standard_normal((size, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _tangent_candidates(u: np.ndarray, step: float) -> np.ndarray:
    """Unit vectors near u obtained by stepping along +-coordinate tangents."""
    n = len(u)
    eye = np.eye(n)
    cands = np.vstack([u + step * eye, u - step * eye])
    norms = np.linalg.norm(cands, axis=1, keepdims=True)
    return cands / norms


def minkowski_gauge(
    x: np.ndarray,
    support_fn: SupportFn,
    net: np.ndarray,
    refine_rounds: int = 3,
) -> float:
    """Gauge ||x||_K = sup_u <x,u>_+ / h_K(u), maximized over net + refinement.

    Lower bound on the true gauge; tight when the net resolves the maximizing
    direction. gauge <= 1 certifies nothing, gauge > 1 certifies x outside K.
    """
    x = np.asarray(x, dtype=float)
    norm = float(np.linalg.norm(x))
    if norm == 0.0:
        return 0.0
    cands = np.vstack([net, x[None, :] / norm])
    best_u, best_q = _best_ratio(x, support_fn, cands)
    step = 0.5
    for _ in range(refine_rounds):
        for _ in range(3):
            u2, q2 = _best_ratio(x, support_fn, _tangent_candidates(best_u, step))
            if q2 > best_q:
                best_u, best_q = u2, q2
        step /= 4.0
    return best_q


def _best_ratio(x, support_fn, cands):
    h = np.asarray(support_fn(cands), dtype=float)
    num = np.maximum(cands @ x, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(h > 0, num / h, np.where(num > 0, np.inf, 0.0))
    i = int(np.argmax(q))
    return cands[i], float(q[i])


def radial_from_support(
    theta: np.ndarray,
    support_fn: SupportFn,
    net: np.ndarray,
    refine_rounds: int = 3,
) -> float:
    """Radial function rho_K(theta) = 1 / ||theta||_K of a support-defined body."""
    g = minkowski_gauge(np.asarray(theta, dtype=float), support_fn, net, refine_rounds)
    return math.inf if g == 0.0 else 1.0 / g


def polar_volume(radii: np.ndarray, n: int) -> float:
    """|K| from radial samples over (approximately) uniform sphere directions."""
    radii = np.asarray(radii, dtype=float)
    return sphere_surface_area(n) / n * float(np.mean(radii**n))


def orthonormal_tangent_basis(xi: np.ndarray, gen) -> np.ndarray:
    """(n-1, n) orthonormal basis of the hyperplane orthogonal to xi."""
    n = len(xi)
    q = np.linalg.qr(np.column_stack([xi, gen.standard_normal((n, n - 1))]))[0]
    return q[:, 1:].T
