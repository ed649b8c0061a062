"""depthlab: a numerical laboratory for the half-space depth of log-concave
probability measures, their Cramér-transform level sets, centroid and Ball
bodies, and random-polytope threshold experiments."""

__version__ = "0.1.0"
