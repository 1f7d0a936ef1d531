"""Closed-form and numeric predictions used by the experiments.

These are the benchmark quantities the Monte Carlo harness tests against:
the limiting giant-component fraction of a sparse random graph, the
per-shape frequency of small tree components, and the Poisson rate of
extra double edges created by a block relabeling.
"""

from __future__ import annotations

import math

__all__ = [
    "giant_fraction",
    "class_frequency",
    "cayley_count",
    "expected_class_count",
    "extra_double_edge_rate",
    "poisson_pmf",
]


def giant_fraction(mu: float, tol: float = 1e-12) -> float:
    """Greatest non-negative root of exp(-mu * x) = 1 - x.

    This is the limiting fraction of vertices on the largest component of
    a sparse random graph with mean degree ``mu``. The root is 0 exactly
    for mu <= 1. For mu > 1 the unique positive root is bracketed in
    (0, 1] and found by bisection; the fixed point at 0 is degenerate
    near mu = 1, so it is handled by the closed form instead.
    """
    if not math.isfinite(mu):
        raise ValueError("mu must be finite")
    if mu < 0:
        raise ValueError("mu must be non-negative")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if mu <= 1.0:
        return 0.0
    # g(x) = exp(-mu x) - 1 + x: negative just above 0, exp(-mu) > 0 at 1
    lo, hi = 1e-12, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.exp(-mu * mid) - 1.0 + mid < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16 and abs(math.exp(-mu * hi) - 1.0 + hi) <= tol:
            break
    return hi


def class_frequency(k: int, mu: float) -> float:
    """Per-vertex frequency floor of one tree shape of size k: mu^(k-1) e^(-mu k) / k!.

    Decreasing in k whenever mu * exp(-mu) < 1, which holds for every mu > 0.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not mu > 0:
        raise ValueError("mu must be positive")
    return mu ** (k - 1) * math.exp(-mu * k) / math.factorial(k)


def cayley_count(k: int) -> int:
    """Number of labeled trees on k vertices, k^(k-2); 1 for k in {1, 2}."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k <= 2:
        return 1
    return k ** (k - 2)


def expected_class_count(n: int, k: int, mu: float, automorphisms: int) -> float:
    """First-moment estimate of the number of size-k tree components of one
    shape with the given automorphism count: n mu^(k-1) e^(-mu k) / a."""
    if automorphisms < 1:
        raise ValueError("automorphism count must be at least 1")
    return n * mu ** (k - 1) * math.exp(-mu * k) / automorphisms


def extra_double_edge_rate(lam: float, s: float, *, include_giant_factor: bool = True) -> float:
    """Poisson rate of extra double edges created by one block relabeling.

    The rate is lam^2 (1-s)^2 (1-c)^2 / 2 with c the giant fraction at mean
    degree lam * s. ``include_giant_factor=False`` drops the (1-c)^2 factor,
    which gives the cruder acceptance-probability estimate; the two agree
    whenever lam * s <= 1. Reports record both.
    """
    base = lam * lam * (1.0 - s) * (1.0 - s) / 2.0
    if not include_giant_factor:
        return base
    c = giant_fraction(lam * s)
    return base * (1.0 - c) ** 2


def poisson_pmf(k: int, rate: float) -> float:
    if k < 0:
        return 0.0
    return math.exp(-rate) * rate**k / math.factorial(k)
