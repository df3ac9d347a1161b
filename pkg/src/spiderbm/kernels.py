"""Closed-form transition densities for Brownian motion on spider graphs.

All kernels use the probabilist's normalization: the generator is
(1/2) d^2/dx^2, so the free line density is exp(-(x-y)^2/2t)/sqrt(2 pi t).

For the infinite spider the density from x on leg i to y is

    same leg:       g(t, x-y) - ((N-2)/N) g(t, x+y)
    different legs: (2/N) g(t, x+y)
    from the origin: (2/N) g(t, y)

where g is the line kernel.  The cross-leg form also equals the
first-passage convolution

    int_0^t  x/sqrt(2 pi s^3) exp(-x^2/2s) * (2/N) g(t-s, y) ds,

which :func:`transition_density_convolution` evaluates numerically; the
pair closed-form/convolution is the package's first dual-route check.

Values in far Gaussian tails underflow to exactly 0.0 rather than
raising; callers integrate these densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import SpiderGraph, SpiderPoint
from .numerics import QuadratureSpec, integrate

__all__ = [
    "KernelQuery",
    "gauss_kernel",
    "halfline_kernel",
    "first_passage_density",
    "first_passage_laplace",
    "transition_density",
    "transition_density_convolution",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class KernelQuery:
    """One density evaluation: time t > 0, start point, end point."""

    t: float
    start: SpiderPoint
    end: SpiderPoint

    def __post_init__(self):
        if not self.t > 0.0:
            raise ValueError(f"time must be positive, got {self.t}")


def gauss_kernel(t: float, dx: float) -> float:
    """Line heat kernel exp(-dx^2/2t)/sqrt(2 pi t)."""
    if not t > 0.0:
        raise ValueError(f"time must be positive, got {t}")
    return math.exp(-dx * dx / (2.0 * t)) / (_SQRT_2PI * math.sqrt(t))


def halfline_kernel(t: float, x: float, y: float, boundary: str = "dirichlet") -> float:
    """Half-line kernel with absorption ('dirichlet') or reflection ('neumann') at 0."""
    if x < 0.0 or y < 0.0:
        raise ValueError("half-line coordinates must be >= 0")
    direct = gauss_kernel(t, x - y)
    image = gauss_kernel(t, x + y)
    if boundary == "dirichlet":
        return direct - image
    if boundary == "neumann":
        return direct + image
    raise ValueError(f"boundary must be 'dirichlet' or 'neumann', got {boundary!r}")


def first_passage_density(s: float, x: float) -> float:
    """Density of the hitting time of 0 from x > 0: x/sqrt(2 pi s^3) exp(-x^2/2s).

    One-sided stable law of index 1/2 with Laplace transform exp(-sqrt(2 lam) x).
    """
    if not s > 0.0 or not x > 0.0:
        raise ValueError("first_passage_density needs s > 0 and x > 0")
    return x / (_SQRT_2PI * s ** 1.5) * math.exp(-x * x / (2.0 * s))


def first_passage_laplace(lam: float, x: float) -> float:
    """exp(-sqrt(2 lam) x), the transform of :func:`first_passage_density`."""
    if lam < 0.0 or x < 0.0:
        raise ValueError("first_passage_laplace needs lam >= 0 and x >= 0")
    return math.exp(-math.sqrt(2.0 * lam) * x)


def _require_infinite(g: SpiderGraph):
    if not g.all_infinite:
        raise ValueError(
            "closed-form spider kernels need all legs infinite; "
            "finite spiders are handled by the spectral heat kernel"
        )


def transition_density(g: SpiderGraph, q: KernelQuery) -> float:
    """Closed-form transition density on the infinite spider."""
    _require_infinite(g)
    g.validate_point(q.start)
    g.validate_point(q.end)
    n = g.n_legs
    t, x, y = q.t, q.start.x, q.end.x
    if x == 0.0 or y == 0.0:
        return (2.0 / n) * gauss_kernel(t, x + y)
    if q.start.leg == q.end.leg:
        return gauss_kernel(t, x - y) - ((n - 2.0) / n) * gauss_kernel(t, x + y)
    return (2.0 / n) * gauss_kernel(t, x + y)


def transition_density_convolution(g: SpiderGraph, q: KernelQuery,
                                   quad_tol: float = 1e-10) -> float:
    """Transition density by first-passage convolution (oracle form).

    Splits the time integral at t/2 and substitutes v = sqrt(s) and
    w = sqrt(t-s) on the halves, which removes the s^{-3/2} and
    (t-s)^{-1/2} endpoint singularities exactly.
    """
    _require_infinite(g)
    g.validate_point(q.start)
    g.validate_point(q.end)
    if quad_tol <= 0.0:
        raise ValueError("quad_tol must be positive")
    n = g.n_legs
    t, x, y = q.t, q.start.x, q.end.x
    if x == 0.0:
        # degenerate convolution: the first-passage factor is a point mass at 0
        return (2.0 / n) * gauss_kernel(t, y)

    spec = QuadratureSpec(abs_tol=quad_tol * 1e-2, rel_tol=quad_tol * 1e-2)

    def early(v: float) -> float:
        # s = v^2 on (0, t/2]: first-passage factor decays like exp(-x^2/2v^2)
        if v == 0.0:
            return 0.0
        fp = 2.0 * x / (_SQRT_2PI * v * v) * math.exp(-x * x / (2.0 * v * v))
        return fp * (2.0 / n) * gauss_kernel(t - v * v, y)

    def late(w: float) -> float:
        # s = t - w^2 on [t/2, t): the (t-s)^{-1/2} factor cancels against dw
        arrive = 2.0 / _SQRT_2PI * math.exp(-y * y / (2.0 * w * w)) if w > 0.0 \
            else (2.0 / _SQRT_2PI if y == 0.0 else 0.0)
        return first_passage_density(t - w * w, x) * (2.0 / n) * arrive

    half = math.sqrt(t / 2.0)
    free = integrate(early, 0.0, half, spec) + integrate(late, 0.0, half, spec)
    if q.end.leg != q.start.leg or y == 0.0:
        return free
    return halfline_kernel(t, x, y, "dirichlet") + free
