"""First-exit laws on spider graphs: transforms, densities, moments.

Conventions
-----------
The driving process has generator (1/2) d^2/dx^2, so the first exit time
from a ball of radius L started at x on any leg has Laplace transform
cosh(sqrt(2 lam) x)/cosh(sqrt(2 lam) L), independent of the number of
legs.  ``tau1`` below always means the exit time from the unit ball
started at the origin (transform 1/cosh sqrt(2 lam)); the L-ball time is
L^2 * tau1 in law.

Hyperbolic ratios are evaluated through exponentials scaled by
exp(-sqrt(2 lam) L) so nothing overflows for large lam * L^2; plain
cosh would overflow once sqrt(2 lam) L exceeds ~710.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.special import erfc

from .numerics import alternating_sum, double_factorial, euler_number

__all__ = [
    "LaplaceFunction",
    "ExitLaw",
    "ball_exit_laplace",
    "tau1_density",
    "tau1_cdf",
    "tau1_moment",
    "ball_exit_moment",
    "cosh_product",
    "exit_point_probability",
    "general_exit_laplace",
    "mean_exit_time",
    "one_leg_exit_laplace",
    "partial_exit_laplace",
    "one_leg_exit_density",
    "one_leg_exit_cdf",
    "interval_exit",
    "cycle_laplace",
    "reference_exit_laws",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Below this time the eigenvalue series for tau1 converges slowly; the
# image-expansion (stable-law) series converges fast there, and the two
# agree to ~1e-14 at the crossover (unit-tested).
_TAU1_CROSSOVER = 0.4


@dataclass(frozen=True)
class LaplaceFunction:
    """A real-argument evaluable lam >= 0 -> E exp(-lam T) with provenance."""

    fn: Callable[[float], float]
    description: str

    def __call__(self, lam: float) -> float:
        return self.fn(lam)


@dataclass(frozen=True)
class ExitLaw:
    """Bundle of transform / density / moments for one exit problem."""

    transform: LaplaceFunction
    density: Callable[[float], float] | None = None
    moments: tuple[float, ...] | None = None
    cdf: Callable[[float], float] | None = None


def _a(lam: float) -> float:
    if lam < 0.0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    return math.sqrt(2.0 * lam)


def ball_exit_laplace(lam: float, L: float, x: float) -> float:
    """E_x exp(-lam tau_L) = cosh(sqrt(2 lam) x)/cosh(sqrt(2 lam) L)."""
    if L <= 0.0:
        raise ValueError("ball radius L must be positive")
    if not 0.0 <= x <= L:
        raise ValueError(f"start point {x} outside [0, {L}]")
    a = _a(lam)
    if a == 0.0:
        return 1.0
    # cosh(ax)/cosh(aL), scaled by exp(-aL) top and bottom
    return math.exp(-a * (L - x)) * (1.0 + math.exp(-2.0 * a * x)) \
        / (1.0 + math.exp(-2.0 * a * L))


def tau1_density(s: float, tol: float = 1e-15) -> float:
    """Density of tau1, the unit-ball exit time from the origin.

    For s >= 0.4 uses the eigenvalue expansion

        sum_{k>=1} (-1)^{k+1} (2k-1) pi/2 exp(-s pi^2 (2k-1)^2 / 8),

    whose terms alternate, so truncation is certified by the first
    omitted term.  For s < 0.4 uses the dual image expansion

        2 sum_{n>=0} (-1)^n (2n+1)/sqrt(2 pi s^3) exp(-(2n+1)^2/(2s)),

    the term-wise inversion of 1/cosh sqrt(2 lam) = 2 sum (-1)^n
    exp(-(2n+1) sqrt(2 lam)) into stable-1/2 densities at odd integers.
    """
    if not s > 0.0:
        raise ValueError("s must be positive")
    if s >= _TAU1_CROSSOVER:
        def term(k: int) -> float:
            m = 2 * k - 1
            return (-1.0) ** (k + 1) * m * (math.pi / 2.0) \
                * math.exp(-s * math.pi ** 2 * m * m / 8.0)
        return alternating_sum(term, tol=tol, start=1).value
    pref = 2.0 / (_SQRT_2PI * s ** 1.5)

    def term(n: int) -> float:
        m = 2 * n + 1
        return (-1.0) ** n * pref * m * math.exp(-m * m / (2.0 * s))
    return alternating_sum(term, tol=tol, start=0).value


def tau1_cdf(s: float, tol: float = 1e-15) -> float:
    """P(tau1 <= s), by term-wise integration of the same two series."""
    if s <= 0.0:
        return 0.0
    if s >= _TAU1_CROSSOVER:
        def term(k: int) -> float:
            m = 2 * k - 1
            return (-1.0) ** (k + 1) * 4.0 / (math.pi * m) \
                * math.exp(-s * math.pi ** 2 * m * m / 8.0)
        return 1.0 - alternating_sum(term, tol=tol, start=1).value

    def term(n: int) -> float:
        m = 2 * n + 1
        return (-1.0) ** n * 2.0 * float(erfc(m / math.sqrt(2.0 * s)))
    return alternating_sum(term, tol=tol, start=0).value


def tau1_moment(k: int) -> float:
    """E tau1^k = |E_{2k}| / (2k-1)!! with |E_{2k}| the secant numbers.

    The double factorial makes every moment positive and reproduces the
    series expansion 1/cosh sqrt(2 lam) = 1 - lam + (5/6) lam^2 - ...,
    i.e. E tau1 = 1, E tau1^2 = 5/3; quadrature of the density is the
    arbitrating oracle in the test suite.
    """
    if k < 1:
        raise ValueError("moment order must be >= 1")
    value = Fraction(euler_number(2 * k), double_factorial(2 * k - 1))
    try:
        return float(value)
    except OverflowError as exc:
        raise OverflowError(f"tau1 moment of order {k} overflows a double") from exc


def ball_exit_moment(k: int, L: float) -> float:
    """E tau_L^k = L^{2k} E tau1^k (Brownian self-similarity)."""
    if L <= 0.0:
        raise ValueError("ball radius L must be positive")
    return L ** (2 * k) * tau1_moment(k)


def cosh_product(lam: float, n_factors: int) -> float:
    """Partial product prod_{n<n_factors} (1 + 8 lam / ((2n+1) pi)^2) -> cosh sqrt(2 lam)."""
    if n_factors < 1:
        raise ValueError("n_factors must be >= 1")
    odd = 2.0 * np.arange(n_factors, dtype=float) + 1.0
    factors = 1.0 + 8.0 * lam / (odd * math.pi) ** 2
    # log-sum keeps the partial product finite even for huge n_factors
    return float(np.exp(np.log(factors).sum()))


def exit_point_probability(lengths: Sequence[float]) -> np.ndarray:
    """P(exit happens at the end of leg i) = (1/L_i) / sum_j (1/L_j).

    The shortest leg is the likeliest exit; probabilities sum to 1.
    """
    arr = np.asarray(lengths, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("lengths must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("all leg lengths must be finite and positive")
    inv = 1.0 / arr
    return inv / inv.sum()


def _csch_coth(u: float) -> tuple[float, float]:
    # overflow-free 1/sinh(u) and coth(u) for u > 0
    em = math.exp(-u)
    denom = -math.expm1(-2.0 * u)
    return 2.0 * em / denom, (1.0 + em * em) / denom


def general_exit_laplace(lam: float, lengths: Sequence[float]) -> float:
    """Transform of the first exit time from legs of lengths (L_1..L_N), from 0.

    Equals [sum_i 1/sinh(a L_i)] / [sum_i coth(a L_i)] with a = sqrt(2 lam);
    the exponential-scaled evaluation is smooth through lam -> 0 (both
    sums behave like sum_i 1/(a L_i), no vanishing-term division).
    """
    arr = np.asarray(lengths, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("all leg lengths must be finite and positive")
    a = _a(lam)
    if a == 0.0:
        return 1.0
    num = 0.0
    den = 0.0
    for L in arr:
        csch, coth = _csch_coth(a * L)
        num += csch
        den += coth
    return num / den


def mean_exit_time(lengths: Sequence[float]) -> float:
    """E tau = (sum_i L_i) / (sum_i 1/L_i); equals L^2 when all legs are L."""
    arr = np.asarray(lengths, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("all leg lengths must be finite and positive")
    return float(arr.sum() / (1.0 / arr).sum())


def partial_exit_laplace(lam: float, L: float, n_legs: int, n_exit: int = 1) -> float:
    """Transform of the first hit of level L on any of the first ``n_exit`` legs.

    The remaining n_legs - n_exit legs are unconstrained half-lines:

        1 / (cosh(a L) + (N - N1) sinh(a L)),  a = sqrt(2 lam)
        = p exp(-a L) / (1 - q exp(-2 a L)),   p = 2/(N - N1 + 1), q = 1 - p,

    a geometric mixture of stable-1/2 transforms at odd multiples of L.
    """
    if L <= 0.0:
        raise ValueError("level L must be positive")
    if n_legs < 2:
        raise ValueError("need at least 2 legs")
    if not 1 <= n_exit <= n_legs:
        raise ValueError(f"n_exit must lie in [1, {n_legs}]")
    a = _a(lam)
    if a == 0.0:
        return 1.0
    m = n_legs - n_exit
    e = math.exp(-a * L)
    return 2.0 * e / ((m + 1.0) - (m - 1.0) * e * e)


def one_leg_exit_laplace(lam: float, L: float, n_legs: int) -> float:
    """Transform of the first hit of level L on leg 1 only (others infinite)."""
    return partial_exit_laplace(lam, L, n_legs, n_exit=1)


def _mixture_weights(n_legs: int, n_exit: int) -> tuple[float, float]:
    p = 2.0 / (n_legs - n_exit + 1.0)
    return p, 1.0 - p


def one_leg_exit_density(s: float, L: float, n_legs: int, n_exit: int = 1,
                         tol: float = 1e-13) -> float:
    """Density of the partial-boundary exit time: geometric stable mixture

        sum_{n>=0} p q^n (2n+1) L / sqrt(2 pi s^3) exp(-(2n+1)^2 L^2 / 2s).

    Truncation carries a certified tail bound (geometric-linear envelope
    for q >= 0; alternating bound in the degenerate q = -1 case, which
    is the ball-exit density again).
    """
    if not s > 0.0 or L <= 0.0:
        raise ValueError("need s > 0 and L > 0")
    if not 1 <= n_exit <= n_legs:
        raise ValueError(f"n_exit must lie in [1, {n_legs}]")
    p, q = _mixture_weights(n_legs, n_exit)
    pref = L / (_SQRT_2PI * s ** 1.5)

    def stable_part(n: int) -> float:
        m = 2 * n + 1
        return m * math.exp(-m * m * L * L / (2.0 * s))

    if q < 0.0:
        def term(n: int) -> float:
            return p * (q ** n) * pref * stable_part(n)
        return alternating_sum(term, tol=tol).value

    total = 0.0
    n = 0
    while True:
        total += p * (q ** n) * pref * stable_part(n)
        # tail <= pref * p * exp-part(n+1) * sum_{m>n} (2m+1) q^m
        decay = math.exp(-(2 * n + 3) ** 2 * L * L / (2.0 * s))
        geom_linear = (q ** (n + 1)) * ((2 * n + 3) - (2 * n + 1) * q) / (1.0 - q) ** 2
        if pref * p * decay * geom_linear < tol * (1.0 + abs(total)):
            return total
        n += 1
        if n > 100_000:
            raise RuntimeError("stable-mixture series failed to converge")


def one_leg_exit_cdf(s: float, L: float, n_legs: int, n_exit: int = 1,
                     tol: float = 1e-13) -> float:
    """CDF of the partial-boundary exit time: sum p q^n erfc((2n+1) L / sqrt(2s))."""
    if s <= 0.0:
        return 0.0
    if L <= 0.0:
        raise ValueError("level L must be positive")
    if not 1 <= n_exit <= n_legs:
        raise ValueError(f"n_exit must lie in [1, {n_legs}]")
    p, q = _mixture_weights(n_legs, n_exit)

    def stable_cdf(n: int) -> float:
        return float(erfc((2 * n + 1) * L / math.sqrt(2.0 * s)))

    if q < 0.0:
        def term(n: int) -> float:
            return p * (q ** n) * stable_cdf(n)
        return alternating_sum(term, tol=tol).value

    total = 0.0
    n = 0
    while True:
        total += p * (q ** n) * stable_cdf(n)
        tail = p * (q ** (n + 1)) / (1.0 - q) * stable_cdf(n + 1)
        if tail < tol * (1.0 + abs(total)):
            return total
        n += 1
        if n > 100_000:
            raise RuntimeError("stable-mixture CDF failed to converge")


def interval_exit(lam: float, L: float, x: float) -> tuple[float, float]:
    """Exit of the interval (0, L) from x: (Laplace transform, P(exit at L)).

    Transform [sinh(a (L-x)) + sinh(a x)] / sinh(a L); the right-endpoint
    exit probability is x/L regardless of lam.
    """
    if L <= 0.0:
        raise ValueError("interval length L must be positive")
    if not 0.0 <= x <= L:
        raise ValueError(f"start point {x} outside [0, {L}]")
    prob_right = x / L
    a = _a(lam)
    if a == 0.0 or x == 0.0 or x == L:
        return 1.0, prob_right
    denom = -math.expm1(-2.0 * a * L)
    left = math.exp(-a * x) * (-math.expm1(-2.0 * a * (L - x)))
    right = math.exp(-a * (L - x)) * (-math.expm1(-2.0 * a * x))
    return (left + right) / denom, prob_right


def cycle_laplace(lam: float, L: float, kind: str = "round_trip") -> float:
    """Transform of one complete excursion cycle at level L.

    ``round_trip``: origin -> level L -> origin on a leg reflected at L,
    transform 1/cosh^2(sqrt(2 lam) L); mean 2 L^2, variance (4/3) L^4.

    ``reflected_cover``: reflected Brownian motion on the half-line,
    0 -> L -> 0, transform exp(-sqrt(2 lam) L)/cosh(sqrt(2 lam) L);
    the return half is a stable-1/2 passage, so the cycle has no mean.
    """
    if L <= 0.0:
        raise ValueError("level L must be positive")
    ball = ball_exit_laplace(lam, L, 0.0)
    if kind == "round_trip":
        return ball * ball
    if kind == "reflected_cover":
        return math.exp(-_a(lam) * L) * ball
    raise ValueError(f"kind must be 'round_trip' or 'reflected_cover', got {kind!r}")


def reference_exit_laws() -> dict[str, ExitLaw]:
    """Named transform/density pairs used as inversion-oracle fixtures."""

    def scaled_tau1_density(L: float) -> Callable[[float], float]:
        return lambda s: tau1_density(s / (L * L)) / (L * L)

    def scaled_tau1_cdf(L: float) -> Callable[[float], float]:
        return lambda s: tau1_cdf(s / (L * L))

    laws = {
        "unit_ball": ExitLaw(
            LaplaceFunction(lambda lam: ball_exit_laplace(lam, 1.0, 0.0),
                            "analytic: unit-ball exit from origin"),
            density=tau1_density,
            moments=tuple(tau1_moment(k) for k in range(1, 5)),
            cdf=tau1_cdf,
        ),
        "ball_L2": ExitLaw(
            LaplaceFunction(lambda lam: ball_exit_laplace(lam, 2.0, 0.0),
                            "analytic: radius-2 ball exit from origin"),
            density=scaled_tau1_density(2.0),
            moments=tuple(ball_exit_moment(k, 2.0) for k in range(1, 5)),
            cdf=scaled_tau1_cdf(2.0),
        ),
        "line_passage": ExitLaw(
            LaplaceFunction(lambda lam: one_leg_exit_laplace(lam, 1.0, 2),
                            "analytic: level-1 passage on the line (stable 1/2)"),
            density=lambda s: one_leg_exit_density(s, 1.0, 2, 1),
            cdf=lambda s: one_leg_exit_cdf(s, 1.0, 2, 1),
        ),
        "one_leg_N3": ExitLaw(
            LaplaceFunction(lambda lam: one_leg_exit_laplace(lam, 1.0, 3),
                            "analytic: one truncated leg of three"),
            density=lambda s: one_leg_exit_density(s, 1.0, 3, 1),
            cdf=lambda s: one_leg_exit_cdf(s, 1.0, 3, 1),
        ),
        "partial_N5_2": ExitLaw(
            LaplaceFunction(lambda lam: partial_exit_laplace(lam, 1.0, 5, 2),
                            "analytic: two truncated legs of five"),
            density=lambda s: one_leg_exit_density(s, 1.0, 5, 2),
            cdf=lambda s: one_leg_exit_cdf(s, 1.0, 5, 2),
        ),
    }
    return laws
