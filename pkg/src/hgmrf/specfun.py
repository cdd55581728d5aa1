"""Special functions and periodic quadrature.

Exactly the primitives the rate formulas need: the complete elliptic
integral of the first kind K(k) in the modulus convention (K(0) = pi/2,
K(k) -> inf as k -> 1), the modified Bessel function K_1, and a
midpoint-rule integrator on (-pi, pi]^2 with automatic grid doubling.
All arithmetic is 64-bit binary floating point.
"""

import math
from dataclasses import dataclass

import numpy as np

EULER_GAMMA = 0.5772156649015328606

#: Argument where bessel_k1 switches from the ascending series to the
#: continued fraction; both branches are good to ~1e-15 relative here.
K1_CROSSOVER = 2.0


class NonConvergenceError(ArithmeticError):
    """Quadrature failed to meet its tolerance within the point budget."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Budget for the doubling midpoint rule on (-pi, pi]^2.

    points_per_axis is the starting grid side; the grid doubles until two
    successive estimates agree to relative_tolerance or the side would
    exceed max_points_per_axis.
    """

    points_per_axis: int = 256
    relative_tolerance: float = 1e-9
    max_points_per_axis: int = 4096

    def __post_init__(self):
        if self.points_per_axis < 8:
            raise ValueError("points_per_axis must be >= 8")
        if self.max_points_per_axis < self.points_per_axis:
            raise ValueError("max_points_per_axis must be >= points_per_axis")
        if not 0.0 < self.relative_tolerance <= 1e-2:
            raise ValueError("relative_tolerance must be in (0, 1e-2]")


DEFAULT_QUADRATURE = QuadratureSpec()

# Estimates whose magnitude and change are both below this are treated as
# converged zeros (a pure relative test is meaningless at roundoff scale).
_ZERO_FLOOR = 1e-12


def elliptic_k(modulus: float) -> float:
    """Complete elliptic integral of the first kind, modulus convention.

    K(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t), evaluated through the
    arithmetic-geometric mean: K = pi / (2*AGM(1, sqrt(1-k^2))).  Quadratic
    convergence makes this exact to <= 1e-14 relative in a handful of
    iterations.

    Raises ValueError outside 0 <= k < 1 (K(1) is infinite).
    """
    k = float(modulus)
    if not 0.0 <= k < 1.0:
        raise ValueError(f"modulus must satisfy 0 <= k < 1, got {modulus}")
    a = 1.0
    # (1-k)(1+k) loses no precision near k = 1, unlike 1 - k*k.
    g = math.sqrt((1.0 - k) * (1.0 + k))
    while abs(a - g) > 1e-15 * a:
        a, g = 0.5 * (a + g), math.sqrt(a * g)
    return math.pi / (2.0 * a)


def _k1_series(x: float) -> float:
    # Ascending series: K1(x) = 1/x + ln(x/2) I1(x)
    #   - (x/4) sum_k [psi(k+1)+psi(k+2)] (x^2/4)^k / (k! (k+1)!).
    q = 0.25 * x * x
    term = 1.0
    psi1 = -EULER_GAMMA
    psi2 = 1.0 - EULER_GAMMA
    sum_i1 = term
    sum_psi = term * (psi1 + psi2)
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + 1))
        psi1 += 1.0 / k
        psi2 += 1.0 / (k + 1)
        sum_i1 += term
        contrib = term * (psi1 + psi2)
        sum_psi += contrib
        if abs(contrib) < 1e-18 * abs(sum_psi):
            break
    i1 = 0.5 * x * sum_i1
    return 1.0 / x + math.log(0.5 * x) * i1 - 0.25 * x * sum_psi


def _k1_continued_fraction(x: float) -> float:
    # Steed's continued fraction for K_0, then the Wronskian-style step up
    # to K_1; standard for x >= 2 (Temme's method).
    xi = 1.0 / x
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d
    delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = a1
    c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 30001):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < 1e-17:
            break
    else:  # pragma: no cover - converges in tens of iterations for x >= 2
        raise ArithmeticError("K1 continued fraction did not converge")
    h = a1 * h
    k0 = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
    return k0 * (x + 0.5 - h) * xi


def bessel_k1(x: float) -> float:
    """Modified Bessel function of the second kind, order 1.

    Ascending series below x = 2, Steed continued fraction above; both
    branches agree to ~1e-15 relative at the crossover and the overall
    relative error is <= 1e-12.  Limits: K_1(x) -> 1/x as x -> 0 and
    K_1(x) -> sqrt(pi/2x) e^{-x} as x -> inf.

    Raises ValueError for x <= 0.
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"argument must be positive, got {x}")
    if x <= K1_CROSSOVER:
        return _k1_series(x)
    return _k1_continued_fraction(x)


def midpoint_grid(n: int) -> np.ndarray:
    """Midpoint nodes -pi + 2*pi*(k+1/2)/n, k = 0..n-1.

    The offset keeps the origin off the grid, where near-critical spectra
    peak."""
    return -np.pi + 2.0 * np.pi * (np.arange(n, dtype=np.float64) + 0.5) / n


def close_enough(a: float, b: float, rtol: float) -> bool:
    """Relative agreement test with a floor for converged zeros."""
    diff = abs(a - b)
    scale = max(abs(a), abs(b))
    if diff <= rtol * scale:
        return True
    return scale <= _ZERO_FLOOR and diff <= _ZERO_FLOOR


def _midpoint_estimate(f, n: int) -> float:
    w = midpoint_grid(n)
    # Row blocks bound peak memory; f must accept broadcastable arrays.
    rows = max(1, min(n, (1 << 25) // n))
    parts = []
    for lo in range(0, n, rows):
        vals = np.asarray(f(w[lo : lo + rows, None], w[None, :]), dtype=np.float64)
        vals = np.broadcast_to(vals, (min(rows, n - lo), n))
        if not np.all(np.isfinite(vals)):
            raise ValueError("integrand returned a non-finite value")
        parts.append(np.sum(vals))
    return 4.0 * math.pi * math.pi * float(np.sum(parts)) / (float(n) * float(n))


def integrate_2d_periodic(f, spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Integrate f over (-pi, pi]^2 with the doubling midpoint rule.

    f is called with broadcastable numpy arrays (w1, w2) and must evaluate
    elementwise.  Returns (value, points_per_axis_used).  Raises
    NonConvergenceError if the relative tolerance is not met by
    max_points_per_axis, and ValueError on non-finite integrand values.
    """
    n = spec.points_per_axis
    prev = _midpoint_estimate(f, n)
    while 2 * n <= spec.max_points_per_axis:
        n *= 2
        cur = _midpoint_estimate(f, n)
        if close_enough(prev, cur, spec.relative_tolerance):
            return cur, n
        prev = cur
    raise NonConvergenceError(
        f"midpoint rule did not reach rtol={spec.relative_tolerance:g} "
        f"within {spec.max_points_per_axis} points per axis"
    )
