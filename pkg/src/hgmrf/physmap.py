"""Physical correlation model for lattice-sampled diffusion fields.

The continuous-space counterpart of the symmetric first-order field (the
stochastic Laplace equation with diffusion rate alpha) has the Whittle
correlation function; sampling it at spacing d gives the edge correlation

    rho(d) = alpha*d * K_1(alpha*d),

which decreases from 1 (flat at d = 0) to 0.  A second map g links rho to
the edge dependence factor zeta through the elliptic integral:

    rho = ((2/pi) K(4 zeta) - 1) / (4 (2/pi) zeta K(4 zeta)),

taking zeta in [0, 1/4] to rho in [0, 1].  g is inverted by bisection;
near rho = 1 the inverse leaves the range representable in 64-bit floats
(zeta sits within one ulp of 1/4) and an asymptotic branch takes over --
see ``zeta_from_rho``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .specfun import bessel_k1, elliptic_k


@dataclass(frozen=True)
class PhysicalField:
    """Diffusion rate alpha (1/length) and sensor spacing (length)."""

    alpha: float
    spacing: float

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError("alpha must be positive")
        if not self.spacing > 0.0:
            raise ValueError("spacing must be positive")


#: Largest double below 1/4; upper end of the bisection bracket.
ZETA_MAX = float(np.nextafter(0.25, 0.0))


def rho_from_zeta(zeta: float) -> float:
    """Edge correlation g^{-1}(zeta); increasing, 0 -> 0 and 1/4 -> 1.

    The raw expression is 0/0 at zeta = 0 and loses ~eps/(4 zeta^2) of
    relative precision to cancellation in (2/pi)K(4 zeta) - 1; a series
    branch rho = zeta (1 + 5 zeta^2 + 44 zeta^4 + 469 zeta^6 + O(zeta^8))
    covers zeta < 0.01, where both forms agree to ~3e-12.
    """
    zeta = float(zeta)
    if not 0.0 <= zeta <= 0.25:
        raise ValueError("zeta must lie in [0, 1/4]")
    if zeta < 1e-2:
        z2 = zeta * zeta
        return zeta * (1.0 + z2 * (5.0 + z2 * (44.0 + z2 * 469.0)))
    if zeta == 0.25:
        return 1.0
    g = (2.0 / math.pi) * elliptic_k(4.0 * zeta)
    return (g - 1.0) / (4.0 * zeta * g)


#: Largest edge correlation reachable by a representable zeta < 1/4.
#: Beyond this the inverse map saturates (see zeta_from_rho).
RHO_SATURATION = rho_from_zeta(ZETA_MAX)


def zeta_from_rho(rho: float) -> float:
    """Inverse of rho_from_zeta on [0, 1).

    For rho <= RHO_SATURATION (about 0.919) the unique root is found by
    bisection with residual below 1e-12.  Larger rho corresponds to
    1/4 - zeta ~ 2 exp(-pi/(1-rho)), smaller than one ulp of 1/4, so the
    asymptotic value is returned instead; it rounds to 1/4 itself once
    rho exceeds roughly 0.92.  Monotonicity of the forward map is asserted
    once at import over a 1000-point grid.
    """
    rho = float(rho)
    if not 0.0 <= rho < 1.0:
        raise ValueError("rho must lie in [0, 1)")
    if rho == 0.0:
        return 0.0
    if rho > RHO_SATURATION:
        return 0.25 - 2.0 * math.exp(-math.pi / (1.0 - rho))
    lo, hi = 0.0, ZETA_MAX
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # bracket collapsed to adjacent floats
            break
        if rho_from_zeta(mid) < rho:
            lo = mid
        else:
            hi = mid
    r_lo, r_hi = rho_from_zeta(lo), rho_from_zeta(hi)
    zeta, residual = (lo, abs(r_lo - rho)) if abs(r_lo - rho) <= abs(r_hi - rho) else (hi, abs(r_hi - rho))
    # The map steepens toward zeta = 1/4; once the per-ulp step of the
    # forward map exceeds the tolerance, the nearest float is the best
    # attainable answer.
    if residual > 1e-12 and residual > (r_hi - r_lo):
        raise ArithmeticError(f"bisection residual above 1e-12 for rho={rho!r}")
    return zeta


def edge_correlation(field: PhysicalField) -> float:
    """rho = alpha*d*K_1(alpha*d), strictly inside (0, 1).

    Depends on alpha and spacing only through their product, and decreases
    monotonically with spacing.
    """
    x = field.alpha * field.spacing
    return x * bessel_k1(x)


def spectral_scale_from_rho(rho: float) -> float:
    """Normalized power scale (2/pi) K(4 zeta(rho)).

    In the saturated regime this equals 1/(1-rho) to within the same
    accuracy as the asymptotic inverse; the rate quadrature consumes this
    scale directly so that near-perfect correlation stays computable.
    """
    rho = float(rho)
    if not 0.0 <= rho < 1.0:
        raise ValueError("rho must lie in [0, 1)")
    if rho > RHO_SATURATION:
        return 1.0 / (1.0 - rho)
    return (2.0 / math.pi) * elliptic_k(4.0 * zeta_from_rho(rho))


def zeta_from_spacing(field: PhysicalField) -> float:
    """Edge dependence factor of the sampled field: g(rho(alpha*d)).

    Strictly decreasing in spacing; values indistinguishable from 1/4 in
    64-bit floats are returned as 1/4 (rate operations treat that endpoint
    as the exact zero-information limit).
    """
    return zeta_from_rho(edge_correlation(field))


def _assert_monotone_forward_map():
    zetas = np.linspace(0.0, ZETA_MAX, 1000)
    rhos = [rho_from_zeta(z) for z in zetas]
    if not all(b > a for a, b in zip(rhos, rhos[1:])):
        raise AssertionError("edge-correlation map is not strictly increasing")


_assert_monotone_forward_map()
