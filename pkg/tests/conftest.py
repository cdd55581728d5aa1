"""Shared independent oracles for the test suite.

The special-function oracles deliberately avoid the library's own
algorithms: the elliptic integral is evaluated by high-precision
quadrature of its defining theta-integral and K_1 by quadrature of its
integral representation, both via mpmath at 30 significant digits.
"""

import mpmath as mp
import pytest

mp.mp.dps = 30


@pytest.fixture(scope="session")
def elliptic_k_oracle():
    def oracle(k: float) -> float:
        km = mp.mpf(float(k))
        val = mp.quad(lambda t: 1 / mp.sqrt(1 - (km * mp.sin(t)) ** 2), [0, mp.pi / 2])
        return float(val)

    return oracle


@pytest.fixture(scope="session")
def bessel_k1_oracle():
    def oracle(x: float) -> float:
        xm = mp.mpf(float(x))
        # truncate where the integrand falls below ~e^-700: the tail is
        # negligible and gigantic exponents upset the gmpy2 backend
        cutoff = mp.acosh(700.0 / xm)
        val = mp.quad(lambda t: mp.exp(-xm * mp.cosh(t)) * mp.cosh(t), [0, cutoff])
        return float(val)

    return oracle
