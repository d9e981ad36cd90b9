"""Closed-form spectral laws of random regular graphs.

Kesten--McKay density and distribution function, the semicircle and
Kesten--McKay Stieltjes transforms, classical eigenvalue locations, the
spectral domain predicate and the a priori error parameters.

Quadratures run in the angle variable ``x = 2 cos(theta)``, which removes the
square-root vanishing of the density at ``+-2`` and leaves a smooth integrand
for the adaptive Gauss--Kronrod rule of :func:`scipy.integrate.quad`.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Tuple, Union

import numpy as np
from scipy.integrate import quad
from scipy.optimize import bisect

from .config import ASYMPTOTIC_LOG_POWER, DEFAULT_LOG_POWER, QUAD_EPSABS, QUANTILE_XTOL
from .models import ErrorParams, LawParams, SpectralPoint

#: Anything accepted where a spectral point is expected.
ZLike = Union[SpectralPoint, complex]


class LawError(ValueError):
    """Raised for parameters outside a law's domain."""


def as_z(z: ZLike) -> complex:
    """Coerce ``z`` to a complex number in the upper half-plane."""
    if isinstance(z, SpectralPoint):
        return z.z
    z = complex(z)
    if not z.imag > 0:
        raise LawError(
            f"Spectral parameter must lie in the upper half-plane (got {z})."
        )
    return z


def _check_degree(d: int) -> None:
    if d < 3:
        raise LawError(f"Degree must be at least 3 (got {d}).")


def rho_d(d: int, x):
    """Kesten--McKay density; zero outside ``[-2, 2]``.

    Accepts scalars or arrays and returns the same shape.
    """
    _check_degree(d)
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < 2.0
    xs = np.where(inside, x, 0.0)
    value = np.sqrt(4.0 - xs**2) / (2.0 * math.pi) / (1.0 + 1.0 / (d - 1) - xs**2 / d)
    out = np.where(inside, value, 0.0)
    return float(out) if out.ndim == 0 else out


def _theta_integrand(theta: float, d: int) -> float:
    # rho_d(2 cos t) * 2 sin t
    s = math.sin(theta)
    c = math.cos(theta)
    return 2.0 * s * s / (math.pi * (1.0 + 1.0 / (d - 1) - 4.0 * c * c / d))


def _tail_scalar(d: int, x: float) -> float:
    if x >= 2.0:
        return 0.0
    if x <= -2.0:
        return 1.0
    theta = math.acos(x / 2.0)
    value, _ = quad(
        _theta_integrand, 0.0, theta, args=(d,), epsabs=QUAD_EPSABS, limit=200
    )
    return value


def km_tail(d: int, x):
    """Kesten--McKay mass to the right of ``x``: ``int_x^2 rho_d``."""
    _check_degree(d)
    arr = np.asarray(x, dtype=float)
    out = np.vectorize(lambda t: _tail_scalar(d, float(t)), otypes=[float])(arr)
    return float(out) if out.ndim == 0 else out


def km_cdf(d: int, x):
    """Kesten--McKay distribution function ``int_{-2}^x rho_d``."""
    tail = km_tail(d, x)
    return 1.0 - tail


def m_sc(z: ZLike) -> complex:
    """Semicircle Stieltjes transform ``(-z + sqrt(z^2 - 4)) / 2``.

    The product ``sqrt(z - 2) sqrt(z + 2)`` of principal roots is the branch of
    ``sqrt(z^2 - 4)`` cut along ``[-2, 2]`` that behaves like ``z`` at
    infinity, which makes ``Im m_sc > 0`` on the whole upper half-plane.
    """
    w = as_z(z)
    root = np.sqrt(complex(w - 2.0)) * np.sqrt(complex(w + 2.0))
    return complex((-w + root) / 2.0)


def m_d(z: ZLike, d: int) -> complex:
    """Kesten--McKay Stieltjes transform ``1 / (-z - d/(d-1) m_sc(z))``."""
    _check_degree(d)
    w = as_z(z)
    return 1.0 / (-w - d / (d - 1.0) * m_sc(w))


def stability_factors(z: ZLike, ell: int) -> Tuple[float, float]:
    """Return ``|1 - m_sc^{2 ell + 2}|`` and ``|1 - m_sc^2|``.

    The first is ``|1 - Y'_ell(m_sc)|``; the second behaves like
    ``sqrt(kappa + eta)``.
    """
    m = m_sc(z)
    return abs(1.0 - m ** (2 * ell + 2)), abs(1.0 - m * m)


def classical_level(i: int, n: int) -> float:
    """Right-tail mass assigned to the ``i``-th eigenvalue, ``2 <= i <= n``.

    The ``n - 1`` non-trivial eigenvalues receive the midpoint levels
    ``(k - 1/2) / (n - 1)`` with ``k = i - 1``.
    """
    return (i - 1.5) / (n - 1)


@lru_cache(maxsize=32)
def _classical_locations(n: int, d: int) -> Tuple[float, ...]:
    out = []
    upper = 2.0
    for i in range(2, n + 1):
        level = classical_level(i, n)
        gamma = bisect(
            lambda x: _tail_scalar(d, x) - level, -2.0, upper, xtol=QUANTILE_XTOL
        )
        out.append(gamma)
        upper = gamma
    return tuple(out)


def classical_locations(n: int, d: int) -> np.ndarray:
    """Classical locations ``gamma_2 > ... > gamma_N`` of the Kesten--McKay law.

    Each ``gamma_i`` solves ``int_{gamma_i}^2 rho_d = classical_level(i, n)``
    by bisection on ``[-2, 2]``; the density vanishes at the edges, which rules
    out derivative-based solvers there.

    Args:
        n: Vertex count, at least 3.
        d: Degree.

    Returns:
        np.ndarray: ``n - 1`` locations; entry ``k`` belongs to index ``i = k + 2``.
    """
    _check_degree(d)
    if n < 3:
        raise LawError(f"Classical locations need n >= 3 (got {n}).")
    return np.array(_classical_locations(n, d))


def in_spectral_domain(z: ZLike, n: int, params: LawParams) -> bool:
    """Whether ``z`` lies in the domain where the local law is asserted.

    ``|E| <= 2 + a``, ``0 < eta <= 1/a`` and ``N eta sqrt(kappa + eta) >= N^a``.
    """
    p = z if isinstance(z, SpectralPoint) else SpectralPoint.from_complex(complex(z))
    a = params.a
    return (
        abs(p.E) <= 2.0 + a
        and 0.0 < p.eta <= 1.0 / a
        and n * p.eta * math.sqrt(p.kappa + p.eta) >= n**a
    )


def error_params(
    z: ZLike,
    r_frac: float,
    n: int,
    d: int,
    *,
    log_power: float = DEFAULT_LOG_POWER,
) -> ErrorParams:
    """Error parameters ``eps'`` and ``eps`` of the a priori bound.

    The asymptotic ``(log N)^100`` prefactor exceeds every other term at desk
    scale; it is replaced by ``(log N)^log_power`` and reported alongside.
    """
    if not 0 < r_frac < 1:
        raise LawError(f"r_frac must lie in (0, 1) (got {r_frac}).")
    p = z if isinstance(z, SpectralPoint) else SpectralPoint.from_complex(complex(z))
    n_eta = n * p.eta
    core = n ** (-r_frac) + math.sqrt(m_d(p, d).imag / n_eta) + n_eta ** (-2.0 / 3.0)

    def _pair(power: float) -> Tuple[float, float]:
        eps_prime = math.log(n) ** power * core
        return eps_prime, eps_prime / math.sqrt(p.kappa + p.eta + eps_prime)

    eps_prime, eps = _pair(log_power)
    eps_prime_asym, eps_asym = _pair(ASYMPTOTIC_LOG_POWER)
    return ErrorParams(
        eps_prime=eps_prime,
        eps=eps,
        log_power=log_power,
        eps_prime_asymptotic=eps_prime_asym,
        eps_asymptotic=eps_asym,
    )


__all__ = [
    "LawError",
    "ZLike",
    "as_z",
    "classical_level",
    "classical_locations",
    "error_params",
    "in_spectral_domain",
    "km_cdf",
    "km_tail",
    "m_d",
    "m_sc",
    "rho_d",
    "stability_factors",
]
