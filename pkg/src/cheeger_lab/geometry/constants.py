"""Unit-ball volumes, spherical caps and the cap-average constant."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy import integrate, special

MAX_DIM = 20


def _check_dim(d: int) -> None:
    if not isinstance(d, int) or isinstance(d, bool) or not 1 <= d <= MAX_DIM:
        raise ValueError(f"dimension must be an integer in [1, {MAX_DIM}], got {d!r}")


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d, pi^(d/2) / Gamma(d/2 + 1)."""
    _check_dim(d)
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def unit_sphere_area(d: int) -> float:
    """(d-1)-measure of the unit sphere in R^d."""
    return d * unit_ball_volume(d)


def cap_volume(d: int, eta: float) -> float:
    """Volume of {x : |x| <= 1, <u, x> >= eta} for a unit vector u.

    Uses the regularized incomplete beta form
    ``omega_d / 2 * I_{1 - eta^2}((d + 1) / 2, 1 / 2)``.
    """
    _check_dim(d)
    if not 0.0 <= eta <= 1.0 or math.isnan(eta):
        raise ValueError(f"cap height must lie in [0, 1], got {eta!r}")
    if eta == 0.0:
        return unit_ball_volume(d) / 2
    if eta == 1.0:
        return 0.0
    return 0.5 * unit_ball_volume(d) * float(special.betainc((d + 1) / 2, 0.5, 1.0 - eta * eta))


def signed_cap_volume(d: int, eta: float) -> float:
    """Cap volume extended to heights in [-1, 1] (the part of the ball beyond eta)."""
    if eta >= 1.0:
        return 0.0
    if eta <= -1.0:
        return unit_ball_volume(d)
    if eta >= 0.0:
        return cap_volume(d, eta)
    return unit_ball_volume(d) - cap_volume(d, -eta)


def sphere_cap_area(d: int, eta: float) -> float:
    """(d-1)-measure of {x : |x| = 1, <u, x> >= eta}, for eta in [-1, 1]."""
    _check_dim(d)
    if eta >= 1.0:
        return 0.0
    if eta <= -1.0:
        return unit_sphere_area(d)
    if d == 1:
        return 1.0  # the single point +u
    half = 0.5 * unit_sphere_area(d) * float(special.betainc((d - 1) / 2, 0.5, 1.0 - eta * eta))
    return half if eta >= 0.0 else unit_sphere_area(d) - half


@lru_cache(maxsize=None)
def _gamma_cached(d: int, tol: float) -> float:
    value, _ = integrate.quad(lambda eta: cap_volume(d, eta), 0.0, 1.0, epsabs=tol, epsrel=0.0, limit=200)
    return value


def gamma_constant(d: int, tol: float = 1e-10) -> float:
    """Average spherical-cap volume, the integral of cap_volume(d, .) over [0, 1]."""
    _check_dim(d)
    return _gamma_cached(d, float(tol))


@dataclass(frozen=True)
class Constants:
    d: int
    omega_d: float
    gamma_d: float

    @classmethod
    def for_dim(cls, d: int) -> "Constants":
        return cls(d=d, omega_d=unit_ball_volume(d), gamma_d=gamma_constant(d))

    @property
    def cut_scale_factor(self) -> float:
        """omega_d / gamma_d, the factor that turns r * h(S; G) into h_n."""
        return self.omega_d / self.gamma_d
