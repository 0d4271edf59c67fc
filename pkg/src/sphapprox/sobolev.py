"""Test functions of prescribed smoothness, Sobolev norms and L_p errors.

Smoothness is realized by coefficient decay: the profile a_ell =
(1+ell)^(-s-d/2-eps) has finite order-s Sobolev norm in L_2 precisely
because the eps > 0 excess makes the weighted coefficient sum converge.
L_p errors are measured three ways depending on what is known about the
operands: exact Parseval sums for L_2 on matching zonal expansions, dense
1-D quadrature on the zonal reduction, or cubature/grid sampling for
black-box operands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cubature import CubatureRule
from .filters import Filter
from .operators import ZonalExpansion, apply_semidiscrete
from .points import fibonacci_sphere, north_pole, random_unit_vectors
from .specfun import composite_gauss_legendre, dim_harmonic, gegenbauer_order, gegenbauer_series

__all__ = [
    "SobolevProfile",
    "make_test_function",
    "sobolev_norm_2",
    "lp_error",
    "best_approx_upper",
]


@dataclass(frozen=True)
class SobolevProfile:
    """Coefficient decay profile with finite W_2^s norm for epsilon > 0."""

    d: int
    s: float
    epsilon: float
    Lambda: int

    def __post_init__(self):
        if self.s <= 0:
            raise ValueError("smoothness must be positive")
        if self.epsilon < 0:
            raise ValueError("excess decay must be >= 0")
        if self.Lambda < 0:
            raise ValueError("truncation degree must be >= 0")

    def coefficients(self) -> np.ndarray:
        ell = np.arange(self.Lambda + 1)
        return (1.0 + ell) ** (-self.s - self.d / 2.0 - self.epsilon)


def make_test_function(profile: SobolevProfile, pole: np.ndarray | None = None) -> ZonalExpansion:
    """Zonal expansion carrying the profile's coefficients (default pole: north)."""
    if pole is None:
        pole = north_pole(profile.d)
    return ZonalExpansion(d=profile.d, pole=np.asarray(pole, dtype=float), coeffs=profile.coefficients())


def sobolev_norm_2(f: ZonalExpansion, s: float) -> float:
    """||f||_2 + ||f^(s)||_2 through the Laplace-Beltrami multipliers.

    The derivative coefficients are (ell (ell+d-1))^(s/2) a_ell with the
    constant term dropped: the s-th derivative of the mean is zero.
    """
    if s < 0:
        raise ValueError("order must be >= 0")
    ell = np.arange(f.degree + 1)
    z = np.array([dim_harmonic(f.d, int(k)) for k in ell], dtype=float)
    base = float(np.sqrt(np.sum(f.coeffs**2 * z)))
    mult = np.zeros_like(z)
    mult[1:] = (ell[1:] * (ell[1:] + f.d - 1.0)) ** (s / 2.0)
    deriv = float(np.sqrt(np.sum((mult * f.coeffs) ** 2 * z)))
    return base + deriv


def _coeff_difference(f: ZonalExpansion, g: ZonalExpansion) -> np.ndarray:
    n = max(f.degree, g.degree) + 1
    diff = np.zeros(n)
    diff[: f.degree + 1] += f.coeffs
    diff[: g.degree + 1] -= g.coeffs
    return diff


def _same_pole(f, g) -> bool:
    return (
        isinstance(f, ZonalExpansion)
        and isinstance(g, ZonalExpansion)
        and f.d == g.d
        and np.array_equal(f.pole, g.pole)
    )


def _zonal_section(d: int, coeffs: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Evaluate sum_ell coeffs[ell] K_ell(p, x) as a function of u = p . x."""
    lam = gegenbauer_order(d)
    scaled = coeffs * (np.arange(len(coeffs)) + lam) / lam
    return gegenbauer_series(lam, scaled, u)


def _zonal_lp_quadrature(d: int, coeffs: np.ndarray, p: float) -> float:
    # integrate in theta: the surface factor sin^(d-1) is smooth there, while
    # the weight in u = cos(theta) has endpoint singularities for odd d
    deg = len(coeffs) - 1
    rule = composite_gauss_legendre(max(64, 2 * (deg + 1)), 8)
    theta = 0.5 * np.pi * (rule.nodes + 1.0)
    measure = rule.weights * np.sin(theta) ** (d - 1)
    vals = np.abs(_zonal_section(d, coeffs, np.cos(theta))) ** p
    return float((np.dot(measure, vals) / np.sum(measure)) ** (1.0 / p))


def _default_grid(d: int, grid_size: int, seed: int) -> np.ndarray:
    if d == 2:
        return fibonacci_sphere(grid_size)
    return random_unit_vectors(np.random.default_rng(seed), grid_size, d)


def lp_error(
    f,
    g,
    p: float,
    rule: CubatureRule | None = None,
    grid: np.ndarray | None = None,
    method: str = "auto",
    grid_size: int = 100_000,
    seed: int = 0,
) -> float:
    """||f - g||_p under the normalized measure.

    Dispatch:
      * p = 2, both zonal about the same pole: exact Parseval sum (or the
        1-D quadrature path when method="quadrature", used as a cross-check);
      * finite p, same pole: dense composite quadrature on the zonal section;
      * finite p, black-box operand: discrete sum over the supplied cubature
        rule, whose degree must dominate the integrand (caller's duty);
      * p = inf: max over the supplied grid, or an equal-area-like default
        grid of `grid_size` points, always augmented with the poles of any
        zonal operand.
    """
    if method not in ("auto", "parseval", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if math.isinf(p):
        if _same_pole(f, g) and grid is None:
            diff = _coeff_difference(f, g)
            n = max(100_001, 32 * len(diff) + 1)
            u = np.cos(np.linspace(0.0, np.pi, n))
            return float(np.max(np.abs(_zonal_section(f.d, diff, u))))
        if grid is None:
            d = f.d if isinstance(f, ZonalExpansion) else g.d
            grid = _default_grid(d, grid_size, seed)
        pts = [grid]
        for side in (f, g):
            if isinstance(side, ZonalExpansion):
                pts.append(side.pole[None, :])
                pts.append(-side.pole[None, :])
        pts = np.vstack(pts)
        return float(np.max(np.abs(np.asarray(f(pts)) - np.asarray(g(pts)))))
    if p < 1:
        raise ValueError("p must be >= 1")
    if _same_pole(f, g):
        diff = _coeff_difference(f, g)
        if p == 2 and method != "quadrature":
            z = np.array([dim_harmonic(f.d, ell) for ell in range(len(diff))], dtype=float)
            return float(np.sqrt(np.sum(diff**2 * z)))
        return _zonal_lp_quadrature(f.d, diff, p)
    if rule is None:
        raise ValueError("finite-p error between black-box operands needs a cubature rule")
    fv = np.asarray(f(rule.nodes), dtype=float)
    gv = np.asarray(g(rule.nodes), dtype=float)
    return float(np.dot(rule.weights, np.abs(fv - gv) ** p) ** (1.0 / p))


def best_approx_upper(
    f: ZonalExpansion,
    h: Filter,
    L: int,
    p: float,
    rule: CubatureRule | None = None,
    grid: np.ndarray | None = None,
) -> float:
    """||f - V_L f||_p: an upper bound (up to 1 + ||V_L||) proxy for E_L(f)_p.

    Not the infimum over Pi_L; documented and used only as an upper bound.
    """
    return lp_error(f, apply_semidiscrete(h, L, f), p, rule=rule, grid=grid)
