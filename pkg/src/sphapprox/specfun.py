"""Gegenbauer polynomials, harmonic-space dimensions and 1-D Gauss quadrature.

Everything downstream (zonal kernels, cubature, operator norms) reduces to
the three primitives in this module: the dimension count of the degree-ell
harmonic space on S^d, ultraspherical polynomial evaluation by recurrence,
and Gauss-Legendre rules on [-1, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "dim_harmonic",
    "gegenbauer_order",
    "gegenbauer_eval",
    "gegenbauer_batch",
    "gegenbauer_at_one",
    "gegenbauer_series",
    "GaussRule1D",
    "gauss_legendre",
    "composite_gauss_legendre",
]


def dim_harmonic(d: int, ell: int) -> int:
    """Dimension of the space of spherical harmonics of degree ell on S^d.

    Exact integer arithmetic throughout; Python ints do not overflow, so the
    result is exact for any (d, ell).
    """
    if d < 2:
        raise ValueError(f"sphere dimension must be >= 2, got {d}")
    if ell < 0:
        raise ValueError(f"degree must be >= 0, got {ell}")
    if ell == 0:
        return 1
    num = (2 * ell + d - 1) * math.factorial(ell + d - 2)
    den = math.factorial(d - 1) * math.factorial(ell)
    q, r = divmod(num, den)
    if r != 0:
        raise ArithmeticError("dimension formula did not divide exactly")
    return q


def gegenbauer_order(d: int) -> float:
    """Ultraspherical order lambda = (d-1)/2 attached to the sphere S^d."""
    if d < 2:
        raise ValueError(f"sphere dimension must be >= 2, got {d}")
    return (d - 1) / 2.0


def _check_order(lam: float) -> None:
    if not lam >= 0.5:
        raise ValueError(f"Gegenbauer order must satisfy lambda >= 1/2, got {lam}")


def gegenbauer_batch(lam: float, ell_max: int, t) -> np.ndarray:
    """All Gegenbauer polynomials C_ell^lam(t) for ell = 0..ell_max in one pass.

    Uses the three-term recurrence

        ell * C_ell = 2 t (ell + lam - 1) C_{ell-1} - (ell + 2 lam - 2) C_{ell-2}

    seeded by C_0 = 1, C_1 = 2 lam t, which follows from differentiating the
    generating function (1 - 2 t z + z^2)^(-lam) with respect to z.  Returns an
    array of shape (ell_max + 1,) + shape(t).
    """
    _check_order(lam)
    if ell_max < 0:
        raise ValueError("ell_max must be >= 0")
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0 + 1e-12):
        raise ValueError("argument outside [-1, 1]")
    out = np.empty((ell_max + 1,) + t.shape, dtype=float)
    out[0] = 1.0
    if ell_max >= 1:
        out[1] = 2.0 * lam * t
    for ell in range(2, ell_max + 1):
        out[ell] = (
            2.0 * t * (ell + lam - 1.0) * out[ell - 1]
            - (ell + 2.0 * lam - 2.0) * out[ell - 2]
        ) / ell
    return out


def gegenbauer_eval(lam: float, ell: int, t):
    """C_ell^lam(t) for a single degree; t may be a scalar or an array."""
    t_arr = np.asarray(t, dtype=float)
    vals = gegenbauer_batch(lam, ell, t_arr)[ell]
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(vals)
    return vals


def gegenbauer_series(lam: float, coeffs: np.ndarray, t: np.ndarray) -> np.ndarray:
    """sum_ell coeffs[ell] * C_ell^lam(t), elementwise over t.

    The recurrence is run degree by degree without materializing the full
    table, and the accumulation is compensated (Kahan): zonal kernel sums
    reach thousands of terms at large truncation degrees.
    """
    _check_order(lam)
    t = np.asarray(t, dtype=float)
    coeffs = np.asarray(coeffs, dtype=float)
    total = np.full_like(t, coeffs[0])
    comp = np.zeros_like(t)
    if len(coeffs) > 1:
        c_prev = np.ones_like(t)
        c_cur = 2.0 * lam * t
        for ell in range(1, len(coeffs)):
            term = coeffs[ell] * c_cur
            y = term - comp
            tot = total + y
            comp = (tot - total) - y
            total = tot
            if ell + 1 < len(coeffs):
                c_prev, c_cur = c_cur, (
                    2.0 * t * (ell + lam) * c_cur - (ell + 2.0 * lam - 1.0) * c_prev
                ) / (ell + 1.0)
    return total


def gegenbauer_at_one(lam: float, ell: int) -> float:
    """C_ell^lam(1) = Gamma(ell + 2 lam) / (Gamma(2 lam) Gamma(ell + 1)).

    Computed as the running product prod_{j=0}^{ell-1} (2 lam + j) / (j + 1);
    no large gamma values are ever formed.  Raises OverflowError if the
    product leaves double range.
    """
    _check_order(lam)
    if ell < 0:
        raise ValueError("degree must be >= 0")
    acc = 1.0
    for j in range(ell):
        acc *= (2.0 * lam + j) / (j + 1.0)
        if math.isinf(acc):
            raise OverflowError(f"C_ell^lam(1) overflows for lam={lam}, ell={ell}")
    return acc


@dataclass(frozen=True)
class GaussRule1D:
    """Gauss quadrature rule on [-1, 1]: nodes, weights, degree of exactness."""

    nodes: np.ndarray
    weights: np.ndarray
    degree: int

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape:
            raise ValueError("node and weight counts differ")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def _legendre_and_derivative(n: int, x: np.ndarray):
    """P_n(x) and P_n'(x) by the Legendre recurrence (lam = 1/2 Gegenbauer)."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def gauss_legendre(n: int, tol: float = 1e-14, max_iter: int = 100) -> GaussRule1D:
    """n-node Gauss-Legendre rule on [-1, 1], exact for degree <= 2n - 1.

    Nodes are Newton-refined roots of P_n starting from the Chebyshev-like
    initial guess; iteration failure is a hard error, never silent.
    """
    if n < 1:
        raise ValueError("need at least one node")
    if n == 1:
        return GaussRule1D(np.zeros(1), np.full(1, 2.0), 1)
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (4 * i - 1) / (4 * n + 2))
    for _ in range(max_iter):
        p, dp = _legendre_and_derivative(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < tol:
            break
    else:
        raise RuntimeError(f"Gauss-Legendre Newton iteration failed for n={n}")
    _, dp = _legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # enforce exact +-x symmetry of the rule
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    order = np.argsort(x)
    return GaussRule1D(x[order], w[order], 2 * n - 1)


def composite_gauss_legendre(panels: int, nodes_per_panel: int) -> GaussRule1D:
    """Composite Gauss-Legendre rule over [-1, 1] on `panels` uniform panels."""
    if panels < 1:
        raise ValueError("need at least one panel")
    base = gauss_legendre(nodes_per_panel)
    edges = np.linspace(-1.0, 1.0, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * base.nodes[None, :]).ravel()
    weights = (half[:, None] * base.weights[None, :]).ravel()
    return GaussRule1D(nodes, weights, base.degree)
