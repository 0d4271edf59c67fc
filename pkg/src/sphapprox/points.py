"""Point sets on spheres: random directions, equal-area-like grids, meridians."""

from __future__ import annotations

import numpy as np

__all__ = ["north_pole", "random_unit_vectors", "fibonacci_sphere", "meridian_points"]


def north_pole(d: int) -> np.ndarray:
    """The point (0, ..., 0, 1) on S^d."""
    p = np.zeros(d + 1)
    p[-1] = 1.0
    return p


def random_unit_vectors(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """n uniformly distributed points on S^d, shape (n, d+1)."""
    v = rng.standard_normal((n, d + 1))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def fibonacci_sphere(n: int) -> np.ndarray:
    """Fibonacci spiral grid on S^2: n nearly equal-area points, shape (n, 3)."""
    if n < 1:
        raise ValueError("need at least one point")
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    phi = np.pi * (1.0 + np.sqrt(5.0)) * i
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.column_stack([s * np.cos(phi), s * np.sin(phi), z])


def meridian_points(thetas: np.ndarray, phi: float = 0.0) -> np.ndarray:
    """Points (sin t cos phi, sin t sin phi, cos t) on S^2 along one meridian."""
    s = np.sin(thetas)
    return np.column_stack([s * np.cos(phi), s * np.sin(phi), np.cos(thetas)])
