"""The filter catalogue and the smoothness machinery built on it.

A filter is a real function h on [0, inf) with h = 1 on [0, 1] and h = 0 on
[2, inf); the catalogue spans the smoothness ladder from the sharp cutoff
(step) through piecewise polynomials up to C-infinity, plus the two special
constructions used for operator-norm growth studies: the fractional-power
envelope (riesz) and the spliced low-smoothness filter (counterexample).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

__all__ = [
    "Filter",
    "DifferenceTable",
    "SMOOTHNESS_INF",
    "make_step",
    "make_vp",
    "make_hermite",
    "make_smooth",
    "make_counterexample",
    "make_riesz",
    "filter_from_name",
    "forward_difference",
    "bv_estimate",
]

# declared_smoothness value meaning "treat as infinitely smooth"
SMOOTHNESS_INF = 10**6


@dataclass(frozen=True)
class Filter:
    """A named filter with declared smoothness metadata.

    declared_smoothness r asserts membership in W^rBV (absolutely continuous
    derivatives up to r-1, one-sided r-th derivatives of bounded variation);
    r = -1 marks "merely BV or worse" (the step filter).  is_proper_filter is
    False for envelopes that are not identically 1 on [0, 1] (riesz).
    """

    name: str
    evaluate: Callable
    declared_smoothness: int
    support_end: float
    is_proper_filter: bool = True

    def __call__(self, t):
        return self.evaluate(t)


def _wrap(core):
    """Lift an array-in/array-out evaluator to accept scalars too."""

    def evaluate(t):
        arr = np.asarray(t, dtype=float)
        res = core(np.atleast_1d(arr))
        if arr.ndim == 0:
            return float(res[0])
        return res

    return evaluate


def make_step() -> Filter:
    """Sharp cutoff: the characteristic function of the closed interval [0, 1]."""

    def core(t):
        return np.where(t <= 1.0, 1.0, 0.0)

    return Filter("step", _wrap(core), declared_smoothness=-1, support_end=1.0)


def make_vp() -> Filter:
    """Piecewise-linear filter: 1 on [0,1], descending to 0 on [1,2]."""

    def core(t):
        return np.clip(2.0 - t, 0.0, 1.0)

    return Filter("vp", _wrap(core), declared_smoothness=1, support_end=2.0)


def _hermite_transition_coeffs(r: int) -> np.ndarray:
    # S(u) = c * integral_0^u s^r (1-s)^r ds, the unique degree 2r+1 polynomial
    # with S(0)=0, S(1)=1 and r vanishing derivatives at both ends.  Exact
    # rational coefficients of u^(r+1) .. u^(2r+1), highest degree first.
    c = Fraction(math.factorial(2 * r + 1), math.factorial(r) ** 2)
    coeffs = [c * math.comb(r, j) * (-1) ** j / (r + j + 1) for j in range(r + 1)]
    poly = np.zeros(2 * r + 2)
    for j, cj in enumerate(coeffs):
        poly[2 * r + 1 - (r + j + 1)] = float(cj)
    return poly  # np.polyval convention: poly[0] u^(2r+1) ... poly[-1] u^0


def make_hermite(r: int) -> Filter:
    """Polynomial transition of degree 2r+1 with r flat derivatives at 1 and 2.

    r = 0 reproduces the piecewise-linear filter; declared smoothness is r+1
    since the (r+1)-th one-sided derivative jumps at the knots but is of
    bounded variation.
    """
    if r < 0:
        raise ValueError("transition order must be >= 0")
    poly = _hermite_transition_coeffs(r)

    def core(t):
        u = np.clip(t - 1.0, 0.0, 1.0)
        return np.where(t <= 1.0, 1.0, np.where(t >= 2.0, 0.0, 1.0 - np.polyval(poly, u)))

    return Filter(f"hermite:{r}", _wrap(core), declared_smoothness=r + 1, support_end=2.0)


def _bump(u):
    out = np.zeros_like(u)
    pos = u > 0
    with np.errstate(over="ignore"):
        out[pos] = np.exp(-1.0 / u[pos])
    return out


def make_smooth(support_end: float = 2.0) -> Filter:
    """C-infinity filter with exponential-bump transition on (1, support_end)."""
    if not 1.0 < support_end <= 2.0:
        raise ValueError("support_end must lie in (1, 2]")
    a, b = 1.0, support_end

    def core(t):
        up = _bump(b - t)
        down = _bump(t - a)
        val = np.where(t >= b, 0.0, np.where(t <= a, 1.0, up / np.where(up + down > 0, up + down, 1.0)))
        return val

    name = "smooth" if support_end == 2.0 else f"smooth[{support_end:g}]"
    return Filter(name, _wrap(core), declared_smoothness=SMOOTHNESS_INF, support_end=support_end)


def make_riesz(delta: float) -> Filter:
    """Fractional-power envelope (1 - t/2)_+^delta; not 1 on [0,1], so improper."""
    if delta <= 0:
        raise ValueError("exponent must be positive")

    def core(t):
        return np.maximum(1.0 - t / 2.0, 0.0) ** delta

    return Filter(
        f"riesz:{delta:g}",
        _wrap(core),
        declared_smoothness=math.floor(delta),
        support_end=2.0,
        is_proper_filter=False,
    )


def make_counterexample(d: int) -> Filter:
    """Low-smoothness filter whose operator norms grow without bound.

    Splices the fractional envelope (1 - t/2)_+^((d-1)/2) outside [0, 3/2]
    onto a C-infinity filter inside, so the result is a proper filter whose
    only roughness is the fractional power at t = 2.
    """
    if d < 2:
        raise ValueError(f"sphere dimension must be >= 2, got {d}")
    h1 = make_smooth(support_end=1.5)
    expo = (d - 1) / 2.0

    def core(t):
        h0 = np.maximum(1.0 - t / 2.0, 0.0) ** expo
        h1v = np.asarray(h1.evaluate(t), dtype=float)
        return h0 * (1.0 - h1v) + h1v

    return Filter(
        "counterexample",
        _wrap(core),
        declared_smoothness=(d - 1) // 2,
        support_end=2.0,
    )


def filter_from_name(name: str, d: int = 2) -> Filter:
    """Resolve a CLI filter name: step, vp, hermite:r, smooth, counterexample, riesz:delta."""
    if name == "step":
        return make_step()
    if name == "vp":
        return make_vp()
    if name == "smooth":
        return make_smooth()
    if name == "counterexample":
        return make_counterexample(d)
    if name.startswith("hermite:"):
        return make_hermite(int(name.split(":", 1)[1]))
    if name.startswith("riesz:"):
        return make_riesz(float(name.split(":", 1)[1]))
    raise ValueError(f"unknown filter name: {name!r}")


@dataclass(frozen=True)
class DifferenceTable:
    """Forward differences of filter samples: values[k] = Delta^r h(k/L)."""

    order: int
    scale: int
    values: np.ndarray = field(repr=False)


def forward_difference(h: Filter, L: int, r: int) -> DifferenceTable:
    """Tabulate Delta^r h(k/L) = sum_j (-1)^j binom(r, j) h((k+j)/L) for k = 0..2L+r.

    All entries with k >= 2L vanish because every sampled point lies in
    [2, inf) where h is zero.
    """
    if L < 1:
        raise ValueError("scale must be >= 1")
    if r < 0:
        raise ValueError("difference order must be >= 0")
    n = 2 * L + r + 1
    samples = np.asarray(h.evaluate(np.arange(n + r) / L), dtype=float)
    values = np.zeros(n)
    for j in range(r + 1):
        values += (-1) ** j * math.comb(r, j) * samples[j : j + n]
    return DifferenceTable(order=r, scale=L, values=values)


def bv_estimate(g, a: float, b: float, grid: int) -> float:
    """Variation of g over [a, b] sampled on a uniform grid of `grid` points.

    A lower bound of the true total variation; nondecreasing under nested
    grid refinement.
    """
    if grid < 2:
        raise ValueError("need at least two grid points")
    xs = np.linspace(a, b, grid)
    try:
        vals = np.asarray(g(xs), dtype=float)
        if vals.shape != xs.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([float(g(x)) for x in xs])
    return float(np.sum(np.abs(np.diff(vals))))
