"""Uniform angular grids and deterministic quadrature rules.

Everything downstream integrates either over the triangle
``{0 < alpha < beta < pi}`` or over one full period of a periodic
function.  Both rules here are plain midpoint-type rules with a fixed
summation order, so repeated runs produce bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Grid", "integrate_triangle", "integrate_period", "kahan_sum"]

PI = math.pi


@dataclass(frozen=True)
class Grid:
    """Uniform partition of the half period ``[0, pi)`` into ``n`` cells.

    Two interleaved families of nodes are used:

    * ``beta_nodes``:  ``k * pi / n`` for ``k = 0..n-1`` (cell edges),
    * ``alpha_nodes``: ``(k + 1/2) * pi / n`` (cell midpoints).

    The two families are disjoint modulo ``pi``, which keeps pairwise
    integrands away from their diagonal singularities.
    """

    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"grid needs at least 2 nodes, got n={self.n}")

    @property
    def step(self) -> float:
        return PI / self.n

    @property
    def beta_nodes(self) -> np.ndarray:
        return np.arange(self.n) * self.step

    @property
    def alpha_nodes(self) -> np.ndarray:
        return (np.arange(self.n) + 0.5) * self.step


def kahan_sum(values: np.ndarray) -> float:
    """Compensated sum of a 1-D array in index order."""
    total = 0.0
    carry = 0.0
    for v in np.asarray(values, dtype=float):
        y = v - carry
        t = total + y
        carry = (t - total) - y
        total = t
    return total


def integrate_triangle(values: np.ndarray, grid: Grid) -> float:
    """Midpoint-rule integral of ``F`` over ``{0 < alpha < beta < pi}``.

    Parameters
    ----------
    values : ndarray, shape (n, n)
        ``values[j, k]`` holds ``F(alpha_j, beta_k)``; only the entries
        with ``k >= j + 1`` (where ``beta_k > alpha_j``) are read.
    grid : Grid

    Notes
    -----
    For each midpoint ``alpha_j`` the beta nodes ``j+1 .. n-1`` form an
    exact composite midpoint rule on ``[alpha_j, pi - step/2]``.  The
    remaining strip ``[pi - step/2, pi]`` is covered by extending the
    weight of the last beta node, which removes the O(1/n) boundary
    error of the naive rule.  Rows are reduced with numpy's pairwise
    summation and combined across rows with compensated summation, in
    fixed row-major order.
    """
    F = np.asarray(values, dtype=float)
    n = grid.n
    if n < 8:
        raise ValueError(f"integrate_triangle requires n >= 8, got {n}")
    if F.shape != (n, n):
        raise ValueError(f"expected values of shape {(n, n)}, got {F.shape}")
    h = grid.step
    row_sums = np.empty(n - 1)
    for j in range(n - 1):
        row = F[j, j + 1:n]
        row_sums[j] = np.sum(row) + 0.5 * row[-1]
    return kahan_sum(row_sums) * h * h


def integrate_period(values: np.ndarray, period: float) -> float:
    """Integral of one full period from equispaced samples.

    ``values[k]`` is the sample at ``k * period / len(values)``.  For a
    periodic integrand the rule coincides with both the midpoint and the
    trapezoid rule and converges spectrally for smooth data.
    """
    g = np.asarray(values, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ValueError("expected a nonempty 1-D sample array")
    if not period > 0.0:
        raise ValueError(f"period must be positive, got {period}")
    return kahan_sum(g) * (period / g.size)
