"""Antipodal plane paths and the action of the two-form on them.

A path is a map ``gamma: R -> R^2`` with ``gamma(alpha + pi) =
-gamma(alpha)``, stored on the half period like hull functions.  The
action of the form with coefficients ``p`` is

    omega_f(gamma) = integral over {0 < alpha < beta < pi} of
                     p(alpha, beta) * (gamma(alpha) x gamma(beta)).

For a hemisphere point ``h`` the maximizer is the unit path
``gamma_0 = exp(i nu_h)`` where ``nu_h`` integrates the tangent-circle
speed; perturbed competitors ``gamma_eta = exp(i (nu_h + eta))`` with a
mean-zero angle field ``eta`` feed the comass optimization, and the
auxiliary loops ``mu`` and ``sigma`` quantify how far a competitor is
from calibrating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import Grid, integrate_triangle, integrate_period
from .hull import HullFn, SpherePoint, dist_to_boundary
from .coeffs import p_grid, hemisphere_speed

__all__ = [
    "PlanePath",
    "AngleField",
    "nu_h",
    "nu_tables",
    "gamma_from_eta",
    "omega_action",
    "mu_path",
    "sigma_path",
    "fuglede_check",
    "basepoint_invariance",
]

PI = math.pi
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PlanePath:
    """Plane path sampled at the integer nodes; implied extension
    ``gamma(alpha + pi) = -gamma(alpha)``.

    ``mid_points`` optionally carries exact values at the midpoint
    nodes; constructors that know the path analytically fill it so the
    action agrees bit-for-bit with phase-space formulas.  When absent,
    midpoint values are linear interpolations with the antipodal wrap.
    """

    grid: Grid
    points: np.ndarray = field(repr=False)
    mid_points: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.shape != (self.grid.n, 2):
            raise ValueError(f"expected shape {(self.grid.n, 2)}, "
                             f"got {pts.shape}")
        object.__setattr__(self, "points", pts)
        if self.mid_points is not None:
            mid = np.asarray(self.mid_points, dtype=float)
            if mid.shape != (self.grid.n, 2):
                raise ValueError("mid_points shape mismatch")
            object.__setattr__(self, "mid_points", mid)

    def is_admissible(self, tol: float = 1e-9) -> bool:
        return bool(np.hypot(self.points[:, 0],
                             self.points[:, 1]).max() <= 1.0 + tol)

    def extended(self) -> np.ndarray:
        """Samples on the full circle, length ``2n``."""
        return np.concatenate([self.points, -self.points])

    def at_midnodes(self) -> np.ndarray:
        if self.mid_points is not None:
            return self.mid_points
        pts = self.points
        right = np.concatenate([pts[1:], -pts[:1]])
        return 0.5 * (pts + right)

    def to_csv(self) -> str:
        lines = ["alpha,gx,gy"]
        for a, (gx, gy) in zip(self.grid.beta_nodes, self.points):
            lines.append(f"{a:.12g},{gx:.12g},{gy:.12g}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class AngleField:
    """Mean-zero angle perturbation at the integer nodes, extended
    pi-periodically.  The mean-zero gauge removes the rotation
    degeneracy of the action."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError("values shape mismatch")
        if abs(v.sum() * self.grid.step) > 1e-9:
            raise ValueError("angle field is not mean zero")
        object.__setattr__(self, "values", v)

    @staticmethod
    def zero(grid: Grid) -> "AngleField":
        return AngleField(grid, np.zeros(grid.n))

    @staticmethod
    def from_values(grid: Grid, values: np.ndarray) -> "AngleField":
        v = np.asarray(values, dtype=float)
        return AngleField(grid, v - v.mean())

    def at_midnodes(self) -> np.ndarray:
        v = self.values
        right = np.concatenate([v[1:], v[:1]])
        return 0.5 * (v + right)


def nu_tables(p: SpherePoint, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """Phase ``nu_h`` at the integer nodes (n+1 values on [0, pi]) and
    at the midpoint nodes, from one cumulative trapezoid of the speed
    at half-step resolution so the two families share a table."""
    if p.d <= 0.0:
        raise ValueError("nu is undefined on the boundary circle (d = 0)")
    n = grid.n
    pts = np.arange(2 * n + 1) * (grid.step / 2.0)
    speed = hemisphere_speed(p, pts)
    inc = 0.5 * (speed[:-1] + speed[1:]) * (grid.step / 2.0)
    cum = np.concatenate([[0.0], np.cumsum(inc)])
    return cum[::2], cum[1::2]


def nu_h(p: SpherePoint, grid: Grid) -> np.ndarray:
    """Monotone phase function with ``nu(0) = 0`` and ``nu(pi) = pi``
    up to quadrature error; slope between ``sin d`` and ``1/sin d``."""
    return nu_tables(p, grid)[0]


def gamma_from_eta(p: SpherePoint, eta: AngleField) -> PlanePath:
    """Unit path ``exp(i (nu_h + eta))`` with exact midpoint samples
    (eta interpolated linearly at midpoints, matching the phase-space
    functional)."""
    nu_beta, nu_alpha = nu_tables(p, eta.grid)
    theta = nu_beta[:-1] + eta.values
    theta_mid = nu_alpha + eta.at_midnodes()
    pts = np.column_stack([np.cos(theta), np.sin(theta)])
    mid = np.column_stack([np.cos(theta_mid), np.sin(theta_mid)])
    return PlanePath(eta.grid, pts, mid)


def omega_action(f: HullFn, gamma: PlanePath) -> float:
    """Action of the form of ``f`` on the path."""
    if f.grid.n != gamma.grid.n:
        raise ValueError("grid mismatch")
    P = p_grid(f).p
    gb = gamma.points
    gm = gamma.at_midnodes()
    cross = gm[:, 0][:, None] * gb[:, 1][None, :] \
        - gm[:, 1][:, None] * gb[:, 0][None, :]
    return integrate_triangle(P * cross, f.grid)


def _band_weights(n: int, step: float) -> np.ndarray:
    """Quadrature weights for the open band (alpha, alpha + pi) on the
    offsets m = 1..n-1: interior midpoint cells plus extended end
    cells covering the two bounded half-gaps."""
    w = np.full(n - 1, step)
    w[0] = 1.5 * step
    w[-1] = 1.5 * step
    return w


def mu_path(f: HullFn, gamma: PlanePath) -> PlanePath:
    """The loop ``mu(alpha) = integral over (alpha, alpha + pi) of
    q(alpha, beta) gamma(beta) d beta`` with ``q = e / sin^2 f(beta)``,
    sampled at the integer nodes."""
    if f.grid.n != gamma.grid.n:
        raise ValueError("grid mismatch")
    if dist_to_boundary(f) <= 0.0:
        raise ValueError("f touches the boundary circle")
    n = f.grid.n
    step = f.grid.step
    fv = f.values
    f_ext = f.extended()
    g_ext = gamma.extended()

    k = np.arange(n)[:, None]
    m = np.arange(1, n)[None, :]
    idx = (k + m) % (2 * n)
    a = m * step
    x = fv[:, None]
    y = f_ext[idx]
    ca, cx, cy = np.cos(a), np.cos(x), np.cos(y)
    sa = np.sin(a)
    e = np.maximum(1.0 - (cx * cx + cy * cy - 2.0 * ca * cx * cy)
                   / (sa * sa), 0.0)
    q = e / np.sin(y) ** 2
    w = _band_weights(n, step)
    pts = np.einsum("km,m,kmc->kc", q, w, g_ext[idx])
    return PlanePath(f.grid, pts)


def sigma_path(p: SpherePoint,
               eta: AngleField) -> tuple[PlanePath, float]:
    """Half-period average loop of a competitor and its signed area.

    ``sigma(alpha) = (1/2) integral over (alpha, alpha + pi) of
    p_beta(h) gamma_eta(beta) d beta``.  The derivative has the closed
    form ``sigma' = -p_alpha(h) gamma_eta(alpha)``, which we use in the
    shoelace area ``A = (1/2) contour integral of sigma x sigma'``.
    """
    grid = eta.grid
    n = grid.n
    step = grid.step
    gamma = gamma_from_eta(p, eta)
    g_ext = gamma.extended()
    speed = np.asarray(hemisphere_speed(p, grid.beta_nodes))
    speed_ext = np.tile(speed, 2)

    k = np.arange(n)[:, None]
    m = np.arange(1, n)[None, :]
    idx = (k + m) % (2 * n)
    w = _band_weights(n, step)
    pts = 0.5 * np.einsum("km,m,kmc->kc", speed_ext[idx], w, g_ext[idx])
    sigma = PlanePath(grid, pts)

    dsigma = -speed[:, None] * gamma.points
    cross = pts[:, 0] * dsigma[:, 1] - pts[:, 1] * dsigma[:, 0]
    # sigma x sigma' is pi-periodic, so half of the [0, 2*pi) contour
    # equals the full [0, pi) sum.
    area = integrate_period(cross, PI)
    return sigma, area


def fuglede_check(p: SpherePoint, eta: AngleField,
                  m_t: int = 2048) -> tuple[complex, complex, float, float]:
    """Fourier stability data of the sigma loop.

    Reparametrizes sigma by the arclength variable ``t = nu_h(alpha)``,
    computes the Fourier coefficients ``c0, c1`` by the periodic
    trapezoid rule, and returns ``(c0, c1, sup|w|, 5*pi*(pi - A))``
    where ``w(t) = c0 + c1 e^{it} - sigma(t)``.
    """
    grid = eta.grid
    n = grid.n
    sigma, area = sigma_path(p, eta)
    nu_beta, _ = nu_tables(p, grid)
    nu_full = np.concatenate([nu_beta[:-1], nu_beta[:-1] + PI, [TWO_PI]])
    alpha_full = np.concatenate([grid.beta_nodes, grid.beta_nodes + PI,
                                 [TWO_PI]])
    s_ext = sigma.extended()
    s_full = np.vstack([s_ext, s_ext[:1]])

    t = np.arange(m_t) * (TWO_PI / m_t)
    alpha_t = np.interp(t, nu_full, alpha_full)
    sx = np.interp(alpha_t, alpha_full, s_full[:, 0])
    sy = np.interp(alpha_t, alpha_full, s_full[:, 1])
    s_tilde = sx + 1j * sy

    c0 = complex(s_tilde.mean())
    c1 = complex((s_tilde * np.exp(-1j * t)).mean())
    w = c0 + c1 * np.exp(1j * t) - s_tilde
    w_sup = float(np.abs(w).max())
    bound = 5.0 * PI * (PI - area)
    return c0, c1, w_sup, bound


def _shift_hull(f: HullFn, s: int) -> HullFn:
    idx = (np.arange(f.grid.n) + s) % (2 * f.grid.n)
    return HullFn(f.grid, f.extended()[idx])


def _shift_path(gamma: PlanePath, s: int) -> PlanePath:
    idx = (np.arange(gamma.grid.n) + s) % (2 * gamma.grid.n)
    pts = gamma.extended()[idx]
    mid = None
    if gamma.mid_points is not None:
        mid_ext = np.concatenate([gamma.mid_points, -gamma.mid_points])
        mid = mid_ext[idx]
    return PlanePath(gamma.grid, pts, mid)


def basepoint_invariance(f: HullFn, gamma: PlanePath,
                         shift_steps: int) -> tuple[float, float]:
    """Action before and after cyclically shifting the base point by
    ``shift_steps`` grid cells (antipodal wrap on both arguments).  The
    two values agree up to quadrature tolerance."""
    before = omega_action(f, gamma)
    after = omega_action(_shift_hull(f, shift_steps),
                         _shift_path(gamma, shift_steps))
    return before, after
