import math

import numpy as np
import pytest

from fillhull import coeffs, hull
from fillhull.hull import SpherePoint
from fillhull.quadrature import Grid, integrate_period

PI = math.pi
GRID = Grid(256)


def test_p_at_the_pole_is_one():
    assert coeffs.p_scalar(0.7, PI / 2, PI / 2) == pytest.approx(1.0)


def test_p_is_nonnegative_and_vanishes_on_degenerate_triples():
    # x = y and gap a with cos a = cos x * cos y ... actually the
    # simplest degenerate case: both values on the same great circle,
    # x = a/2 + s, y realized by the distance function itself
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = rng.uniform(0.1, PI - 0.1)
        x = rng.uniform(0.1, PI - 0.1)
        y = rng.uniform(0.1, PI - 0.1)
        assert coeffs.p_scalar(a, x, y) >= 0.0
    # distance-function values make the spherical triangle flat
    tau = 0.8
    f = hull.boundary_point(tau, GRID)
    fm = f.at_midnodes()
    j, k = 40, 90
    p = coeffs.p_scalar(GRID.beta_nodes[k] - GRID.alpha_nodes[j],
                        fm[j], f.values[k])
    assert p == pytest.approx(0.0, abs=1e-12)


def test_p_equals_height_squared_over_sines():
    rng = np.random.default_rng(1)
    for _ in range(30):
        a = rng.uniform(0.2, PI - 0.2)
        x = rng.uniform(0.2, PI - 0.2)
        y = rng.uniform(0.2, PI - 0.2)
        h = coeffs.height(a, x, y)
        want = h * h / (math.sin(x) ** 2 * math.sin(y) ** 2)
        assert coeffs.p_scalar(a, x, y) == pytest.approx(want, abs=1e-12)


def test_p_rejects_angles_at_multiples_of_pi():
    with pytest.raises(ValueError):
        coeffs.p_scalar(PI, 0.5, 0.5)
    with pytest.raises(ValueError):
        coeffs.p_scalar(0.5, 0.0, 0.5)


def test_p_derivatives_match_finite_differences():
    rng = np.random.default_rng(2)
    t = 1e-5
    done = 0
    while done < 20:
        a = rng.uniform(0.3, PI - 0.3)
        x = rng.uniform(0.4, PI - 0.4)
        y = rng.uniform(0.4, PI - 0.4)
        # the closed forms differentiate the raw expression, so stay
        # clear of the region where the height clamps to zero
        if coeffs.height(a, x, y) ** 2 < 0.05:
            continue
        done += 1
        p_x, p_y, p_xx, p_xy, p_yy = coeffs.p_derivatives(a, x, y)

        def p(xx, yy):
            return coeffs.p_scalar(a, xx, yy)

        fd_x = (p(x + t, y) - p(x - t, y)) / (2 * t)
        fd_y = (p(x, y + t) - p(x, y - t)) / (2 * t)
        fd_xx = (p(x + t, y) - 2 * p(x, y) + p(x - t, y)) / (t * t)
        fd_yy = (p(x, y + t) - 2 * p(x, y) + p(x, y - t)) / (t * t)
        fd_xy = (p(x + t, y + t) - p(x + t, y - t)
                 - p(x - t, y + t) + p(x - t, y - t)) / (4 * t * t)
        scale = max(1.0, abs(p(x, y)))
        assert fd_x == pytest.approx(p_x, abs=1e-5 * scale)
        assert fd_y == pytest.approx(p_y, abs=1e-5 * scale)
        assert fd_xx == pytest.approx(p_xx, rel=1e-3, abs=1e-3)
        assert fd_yy == pytest.approx(p_yy, rel=1e-3, abs=1e-3)
        assert fd_xy == pytest.approx(p_xy, rel=1e-3, abs=1e-3)


def test_p_grid_matches_scalar_definition():
    f = hull.random_hull_point(7, 0.4, 0.3, GRID)
    table = coeffs.p_grid(f).p
    fm = f.at_midnodes()
    rng = np.random.default_rng(3)
    for _ in range(40):
        j = int(rng.integers(0, GRID.n - 1))
        k = int(rng.integers(j + 1, GRID.n))
        want = coeffs.p_scalar(GRID.beta_nodes[k] - GRID.alpha_nodes[j],
                               fm[j], f.values[k])
        assert table[j, k] == pytest.approx(want, abs=1e-10)


def test_p_grid_zero_outside_triangle():
    f = hull.sphere_point(SpherePoint(0.1, 0.8), GRID)
    table = coeffs.p_grid(f).p
    assert np.all(table[np.tril_indices(GRID.n, k=0)] == 0.0)


def test_p_grid_rejects_boundary_functions():
    f = hull.boundary_point(0.0, GRID)
    with pytest.raises(ValueError):
        coeffs.p_grid(f)


def test_p_l1_norm_positive_and_grid_stable():
    f512 = hull.random_hull_point(9, 0.4, 0.3, Grid(512))
    f256 = hull.random_hull_point(9, 0.4, 0.3, Grid(256))
    v512 = coeffs.p_l1_norm(f512)
    v256 = coeffs.p_l1_norm(f256)
    assert v512 > 0
    assert v512 == pytest.approx(v256, rel=2e-2)


def test_hemisphere_speed_integrates_to_two_pi():
    alphas = np.arange(2048) * (2 * PI / 2048)
    for d in (0.2, 0.7, PI / 2):
        sp = coeffs.hemisphere_speed(SpherePoint(1.1, d), alphas)
        assert integrate_period(sp, 2 * PI) == pytest.approx(2 * PI,
                                                             abs=1e-6)


def test_hemisphere_speed_rejects_boundary():
    with pytest.raises(ValueError):
        coeffs.hemisphere_speed(SpherePoint(0.0, 0.0), 0.3)


def test_coeff_grid_csv_has_header_and_triangle_rows():
    f = hull.sphere_point(SpherePoint(0.0, 0.9), Grid(16))
    text = coeffs.p_grid(f).to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == "alpha,beta,p"
    assert len(lines) - 1 == 16 * 15 // 2
