import numpy as np
import pytest

from eqdeg.domains import (
    Ball,
    IntersectionDomain,
    ProductDomain,
    ShellDomain,
    UnionDomain,
    _halton,
)
from eqdeg.polynomials import Polynomial


def test_ball_membership_and_boundary():
    rng = np.random.default_rng(0)
    ball = Ball([1.0, 0.0], 2.0)
    assert ball.contains(np.array([1.5, 0.5]))
    assert not ball.contains(np.array([3.5, 0.0]))
    pts = ball.boundary_samples(200, rng)
    assert np.allclose(ball.metric_norm(pts), 2.0)
    inner = ball.interior_samples(200, rng)
    assert np.all(ball.metric_norm(inner) <= 2.0)


def test_weighted_ball_is_an_ellipsoid():
    rng = np.random.default_rng(1)
    ball = Ball([0.0, 0.0], 1.0, weights=[1.0, 25.0])
    pts = ball.boundary_samples(100, rng)
    # the second axis is squeezed by the weight
    assert np.max(np.abs(pts[:, 1])) <= 0.2 + 1e-9
    assert np.max(np.abs(pts[:, 0])) > 0.5


def test_ball_seed_grid_respects_spacing_and_membership():
    ball = Ball([0.0], 2.0)
    seeds = ball.seed_points([0], fraction=0.125)
    vals = np.sort(seeds[:, 0])
    assert len(vals) == 18  # 17 grid points plus the center
    assert np.isclose(vals[0], -2.0) and np.isclose(vals[-1], 2.0)
    assert np.all(ball.metric_norm(seeds) <= 2.0)


def test_ball_seed_grid_falls_back_to_halton_in_high_dim():
    ball = Ball(np.zeros(5), 1.0)
    seeds = ball.seed_points(range(5), fraction=0.125)
    assert len(seeds) <= 4097
    assert np.all(ball.metric_norm(seeds) <= 1.0)


def test_halton_is_deterministic_and_in_cube():
    a = _halton(64, 3)
    b = _halton(64, 3)
    assert np.array_equal(a, b)
    assert np.all((a >= 0) & (a < 1))


def test_union_requires_disjoint_parts():
    with pytest.raises(ValueError):
        UnionDomain([Ball([0.0], 1.0), Ball([1.5], 1.0)])
    dom = UnionDomain([Ball([-2.0], 0.5), Ball([2.0], 0.5)])
    assert dom.contains(np.array([2.2]))
    assert not dom.contains(np.array([0.0]))


def test_intersection_domain():
    dom = IntersectionDomain([Ball([-0.5, 0.0], 1.0), Ball([0.5, 0.0], 1.0)])
    assert dom.contains(np.array([0.0, 0.0]))
    assert not dom.contains(np.array([-1.2, 0.0]))
    rng = np.random.default_rng(2)
    pts = dom.boundary_samples(64, rng)
    assert np.all(dom.parts[0].metric_norm(pts) <= 1.0 + 1e-9)
    assert np.all(dom.parts[1].metric_norm(pts) <= 1.0 + 1e-9)


def test_shell_domain_excludes_core():
    dom = ShellDomain([0.0, 0.0], 0.5, 1.5)
    assert dom.contains(np.array([1.0, 0.0]))
    assert not dom.contains(np.array([0.1, 0.0]))
    assert not dom.contains(np.array([2.0, 0.0]))
    rng = np.random.default_rng(3)
    inner = dom.interior_samples(50, rng)
    r = dom.outer.metric_norm(inner)
    assert np.all((r > 0.5) & (r < 1.5))


def test_product_domain_split_and_samples():
    dom = ProductDomain([0, 2], Ball(np.zeros(2), 1.0), [1], Ball([0.0], 0.5))
    assert dom.contains(np.array([0.5, 0.2, 0.5]))
    assert not dom.contains(np.array([0.5, 0.6, 0.5]))
    rng = np.random.default_rng(4)
    pts = dom.boundary_samples(100, rng)
    a = np.sqrt(pts[:, 0] ** 2 + pts[:, 2] ** 2)
    b = np.abs(pts[:, 1])
    on_a = np.isclose(a, 1.0)
    on_b = np.isclose(b, 0.5)
    assert np.all(on_a | on_b)
    assert on_a.any() and on_b.any()


def test_product_domain_requires_partition():
    with pytest.raises(ValueError):
        ProductDomain([0, 1], Ball(np.zeros(2), 1.0), [1], Ball([0.0], 1.0))


# ---------------------------------------------------------------------------
# Polynomials


def test_polynomial_value_and_degree():
    p = Polynomial.from_terms(2, [((2, 0), 1.0), ((0, 1), -3.0), ((1, 1), 0.5)])
    assert p.degree == 2
    x = np.array([2.0, 1.0])
    assert np.isclose(p.value(x), 4.0 - 3.0 + 1.0)
    X = np.array([[2.0, 1.0], [0.0, 0.0]])
    assert np.allclose(p.value(X), [2.0, 0.0])


def test_polynomial_gradient_matches_finite_differences():
    rng = np.random.default_rng(5)
    for _ in range(20):
        nv = int(rng.integers(1, 5))
        terms = [
            (tuple(int(e) for e in rng.integers(0, 4, size=nv)), float(rng.uniform(-2, 2)))
            for _ in range(5)
        ]
        p = Polynomial.from_terms(nv, terms)
        x = rng.uniform(-1, 1, size=nv)
        g = p.gradient(x)
        h = 1e-6
        for i in range(nv):
            xp, xm = x.copy(), x.copy()
            xp[i] += h
            xm[i] -= h
            fd = (p.value(xp) - p.value(xm)) / (2 * h)
            assert abs(g[i] - fd) < 1e-6 * max(1.0, abs(fd))


def test_polynomial_hessian_matches_gradient_differences():
    rng = np.random.default_rng(6)
    p = Polynomial.from_terms(
        3, [((2, 1, 0), 1.5), ((0, 0, 4), -0.5), ((1, 1, 1), 2.0), ((3, 0, 0), 0.25)]
    )
    x = rng.uniform(-1, 1, size=3)
    H = p.hessian_at(x)
    assert np.allclose(H, H.T)
    h = 1e-6
    for i in range(3):
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        fd = (p.gradient(xp) - p.gradient(xm)) / (2 * h)
        assert np.allclose(H[:, i], fd, atol=1e-5)


def test_polynomial_merges_and_drops_terms():
    p = Polynomial.from_terms(1, [((2,), 1.0), ((2,), -1.0), ((1,), 3.0)])
    assert p.terms == (((1,), 3.0),)


def test_polynomial_json_round_trip():
    p = Polynomial.from_terms(2, [((2, 0), 1.0), ((0, 3), -0.25)])
    assert Polynomial.from_json(2, p.to_json()) == p
