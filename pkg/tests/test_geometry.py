import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from frachardy import geometry as g

RNG = np.random.default_rng(20240811)


def _bodies():
    return [
        g.Ball(center=[0.0, 0.0], radius=1.0),
        g.Ball(center=[1.0, -2.0, 0.5], radius=2.5),
        g.HalfSpace(normal=[0.0, 1.0], offset=1.0),
        g.Slab(normal=[0.0, 1.0], l1=0.0, l2=2.0),
        g.Box(lower=[0.0, 0.0], upper=[1.0, 1.0]),
        g.Box(lower=[0.0, 0.0, 0.0], upper=[1.0, 1.0, 1.0]),
        g.Polytope(normals=np.vstack([np.eye(2), -np.eye(2)]),
                   offsets=[1.0, 1.0, 0.0, 0.0], witness=[0.5, 0.5]),
    ]


def _interior_points(body, n):
    if isinstance(body, g.Ball):
        pts = body.center + RNG.uniform(-1, 1, (4 * n, body.dim)) * body.radius
    elif isinstance(body, g.HalfSpace):
        base = body.normal * (body.offset - 1.0)
        pts = base + RNG.uniform(-1, 1, (4 * n, body.dim))
    elif isinstance(body, g.Slab):
        pts = RNG.uniform(-2, 2, (4 * n, body.dim))
        shift = RNG.uniform(body.l1, body.l2, 4 * n) - pts @ body.normal
        pts = pts + shift[:, None] * body.normal
    else:
        lo, hi = g.bounding_box(body)
        pts = lo + RNG.uniform(0, 1, (4 * n, body.dim)) * (hi - lo)
    mask = g.contains(body, pts)
    return pts[mask][:n]


def test_contains_examples():
    ball = g.Ball(center=[0.0, 0.0], radius=1.0)
    assert g.contains(ball, [0.0, 0.0])
    assert not g.contains(ball, [1.0, 0.0])  # boundary excluded, open set
    slab = g.Slab(normal=[0.0, 0.0, 1.0], l1=0.0, l2=2.0)
    assert g.contains(slab, [5.0, -3.0, 1.0])


def test_distance_examples():
    assert g.distance_to_boundary(g.Ball(center=[0.0], radius=3.0), [0.0]) == 3.0
    box = g.Box(lower=[0.0, 0.0], upper=[1.0, 1.0])
    assert g.distance_to_boundary(box, [0.3, 0.4]) == pytest.approx(0.3, abs=1e-15)
    # zero outside, for every variant
    for body in _bodies():
        far = np.full(body.dim, 1e3)
        assert g.distance_to_boundary(body, far) == 0.0


def test_distance_matches_boundary_sampling_oracle():
    # brute-force min over densely sampled boundary of the unit square
    box = g.Box(lower=[0.0, 0.0], upper=[1.0, 1.0])
    t = np.linspace(0.0, 1.0, 4001)
    boundary = np.concatenate([
        np.stack([t, np.zeros_like(t)], axis=1),
        np.stack([t, np.ones_like(t)], axis=1),
        np.stack([np.zeros_like(t), t], axis=1),
        np.stack([np.ones_like(t), t], axis=1),
    ])
    for x in ([0.3, 0.4], [0.51, 0.9], [0.05, 0.6]):
        oracle = np.min(np.linalg.norm(boundary - np.asarray(x), axis=1))
        assert g.distance_to_boundary(box, x) == pytest.approx(oracle, abs=1e-7)


def test_inradius_closed_forms():
    assert g.inradius(g.Ball(center=[0.0, 0.0], radius=2.0)) == 2.0
    assert g.inradius(g.Slab(normal=[1.0, 0.0], l1=0.0, l2=3.0)) == 1.5
    assert g.inradius(g.HalfSpace(normal=[1.0], offset=0.0)) == np.inf
    assert g.inradius(g.Box(lower=[0, 0, 0], upper=[1, 1, 1])) == 0.5


def test_inradius_box_grid_oracle():
    # dense interior grid of the unit cube
    box = g.Box(lower=[0, 0, 0], upper=[1, 1, 1])
    axis = np.linspace(0.01, 0.99, 33)
    grid = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
    oracle = np.max(g.distance_to_boundary(box, grid))
    assert g.inradius(box) >= oracle
    assert g.inradius(box) == pytest.approx(oracle, abs=0.02)


def test_polytope_inradius_matches_box():
    cube = g.Polytope(normals=np.vstack([np.eye(3), -np.eye(3)]),
                      offsets=[1.0] * 6, witness=[0, 0, 0])
    assert g.inradius(cube) == pytest.approx(1.0, abs=1e-8)
    halfplane = g.Polytope(normals=[[1.0, 0.0]], offsets=[0.0], witness=[-1.0, 0.0])
    assert g.inradius(halfplane) == np.inf


def test_nearest_boundary_point_examples():
    np.testing.assert_allclose(
        g.nearest_boundary_point(g.Ball(center=[0.0, 0.0], radius=1.0), [0.5, 0.0]),
        [1.0, 0.0], atol=1e-14)
    slab = g.Slab(normal=[0.0, 1.0], l1=0.0, l2=2.0)
    np.testing.assert_allclose(
        g.nearest_boundary_point(slab, [7.0, 0.4]), [7.0, 0.0], atol=1e-14)
    box = g.Box(lower=[0.0, 0.0], upper=[1.0, 1.0])
    np.testing.assert_allclose(
        g.nearest_boundary_point(box, [0.3, 0.4]), [0.0, 0.4], atol=1e-14)


def test_nearest_point_consistent_with_distance():
    for body in _bodies():
        pts = _interior_points(body, 10_000)
        d = g.distance_to_boundary(body, pts)
        for x, dx in zip(pts, d):
            bp = g.nearest_boundary_point(body, x)
            assert abs(np.linalg.norm(x - bp) - dx) <= 1e-10


def test_one_lipschitz_and_inradius_dominates():
    for body in _bodies():
        pts = _interior_points(body, 1000)
        d = g.distance_to_boundary(body, pts)
        R = g.inradius(body)
        assert np.all(d <= R + 1e-12)
        other = pts[RNG.permutation(len(pts))]
        d2 = g.distance_to_boundary(body, other)
        gap = np.linalg.norm(pts - other, axis=1)
        assert np.all(np.abs(d - d2) <= gap + 1e-10)


def test_intersection_monotonicity():
    # d of an intersection is the min of the two distances, hence <= either
    poly = g.Polytope(normals=np.vstack([np.eye(2), -np.eye(2)]),
                      offsets=[2.0] * 4, witness=[0.0, 0.0])
    ball = g.Ball(center=[0.0, 0.0], radius=1.5)
    pts = _interior_points(ball, 500)
    inside = g.contains(poly, pts) & g.contains(ball, pts)
    pts = pts[inside]
    d_poly = g.distance_to_boundary(poly, pts)
    d_cut = np.minimum(d_poly, g.distance_to_boundary(ball, pts))
    assert np.all(d_cut <= d_poly + 1e-15)


@given(st.floats(-0.99, 0.99), st.floats(-0.99, 0.99),
       st.floats(-0.99, 0.99), st.floats(-0.99, 0.99))
def test_lipschitz_property_ball(x1, x2, y1, y2):
    ball = g.Ball(center=[0.0, 0.0], radius=1.0)
    x = np.array([x1, x2]) / np.sqrt(2)
    y = np.array([y1, y2]) / np.sqrt(2)
    dx = g.distance_to_boundary(ball, x)
    dy = g.distance_to_boundary(ball, y)
    assert abs(dx - dy) <= np.linalg.norm(x - y) + 1e-12


def test_validation_errors():
    with pytest.raises(ValueError):
        g.Ball(center=[0.0], radius=-1.0)
    with pytest.raises(ValueError):
        g.HalfSpace(normal=[2.0, 0.0], offset=1.0)  # not unit length
    with pytest.raises(ValueError):
        g.Slab(normal=[1.0], l1=2.0, l2=1.0)
    with pytest.raises(ValueError):
        g.Box(lower=[0.0, 0.0], upper=[1.0, -1.0])
    with pytest.raises(ValueError):
        g.Polytope(normals=[[1.0, 0.0]], offsets=[0.0], witness=[1.0, 0.0])
    with pytest.raises(ValueError):
        g.distance_to_boundary(g.Ball(center=[0.0, 0.0], radius=1.0), [0.0])
    with pytest.raises(ValueError):
        g.nearest_boundary_point(g.Ball(center=[0.0], radius=1.0), [5.0])
    with pytest.raises(ValueError):
        g.Params(N=0, p=2.0, s=0.5)
    with pytest.raises(ValueError):
        g.Params(N=1, p=1.0, s=0.5)
    with pytest.raises(ValueError):
        g.Params(N=1, p=2.0, s=1.0)


def test_json_round_trip():
    for body in _bodies():
        spec = g.body_to_json(body)
        rebuilt = g.body_from_json(json.dumps(spec))
        pts = _interior_points(body, 50)
        np.testing.assert_allclose(g.distance_to_boundary(body, pts),
                                   g.distance_to_boundary(rebuilt, pts), atol=1e-14)
    with pytest.raises(ValueError):
        g.body_from_json({"type": "ball", "center": [0.0], "radius": 1.0, "bogus": 1})
    with pytest.raises(ValueError):
        g.body_from_json({"type": "donut"})
