import numpy as np
import pytest

from frachardy import functions as fn
from frachardy import geometry as g

RNG = np.random.default_rng(7)


def _cases():
    return [
        fn.RadialBump(center=[0.0], radius=1.0, exponent=2.0),
        fn.RadialBump(center=[0.3, -0.2], radius=0.7, exponent=1.0),
        fn.RadialBump(center=[0.0, 0.0, 0.5], radius=1.2, exponent=3.5),
        fn.TensorBump(axes=[[0.0, 1.0, 2.0]]),
        fn.TensorBump(axes=[[0.0, 1.0, 2.0], [0.5, 0.4, 1.0]]),
        fn.DistanceProfile(body=g.Ball(center=[0.0, 0.0], radius=1.0),
                           exponent=1.5, cap_fraction=0.6),
    ]


def test_values_and_support():
    u = fn.RadialBump(center=[0.0], radius=1.0, exponent=2.0)
    assert u([0.0]) == 1.0
    assert u([0.5]) == pytest.approx(0.5625)
    assert u([1.0]) == 0.0
    assert u([1.7]) == 0.0
    for case in _cases():
        lo, hi = case.support_box()
        outside = hi + RNG.uniform(0.1, 2.0, (40, case.dim))
        vals = case(outside)
        assert np.all(vals == 0.0)  # exactly zero off the box
        inside = 0.5 * (lo + hi)
        assert case(inside) >= 0.0
        assert case(inside) <= case.sup_norm() + 1e-15


def test_gradient_matches_finite_differences():
    h = 1e-7
    for case in _cases():
        if isinstance(case, fn.DistanceProfile):
            continue
        lo, hi = case.support_box()
        pts = lo + RNG.uniform(0.15, 0.85, (25, case.dim)) * (hi - lo)
        grads = case.gradient(pts)
        for x, gvec in zip(pts, grads):
            for j in range(case.dim):
                e = np.zeros(case.dim)
                e[j] = h
                fd = (case(x + e) - case(x - e)) / (2 * h)
                scale = max(1.0, abs(fd))
                assert abs(fd - gvec[j]) <= 1e-6 * scale


def test_grad_norm_profile():
    body = g.Ball(center=[0.0, 0.0], radius=1.0)
    u = fn.DistanceProfile(body=body, exponent=2.0, cap_fraction=0.5)
    # below the cap |grad u| = 2 d, above it the function is flat
    x_near = np.array([0.9, 0.0])
    d = g.distance_to_boundary(body, x_near)
    assert fn.grad_norm(u, x_near) == pytest.approx(2.0 * d, rel=1e-12)
    assert fn.grad_norm(u, np.array([0.1, 0.0])) == 0.0


def test_lipschitz_bound_holds():
    for case in _cases():
        L = case.lipschitz_bound()
        lo, hi = case.support_box()
        a = lo + RNG.uniform(0, 1, (300, case.dim)) * (hi - lo)
        b = lo + RNG.uniform(0, 1, (300, case.dim)) * (hi - lo)
        gap = np.linalg.norm(a - b, axis=1)
        diff = np.abs(case(a) - case(b))
        assert np.all(diff <= L * gap * (1 + 1e-9) + 1e-12)


def test_dilate_scales_support():
    u = fn.RadialBump(center=[0.5], radius=1.0, exponent=2.0)
    v = fn.dilate(u, 2.0)
    x = np.array([[0.8]])
    np.testing.assert_allclose(v(2.0 * x), u(x))
    lo, hi = v.support_box()
    assert hi[0] - lo[0] == pytest.approx(4.0)
    with pytest.raises(ValueError):
        fn.dilate(fn.DistanceProfile(body=g.Ball(center=[0.0], radius=1.0)), 2.0)


def test_support_margin():
    K = g.Ball(center=[0.0, 0.0], radius=1.0)
    u = fn.RadialBump(center=[0.2, 0.0], radius=0.5, exponent=2.0)
    assert fn.support_margin(u, K) == pytest.approx(0.3, rel=1e-12)
    tight = fn.RadialBump(center=[0.2, 0.0], radius=0.9, exponent=2.0)
    assert fn.support_margin(tight, K) < 0.0
    prof = fn.DistanceProfile(body=K)
    assert fn.support_margin(prof, K) == 0.0
    tb = fn.TensorBump(axes=[[0.0, 0.4, 2.0], [0.0, 0.4, 2.0]])
    assert fn.support_margin(tb, K) > 0.0


def test_knots_1d():
    u = fn.RadialBump(center=[0.25], radius=0.5, exponent=1.0)
    np.testing.assert_allclose(u.knots_1d(), [-0.25, 0.75])
    prof = fn.DistanceProfile(body=g.Ball(center=[1.0], radius=1.0),
                              exponent=1.0, cap_fraction=0.5)
    knots = prof.knots_1d()
    assert {0.0, 0.5, 1.0, 1.5, 2.0} == set(np.round(knots, 12))


def test_validation():
    with pytest.raises(ValueError):
        fn.RadialBump(center=[0.0], radius=0.0)
    with pytest.raises(ValueError):
        fn.RadialBump(center=[0.0], radius=1.0, exponent=0.5)
    with pytest.raises(ValueError):
        fn.TensorBump(axes=[[0.0, -1.0, 2.0]])
    with pytest.raises(ValueError):
        fn.DistanceProfile(body=g.HalfSpace(normal=[1.0], offset=0.0))
    with pytest.raises(ValueError):
        fn.DistanceProfile(body=g.Ball(center=[0.0], radius=1.0), cap_fraction=0.0)


def test_function_from_json():
    u = fn.function_from_json({"type": "radial_bump", "center": [0.0], "radius": 1.0,
                               "exponent": 2.0})
    assert isinstance(u, fn.RadialBump)
    body = g.Ball(center=[0.0], radius=1.0)
    prof = fn.function_from_json({"type": "distance_profile", "exponent": 1.0,
                                  "cap_fraction": 0.5}, body)
    assert isinstance(prof, fn.DistanceProfile)
    with pytest.raises(ValueError):
        fn.function_from_json({"type": "radial_bump", "center": [0.0], "radius": 1.0,
                               "spin": 3})
    with pytest.raises(ValueError):
        fn.function_from_json({"type": "distance_profile"})
