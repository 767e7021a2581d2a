"""The jitted kernels must reproduce the pure-numpy arithmetic."""

import numpy as np
import pytest

from frachardy import geometry as g
from frachardy import kernels
from frachardy import quadrature as q
from frachardy.functions import DistanceProfile, RadialBump, TensorBump
from frachardy.geometry import Params


@pytest.fixture
def both_backends():
    kernels.set_backend("numpy")
    kernels.set_backend("numba")
    return kernels


def _with_backend(name, fn):
    previous = kernels.backend_name()
    kernels.set_backend(name)
    try:
        return fn()
    finally:
        kernels.set_backend(previous)


def test_backend_selection_env(monkeypatch):
    kernels.set_backend("numpy")
    assert kernels.backend_name() == "numpy"
    assert kernels.get_backend().BACKEND_NAME == "numpy"
    kernels.set_backend("numba")
    assert kernels.get_backend().BACKEND_NAME == "numba"
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


@pytest.mark.parametrize("u,body,params", [
    (RadialBump(center=[0.0], radius=1.0, exponent=2.0),
     g.Ball(center=[0.0], radius=2.0), Params(N=1, p=2.0, s=0.5)),
    (RadialBump(center=[0.1, -0.2], radius=0.6, exponent=3.0),
     g.Ball(center=[0.0, 0.0], radius=1.0), Params(N=2, p=1.5, s=0.3)),
    (TensorBump(axes=[[0.0, 0.5, 2.0], [0.0, 0.5, 1.0]]),
     g.Box(lower=[-1.0, -1.0], upper=[1.0, 1.0]), Params(N=2, p=3.0, s=0.7)),
    (DistanceProfile(body=g.Ball(center=[0.0, 0.0], radius=1.0), exponent=1.0,
                     cap_fraction=0.8),
     g.Ball(center=[0.0, 0.0], radius=1.0), Params(N=2, p=2.0, s=0.5)),
])
def test_estimators_agree_across_backends(both_backends, u, body, params):
    spec = q.QuadratureSpec(seed=77, outer_samples=30_000)
    sem = {}
    lp = {}
    grad = {}
    for name in ("numpy", "numba"):
        sem[name] = _with_backend(name, lambda: q.gagliardo_seminorm_p(u, params, spec))
        lp[name] = _with_backend(name, lambda: q.lp_norm_p(u, params.p, spec))
        grad[name] = _with_backend(name, lambda: q.grad_lp_norm_p(u, params.p, spec))
    assert sem["numpy"].value == pytest.approx(sem["numba"].value, rel=1e-10)
    assert sem["numpy"].std_error == pytest.approx(sem["numba"].std_error, rel=1e-8)
    assert lp["numpy"].value == pytest.approx(lp["numba"].value, rel=1e-10)
    assert grad["numpy"].value == pytest.approx(grad["numba"].value, rel=1e-10)


def test_hardy_truncated_expedient_agree(both_backends):
    u = RadialBump(center=[0.0, 0.0], radius=0.6, exponent=2.0)
    K = g.Ball(center=[0.0, 0.0], radius=1.0)
    params = Params(N=2, p=2.0, s=0.5)
    spec = q.QuadratureSpec(seed=5, outer_samples=30_000)
    x = np.array([0.3, 0.1])
    results = {}
    for name in ("numpy", "numba"):
        results[name] = _with_backend(name, lambda: (
            q.hardy_weighted_norm(u, K, params, spec).value,
            q.truncated_nonlocal_operator(K, x, 1e-2, params, spec).value,
            q.expedient_lhs(K, x, params, spec).value,
            q.local_seminorm_p(u, K, params, spec).value,
        ))
    np.testing.assert_allclose(results["numpy"], results["numba"], rtol=1e-9)


def test_halfspace_layered_tail_agrees(both_backends):
    H = g.HalfSpace(normal=[0.0, -1.0], offset=0.0)
    params = Params(N=2, p=2.0, s=0.5)
    spec = q.QuadratureSpec(seed=3, outer_samples=40_000)
    vals = {}
    for name in ("numpy", "numba"):
        vals[name] = _with_backend(name, lambda: q.truncated_nonlocal_operator(
            H, np.array([0.0, 1.0]), 1e-2, params, spec))
    assert vals["numpy"].value == pytest.approx(vals["numba"].value, rel=1e-8, abs=1e-10)
