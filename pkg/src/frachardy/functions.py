"""Compactly supported test functions with analytic gradients.

Three families: radial bumps (1 - |x-c|^2/r^2)_+^q, tensor products of
1-d bumps, and capped powers of the distance function of a bounded body.
Every variant knows its support box, sup norm, Lipschitz constant and,
in one dimension, its kink locations (needed by the deterministic
quadrature path).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry
from .geometry import ConvexBody, encode_body

TF_RADIAL = 0
TF_TENSOR = 1
TF_PROFILE = 2


def _bump_peak_slope(q: float) -> float:
    """max over t in [0,1] of |d/dt (1-t^2)^q| = 2q t (1-t^2)^(q-1)."""
    if q == 1.0:
        return 2.0
    t = 1.0 / np.sqrt(2.0 * q - 1.0)
    return 2.0 * q * t * (1.0 - t * t) ** (q - 1.0)


@dataclass(frozen=True)
class RadialBump:
    """u(x) = max(0, 1 - |x - center|^2 / radius^2)^exponent."""

    center: np.ndarray
    radius: float
    exponent: float = 2.0

    def __post_init__(self):
        c = np.asarray(self.center, dtype=np.float64).reshape(-1).copy()
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if not self.exponent >= 1.0:
            raise ValueError("exponent must be >= 1 for a Lipschitz bump")

    @property
    def dim(self) -> int:
        return self.center.size

    def __call__(self, pts):
        x = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        t2 = np.sum((x - self.center) ** 2, axis=1) / self.radius ** 2
        u = np.where(t2 < 1.0, (1.0 - np.minimum(t2, 1.0)) ** self.exponent, 0.0)
        return float(u[0]) if np.asarray(pts).ndim == 1 else u

    def gradient(self, pts):
        x = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        rel = x - self.center
        t2 = np.sum(rel ** 2, axis=1) / self.radius ** 2
        inside = t2 < 1.0
        coeff = np.where(
            inside,
            -2.0 * self.exponent / self.radius ** 2
            * (1.0 - np.minimum(t2, 1.0)) ** (self.exponent - 1.0),
            0.0,
        )
        g = coeff[:, None] * rel
        return g[0] if np.asarray(pts).ndim == 1 else g

    def support_box(self):
        return self.center - self.radius, self.center + self.radius

    def sup_norm(self) -> float:
        return 1.0

    def lipschitz_bound(self) -> float:
        return _bump_peak_slope(self.exponent) / self.radius

    def knots_1d(self):
        if self.dim != 1:
            raise ValueError("knots_1d requires a 1-d function")
        c, r = float(self.center[0]), self.radius
        return np.array([c - r, c + r])

    def encode(self):
        data = np.empty((1, self.dim + 2))
        data[0, 0] = self.exponent
        data[0, 1] = self.radius
        data[0, 2:] = self.center
        return TF_RADIAL, data, -1, np.zeros((1, 1))


@dataclass(frozen=True)
class TensorBump:
    """Product of per-axis bumps; axes holds rows (center_i, radius_i, exponent_i)."""

    axes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.axes, dtype=np.float64)
        if a.ndim != 2 or a.shape[1] != 3:
            raise ValueError("axes must be an (N, 3) array of (center, radius, exponent)")
        if not np.all(a[:, 1] > 0):
            raise ValueError("all radii must be positive")
        if not np.all(a[:, 2] >= 1.0):
            raise ValueError("all exponents must be >= 1")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "axes", a)

    @property
    def dim(self) -> int:
        return self.axes.shape[0]

    def _factors(self, x):
        t = (x - self.axes[:, 0]) / self.axes[:, 1]
        return np.where(np.abs(t) < 1.0,
                        (1.0 - np.minimum(t * t, 1.0)) ** self.axes[:, 2], 0.0)

    def __call__(self, pts):
        x = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        u = np.prod(self._factors(x), axis=1)
        return float(u[0]) if np.asarray(pts).ndim == 1 else u

    def gradient(self, pts):
        x = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        c, r, q = self.axes[:, 0], self.axes[:, 1], self.axes[:, 2]
        t = (x - c) / r
        inside = np.abs(t) < 1.0
        base = np.where(inside, 1.0 - np.minimum(t * t, 1.0), 0.0)
        f = base ** q
        df = np.where(inside, -2.0 * q * t / r * base ** (q - 1.0), 0.0)
        g = np.empty_like(x)
        for j in range(self.dim):
            others = np.prod(np.delete(f, j, axis=1), axis=1) if self.dim > 1 else 1.0
            g[:, j] = df[:, j] * others
        return g[0] if np.asarray(pts).ndim == 1 else g

    def support_box(self):
        return self.axes[:, 0] - self.axes[:, 1], self.axes[:, 0] + self.axes[:, 1]

    def sup_norm(self) -> float:
        return 1.0

    def lipschitz_bound(self) -> float:
        per_axis = np.array([_bump_peak_slope(q) / r for _, r, q in self.axes])
        return float(np.linalg.norm(per_axis))

    def knots_1d(self):
        if self.dim != 1:
            raise ValueError("knots_1d requires a 1-d function")
        c, r, _ = self.axes[0]
        return np.array([c - r, c + r])

    def encode(self):
        return TF_TENSOR, np.ascontiguousarray(self.axes), -1, np.zeros((1, 1))


@dataclass(frozen=True)
class DistanceProfile:
    """u(x) = min(d_K(x), cap_fraction * inradius)^exponent on a bounded body."""

    body: ConvexBody
    exponent: float = 1.0
    cap_fraction: float = 1.0

    def __post_init__(self):
        if not geometry.is_bounded(self.body):
            raise ValueError("distance profiles need a bounded body")
        if not self.exponent >= 1.0:
            raise ValueError("exponent must be >= 1 for a Lipschitz profile")
        if not 0.0 < self.cap_fraction <= 1.0:
            raise ValueError("cap_fraction must lie in (0, 1]")
        object.__setattr__(self, "_cap", self.cap_fraction * geometry.inradius(self.body))

    @property
    def dim(self) -> int:
        return self.body.dim

    @property
    def cap(self) -> float:
        return self._cap

    def __call__(self, pts):
        d = geometry.distance_to_boundary(self.body, pts)
        u = np.minimum(d, self._cap) ** self.exponent
        return float(u) if np.asarray(pts).ndim == 1 else u

    def grad_norm(self, pts):
        """|grad u| a.e.: exponent * d^(exponent-1) below the cap, 0 above."""
        d = np.atleast_1d(geometry.distance_to_boundary(self.body, pts))
        g = np.where((d > 0.0) & (d < self._cap),
                     self.exponent * d ** (self.exponent - 1.0), 0.0)
        return float(g[0]) if np.asarray(pts).ndim == 1 else g

    def support_box(self):
        return geometry.bounding_box(self.body)

    def sup_norm(self) -> float:
        return float(self._cap ** self.exponent)

    def lipschitz_bound(self) -> float:
        # d_K is 1-Lipschitz, so u inherits exponent * cap^(exponent-1)
        return float(self.exponent * self._cap ** (self.exponent - 1.0))

    def knots_1d(self):
        if self.dim != 1:
            raise ValueError("knots_1d requires a 1-d function")
        lo, hi = geometry.bounding_box(self.body)
        a, b = float(lo[0]), float(hi[0])
        pts = {a, b, 0.5 * (a + b), a + self._cap, b - self._cap}
        return np.array(sorted(p for p in pts if a <= p <= b))

    def encode(self):
        kind, data = encode_body(self.body)
        tf = np.array([[self.exponent, self._cap]])
        return TF_PROFILE, tf, kind, data


TestFunction = RadialBump | TensorBump | DistanceProfile


def grad_norm(u: TestFunction, pts):
    """|grad u| for any variant (vector gradient where available)."""
    if isinstance(u, DistanceProfile):
        return u.grad_norm(pts)
    g = u.gradient(pts)
    if np.asarray(pts).ndim == 1:
        return float(np.linalg.norm(g))
    return np.linalg.norm(g, axis=1)


def support_margin(u: TestFunction, body: ConvexBody) -> float:
    """Distance from the support of u to the boundary of the body.

    Positive iff the support sits strictly inside; distance profiles on
    their own body touch the boundary and report 0.
    """
    if isinstance(u, RadialBump):
        return float(geometry.distance_to_boundary(body, u.center) - u.radius)
    if isinstance(u, TensorBump):
        lo, hi = u.support_box()
        corners = np.stack(np.meshgrid(*[(lo[i], hi[i]) for i in range(u.dim)],
                                       indexing="ij"), axis=-1).reshape(-1, u.dim)
        if not np.all(geometry.contains(body, corners)):
            return -np.inf
        # d_K is concave on the body, so the box minimum sits at a corner
        return float(np.min(geometry.distance_to_boundary(body, corners)))
    return 0.0


def dilate(u: TestFunction, lam: float) -> TestFunction:
    """The rescaled function x -> u(x / lam)."""
    if lam <= 0:
        raise ValueError("dilation factor must be positive")
    if isinstance(u, RadialBump):
        return RadialBump(center=u.center * lam, radius=u.radius * lam, exponent=u.exponent)
    if isinstance(u, TensorBump):
        axes = u.axes.copy()
        axes[:, 0] *= lam
        axes[:, 1] *= lam
        return TensorBump(axes=axes)
    raise ValueError("dilate supports bump variants only")


def function_from_json(spec: dict, body: ConvexBody | None = None) -> TestFunction:
    """Build a test function from a JSON object."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise ValueError("function description must be an object with a 'type' key")
    kind = spec["type"]
    known = {
        "radial_bump": {"type", "center", "radius", "exponent"},
        "tensor_bump": {"type", "axes"},
        "distance_profile": {"type", "exponent", "cap_fraction"},
    }
    if kind not in known:
        raise ValueError(f"unknown function type {kind!r}")
    extra = set(spec) - known[kind]
    if extra:
        raise ValueError(f"unknown keys in function description: {sorted(extra)}")
    if kind == "radial_bump":
        return RadialBump(center=spec["center"], radius=float(spec["radius"]),
                          exponent=float(spec.get("exponent", 2.0)))
    if kind == "tensor_bump":
        return TensorBump(axes=spec["axes"])
    if body is None:
        raise ValueError("distance_profile requires the campaign body")
    return DistanceProfile(body=body, exponent=float(spec.get("exponent", 1.0)),
                           cap_fraction=float(spec.get("cap_fraction", 1.0)))
