"""Convex bodies with exact distance-to-boundary.

Supported variants: balls, half-spaces, slabs, axis-aligned boxes and
half-space intersections (polytopes).  Membership always means the open
interior; the distance function is extended by 0 outside the body.
All bodies are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

_UNIT_TOL = 1e-12

#: sentinel returned by :func:`inradius` for bodies containing arbitrarily
#: large balls (half-spaces, unbounded polytopes)
INFINITE_INRADIUS = np.inf


def _as_vector(x, name: str) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"{name} must be a 1-d point/vector, got shape {v.shape}")
    v = v.copy()
    v.setflags(write=False)
    return v


def _check_unit(normal: np.ndarray, name: str) -> None:
    norm = float(np.linalg.norm(normal))
    if abs(norm - 1.0) > _UNIT_TOL:
        raise ValueError(f"{name} must have unit length to {_UNIT_TOL:g}, |v| = {norm!r}")


@dataclass(frozen=True)
class Params:
    """Problem parameters: dimension N, integrability p, smoothness order s."""

    N: int
    p: float
    s: float

    def __post_init__(self):
        if not (isinstance(self.N, (int, np.integer)) and self.N >= 1):
            raise ValueError(f"N must be an integer >= 1, got {self.N!r}")
        if not (1.0 < self.p < np.inf):
            raise ValueError(f"p must lie in (1, inf), got {self.p!r}")
        if not (0.0 < self.s < 1.0):
            raise ValueError(f"s must lie in (0, 1), got {self.s!r}")


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_vector(self.center, "center"))
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius!r}")

    @property
    def dim(self) -> int:
        return self.center.size


@dataclass(frozen=True)
class HalfSpace:
    """Interior {x : <normal, x> < offset}."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "normal", _as_vector(self.normal, "normal"))
        _check_unit(self.normal, "normal")

    @property
    def dim(self) -> int:
        return self.normal.size


@dataclass(frozen=True)
class Slab:
    """Interior {x : l1 < <normal, x> < l2}."""

    normal: np.ndarray
    l1: float
    l2: float

    def __post_init__(self):
        object.__setattr__(self, "normal", _as_vector(self.normal, "normal"))
        _check_unit(self.normal, "normal")
        if not self.l1 < self.l2:
            raise ValueError(f"slab requires l1 < l2, got {self.l1!r}, {self.l2!r}")

    @property
    def dim(self) -> int:
        return self.normal.size

    @property
    def width(self) -> float:
        return self.l2 - self.l1


@dataclass(frozen=True)
class Box:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lower", _as_vector(self.lower, "lower"))
        object.__setattr__(self, "upper", _as_vector(self.upper, "upper"))
        if self.lower.size != self.upper.size:
            raise ValueError("box corners must have the same dimension")
        if not np.all(self.lower < self.upper):
            raise ValueError("box requires lower < upper componentwise")

    @property
    def dim(self) -> int:
        return self.lower.size


@dataclass(frozen=True)
class Polytope:
    """Interior {x : normals[i] . x < offsets[i] for all i}.

    A strictly interior witness point must be supplied; it doubles as the
    start point for bounding-box and inradius computations.
    """

    normals: np.ndarray
    offsets: np.ndarray
    witness: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.normals, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] == 0:
            raise ValueError("normals must be a nonempty (k, N) matrix")
        b = np.asarray(self.offsets, dtype=np.float64).reshape(-1)
        if b.size != a.shape[0]:
            raise ValueError("offsets length must match number of normals")
        lens = np.linalg.norm(a, axis=1)
        if np.any(np.abs(lens - 1.0) > _UNIT_TOL):
            raise ValueError(f"all polytope normals must be unit vectors to {_UNIT_TOL:g}")
        a = a.copy()
        b = b.copy()
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "normals", a)
        object.__setattr__(self, "offsets", b)
        object.__setattr__(self, "witness", _as_vector(self.witness, "witness"))
        if self.witness.size != a.shape[1]:
            raise ValueError("witness dimension mismatch")
        if not np.all(a @ self.witness < b):
            raise ValueError("witness point must satisfy all half-space constraints strictly")

    @property
    def dim(self) -> int:
        return self.normals.shape[1]


ConvexBody = Ball | HalfSpace | Slab | Box | Polytope


def _check_dim(body: ConvexBody, x: np.ndarray) -> np.ndarray:
    pts = np.asarray(x, dtype=np.float64)
    if pts.shape[-1] != body.dim:
        raise ValueError(f"point dimension {pts.shape[-1]} != body dimension {body.dim}")
    return pts


def _face_matrix(body: ConvexBody) -> tuple[np.ndarray, np.ndarray]:
    """(normals, offsets) of the facial representation for flat-sided bodies."""
    if isinstance(body, HalfSpace):
        return body.normal[None, :], np.array([body.offset])
    if isinstance(body, Slab):
        return np.vstack([-body.normal, body.normal]), np.array([-body.l1, body.l2])
    if isinstance(body, Box):
        n = body.dim
        eye = np.eye(n)
        # face order: axis-major, low face before high face
        normals = np.empty((2 * n, n))
        offsets = np.empty(2 * n)
        normals[0::2] = -eye
        normals[1::2] = eye
        offsets[0::2] = -body.lower
        offsets[1::2] = body.upper
        return normals, offsets
    if isinstance(body, Polytope):
        return body.normals, body.offsets
    raise TypeError(f"no face representation for {type(body).__name__}")


def distance_to_boundary(body: ConvexBody, x) -> float | np.ndarray:
    """d_K(x): distance to the boundary for interior points, 0 outside.

    Accepts a single point (N,) or a batch (M, N); vectorized over batches.
    """
    pts = _check_dim(body, x)
    single = pts.ndim == 1
    pts2 = np.atleast_2d(pts)
    if isinstance(body, Ball):
        d = body.radius - np.linalg.norm(pts2 - body.center, axis=1)
    else:
        normals, offsets = _face_matrix(body)
        d = np.min(offsets[None, :] - pts2 @ normals.T, axis=1)
    d = np.maximum(d, 0.0)
    return float(d[0]) if single else d


def contains(body: ConvexBody, x) -> bool | np.ndarray:
    """True iff x lies in the open interior."""
    pts = _check_dim(body, x)
    single = pts.ndim == 1
    pts2 = np.atleast_2d(pts)
    if isinstance(body, Ball):
        inside = np.linalg.norm(pts2 - body.center, axis=1) < body.radius
    else:
        normals, offsets = _face_matrix(body)
        inside = np.all(pts2 @ normals.T < offsets[None, :], axis=1)
    return bool(inside[0]) if single else inside


def inradius(body: ConvexBody) -> float:
    """sup of d_K over the body; +inf sentinel for unbounded-inradius variants.

    Polytope inradii solve max_x min_i (b_i - a_i . x), a linear program in
    (x, t); the optimum is exact up to LP tolerances (documented 1e-8).
    """
    if isinstance(body, Ball):
        return float(body.radius)
    if isinstance(body, HalfSpace):
        return INFINITE_INRADIUS
    if isinstance(body, Slab):
        return float(body.width / 2.0)
    if isinstance(body, Box):
        return float(np.min(body.upper - body.lower) / 2.0)
    a, b = body.normals, body.offsets
    n = body.dim
    # maximize t subject to a_i . x + t <= b_i
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([a, np.ones((a.shape[0], 1))])
    res = linprog(c, A_ub=A_ub, b_ub=b, bounds=[(None, None)] * (n + 1), method="highs")
    if res.status == 3:  # unbounded
        return INFINITE_INRADIUS
    if res.status != 0:
        raise RuntimeError(f"inradius LP failed: {res.message}")
    return float(res.x[-1])


def nearest_boundary_point(body: ConvexBody, x) -> np.ndarray:
    """A boundary point realizing d_K(x); requires x inside the body.

    For flat-sided bodies the projection goes onto the face of minimal
    slack; ties break toward the lowest face index.  For a ball centered
    at x the radial direction is the first coordinate axis.
    """
    pt = _check_dim(body, x)
    if pt.ndim != 1:
        raise ValueError("nearest_boundary_point takes a single point")
    if not contains(body, pt):
        raise ValueError("point must lie inside the body")
    if isinstance(body, Ball):
        v = pt - body.center
        r = np.linalg.norm(v)
        if r == 0.0:
            direction = np.zeros(body.dim)
            direction[0] = 1.0
        else:
            direction = v / r
        return body.center + body.radius * direction
    normals, offsets = _face_matrix(body)
    slack = offsets - normals @ pt
    i = int(np.argmin(slack))
    return pt + slack[i] * normals[i]


def bounding_box(body: ConvexBody) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned bounding box (lower, upper); raises for unbounded bodies."""
    if isinstance(body, Ball):
        return body.center - body.radius, body.center + body.radius
    if isinstance(body, Box):
        return body.lower.copy(), body.upper.copy()
    if isinstance(body, (HalfSpace, Slab)):
        raise ValueError(f"{type(body).__name__} is unbounded, no bounding box")
    a, b = body.normals, body.offsets
    n = body.dim
    lo = np.empty(n)
    hi = np.empty(n)
    for i in range(n):
        for sign, out in ((1.0, hi), (-1.0, lo)):
            c = np.zeros(n)
            c[i] = -sign
            res = linprog(c, A_ub=a, b_ub=b, bounds=[(None, None)] * n, method="highs")
            if res.status == 3:
                raise ValueError("polytope is unbounded, no bounding box")
            if res.status != 0:
                raise RuntimeError(f"bounding-box LP failed: {res.message}")
            out[i] = sign * (-res.fun) if sign > 0 else res.x[i]
    return lo, hi


def containment_radius(body: ConvexBody, x) -> float:
    """Radius R with the closure of the body inside Ball(x, R); inf if unbounded."""
    pt = _check_dim(body, x)
    if isinstance(body, Ball):
        return float(np.linalg.norm(pt - body.center) + body.radius)
    if isinstance(body, (HalfSpace, Slab)):
        return np.inf
    lo, hi = bounding_box(body)
    corner = np.where(np.abs(hi - pt) > np.abs(pt - lo), hi, lo)
    return float(np.linalg.norm(corner - pt))


def is_bounded(body: ConvexBody) -> bool:
    if isinstance(body, (Ball, Box)):
        return True
    if isinstance(body, (HalfSpace, Slab)):
        return False
    return _polytope_bounded(body)


def _polytope_bounded(body: Polytope) -> bool:
    try:
        bounding_box(body)
        return True
    except ValueError:
        return False


# -- JSON construction ------------------------------------------------------

def body_from_json(source) -> ConvexBody:
    """Build a body from a JSON object (dict, JSON string, or file path)."""
    if isinstance(source, (str, bytes)):
        text = str(source)
        spec = json.loads(text)
    else:
        spec = source
    if not isinstance(spec, dict) or "type" not in spec:
        raise ValueError("body description must be an object with a 'type' key")
    kind = spec["type"]
    known = {
        "ball": {"type", "center", "radius"},
        "halfspace": {"type", "normal", "offset"},
        "slab": {"type", "normal", "l1", "l2"},
        "box": {"type", "lower", "upper"},
        "polytope": {"type", "halfspaces", "witness"},
    }
    if kind not in known:
        raise ValueError(f"unknown body type {kind!r}")
    extra = set(spec) - known[kind]
    if extra:
        raise ValueError(f"unknown keys in body description: {sorted(extra)}")
    if kind == "ball":
        return Ball(center=spec["center"], radius=float(spec["radius"]))
    if kind == "halfspace":
        return HalfSpace(normal=spec["normal"], offset=float(spec["offset"]))
    if kind == "slab":
        return Slab(normal=spec["normal"], l1=float(spec["l1"]), l2=float(spec["l2"]))
    if kind == "box":
        return Box(lower=spec["lower"], upper=spec["upper"])
    faces = spec["halfspaces"]
    normals = [f["a"] for f in faces]
    offsets = [f["b"] for f in faces]
    return Polytope(normals=normals, offsets=offsets, witness=spec["witness"])


def body_to_json(body: ConvexBody) -> dict:
    if isinstance(body, Ball):
        return {"type": "ball", "center": body.center.tolist(), "radius": body.radius}
    if isinstance(body, HalfSpace):
        return {"type": "halfspace", "normal": body.normal.tolist(), "offset": body.offset}
    if isinstance(body, Slab):
        return {"type": "slab", "normal": body.normal.tolist(), "l1": body.l1, "l2": body.l2}
    if isinstance(body, Box):
        return {"type": "box", "lower": body.lower.tolist(), "upper": body.upper.tolist()}
    return {
        "type": "polytope",
        "halfspaces": [
            {"a": a.tolist(), "b": float(b)} for a, b in zip(body.normals, body.offsets)
        ],
        "witness": body.witness.tolist(),
    }


def body_label(body: ConvexBody) -> str:
    """Short human-readable descriptor used in report tables."""
    if isinstance(body, Ball):
        return f"ball(r={body.radius:g},dim={body.dim})"
    if isinstance(body, HalfSpace):
        return f"halfspace(dim={body.dim})"
    if isinstance(body, Slab):
        return f"slab(w={body.width:g},dim={body.dim})"
    if isinstance(body, Box):
        return f"box(dim={body.dim})"
    return f"polytope(faces={body.normals.shape[0]},dim={body.dim})"


# -- kernel encoding --------------------------------------------------------

BODY_BALL = 0
BODY_FACES = 1


def encode_body(body: ConvexBody) -> tuple[int, np.ndarray]:
    """Flatten a body to (kind, data) consumed by the numeric kernels.

    kind 0: data = [[radius, center...]];
    kind 1: data rows = [offset, normal...] per face.
    """
    if isinstance(body, Ball):
        data = np.empty((1, body.dim + 1))
        data[0, 0] = body.radius
        data[0, 1:] = body.center
        return BODY_BALL, data
    normals, offsets = _face_matrix(body)
    data = np.empty((normals.shape[0], body.dim + 1))
    data[:, 0] = offsets
    data[:, 1:] = normals
    return BODY_FACES, data
