"""Integral estimators for the fractional Hardy verification campaigns.

Monte Carlo mode handles any dimension.  Targets around each outer point
split into a near ball (radius density matched to the p(1-s)-1 modulus of
the integrand), a far annulus (density matched to the -1-sp kernel decay)
and an analytic tail where the integrand is known exactly.  All randomness
derives from one 64-bit seed through per-batch counters, and batches are
reduced in a fixed order, so a given spec reproduces bit-identical output
for any thread count.

Tensor-grid mode is the deterministic path for one-dimensional problems:
composite Gauss-Legendre panels between integrand kinks, graded toward
singular endpoints, with the same near/mid/tail decomposition.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import geometry
from .constants import sphere_surface
from .functions import TestFunction, support_margin
from .geometry import ConvexBody, Params, encode_body
from .kernels import get_backend

_BATCH = 1 << 16
_NO_BODY = np.zeros((1, 1))

# op tags keep the per-batch random substreams of different estimators apart
_TAG_SEMINORM = 1
_TAG_LOCAL = 2
_TAG_HARDY = 3
_TAG_LP = 4
_TAG_GRAD = 5
_TAG_ANNULUS = 6
_TAG_EXPEDIENT = 7


@dataclass(frozen=True)
class QuadratureSpec:
    """Sampling strategy for one integral estimate.

    near_radius / far_radius default to 0.1x and 1x the relevant domain
    diameter when left as None.  grid_points_per_axis only matters in
    tensor_grid mode and scales the outer panel count.
    """

    seed: int
    method: str = "monte_carlo"
    outer_samples: int = 200_000
    inner_samples: int = 1
    near_radius: float | None = None
    far_radius: float | None = None
    grid_points_per_axis: int = 256
    target_rel_error: float = 1e-3

    def __post_init__(self):
        if self.method not in ("monte_carlo", "tensor_grid"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "monte_carlo" and self.outer_samples * self.inner_samples < 1000:
            raise ValueError("monte_carlo mode needs at least 1000 samples")
        if self.method == "tensor_grid" and self.grid_points_per_axis < 16:
            raise ValueError("tensor_grid mode needs grid_points_per_axis >= 16")
        if self.near_radius is not None and self.far_radius is not None:
            if not self.near_radius < self.far_radius:
                raise ValueError("near_radius must be smaller than far_radius")

    @property
    def total_samples(self) -> int:
        return self.outer_samples * self.inner_samples


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    std_error: float
    samples_used: int
    tail_contribution: float

    def __post_init__(self):
        if self.std_error < 0.0:
            raise ValueError("std_error must be nonnegative")

    def as_dict(self) -> dict:
        return {"value": self.value, "std_error": self.std_error,
                "samples_used": self.samples_used,
                "tail_contribution": self.tail_contribution}


def combined_sigma(*estimates: IntegralEstimate) -> float:
    return float(np.sqrt(sum(e.std_error ** 2 for e in estimates)))


# -- Monte Carlo machinery ---------------------------------------------------

def _rng(seed: int, tag: int, batch: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(
        np.random.SeedSequence(entropy=(int(seed) & (2 ** 64 - 1), tag, batch))))


def _reduce_batches(total: int, job, threads: int):
    """Run `job(batch_index, count)` over fixed-size batches, reduce in order."""
    sizes = []
    left = total
    while left > 0:
        sizes.append(min(_BATCH, left))
        left -= sizes[-1]
    if threads <= 1:
        partials = [job(i, n) for i, n in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(job, range(len(sizes)), sizes))
    s = s2 = tail = 0.0
    n = 0
    for ps, ps2, ptail, pn in partials:
        s += ps
        s2 += ps2
        tail += ptail
        n += pn
    mean = s / n
    var = max(s2 - s * s / n, 0.0) / max(n - 1, 1)
    return mean, math.sqrt(var / n), tail / n, n


def _box_of(u: TestFunction):
    lo, hi = u.support_box()
    return np.ascontiguousarray(lo, dtype=np.float64), np.ascontiguousarray(hi, dtype=np.float64)


def _check_dims(u: TestFunction, params: Params):
    if u.dim != params.N:
        raise ValueError(f"function dimension {u.dim} != params.N {params.N}")


def _seminorm_radii(spec: QuadratureSpec, lo, hi, min_far: float):
    diam = float(np.linalg.norm(hi - lo))
    rho = spec.near_radius if spec.near_radius is not None else 0.1 * diam
    rfar = spec.far_radius if spec.far_radius is not None else max(diam, min_far)
    if rfar < min_far:
        raise ValueError(
            f"far_radius {rfar:g} does not enclose the support (need >= {min_far:g})")
    if not 0.0 < rho < rfar:
        raise ValueError("need 0 < near_radius < far_radius")
    return rho, rfar


def _mc_seminorm(u: TestFunction, params: Params, spec: QuadratureSpec, threads: int,
                 loc_kind: int = -1, loc_data=None, min_far: float | None = None):
    kern = get_backend()
    lo, hi = _box_of(u)
    diam = float(np.linalg.norm(hi - lo))
    rho, rfar = _seminorm_radii(spec, lo, hi, min_far if min_far is not None else diam)
    u_kind, u_data, ub_kind, ub_data = u.encode()
    sphere = sphere_surface(params.N - 1)
    vol = float(np.prod(hi - lo))
    n_dim = params.N
    rswitch = 1e-7 * diam  # below this the difference quotient goes analytic
    tag = _TAG_LOCAL if loc_kind >= 0 else _TAG_SEMINORM
    ldata = loc_data if loc_data is not None else _NO_BODY

    def job(batch, count):
        rng = _rng(spec.seed, tag, batch)
        x_unif = rng.random((count, n_dim))
        near_g = rng.standard_normal((count, n_dim))
        near_v = rng.random(count)
        mid_g = rng.standard_normal((count, n_dim))
        mid_v = rng.random(count)
        return kern.seminorm_batch(u_kind, u_data, ub_kind, ub_data, lo, hi,
                                   params.p, params.s, rho, rfar, sphere, rswitch,
                                   x_unif, near_g, near_v, mid_g, mid_v,
                                   loc_kind, ldata)

    mean, se, tail, n = _reduce_batches(spec.total_samples, job, threads)
    return IntegralEstimate(value=vol * mean, std_error=vol * se,
                            samples_used=n, tail_contribution=vol * tail)


def gagliardo_seminorm_p(u: TestFunction, params: Params, spec: QuadratureSpec,
                         threads: int = 1) -> IntegralEstimate:
    """Double integral of |u(x)-u(y)|^p / |x-y|^(N+sp) over the whole product space."""
    _check_dims(u, params)
    if spec.method == "tensor_grid":
        return _tensor_seminorm_1d(u, params, spec)
    return _mc_seminorm(u, params, spec, threads)


def local_seminorm_p(u: TestFunction, omega: ConvexBody, params: Params,
                     spec: QuadratureSpec, threads: int = 1) -> IntegralEstimate:
    """Diagnostic seminorm with both variables restricted to a bounded body."""
    _check_dims(u, params)
    if omega.dim != params.N:
        raise ValueError("body dimension mismatch")
    if not geometry.is_bounded(omega):
        raise ValueError("local seminorm needs a bounded body")
    if support_margin(u, omega) < 0.0:
        raise ValueError("support of u must sit inside the body")
    if spec.method == "tensor_grid":
        raise NotImplementedError("local seminorm is Monte Carlo only")
    lo, hi = _box_of(u)
    corners = _box_corners(lo, hi)
    min_far = max(geometry.containment_radius(omega, c) for c in corners)
    kind, data = encode_body(omega)
    return _mc_seminorm(u, params, spec, threads, loc_kind=kind, loc_data=data,
                        min_far=min_far)


def _box_corners(lo, hi):
    n = lo.size
    out = []
    for mask in range(1 << n):
        out.append(np.array([hi[j] if (mask >> j) & 1 else lo[j] for j in range(n)]))
    return out


def _mc_weighted(u: TestFunction, body, p: float, sp: float, mode: int,
                 spec: QuadratureSpec, threads: int, tag: int):
    kern = get_backend()
    lo, hi = _box_of(u)
    u_kind, u_data, ub_kind, ub_data = u.encode()
    if body is not None:
        b_kind, b_data = encode_body(body)
    else:
        b_kind, b_data = 0, _NO_BODY
    vol = float(np.prod(hi - lo))
    n_dim = u.dim

    def job(batch, count):
        rng = _rng(spec.seed, tag, batch)
        x_unif = rng.random((count, n_dim))
        return kern.weighted_batch(u_kind, u_data, ub_kind, ub_data, b_kind, b_data,
                                   lo, hi, p, sp, mode, x_unif)

    mean, se, _, n = _reduce_batches(spec.total_samples, job, threads)
    return IntegralEstimate(value=vol * mean, std_error=vol * se,
                            samples_used=n, tail_contribution=0.0)


def hardy_weighted_norm(u: TestFunction, K: ConvexBody, params: Params,
                        spec: QuadratureSpec, threads: int = 1) -> IntegralEstimate:
    """Integral of |u|^p / d_K^(sp); the support must sit strictly inside K."""
    _check_dims(u, params)
    if K.dim != params.N:
        raise ValueError("body dimension mismatch")
    if support_margin(u, K) <= 0.0:
        raise ValueError("support touches the boundary: the Hardy weight is unbounded")
    if spec.method == "tensor_grid":
        return _tensor_hardy_1d(u, K, params, spec)
    return _mc_weighted(u, K, params.p, params.s * params.p, 0, spec, threads, _TAG_HARDY)


def lp_norm_p(u: TestFunction, p: float, spec: QuadratureSpec,
              threads: int = 1) -> IntegralEstimate:
    """Integral of |u|^p over the support box."""
    if spec.method == "tensor_grid":
        return _tensor_plain_1d(u, p, spec, grad=False)
    return _mc_weighted(u, None, p, 0.0, 1, spec, threads, _TAG_LP)


def grad_lp_norm_p(u: TestFunction, p: float, spec: QuadratureSpec,
                   threads: int = 1) -> IntegralEstimate:
    """Integral of |grad u|^p over the support box."""
    if spec.method == "tensor_grid":
        return _tensor_plain_1d(u, p, spec, grad=True)
    return _mc_weighted(u, None, p, 0.0, 2, spec, threads, _TAG_GRAD)


def truncated_nonlocal_operator(body: ConvexBody, x, eps: float, params: Params,
                                spec: QuadratureSpec, threads: int = 1) -> IntegralEstimate:
    """Integral of J_p(d(x)^s - d(y)^s) / |x-y|^(N+sp) over |y-x| > eps.

    Bounded bodies get an exact exterior tail (d vanishes there).  For
    half-spaces and slabs the exterior is sampled in geometric layers out
    to 10x the far radius and the remainder is extrapolated as a geometric
    series; the extrapolated remainder is added to the error bar.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    if body.dim != params.N or x.size != params.N:
        raise ValueError("dimension mismatch")
    dx = geometry.distance_to_boundary(body, x)
    if dx <= 0.0:
        raise ValueError("x must lie inside the body")
    if not 0.0 < eps < dx:
        raise ValueError("need 0 < eps < d(x)")
    if spec.method == "tensor_grid":
        return _tensor_truncated_1d(body, float(x[0]), eps, params, spec)

    kern = get_backend()
    b_kind, b_data = encode_body(body)
    sphere = sphere_surface(params.N - 1)
    sp = params.s * params.p
    bounded = geometry.is_bounded(body)
    if bounded:
        min_far = geometry.containment_radius(body, x)
        rfar = spec.far_radius if spec.far_radius is not None else min_far
        if rfar < min_far:
            raise ValueError(f"far_radius must enclose the body (need >= {min_far:g})")
    else:
        rfar = spec.far_radius if spec.far_radius is not None else 10.0 * max(dx, 1.0)

    def annulus(r_lo, r_hi, tag, samples):
        def job(batch, count):
            rng = _rng(spec.seed, tag, batch)
            dirs = rng.standard_normal((count, params.N))
            vs = rng.random(count)
            return kern.annulus_batch(b_kind, b_data, x, params.s, params.p,
                                      r_lo, r_hi, sphere, dirs, vs)
        mean, se, _, n = _reduce_batches(samples, job, threads)
        return mean, se, n

    value, se, n_used = annulus(eps, rfar, _TAG_ANNULUS, spec.total_samples)
    var = se ** 2
    tail = 0.0
    if bounded:
        # beyond rfar the whole body is out of reach, so d(y) = 0 exactly
        tail = dx ** (params.s * (params.p - 1.0)) * sphere * rfar ** (-sp) / sp
        value += tail
    else:
        layers = 6
        ratio = 10.0 ** (1.0 / layers)
        per_layer = max(spec.total_samples // (4 * layers), 1000)
        estimates = []
        r = rfar
        for k in range(layers):
            mean_k, se_k, n_k = annulus(r, r * ratio, _TAG_ANNULUS + 10 + k, per_layer)
            estimates.append(mean_k)
            value += mean_k
            var += se_k ** 2
            n_used += n_k
            r *= ratio
        # geometric-series extrapolation of the un-sampled remainder
        last, prev = estimates[-1], estimates[-2]
        remainder = 0.0
        if prev != 0.0 and abs(last) < abs(prev) and last * prev > 0.0:
            q = last / prev
            remainder = last * q / (1.0 - q)
        value += remainder
        var += remainder ** 2
    return IntegralEstimate(value=float(value), std_error=float(math.sqrt(var)),
                            samples_used=n_used, tail_contribution=float(tail))


def expedient_lhs(K: ConvexBody, x, params: Params, spec: QuadratureSpec,
                  threads: int = 1) -> IntegralEstimate:
    """Kernel integral restricted to {y in K : d(y) <= d(x)}."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if K.dim != params.N or x.size != params.N:
        raise ValueError("dimension mismatch")
    if not geometry.is_bounded(K):
        raise ValueError("the restricted-kernel bound needs a bounded body")
    dx = geometry.distance_to_boundary(K, x)
    if dx <= 0.0:
        raise ValueError("x must lie inside the body")
    if spec.method == "tensor_grid":
        return _tensor_expedient_1d(K, float(x[0]), params, spec)
    kern = get_backend()
    b_kind, b_data = encode_body(K)
    sphere = sphere_surface(params.N - 1)
    dmax = geometry.containment_radius(K, x)
    rho = spec.near_radius if spec.near_radius is not None else 0.1 * dmax
    rho = min(rho, 0.5 * dmax)
    rswitch = 1e-7 * dmax

    def job(batch, count):
        rng = _rng(spec.seed, _TAG_EXPEDIENT, batch)
        near_g = rng.standard_normal((count, params.N))
        near_v = rng.random(count)
        far_g = rng.standard_normal((count, params.N))
        far_v = rng.random(count)
        return kern.expedient_batch(b_kind, b_data, x, params.s, params.p,
                                    rho, dmax, sphere, rswitch,
                                    near_g, near_v, far_g, far_v)

    mean, se, _, n = _reduce_batches(spec.total_samples, job, threads)
    return IntegralEstimate(value=mean, std_error=se, samples_used=n,
                            tail_contribution=0.0)


# -- deterministic tensor-grid path (one dimension) ---------------------------

_GL_ORDER = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)


def _panel_nodes(breaks: np.ndarray):
    """Gauss-Legendre nodes/weights on each interval between breakpoints."""
    a = breaks[:-1]
    h = np.diff(breaks)
    nodes = (a[:, None] + 0.5 * h[:, None] * (_GL_X[None, :] + 1.0)).ravel()
    weights = (0.5 * h[:, None] * _GL_W[None, :]).ravel()
    return nodes, weights


def _graded(a: float, b: float, levels: int, toward_a: bool, ratio: float = 0.25):
    """Breakpoints of [a, b] geometrically refined toward one endpoint."""
    fracs = ratio ** np.arange(levels, 0, -1)
    if toward_a:
        pts = a + (b - a) * fracs
        return np.concatenate([[a], pts, [b]])
    pts = b - (b - a) * fracs
    return np.concatenate([[a], pts[::-1], [b]])


def _merge_breaks(a: float, b: float, interior) -> np.ndarray:
    pts = [a, b] + [p for p in interior if a < p < b]
    return np.unique(np.asarray(pts, dtype=np.float64))


def _refine_uniform(breaks: np.ndarray, total_panels: int) -> np.ndarray:
    """Subdivide intervals so the panel count reaches roughly total_panels."""
    widths = np.diff(breaks)
    alloc = np.maximum(1, np.round(total_panels * widths / widths.sum()).astype(int))
    out = [breaks[0]]
    for w, k, b in zip(widths, alloc, breaks[1:]):
        out.extend(np.linspace(b - w, b, k + 1)[1:])
    return np.unique(np.asarray(out))


def _tensor_requires_1d(u_or_body):
    if u_or_body.dim != 1:
        raise NotImplementedError("tensor_grid mode is implemented for N = 1")


def _u_scalar_fn(u: TestFunction):
    def f(pts):
        return u(np.asarray(pts, dtype=np.float64).reshape(-1, 1))
    return f


def _tensor_seminorm_1d(u: TestFunction, params: Params, spec: QuadratureSpec) -> IntegralEstimate:
    _tensor_requires_1d(u)
    s, p = params.s, params.p
    sp = s * p
    m = p * (1.0 - s)
    lo, hi = u.support_box()
    a, b = float(lo[0]), float(hi[0])
    diam = b - a
    rho = spec.near_radius if spec.near_radius is not None else 0.1 * diam
    rfar = spec.far_radius if spec.far_radius is not None else diam
    if rfar < diam:
        raise ValueError("far_radius must cover the support diameter")
    knots = np.asarray(u.knots_1d(), dtype=np.float64)
    ueval = _u_scalar_fn(u)

    outer_breaks = _refine_uniform(_merge_breaks(a, b, knots),
                                   max(spec.grid_points_per_axis // _GL_ORDER, 8))
    xs, xw = _panel_nodes(outer_breaks)
    ux = ueval(xs)
    from .functions import grad_norm
    slopes = np.asarray(grad_norm(u, xs.reshape(-1, 1)))
    rswitch = 1e-7 * diam
    evals = xs.size

    inner_vals = np.zeros_like(xs)
    for i, (x, u0) in enumerate(zip(xs, ux)):
        acc = 0.0
        slope = slopes[i]
        for w_dir in (-1.0, 1.0):
            dists = np.abs(np.concatenate([knots, [a, b]]) - x)
            dists = dists[dists > 0.0]
            near_marks = sorted({(d / rho) ** m for d in dists if d < rho})
            vb = _merge_breaks(0.0, 1.0, near_marks)
            v_breaks = np.concatenate([_graded(vb[0], vb[1], 8, True), vb[2:]])
            vn, vw = _panel_nodes(np.unique(v_breaks))
            r1 = np.maximum(rho * vn ** (1.0 / m), 1e-300)
            y = x + w_dir * r1
            dq = np.where(r1 < rswitch, slope, np.abs(u0 - ueval(y)) / r1)
            fac = np.where((y > a) & (y < b), 1.0, 2.0)
            acc += float(np.sum(vw * dq ** p * fac)) * rho ** m / m
            mid_marks = sorted({d for d in dists if rho < d < rfar})
            mb = _merge_breaks(rho, rfar, mid_marks)
            # log-spaced refinement matches the kernel decay
            seg = [np.exp(np.linspace(np.log(mb[j]), np.log(mb[j + 1]), 7))
                   for j in range(mb.size - 1)]
            rn, rw = _panel_nodes(np.unique(np.concatenate(seg)))
            y = x + w_dir * rn
            du = np.abs(u0 - ueval(y))
            fac = np.where((y > a) & (y < b), 1.0, 2.0)
            acc += float(np.sum(rw * du ** p * rn ** (-1.0 - sp) * fac))
            evals += vn.size + rn.size
        inner_vals[i] = acc
    tail = 2.0 * ux ** p * 2.0 * rfar ** (-sp) / sp
    total = float(np.sum(xw * (inner_vals + tail)))
    tail_part = float(np.sum(xw * tail))
    return IntegralEstimate(value=total, std_error=0.0, samples_used=evals,
                            tail_contribution=tail_part)


def _interval_of(body: ConvexBody) -> tuple[float, float]:
    lo, hi = geometry.bounding_box(body)
    return float(lo[0]), float(hi[0])


def _tensor_hardy_1d(u: TestFunction, K: ConvexBody, params: Params,
                     spec: QuadratureSpec) -> IntegralEstimate:
    _tensor_requires_1d(u)
    sp = params.s * params.p
    lo, hi = u.support_box()
    a, b = float(lo[0]), float(hi[0])
    ka, kb = _interval_of(K)
    interior = list(u.knots_1d()) + [0.5 * (ka + kb)]
    breaks = _refine_uniform(_merge_breaks(a, b, interior),
                             max(spec.grid_points_per_axis // _GL_ORDER, 8))
    xs, xw = _panel_nodes(breaks)
    uvals = _u_scalar_fn(u)(xs)
    d = geometry.distance_to_boundary(K, xs.reshape(-1, 1))
    vals = np.where(uvals > 0.0, uvals ** params.p * np.where(d > 0, d, 1.0) ** (-sp), 0.0)
    return IntegralEstimate(value=float(np.sum(xw * vals)), std_error=0.0,
                            samples_used=xs.size, tail_contribution=0.0)


def _tensor_plain_1d(u: TestFunction, p: float, spec: QuadratureSpec,
                     grad: bool) -> IntegralEstimate:
    _tensor_requires_1d(u)
    lo, hi = u.support_box()
    a, b = float(lo[0]), float(hi[0])
    breaks = _refine_uniform(_merge_breaks(a, b, list(u.knots_1d())),
                             max(spec.grid_points_per_axis // _GL_ORDER, 8))
    xs, xw = _panel_nodes(breaks)
    if grad:
        from .functions import grad_norm
        vals = np.asarray(grad_norm(u, xs.reshape(-1, 1))) ** p
    else:
        vals = _u_scalar_fn(u)(xs) ** p
    return IntegralEstimate(value=float(np.sum(xw * vals)), std_error=0.0,
                            samples_used=xs.size, tail_contribution=0.0)


def _jp_scalar(t: float, p: float) -> float:
    return 0.0 if t == 0.0 else abs(t) ** (p - 2.0) * t


def _tensor_truncated_1d(body: ConvexBody, x: float, eps: float, params: Params,
                         spec: QuadratureSpec) -> IntegralEstimate:
    s, p = params.s, params.p
    sp = s * p
    dxs = geometry.distance_to_boundary(body, np.array([x])) ** s
    dfun = lambda ys: geometry.distance_to_boundary(body, np.asarray(ys).reshape(-1, 1))

    def segment(lo: float, hi: float, toward: float | None, interior=()):
        """Integral of J_p(dxs - d(y)^s) |x-y|^(-1-sp) over [lo, hi]."""
        if hi <= lo:
            return 0.0, 0
        br = _merge_breaks(lo, hi, interior)
        parts = []
        for j in range(br.size - 1):
            aa, bb = br[j], br[j + 1]
            if toward is not None and abs(aa - toward) < abs(bb - toward):
                parts.append(_graded(aa, bb, 10, True))
            elif toward is not None:
                parts.append(_graded(aa, bb, 10, False))
            else:
                parts.append(np.linspace(aa, bb, 9))
        ys, yw = _panel_nodes(np.unique(np.concatenate(parts)))
        dys = dfun(ys) ** s
        jp = np.where(dxs - dys == 0.0, 0.0,
                      np.abs(dxs - dys) ** (p - 2.0) * (dxs - dys))
        vals = jp * np.abs(x - ys) ** (-1.0 - sp)
        return float(np.sum(yw * vals)), ys.size

    evals = 0
    value = 0.0
    if isinstance(body, geometry.HalfSpace):
        # work in distance coordinates t = d(y); the 1-d map is an isometry
        dx = float(geometry.distance_to_boundary(body, np.array([x])))
        tail = _jp_scalar(float(dxs), p) * dx ** (-sp) / sp  # d = 0 behind the wall
        value += tail
        v1, n1 = _half_inside_segments(body, x, dx, eps, params)
        value += v1
        evals += n1
    else:
        ka, kb = _interval_of(body)
        mid = 0.5 * (ka + kb)
        # exterior: d = 0 exactly
        tail = _jp_scalar(float(dxs), p) * ((x - ka) ** (-sp) + (kb - x) ** (-sp)) / sp
        value += tail
        v1, n1 = segment(ka, x - eps, toward=x - eps, interior=[mid])
        v2, n2 = segment(x + eps, kb, toward=x + eps, interior=[mid])
        value += v1 + v2
        evals += n1 + n2
    return IntegralEstimate(value=value, std_error=0.0, samples_used=evals,
                            tail_contribution=float(tail))


def _half_inside_segments(body: geometry.HalfSpace, x: float, dx: float, eps: float,
                          params: Params):
    """Half-line side of the truncated operator in distance coordinates."""
    s, p = params.s, params.p
    sp = s * p
    # with t the distance coordinate, d(y) = t and the point sits at t = dx
    def dpow(t):
        return np.maximum(t, 0.0) ** s

    dxs = dx ** s
    evals = 0
    total = 0.0
    # wall side: t in [0, dx - eps]
    if dx - eps > 0:
        brk = np.unique(np.concatenate([
            _graded(0.0, min(0.5 * dx, dx - eps), 10, True),
            _graded(min(0.5 * dx, dx - eps), dx - eps, 10, False)]))
        ts, tw = _panel_nodes(brk)
        jp = np.sign(dxs - dpow(ts)) * np.abs(dxs - dpow(ts)) ** (p - 1.0)
        total += float(np.sum(tw * jp * np.abs(dx - ts) ** (-1.0 - sp)))
        evals += ts.size
    # open side: t in [dx + eps, T] by panels, beyond T via v = (t - dx)^-s
    T = dx + max(4.0 * dx, 4.0)
    brk = np.unique(np.concatenate([_graded(dx + eps, dx + 1.0, 12, True),
                                    np.linspace(dx + 1.0, T, 17)]))
    ts, tw = _panel_nodes(brk)
    jp = np.sign(dxs - dpow(ts)) * np.abs(dxs - dpow(ts)) ** (p - 1.0)
    total += float(np.sum(tw * jp * np.abs(dx - ts) ** (-1.0 - sp)))
    evals += ts.size
    vmax = (T - dx) ** (-s)
    vb = _graded(0.0, vmax, 12, True)
    vn, vw = _panel_nodes(vb)
    tvals = dx + vn ** (-1.0 / s)
    jp = np.sign(dxs - dpow(tvals)) * np.abs(dxs - dpow(tvals)) ** (p - 1.0)
    total += float(np.sum(vw * jp * vn ** (p - 1.0) / s))
    evals += vn.size
    return total, evals


def _tensor_expedient_1d(K: ConvexBody, x: float, params: Params,
                         spec: QuadratureSpec) -> IntegralEstimate:
    s, p = params.s, params.p
    sp = s * p
    ka, kb = _interval_of(K)
    dx = float(geometry.distance_to_boundary(K, np.array([x])))
    segs = []
    left_end = min(ka + dx, kb)
    right_start = max(kb - dx, ka)
    if right_start <= left_end:
        segs.append((ka, kb))
    else:
        segs.append((ka, left_end))
        segs.append((right_start, kb))
    dfun = lambda ys: geometry.distance_to_boundary(K, np.asarray(ys).reshape(-1, 1))
    mid = 0.5 * (ka + kb)
    value = 0.0
    evals = 0
    for lo, hi in segs:
        br = _merge_breaks(lo, hi, [mid, x])
        parts = []
        for j in range(br.size - 1):
            aa, bb = br[j], br[j + 1]
            if abs(aa - x) < 1e-300:
                parts.append(_graded(aa, bb, 14, True))
            elif abs(bb - x) < 1e-300:
                parts.append(_graded(aa, bb, 14, False))
            else:
                parts.append(np.linspace(aa, bb, 9))
        ys, yw = _panel_nodes(np.unique(np.concatenate(parts)))
        dys = dfun(ys)
        vals = np.abs(dx - dys) ** p * np.abs(x - ys) ** (-1.0 - sp)
        value += float(np.sum(yw * vals))
        evals += ys.size
    return IntegralEstimate(value=value, std_error=0.0, samples_used=evals,
                            tail_contribution=0.0)
