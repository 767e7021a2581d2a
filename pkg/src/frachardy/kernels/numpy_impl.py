"""Pure-numpy batch kernels for the Monte Carlo estimators.

Each kernel consumes pre-drawn random arrays for one batch and returns
partial sums (sum, sum of squares, tail sum, count).  The numba backend
mirrors the arithmetic sample by sample; only summation order differs.

Body encoding: kind 0 = ball with data [[radius, center...]], kind 1 =
face matrix with rows [offset, normal...].  Function encoding: kind 0 =
radial bump [[q, r, center...]], kind 1 = per-axis rows [center, radius,
exponent], kind 2 = distance profile [[exponent, cap]] with the body
attached.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"


def body_distance(b_kind: int, b_data: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Distance to the boundary, 0 outside; pts has shape (M, N)."""
    if b_kind == 0:
        d = b_data[0, 0] - np.sqrt(np.sum((pts - b_data[0, 1:]) ** 2, axis=1))
    else:
        d = np.min(b_data[:, 0][None, :] - pts @ b_data[:, 1:].T, axis=1)
    return np.maximum(d, 0.0)


def tf_eval(tf_kind: int, tf_data: np.ndarray, b_kind: int, b_data: np.ndarray,
            pts: np.ndarray) -> np.ndarray:
    if tf_kind == 0:
        q, r = tf_data[0, 0], tf_data[0, 1]
        t2 = np.sum((pts - tf_data[0, 2:]) ** 2, axis=1) / (r * r)
        return np.where(t2 < 1.0, (1.0 - np.minimum(t2, 1.0)) ** q, 0.0)
    if tf_kind == 1:
        c, r, q = tf_data[:, 0], tf_data[:, 1], tf_data[:, 2]
        t = (pts - c) / r
        f = np.where(np.abs(t) < 1.0, (1.0 - np.minimum(t * t, 1.0)) ** q, 0.0)
        return np.prod(f, axis=1)
    beta, cap = tf_data[0, 0], tf_data[0, 1]
    d = body_distance(b_kind, b_data, pts)
    return np.minimum(d, cap) ** beta


def tf_grad_norm(tf_kind: int, tf_data: np.ndarray, b_kind: int, b_data: np.ndarray,
                 pts: np.ndarray) -> np.ndarray:
    if tf_kind == 0:
        q, r = tf_data[0, 0], tf_data[0, 1]
        rel = pts - tf_data[0, 2:]
        t2 = np.sum(rel ** 2, axis=1) / (r * r)
        coeff = np.where(t2 < 1.0,
                         2.0 * q / (r * r) * (1.0 - np.minimum(t2, 1.0)) ** (q - 1.0), 0.0)
        return coeff * np.sqrt(np.sum(rel ** 2, axis=1))
    if tf_kind == 1:
        c, r, q = tf_data[:, 0], tf_data[:, 1], tf_data[:, 2]
        t = (pts - c) / r
        inside = np.abs(t) < 1.0
        base = np.where(inside, 1.0 - np.minimum(t * t, 1.0), 0.0)
        f = base ** q
        df = np.where(inside, -2.0 * q * t / r * base ** (q - 1.0), 0.0)
        g2 = np.zeros(pts.shape[0])
        for j in range(pts.shape[1]):
            others = np.prod(np.delete(f, j, axis=1), axis=1) if pts.shape[1] > 1 else np.ones(pts.shape[0])
            g2 += (df[:, j] * others) ** 2
        return np.sqrt(g2)
    beta, cap = tf_data[0, 0], tf_data[0, 1]
    d = body_distance(b_kind, b_data, pts)
    return np.where((d > 0.0) & (d < cap), beta * d ** (beta - 1.0), 0.0)


def body_dirderiv(b_kind: int, b_data: np.ndarray, pts: np.ndarray,
                  dirs: np.ndarray) -> np.ndarray:
    """Directional derivative of the distance function at interior points."""
    if b_kind == 0:
        rel = pts - b_data[0, 1:]
        nrm = np.maximum(np.sqrt(np.sum(rel ** 2, axis=1)), 1e-300)
        return -np.sum(rel * dirs, axis=1) / nrm
    slack = b_data[:, 0][None, :] - pts @ b_data[:, 1:].T
    face = np.argmin(slack, axis=1)
    return -np.sum(b_data[face, 1:] * dirs, axis=1)


def tf_dirderiv(tf_kind: int, tf_data: np.ndarray, b_kind: int, b_data: np.ndarray,
                pts: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Directional derivative of the test function (a.e. defined)."""
    if tf_kind == 0:
        q, r = tf_data[0, 0], tf_data[0, 1]
        rel = pts - tf_data[0, 2:]
        t2 = np.sum(rel ** 2, axis=1) / (r * r)
        coeff = np.where(t2 < 1.0,
                         -2.0 * q / (r * r) * (1.0 - np.minimum(t2, 1.0)) ** (q - 1.0), 0.0)
        return coeff * np.sum(rel * dirs, axis=1)
    if tf_kind == 1:
        c, r, q = tf_data[:, 0], tf_data[:, 1], tf_data[:, 2]
        t = (pts - c) / r
        inside = np.abs(t) < 1.0
        base = np.where(inside, 1.0 - np.minimum(t * t, 1.0), 0.0)
        f = base ** q
        df = np.where(inside, -2.0 * q * t / r * base ** (q - 1.0), 0.0)
        out = np.zeros(pts.shape[0])
        for j in range(pts.shape[1]):
            others = np.prod(np.delete(f, j, axis=1), axis=1) if pts.shape[1] > 1 else np.ones(pts.shape[0])
            out += df[:, j] * others * dirs[:, j]
        return out
    beta, cap = tf_data[0, 0], tf_data[0, 1]
    d = body_distance(b_kind, b_data, pts)
    slope = np.where((d > 0.0) & (d < cap), beta * d ** (beta - 1.0), 0.0)
    return slope * body_dirderiv(b_kind, b_data, pts, dirs)


def _unit_dirs(gauss: np.ndarray) -> np.ndarray:
    nrm = np.sqrt(np.sum(gauss ** 2, axis=1))
    nrm = np.maximum(nrm, 1e-300)
    return gauss / nrm[:, None]


def _in_open_box(pts: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    return np.all((pts > lo) & (pts < hi), axis=1)


def _jp(t: np.ndarray, p: float) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(t == 0.0, 0.0, np.abs(t) ** (p - 2.0) * t)


def seminorm_batch(u_kind, u_data, ub_kind, ub_data, lo, hi, p, s, rho, rfar, sphere,
                   rswitch, x_unif, near_g, near_v, mid_g, mid_v,
                   loc_kind=-1, loc_data=None):
    """One batch of the Gagliardo seminorm estimator.

    Near stratum: radius density ~ rho^(p(1-s)-1) on (0, rho]; mid stratum:
    ~ rho^(-1-sp) on (rho, rfar]; beyond rfar the function vanishes and the
    tail integrates in closed form.  Below the switch radius the difference
    quotient |u(x)-u(y)|/|x-y| cancels catastrophically in floats and is
    replaced by the analytic directional derivative.  Off-box targets count
    twice (the symmetric x-outside half).  With loc_kind >= 0 both variables
    are restricted to that body instead and the tail is dropped.
    """
    sp = s * p
    m = p * (1.0 - s)
    x = lo + x_unif * (hi - lo)
    ux = tf_eval(u_kind, u_data, ub_kind, ub_data, x)

    v = 1.0 - near_v
    rad1 = np.maximum(rho * v ** (1.0 / m), 1e-300)
    dirs1 = _unit_dirs(near_g)
    y1 = x + rad1[:, None] * dirs1
    u1 = tf_eval(u_kind, u_data, ub_kind, ub_data, y1)
    tiny = rad1 < rswitch
    dq = np.where(tiny,
                  np.abs(tf_dirderiv(u_kind, u_data, ub_kind, ub_data, x, dirs1)),
                  np.abs(ux - u1) / rad1)
    c_near = sphere * rho ** m / m
    w1 = c_near * dq ** p
    f1 = np.where(_in_open_box(y1, lo, hi), 1.0, 2.0)

    t_lo = rho ** (-sp)
    t_hi = rfar ** (-sp)
    rad2 = (t_lo - mid_v * (t_lo - t_hi)) ** (-1.0 / sp)
    y2 = x + rad2[:, None] * _unit_dirs(mid_g)
    u2 = tf_eval(u_kind, u_data, ub_kind, ub_data, y2)
    c_mid = sphere * (t_lo - t_hi) / sp
    w2 = c_mid * np.abs(ux - u2) ** p
    f2 = np.where(_in_open_box(y2, lo, hi), 1.0, 2.0)

    if loc_kind >= 0:
        w1 = w1 * (body_distance(loc_kind, loc_data, y1) > 0.0)
        w2 = w2 * (body_distance(loc_kind, loc_data, y2) > 0.0)
        tail = np.zeros_like(ux)
        xin = body_distance(loc_kind, loc_data, x) > 0.0
        z = (w1 * f1 + w2 * f2) * xin
    else:
        tail = 2.0 * ux ** p * sphere * rfar ** (-sp) / sp
        z = w1 * f1 + w2 * f2 + tail

    return float(np.sum(z)), float(np.sum(z * z)), float(np.sum(tail)), z.size


def weighted_batch(u_kind, u_data, ub_kind, ub_data, b_kind, b_data,
                   lo, hi, p, sp, mode, x_unif):
    """Pointwise integrals over the support box.

    mode 0: |u|^p d^(-sp) (Hardy weight), 1: |u|^p, 2: |grad u|^p.
    """
    x = lo + x_unif * (hi - lo)
    if mode == 2:
        g = tf_grad_norm(u_kind, u_data, ub_kind, ub_data, x)
        z = g ** p
    else:
        ux = tf_eval(u_kind, u_data, ub_kind, ub_data, x)
        if mode == 0:
            d = body_distance(b_kind, b_data, x)
            z = np.where(ux > 0.0, ux ** p * np.where(d > 0.0, d, 1.0) ** (-sp), 0.0)
        else:
            z = ux ** p
    return float(np.sum(z)), float(np.sum(z * z)), 0.0, z.size


def annulus_batch(b_kind, b_data, x, s, p, r_lo, r_hi, sphere, dirs, vs):
    """Truncated nonlocal operator over one annulus r_lo < |y-x| <= r_hi."""
    sp = s * p
    t_lo = r_lo ** (-sp)
    t_hi = r_hi ** (-sp)
    rad = (t_lo - vs * (t_lo - t_hi)) ** (-1.0 / sp)
    y = x[None, :] + rad[:, None] * _unit_dirs(dirs)
    dxs = body_distance(b_kind, b_data, x[None, :])[0] ** s
    dys = body_distance(b_kind, b_data, y) ** s
    c = sphere * (t_lo - t_hi) / sp
    z = c * _jp(dxs - dys, p)
    return float(np.sum(z)), float(np.sum(z * z)), 0.0, z.size


def expedient_batch(b_kind, b_data, x, s, p, rho, dmax, sphere, rswitch,
                    near_g, near_v, far_g, far_v):
    """Restricted kernel integral over {y in K : d(y) <= d(x)}."""
    sp = s * p
    m = p * (1.0 - s)
    dx = body_distance(b_kind, b_data, x[None, :])[0]

    v = 1.0 - near_v
    rad1 = np.maximum(rho * v ** (1.0 / m), 1e-300)
    dirs1 = _unit_dirs(near_g)
    y1 = x[None, :] + rad1[:, None] * dirs1
    d1 = body_distance(b_kind, b_data, y1)
    tiny = rad1 < rswitch
    bdir = body_dirderiv(b_kind, b_data, np.broadcast_to(x, y1.shape).copy(), dirs1)
    ind1 = np.where(tiny, bdir <= 0.0, (d1 > 0.0) & (d1 <= dx))
    dq = np.where(tiny, np.abs(bdir), np.abs(dx - d1) / rad1)
    c_near = sphere * rho ** m / m
    w1 = c_near * dq ** p * ind1

    t_lo = rho ** (-sp)
    t_hi = dmax ** (-sp)
    rad2 = (t_lo - far_v * (t_lo - t_hi)) ** (-1.0 / sp)
    y2 = x[None, :] + rad2[:, None] * _unit_dirs(far_g)
    d2 = body_distance(b_kind, b_data, y2)
    ind2 = (d2 > 0.0) & (d2 <= dx)
    c_mid = sphere * (t_lo - t_hi) / sp
    w2 = c_mid * np.abs(dx - d2) ** p * ind2

    z = w1 + w2
    return float(np.sum(z)), float(np.sum(z * z)), 0.0, z.size
