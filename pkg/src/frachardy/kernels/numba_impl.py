"""Numba-jitted batch kernels, arithmetic-identical to the numpy versions.

Sample loops release the GIL so the batch pool gets real parallelism.
Accumulation is sequential within a batch; the driver reduces batches in
a fixed order, so results are reproducible for a fixed seed no matter
how many threads run.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

BACKEND_NAME = "numba"

_JIT = dict(cache=True, nogil=True, fastmath=False)


@njit(**_JIT)
def _d_scalar(b_kind, b_data, x):
    n = x.size
    if b_kind == 0:
        acc = 0.0
        for j in range(n):
            t = x[j] - b_data[0, 1 + j]
            acc += t * t
        d = b_data[0, 0] - math.sqrt(acc)
    else:
        d = 1e300
        for i in range(b_data.shape[0]):
            acc = b_data[i, 0]
            for j in range(n):
                acc -= b_data[i, 1 + j] * x[j]
            if acc < d:
                d = acc
    return d if d > 0.0 else 0.0


@njit(**_JIT)
def _u_scalar(tf_kind, tf_data, b_kind, b_data, x):
    n = x.size
    if tf_kind == 0:
        q = tf_data[0, 0]
        r = tf_data[0, 1]
        acc = 0.0
        for j in range(n):
            t = x[j] - tf_data[0, 2 + j]
            acc += t * t
        t2 = acc / (r * r)
        if t2 >= 1.0:
            return 0.0
        return (1.0 - t2) ** q
    if tf_kind == 1:
        prod = 1.0
        for j in range(n):
            t = (x[j] - tf_data[j, 0]) / tf_data[j, 1]
            if t <= -1.0 or t >= 1.0:
                return 0.0
            prod *= (1.0 - t * t) ** tf_data[j, 2]
        return prod
    beta = tf_data[0, 0]
    cap = tf_data[0, 1]
    d = _d_scalar(b_kind, b_data, x)
    if d > cap:
        d = cap
    return d ** beta


@njit(**_JIT)
def _grad_norm_scalar(tf_kind, tf_data, b_kind, b_data, x):
    n = x.size
    if tf_kind == 0:
        q = tf_data[0, 0]
        r = tf_data[0, 1]
        acc = 0.0
        for j in range(n):
            t = x[j] - tf_data[0, 2 + j]
            acc += t * t
        t2 = acc / (r * r)
        if t2 >= 1.0:
            return 0.0
        return 2.0 * q / (r * r) * (1.0 - t2) ** (q - 1.0) * math.sqrt(acc)
    if tf_kind == 1:
        g2 = 0.0
        for j in range(n):
            tj = (x[j] - tf_data[j, 0]) / tf_data[j, 1]
            if tj <= -1.0 or tj >= 1.0:
                return 0.0
            base = 1.0 - tj * tj
            dfj = -2.0 * tf_data[j, 2] * tj / tf_data[j, 1] * base ** (tf_data[j, 2] - 1.0)
            others = 1.0
            for k in range(n):
                if k != j:
                    tk = (x[k] - tf_data[k, 0]) / tf_data[k, 1]
                    others *= (1.0 - tk * tk) ** tf_data[k, 2]
            g2 += (dfj * others) * (dfj * others)
        return math.sqrt(g2)
    beta = tf_data[0, 0]
    cap = tf_data[0, 1]
    d = _d_scalar(b_kind, b_data, x)
    if d <= 0.0 or d >= cap:
        return 0.0
    return beta * d ** (beta - 1.0)


@njit(**_JIT)
def _jp_scalar(t, p):
    if t == 0.0:
        return 0.0
    return abs(t) ** (p - 2.0) * t


@njit(**_JIT)
def _body_dirderiv_scalar(b_kind, b_data, x, w):
    n = x.size
    if b_kind == 0:
        acc = 0.0
        dot = 0.0
        for j in range(n):
            rel = x[j] - b_data[0, 1 + j]
            acc += rel * rel
            dot += rel * w[j]
        nrm = math.sqrt(acc)
        if nrm < 1e-300:
            nrm = 1e-300
        return -dot / nrm
    best = 1e300
    face = 0
    for i in range(b_data.shape[0]):
        slack = b_data[i, 0]
        for j in range(n):
            slack -= b_data[i, 1 + j] * x[j]
        if slack < best:
            best = slack
            face = i
    dot = 0.0
    for j in range(n):
        dot += b_data[face, 1 + j] * w[j]
    return -dot


@njit(**_JIT)
def _tf_dirderiv_scalar(tf_kind, tf_data, b_kind, b_data, x, w):
    n = x.size
    if tf_kind == 0:
        q = tf_data[0, 0]
        r = tf_data[0, 1]
        acc = 0.0
        dot = 0.0
        for j in range(n):
            rel = x[j] - tf_data[0, 2 + j]
            acc += rel * rel
            dot += rel * w[j]
        t2 = acc / (r * r)
        if t2 >= 1.0:
            return 0.0
        return -2.0 * q / (r * r) * (1.0 - t2) ** (q - 1.0) * dot
    if tf_kind == 1:
        out = 0.0
        for j in range(n):
            tj = (x[j] - tf_data[j, 0]) / tf_data[j, 1]
            if tj <= -1.0 or tj >= 1.0:
                return 0.0
            base = 1.0 - tj * tj
            dfj = -2.0 * tf_data[j, 2] * tj / tf_data[j, 1] * base ** (tf_data[j, 2] - 1.0)
            others = 1.0
            for k in range(n):
                if k != j:
                    tk = (x[k] - tf_data[k, 0]) / tf_data[k, 1]
                    others *= (1.0 - tk * tk) ** tf_data[k, 2]
            out += dfj * others * w[j]
        return out
    beta = tf_data[0, 0]
    cap = tf_data[0, 1]
    d = _d_scalar(b_kind, b_data, x)
    if d <= 0.0 or d >= cap:
        return 0.0
    return beta * d ** (beta - 1.0) * _body_dirderiv_scalar(b_kind, b_data, x, w)


@njit(**_JIT)
def seminorm_batch(u_kind, u_data, ub_kind, ub_data, lo, hi, p, s, rho, rfar, sphere,
                   rswitch, x_unif, near_g, near_v, mid_g, mid_v, loc_kind, loc_data):
    n = x_unif.shape[0]
    dim = x_unif.shape[1]
    sp = s * p
    m = p * (1.0 - s)
    c_near = sphere * rho ** m / m
    t_lo = rho ** (-sp)
    t_hi = rfar ** (-sp)
    c_mid = sphere * (t_lo - t_hi) / sp
    tail_coef = 2.0 * sphere * rfar ** (-sp) / sp

    x = np.empty(dim)
    y = np.empty(dim)
    w = np.empty(dim)
    sum_z = 0.0
    sum_z2 = 0.0
    sum_tail = 0.0
    for i in range(n):
        for j in range(dim):
            x[j] = lo[j] + x_unif[i, j] * (hi[j] - lo[j])
        ux = _u_scalar(u_kind, u_data, ub_kind, ub_data, x)

        nrm = 0.0
        for j in range(dim):
            nrm += near_g[i, j] * near_g[i, j]
        nrm = math.sqrt(nrm)
        if nrm < 1e-300:
            nrm = 1e-300
        rad1 = rho * (1.0 - near_v[i]) ** (1.0 / m)
        if rad1 < 1e-300:
            rad1 = 1e-300
        inbox1 = True
        for j in range(dim):
            w[j] = near_g[i, j] / nrm
            y[j] = x[j] + rad1 * w[j]
            if y[j] <= lo[j] or y[j] >= hi[j]:
                inbox1 = False
        if rad1 < rswitch:
            dq = abs(_tf_dirderiv_scalar(u_kind, u_data, ub_kind, ub_data, x, w))
        else:
            u1 = _u_scalar(u_kind, u_data, ub_kind, ub_data, y)
            dq = abs(ux - u1) / rad1
        w1 = c_near * dq ** p
        if not inbox1:
            w1 *= 2.0
        if loc_kind >= 0 and _d_scalar(loc_kind, loc_data, y) <= 0.0:
            w1 = 0.0

        nrm = 0.0
        for j in range(dim):
            nrm += mid_g[i, j] * mid_g[i, j]
        nrm = math.sqrt(nrm)
        if nrm < 1e-300:
            nrm = 1e-300
        rad2 = (t_lo - mid_v[i] * (t_lo - t_hi)) ** (-1.0 / sp)
        inbox2 = True
        for j in range(dim):
            y[j] = x[j] + rad2 * mid_g[i, j] / nrm
            if y[j] <= lo[j] or y[j] >= hi[j]:
                inbox2 = False
        u2 = _u_scalar(u_kind, u_data, ub_kind, ub_data, y)
        w2 = c_mid * abs(ux - u2) ** p
        if not inbox2:
            w2 *= 2.0
        if loc_kind >= 0 and _d_scalar(loc_kind, loc_data, y) <= 0.0:
            w2 = 0.0

        if loc_kind >= 0:
            tail = 0.0
            z = w1 + w2
            if _d_scalar(loc_kind, loc_data, x) <= 0.0:
                z = 0.0
        else:
            tail = ux ** p * tail_coef
            z = w1 + w2 + tail
        sum_z += z
        sum_z2 += z * z
        sum_tail += tail
    return sum_z, sum_z2, sum_tail, n


@njit(**_JIT)
def weighted_batch(u_kind, u_data, ub_kind, ub_data, b_kind, b_data,
                   lo, hi, p, sp, mode, x_unif):
    n = x_unif.shape[0]
    dim = x_unif.shape[1]
    x = np.empty(dim)
    sum_z = 0.0
    sum_z2 = 0.0
    for i in range(n):
        for j in range(dim):
            x[j] = lo[j] + x_unif[i, j] * (hi[j] - lo[j])
        if mode == 2:
            g = _grad_norm_scalar(u_kind, u_data, ub_kind, ub_data, x)
            z = g ** p
        else:
            ux = _u_scalar(u_kind, u_data, ub_kind, ub_data, x)
            if mode == 0:
                if ux > 0.0:
                    d = _d_scalar(b_kind, b_data, x)
                    z = ux ** p * d ** (-sp)
                else:
                    z = 0.0
            else:
                z = ux ** p
        sum_z += z
        sum_z2 += z * z
    return sum_z, sum_z2, 0.0, n


@njit(**_JIT)
def annulus_batch(b_kind, b_data, x, s, p, r_lo, r_hi, sphere, dirs, vs):
    n = dirs.shape[0]
    dim = dirs.shape[1]
    sp = s * p
    t_lo = r_lo ** (-sp)
    t_hi = r_hi ** (-sp)
    c = sphere * (t_lo - t_hi) / sp
    dxs = _d_scalar(b_kind, b_data, x) ** s
    y = np.empty(dim)
    sum_z = 0.0
    sum_z2 = 0.0
    for i in range(n):
        nrm = 0.0
        for j in range(dim):
            nrm += dirs[i, j] * dirs[i, j]
        nrm = math.sqrt(nrm)
        if nrm < 1e-300:
            nrm = 1e-300
        rad = (t_lo - vs[i] * (t_lo - t_hi)) ** (-1.0 / sp)
        for j in range(dim):
            y[j] = x[j] + rad * dirs[i, j] / nrm
        dys = _d_scalar(b_kind, b_data, y) ** s
        z = c * _jp_scalar(dxs - dys, p)
        sum_z += z
        sum_z2 += z * z
    return sum_z, sum_z2, 0.0, n


@njit(**_JIT)
def expedient_batch(b_kind, b_data, x, s, p, rho, dmax, sphere, rswitch,
                    near_g, near_v, far_g, far_v):
    n = near_g.shape[0]
    dim = near_g.shape[1]
    sp = s * p
    m = p * (1.0 - s)
    c_near = sphere * rho ** m / m
    t_lo = rho ** (-sp)
    t_hi = dmax ** (-sp)
    c_mid = sphere * (t_lo - t_hi) / sp
    dx = _d_scalar(b_kind, b_data, x)
    y = np.empty(dim)
    w = np.empty(dim)
    sum_z = 0.0
    sum_z2 = 0.0
    for i in range(n):
        nrm = 0.0
        for j in range(dim):
            nrm += near_g[i, j] * near_g[i, j]
        nrm = math.sqrt(nrm)
        if nrm < 1e-300:
            nrm = 1e-300
        rad1 = rho * (1.0 - near_v[i]) ** (1.0 / m)
        if rad1 < 1e-300:
            rad1 = 1e-300
        for j in range(dim):
            w[j] = near_g[i, j] / nrm
            y[j] = x[j] + rad1 * w[j]
        z = 0.0
        if rad1 < rswitch:
            bdir = _body_dirderiv_scalar(b_kind, b_data, x, w)
            if bdir <= 0.0:
                z += c_near * abs(bdir) ** p
        else:
            d1 = _d_scalar(b_kind, b_data, y)
            if d1 > 0.0 and d1 <= dx:
                z += c_near * (abs(dx - d1) / rad1) ** p

        nrm = 0.0
        for j in range(dim):
            nrm += far_g[i, j] * far_g[i, j]
        nrm = math.sqrt(nrm)
        if nrm < 1e-300:
            nrm = 1e-300
        rad2 = (t_lo - far_v[i] * (t_lo - t_hi)) ** (-1.0 / sp)
        for j in range(dim):
            y[j] = x[j] + rad2 * far_g[i, j] / nrm
        d2 = _d_scalar(b_kind, b_data, y)
        if d2 > 0.0 and d2 <= dx:
            z += c_mid * abs(dx - d2) ** p
        sum_z += z
        sum_z2 += z * z
    return sum_z, sum_z2, 0.0, n
