"""Vectorised numpy kernels; same signatures and layouts as ``_numba.py``."""

import math

import numpy as np

PI = math.pi
TWO_PI = 2.0 * math.pi


def wrap_angle(a):
    return a - TWO_PI * np.ceil((a - PI) / TWO_PI)


def wrap_positive(a):
    r = a - TWO_PI * np.floor(a / TWO_PI)
    return np.where(r >= TWO_PI, 0.0, r)


def config_distance(a, b, w_ang):
    return float(config_distances(np.asarray(a)[None, :], b, w_ang)[0])


def config_distances(Q, q, w_ang):
    d = q[None, :] - Q
    d1 = wrap_angle(d[:, 2])
    d2 = wrap_angle(d[:, 3])
    return np.sqrt(d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1] + w_ang * d1 * d1 + w_ang * d2 * d2)


def n_steps(dist, resolution):
    return max(2, int(math.ceil(dist / resolution)) + 1)


def interpolate(qa, qb, n):
    t = np.arange(n) / (n - 1)
    out = np.empty((n, 4))
    out[:, 0] = qa[0] + t * (qb[0] - qa[0])
    out[:, 1] = qa[1] + t * (qb[1] - qa[1])
    out[:, 2] = wrap_positive(qa[2] + t * wrap_angle(qb[2] - qa[2]))
    out[:, 3] = wrap_positive(qa[3] + t * wrap_angle(qb[3] - qa[3]))
    out[0] = qa
    out[-1] = qb
    return out


def forward_points(Q, geom, offsets):
    n = Q.shape[0]
    out = np.empty((n, 3 + offsets.shape[0], 2))
    c1 = np.cos(Q[:, 2])
    s1 = np.sin(Q[:, 2])
    c12 = np.cos(Q[:, 2] + Q[:, 3])
    s12 = np.sin(Q[:, 2] + Q[:, 3])
    out[:, 0, 0] = Q[:, 0]
    out[:, 0, 1] = Q[:, 1]
    out[:, 1, 0] = Q[:, 0] + geom[0] * c1
    out[:, 1, 1] = Q[:, 1] + geom[0] * s1
    out[:, 2, 0] = out[:, 1, 0] + geom[1] * c12
    out[:, 2, 1] = out[:, 1, 1] + geom[1] * s12
    dx = offsets[None, :, 0]
    dy = offsets[None, :, 1]
    out[:, 3:, 0] = out[:, 2, 0, None] + c12[:, None] * dx - s12[:, None] * dy
    out[:, 3:, 1] = out[:, 2, 1, None] + s12[:, None] * dx + c12[:, None] * dy
    return out


def _agf_raw(persons, x, y):
    """Broadcast persons ``(H, 1)`` columns against query arrays."""
    px = persons[:, 0, None]
    py = persons[:, 1, None]
    th = persons[:, 2, None]
    dx = x[None, :] - px
    dy = y[None, :] - py
    # np.arctan2(0, 0) is 0, matching the scalar convention
    alpha = wrap_angle(np.arctan2(dy, dx) - th + PI / 2.0)
    sig = np.where(alpha <= 0.0, persons[:, 5, None], persons[:, 3, None])
    ss = persons[:, 4, None]
    ct = np.cos(th)
    st = np.sin(th)
    s2 = np.sin(2.0 * th)
    a = ct * ct / (2.0 * sig * sig) + st * st / (2.0 * ss * ss)
    b = s2 / (4.0 * sig * sig) - s2 / (4.0 * ss * ss)
    c = st * st / (2.0 * sig * sig) + ct * ct / (2.0 * ss * ss)
    return np.exp(-(a * dx * dx + 2.0 * b * dx * dy + c * dy * dy))


def agf_values(persons, xs, ys, thresholded):
    v = _agf_raw(persons, np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))
    if thresholded:
        v = np.where(v <= persons[:, 6, None], 0.0, v)
    return v


def social_costs(Q, geom, offsets, weights, persons):
    n = Q.shape[0]
    if persons.shape[0] == 0:
        return np.zeros(n)
    pts = forward_points(Q, geom, offsets)
    p = pts.shape[1]
    v = agf_values(persons, pts[:, :, 0].ravel(), pts[:, :, 1].ravel(), True)
    return (v.reshape(-1, n, p) * weights[None, None, :]).sum(axis=(0, 2))


def motion_social_cost(qa, qb, w_ang, resolution, geom, offsets, weights, persons):
    dist = config_distance(qa, qb, w_ang)
    if dist == 0.0 or persons.shape[0] == 0:
        return 0.0
    n = n_steps(dist, resolution)
    s = social_costs(interpolate(qa, qb, n), geom, offsets, weights, persons)
    step = dist / (n - 1)
    return float(np.sum(0.5 * step * (s[1:] + s[:-1])))


def edge_social_costs(Q, qb, w_ang, resolution, geom, offsets, weights, persons):
    return np.array(
        [motion_social_cost(q, qb, w_ang, resolution, geom, offsets, weights, persons) for q in Q],
        dtype=float,
    )


# ---------------------------------------------------------------- geometry


def _seg_hits_box(a, b, box):
    """Liang-Barsky over arrays of segments ``a, b`` shaped ``(..., 2)``."""
    d = b - a
    t0 = np.zeros(a.shape[:-1])
    t1 = np.ones(a.shape[:-1])
    hit = np.ones(a.shape[:-1], dtype=bool)
    edges = (
        (-d[..., 0], a[..., 0] - box[0]),
        (d[..., 0], box[2] - a[..., 0]),
        (-d[..., 1], a[..., 1] - box[1]),
        (d[..., 1], box[3] - a[..., 1]),
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        for p, q in edges:
            par = p == 0.0
            hit &= ~(par & (q < 0.0))
            r = np.where(par, 0.0, q / np.where(par, 1.0, p))
            neg = (p < 0.0) & ~par
            pos = (p > 0.0) & ~par
            hit &= ~(neg & (r > t1))
            hit &= ~(pos & (r < t0))
            t0 = np.where(neg & (r > t0), r, t0)
            t1 = np.where(pos & (r < t1), r, t1)
    return hit


def _seg_point_dist2(a, b, p):
    d = b - a
    l2 = (d * d).sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(l2 > 0.0, ((p - a) * d).sum(axis=-1) / np.where(l2 > 0.0, l2, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    e = a + t[..., None] * d - p
    return (e * e).sum(axis=-1)


def _seg_hits_rect(a, b, rect, infl):
    if infl == 0.0:
        return _seg_hits_box(a, b, rect)
    xmin, ymin, xmax, ymax = rect
    hit = _seg_hits_box(a, b, (xmin - infl, ymin, xmax + infl, ymax))
    hit |= _seg_hits_box(a, b, (xmin, ymin - infl, xmax, ymax + infl))
    i2 = infl * infl
    for cx, cy in ((xmin, ymin), (xmax, ymin), (xmin, ymax), (xmax, ymax)):
        hit |= _seg_point_dist2(a, b, np.array([cx, cy])) <= i2
    return hit


def valid_configs(Q, geom, offsets, bounds, rects, discs, persons):
    pts = forward_points(Q, geom, offsets)
    rb = geom[2]
    infl = geom[3]
    base = pts[:, 0, :]
    ok = (
        (base[:, 0] - rb >= bounds[0])
        & (base[:, 0] + rb <= bounds[2])
        & (base[:, 1] - rb >= bounds[1])
        & (base[:, 1] + rb <= bounds[3])
    )
    rest = pts[:, 1:, :]
    ok &= np.all(
        (rest[..., 0] - infl >= bounds[0])
        & (rest[..., 0] + infl <= bounds[2])
        & (rest[..., 1] - infl >= bounds[1])
        & (rest[..., 1] + infl <= bounds[3]),
        axis=1,
    )
    for rect in rects:
        near = np.clip(base, rect[:2], rect[2:])
        ok &= ((base - near) ** 2).sum(axis=1) > rb * rb
    for cx, cy, r in discs:
        ok &= ((base - (cx, cy)) ** 2).sum(axis=1) > (rb + r) ** 2
    for person in persons:
        ok &= ((base - person[:2]) ** 2).sum(axis=1) > (rb + person[7]) ** 2
    a = pts[:, :-1, :]
    b = pts[:, 1:, :]
    for rect in rects:
        ok &= ~np.any(_seg_hits_rect(a, b, rect, infl), axis=1)
    for cx, cy, r in discs:
        ok &= ~np.any(_seg_point_dist2(a, b, np.array([cx, cy])) <= (r + infl) ** 2, axis=1)
    for person in persons:
        ok &= ~np.any(_seg_point_dist2(a, b, person[:2]) <= (person[7] + infl) ** 2, axis=1)
    return ok


def collision_free(qa, qb, w_ang, resolution, geom, offsets, bounds, rects, discs, persons):
    n = n_steps(config_distance(qa, qb, w_ang), resolution)
    return bool(np.all(valid_configs(interpolate(qa, qb, n), geom, offsets, bounds, rects, discs, persons)))
